//! Parse the problem sources named on the command line: surfaces of
//! revolution, axisymmetric potentials, meshes and mesh fields.

use sc_obstacle::fields::{canonical_triple_zero, AxiPotential, MeshField};
use sc_obstacle::io;
use sc_obstacle::mesh::TriMesh;
use sc_obstacle::surface::RevolutionSurface;
use sc_obstacle::{Error, Result};
use std::fs;

pub fn load_surface(spec: &str, n: usize) -> Result<RevolutionSurface> {
    if let Some(paths) = spec.strip_prefix("csv:") {
        let (rho_path, z_path) = paths
            .split_once(',')
            .ok_or_else(|| Error::Parse("csv surface needs RHO.csv,Z.csv".into()))?;
        let rho = fs::read_to_string(rho_path).map_err(|e| Error::Parse(format!("{rho_path}: {e}")))?;
        let z = fs::read_to_string(z_path).map_err(|e| Error::Parse(format!("{z_path}: {e}")))?;
        return io::revolution_from_csv(&rho, &z);
    }
    RevolutionSurface::named(spec, n)
}

pub fn load_potential(spec: &str, s: &RevolutionSurface) -> Result<AxiPotential> {
    match spec {
        // a = rho^2 / 2 is the potential of a uniform vertical field
        "uniform" => {
            let a: Vec<f64> = s.rho().iter().map(|r| 0.5 * r * r).collect();
            AxiPotential::from_samples(s, a)
        }
        "canonical" => AxiPotential::from_fn(s, canonical_triple_zero),
        other => {
            let path = other
                .strip_prefix("csv:")
                .ok_or_else(|| Error::Parse(format!("unknown potential {other:?}")))?;
            let text = fs::read_to_string(path).map_err(|e| Error::Parse(format!("{path}: {e}")))?;
            let cols = io::csv_columns(&text, 2)?;
            io::check_uniform_phi(&cols[0])?;
            if cols[0].len() != s.n() {
                return Err(Error::DimensionMismatch {
                    expected: s.n(),
                    got: cols[0].len(),
                });
            }
            AxiPotential::from_samples(s, cols[1].clone())
        }
    }
}

pub fn load_mesh(spec: &str) -> Result<TriMesh> {
    if let Some(k) = spec.strip_prefix("icosphere:") {
        let k: u32 = k
            .parse()
            .map_err(|_| Error::Parse(format!("bad subdivision count {k:?}")))?;
        return TriMesh::icosphere(k);
    }
    if let Some(path) = spec.strip_prefix("off:") {
        let text = fs::read_to_string(path).map_err(|e| Error::Parse(format!("{path}: {e}")))?;
        return io::off_parse(&text);
    }
    Err(Error::Parse(format!("unknown mesh {spec:?}")))
}

/// Field on a mesh plus the matching *F when it is known in closed form.
pub fn load_field(spec: &str, mesh: &TriMesh) -> Result<(MeshField, Option<Vec<f64>>)> {
    match spec {
        "z" => {
            let f = MeshField::new(mesh, mesh.vertices().iter().map(|p| p[2]).collect())?;
            let sf = mesh.vertices().iter().map(|p| -p[2] / 2.0).collect();
            Ok((f, Some(sf)))
        }
        other => {
            let path = other
                .strip_prefix("csv:")
                .ok_or_else(|| Error::Parse(format!("unknown field {other:?}")))?;
            let text = fs::read_to_string(path).map_err(|e| Error::Parse(format!("{path}: {e}")))?;
            let cols = io::csv_columns(&text, 1)?;
            Ok((MeshField::new(mesh, cols[0].clone())?, None))
        }
    }
}
