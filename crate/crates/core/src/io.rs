//! Text formats: OFF meshes, CSV tables and solution exports.

use crate::error::{Error, Result};
use crate::mesh::TriMesh;
use crate::obstacle1d::Profile1D;
use crate::obstacle2d::MeshSolution;
use crate::vortex::PointVortexSet;
use std::f64::consts::PI;
use std::fmt::Write as _;

/// Parse an OFF mesh ("OFF\n nv nf ne\n ...").
pub fn off_parse(text: &str) -> Result<TriMesh> {
    let mut tokens = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or(""))
        .flat_map(|l| l.split_whitespace())
        .peekable();
    match tokens.next() {
        Some("OFF") => {}
        other => return Err(Error::Parse(format!("expected OFF header, got {other:?}"))),
    }
    let mut next_num = |what: &str| -> Result<f64> {
        tokens
            .next()
            .ok_or_else(|| Error::Parse(format!("unexpected end of OFF file reading {what}")))?
            .parse::<f64>()
            .map_err(|e| Error::Parse(format!("bad {what}: {e}")))
    };
    let nv = next_num("vertex count")? as usize;
    let nf = next_num("face count")? as usize;
    let _ne = next_num("edge count")?;
    let mut vertices = Vec::with_capacity(nv);
    for _ in 0..nv {
        vertices.push([next_num("x")?, next_num("y")?, next_num("z")?]);
    }
    let mut faces = Vec::with_capacity(nf);
    for _ in 0..nf {
        let k = next_num("face arity")? as usize;
        if k != 3 {
            return Err(Error::Parse(format!("only triangle faces supported, got {k}")));
        }
        let a = next_num("index")? as usize;
        let b = next_num("index")? as usize;
        let c = next_num("index")? as usize;
        if a >= nv || b >= nv || c >= nv {
            return Err(Error::Parse("face index out of range".into()));
        }
        faces.push([a, b, c]);
    }
    TriMesh::from_faces(vertices, faces)
}

pub fn off_write(mesh: &TriMesh) -> String {
    let mut out = String::new();
    let ne = mesh.edges().len();
    let _ = writeln!(out, "OFF");
    let _ = writeln!(out, "{} {} {}", mesh.n_vertices(), mesh.n_faces(), ne);
    for v in mesh.vertices() {
        let _ = writeln!(out, "{:.17} {:.17} {:.17}", v[0], v[1], v[2]);
    }
    for f in mesh.faces() {
        let _ = writeln!(out, "3 {} {} {}", f[0], f[1], f[2]);
    }
    out
}

/// Parse a CSV of numeric columns; `#`-comments and a non-numeric header
/// line are skipped.
pub fn csv_columns(text: &str, n_cols: usize) -> Result<Vec<Vec<f64>>> {
    let mut cols = vec![Vec::new(); n_cols];
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').map(str::trim).collect();
        if cells.len() != n_cols {
            return Err(Error::Parse(format!(
                "line {}: expected {n_cols} columns, got {}",
                lineno + 1,
                cells.len()
            )));
        }
        let parsed: std::result::Result<Vec<f64>, _> =
            cells.iter().map(|c| c.parse::<f64>()).collect();
        match parsed {
            Ok(vals) => {
                for (c, v) in cols.iter_mut().zip(vals) {
                    c.push(v);
                }
            }
            Err(_) if lineno == 0 => continue, // header row
            Err(e) => return Err(Error::Parse(format!("line {}: {e}", lineno + 1))),
        }
    }
    if cols[0].is_empty() {
        return Err(Error::Parse("no data rows".into()));
    }
    Ok(cols)
}

/// (phi, v, active flag) export of a 1D solution.
pub fn profile_csv(p: &Profile1D) -> String {
    let mut out = String::from("phi,v,active\n");
    let mut state = vec![0i8; p.n()];
    for &i in &p.active_plus {
        state[i] = 1;
    }
    for &i in &p.active_minus {
        state[i] = -1;
    }
    let h = p.h();
    for (i, (v, st)) in p.v.iter().zip(&state).enumerate() {
        let _ = writeln!(out, "{:.17e},{:.17e},{}", i as f64 * h, v, st);
    }
    out
}

/// (vertex id, V, mu, active flag) export of a mesh solution.
pub fn mesh_solution_csv(sol: &MeshSolution, mu: &[f64]) -> String {
    let mut out = String::from("vertex,V,mu,active\n");
    let mut state = vec![0i8; sol.v.len()];
    for &i in &sol.active_plus {
        state[i] = 1;
    }
    for &i in &sol.active_minus {
        state[i] = -1;
    }
    for i in 0..sol.v.len() {
        let _ = writeln!(out, "{},{:.17e},{:.17e},{}", i, sol.v[i], mu[i], state[i]);
    }
    out
}

/// (sign, x, y, z) export of a point-vortex configuration.
pub fn pvs_csv(pvs: &PointVortexSet) -> String {
    let mut out = String::from("sign,x,y,z\n");
    for p in &pvs.points_plus {
        let _ = writeln!(out, "1,{:.17e},{:.17e},{:.17e}", p[0], p[1], p[2]);
    }
    for p in &pvs.points_minus {
        let _ = writeln!(out, "-1,{:.17e},{:.17e},{:.17e}", p[0], p[1], p[2]);
    }
    out
}

/// Load a revolution profile from a (phi, rho) CSV plus a matching (phi, z)
/// CSV; the phi grids must agree and be uniform on [0, pi].
pub fn revolution_from_csv(rho_text: &str, z_text: &str) -> Result<crate::surface::RevolutionSurface> {
    let rho_cols = csv_columns(rho_text, 2)?;
    let z_cols = csv_columns(z_text, 2)?;
    let phi = &rho_cols[0];
    if phi.len() != z_cols[0].len() {
        return Err(Error::Parse("rho and z tables differ in length".into()));
    }
    for (a, b) in phi.iter().zip(&z_cols[0]) {
        if (a - b).abs() > 1e-9 {
            return Err(Error::Parse("rho and z tables use different grids".into()));
        }
    }
    check_uniform_phi(phi)?;
    crate::surface::RevolutionSurface::from_samples(rho_cols[1].clone(), z_cols[1].clone())
}

pub fn check_uniform_phi(phi: &[f64]) -> Result<()> {
    let n = phi.len();
    if n < 2 {
        return Err(Error::Parse("need at least two phi samples".into()));
    }
    let h = PI / (n - 1) as f64;
    for (i, &p) in phi.iter().enumerate() {
        if (p - i as f64 * h).abs() > 1e-6 {
            return Err(Error::Parse(format!(
                "phi grid must be uniform on [0, pi]; sample {i} is {p}"
            )));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn off_round_trip() {
        let m = TriMesh::icosphere(1).unwrap();
        let text = off_write(&m);
        let m2 = off_parse(&text).unwrap();
        assert_eq!(m.n_vertices(), m2.n_vertices());
        assert_eq!(m.n_faces(), m2.n_faces());
        for (a, b) in m.vertices().iter().zip(m2.vertices()) {
            for k in 0..3 {
                assert!((a[k] - b[k]).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn off_rejects_garbage() {
        assert!(off_parse("PLY\n1 2 3").is_err());
        assert!(off_parse("OFF\n3 1 0\n0 0 0\n1 0 0\n0 1 0\n4 0 1 2 0").is_err());
    }

    #[test]
    fn csv_parses_with_header_and_comments() {
        let text = "phi,a\n# comment\n0.0,0.0\n1.5,2.25\n";
        let cols = csv_columns(text, 2).unwrap();
        assert_eq!(cols[0], vec![0.0, 1.5]);
        assert_eq!(cols[1], vec![0.0, 2.25]);
        assert!(csv_columns("a,b\n1.0\n", 2).is_err());
        assert!(csv_columns("", 2).is_err());
    }

    #[test]
    fn revolution_csv_round_trip() {
        let n = 64;
        let h = PI / (n - 1) as f64;
        let mut rho_text = String::from("phi,rho\n");
        let mut z_text = String::from("phi,z\n");
        for i in 0..n {
            let p = i as f64 * h;
            let _ = writeln!(rho_text, "{:.17e},{:.17e}", p, p.sin());
            let _ = writeln!(z_text, "{:.17e},{:.17e}", p, -p.cos());
        }
        let s = revolution_from_csv(&rho_text, &z_text).unwrap();
        assert_eq!(s.n(), n);
        assert!((s.gamma()[n / 2] - 1.0).abs() < 1e-6);
    }
}
