//! Uniform-grid numerics: composite Simpson quadrature, high-order finite
//! differences, cubic off-node interpolation and bisection root finding.
//!
//! Everything in this module works on a uniform grid; the 1D pipeline keeps
//! grids uniform so quadrature and root finds stay reproducible.

use crate::error::{Error, Result};

/// Composite Simpson rule over equally spaced samples.
///
/// An odd interval count is handled with a 3/8 tail so the O(h^4) order is
/// kept for any table length >= 4.
pub fn simpson(values: &[f64], h: f64) -> f64 {
    let n = values.len();
    if n < 2 {
        return 0.0;
    }
    if n == 2 {
        return 0.5 * h * (values[0] + values[1]);
    }
    if n == 3 {
        return h / 3.0 * (values[0] + 4.0 * values[1] + values[2]);
    }
    let intervals = n - 1;
    let (simpson_end, mut total) = if intervals.is_multiple_of(2) {
        (n - 1, 0.0)
    } else {
        // 3/8 rule over the last three cells.
        let t = 3.0 * h / 8.0
            * (values[n - 4] + 3.0 * values[n - 3] + 3.0 * values[n - 2] + values[n - 1]);
        (n - 4, t)
    };
    let mut acc = values[0] + values[simpson_end];
    let mut i = 1;
    while i < simpson_end {
        acc += 4.0 * values[i];
        if i + 1 < simpson_end {
            acc += 2.0 * values[i + 1];
        }
        i += 2;
    }
    total += h / 3.0 * acc;
    total
}

/// Composite Simpson quadrature of a callable over [lo, hi] with `cells`
/// subintervals (each sampled at both ends and the midpoint).
pub fn quad<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, cells: usize) -> f64 {
    if hi <= lo {
        return 0.0;
    }
    let cells = cells.max(1);
    let h = (hi - lo) / cells as f64;
    let mut total = 0.0;
    let mut fa = f(lo);
    for k in 0..cells {
        let a = lo + k as f64 * h;
        let b = if k + 1 == cells { hi } else { a + h };
        let fm = f(0.5 * (a + b));
        let fb = f(b);
        total += (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        fa = fb;
    }
    total
}

/// First derivative of a uniformly sampled function, fourth order.
///
/// Five-point centered stencils inside, one-sided five-point stencils at the
/// two boundary nodes on each end.
pub fn deriv5(values: &[f64], h: f64) -> Vec<f64> {
    let n = values.len();
    assert!(n >= 5, "deriv5 needs at least 5 samples");
    let mut out = vec![0.0; n];
    let d = 12.0 * h;
    out[0] = (-25.0 * values[0] + 48.0 * values[1] - 36.0 * values[2] + 16.0 * values[3]
        - 3.0 * values[4])
        / d;
    out[1] =
        (-3.0 * values[0] - 10.0 * values[1] + 18.0 * values[2] - 6.0 * values[3] + values[4]) / d;
    for i in 2..n - 2 {
        out[i] = (values[i - 2] - 8.0 * values[i - 1] + 8.0 * values[i + 1] - values[i + 2]) / d;
    }
    out[n - 2] = (3.0 * values[n - 1] + 10.0 * values[n - 2] - 18.0 * values[n - 3]
        + 6.0 * values[n - 4]
        - values[n - 5])
        / d;
    out[n - 1] = (25.0 * values[n - 1] - 48.0 * values[n - 2] + 36.0 * values[n - 3]
        - 16.0 * values[n - 4]
        + 3.0 * values[n - 5])
        / d;
    out
}

/// Cubic (4-point Lagrange) evaluation of a uniformly sampled table at an
/// arbitrary abscissa. Borrowed view, cheap to construct on the fly.
#[derive(Clone, Copy)]
pub struct CubicTable<'a> {
    pub x0: f64,
    pub h: f64,
    pub vals: &'a [f64],
}

impl<'a> CubicTable<'a> {
    pub fn new(x0: f64, h: f64, vals: &'a [f64]) -> Self {
        assert!(vals.len() >= 4, "cubic table needs at least 4 samples");
        CubicTable { x0, h, vals }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let n = self.vals.len();
        let s = (x - self.x0) / self.h;
        // stencil base i so that nodes i-1..i+2 are used; clamp at the ends
        let mut i = s.floor() as isize;
        if i < 1 {
            i = 1;
        }
        if i > n as isize - 3 {
            i = n as isize - 3;
        }
        let i = i as usize;
        let t = s - i as f64;
        let fm1 = self.vals[i - 1];
        let f0 = self.vals[i];
        let f1 = self.vals[i + 1];
        let f2 = self.vals[i + 2];
        fm1 * (-t * (t - 1.0) * (t - 2.0) / 6.0)
            + f0 * ((t * t - 1.0) * (t - 2.0) / 2.0)
            + f1 * (-t * (t + 1.0) * (t - 2.0) / 2.0)
            + f2 * (t * (t * t - 1.0) / 6.0)
    }
}

/// Bisection to |hi-lo| < xtol. Requires a sign change on [lo, hi].
pub fn bisect<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, xtol: f64) -> Result<f64> {
    let mut lo = lo;
    let mut hi = hi;
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::RootNotBracketed(format!(
            "f({lo}) = {flo:e}, f({hi}) = {fhi:e}"
        )));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hi - lo < xtol || mid == lo || mid == hi {
            return Ok(mid);
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2);
    let h = (b - a) / (n - 1) as f64;
    (0..n)
        .map(|i| if i == n - 1 { b } else { a + i as f64 * h })
        .collect()
}

pub fn logspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    assert!(a > 0.0 && b > 0.0);
    linspace(a.ln(), b.ln(), n).into_iter().map(f64::exp).collect()
}

/// Least-squares line fit of y against x; returns (slope, intercept, r^2).
pub fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut syy = 0.0;
    for (&xi, &yi) in x.iter().zip(y) {
        sxx += (xi - mx) * (xi - mx);
        sxy += (xi - mx) * (yi - my);
        syy += (yi - my) * (yi - my);
    }
    let slope = sxy / sxx;
    let r2 = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    (slope, my - slope * mx, r2)
}
