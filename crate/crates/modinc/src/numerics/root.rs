//! Bracketed root finding (Brent's method) and a one-parameter shooting
//! driver that scans a bracket for sign changes before polishing.

use crate::error::{Error, Result};

/// Tolerances for [`find_root`] and [`shoot`].
#[derive(Debug, Clone, Copy)]
pub struct RootConfig {
    pub x_tol: f64,
    pub f_tol: f64,
    pub max_iter: usize,
}

impl Default for RootConfig {
    fn default() -> Self {
        Self {
            x_tol: 1e-14,
            f_tol: 1e-11,
            max_iter: 200,
        }
    }
}

impl RootConfig {
    fn validate(&self) -> Result<()> {
        if !(self.x_tol > 0.0 && self.f_tol > 0.0) {
            return Err(Error::Domain("root tolerances must be positive".into()));
        }
        Ok(())
    }
}

/// Brent's method on `[lo, hi]`. Requires a sign change; the returned
/// value always lies inside the initial bracket.
pub fn find_root<F>(mut f: F, bracket: (f64, f64), cfg: &RootConfig) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    cfg.validate()?;
    let (mut a, mut b) = bracket;
    let mut fa = f(a)?;
    let mut fb = f(b)?;
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa * fb > 0.0 {
        return Err(Error::NoBracket(format!(
            "f({a}) = {fa} and f({b}) = {fb} have the same sign"
        )));
    }
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;
    for _ in 0..cfg.max_iter {
        if fb.abs() > fc.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * cfg.x_tol;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb.abs() <= cfg.f_tol {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            // Inverse quadratic interpolation (secant when a == c).
            let s = fb / fa;
            let (mut p, mut q) = if a == c {
                (2.0 * xm * s, 1.0 - s)
            } else {
                let q = fa / fc;
                let r = fb / fc;
                (
                    s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0)),
                    (q - 1.0) * (r - 1.0) * (s - 1.0),
                )
            };
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(xm) };
        fb = f(b)?;
        if (fb > 0.0) == (fc > 0.0) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
    }
    Err(Error::IterationLimit("find_root".into()))
}

/// Sign-change brackets of `f` over an `n`-point scan of `[lo, hi]`,
/// linearly or logarithmically spaced. Scan points where `f` fails are
/// skipped; brackets are only reported between consecutive finite values.
pub fn scan_brackets<F>(
    mut f: F,
    lo: f64,
    hi: f64,
    n: usize,
    log_spacing: bool,
) -> Result<Vec<(f64, f64)>>
where
    F: FnMut(f64) -> Result<f64>,
{
    if n < 2 {
        return Err(Error::Domain("scan needs at least 2 points".into()));
    }
    if log_spacing && (lo <= 0.0 || hi <= 0.0) {
        return Err(Error::Domain("log scan requires a positive bracket".into()));
    }
    let point = |i: usize| -> f64 {
        let w = i as f64 / (n - 1) as f64;
        if log_spacing {
            (lo.ln() + w * (hi.ln() - lo.ln())).exp()
        } else {
            lo + w * (hi - lo)
        }
    };
    let mut out = Vec::new();
    let mut prev: Option<(f64, f64)> = None;
    for i in 0..n {
        let x = point(i);
        let v = match f(x) {
            Ok(v) if v.is_finite() => v,
            _ => {
                prev = None;
                continue;
            }
        };
        if let Some((xp, vp)) = prev {
            if vp * v < 0.0 || (v == 0.0 && vp != 0.0) {
                out.push((xp, x));
            }
        }
        prev = Some((x, v));
    }
    Ok(out)
}

/// Shooting driver: scans `bracket` with `n_scan` points (64 by default
/// elsewhere) to locate a sign change of `residual`, then polishes with
/// [`find_root`]. Returns the first root found.
pub fn shoot<F>(
    mut residual: F,
    bracket: (f64, f64),
    cfg: &RootConfig,
    n_scan: usize,
    log_spacing: bool,
) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let brackets = scan_brackets(&mut residual, bracket.0, bracket.1, n_scan, log_spacing)?;
    let first = brackets.first().ok_or_else(|| {
        Error::NoBracket(format!(
            "no sign change of the residual in [{}, {}]",
            bracket.0, bracket.1
        ))
    })?;
    find_root(residual, *first, cfg)
}
