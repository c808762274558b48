//! Composite Simpson quadrature, for functions and for pre-sampled data.

use crate::error::{Error, Result};

/// Composite Simpson estimate of `∫_a^b f` over `n_panels` panels
/// (`n_panels` must be even and positive). Error is O((b−a)⁵/n⁴).
pub fn quadrature<F>(mut f: F, a: f64, b: f64, n_panels: usize) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    if n_panels == 0 || !n_panels.is_multiple_of(2) {
        return Err(Error::Domain(format!(
            "n_panels must be a positive even number, got {n_panels}"
        )));
    }
    let h = (b - a) / n_panels as f64;
    let mut acc = 0.0;
    for i in 0..=n_panels {
        let x = if i == n_panels { b } else { a + i as f64 * h };
        let v = f(x)?;
        if !v.is_finite() {
            return Err(Error::NonFinite(format!("quadrature sample at x = {x}")));
        }
        let w = if i == 0 || i == n_panels {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        acc += w * v;
    }
    Ok(acc * h / 3.0)
}

/// Simpson integral of uniformly spaced samples with spacing `h`.
/// An even sample count is handled by a 3/8 rule on the last four points.
pub fn simpson_samples(values: &[f64], h: f64) -> Result<f64> {
    let n = values.len();
    if n < 3 {
        return Err(Error::TooFewSamples { need: 3, got: n });
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("sampled integrand".into()));
    }
    let simpson = |vals: &[f64]| -> f64 {
        let m = vals.len();
        let mut acc = vals[0] + vals[m - 1];
        for (i, v) in vals.iter().enumerate().take(m - 1).skip(1) {
            acc += if i % 2 == 1 { 4.0 * v } else { 2.0 * v };
        }
        acc * h / 3.0
    };
    if n % 2 == 1 {
        Ok(simpson(values))
    } else {
        // Simpson on the first n-3 points, 3/8 rule on the final 4.
        let head = &values[..n - 3];
        let tail = &values[n - 4..];
        let tail38 = 3.0 * h / 8.0 * (tail[0] + 3.0 * tail[1] + 3.0 * tail[2] + tail[3]);
        Ok(simpson(head) + tail38)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn sine_over_half_period() {
        let v = quadrature(|x| Ok(x.sin()), 0.0, PI, 200).unwrap();
        assert!((v - 2.0).abs() < 1e-9);
    }

    #[test]
    fn linear_ramp() {
        let v = quadrature(|s| Ok(1.0 - s), 0.0, 1.0, 100).unwrap();
        assert!((v - 0.5).abs() < 1e-14);
    }

    #[test]
    fn constant_two_panels() {
        let v = quadrature(|_| Ok(1.0), 0.0, 2.0, 2).unwrap();
        assert!((v - 2.0).abs() < 1e-15);
    }

    #[test]
    fn odd_panel_count_rejected() {
        assert!(matches!(
            quadrature(|_| Ok(1.0), 0.0, 1.0, 3),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn non_finite_sample_aborts() {
        let e = quadrature(|x| Ok(1.0 / x), 0.0, 1.0, 4).unwrap_err();
        assert!(matches!(e, Error::NonFinite(_)));
    }

    #[test]
    fn sampled_even_and_odd_counts() {
        for n in [101usize, 102, 1001, 1000] {
            let h = PI / (n - 1) as f64;
            let vals: Vec<f64> = (0..n).map(|i| (i as f64 * h).sin()).collect();
            let v = simpson_samples(&vals, h).unwrap();
            assert!((v - 2.0).abs() < 1e-7, "n={n} v={v}");
        }
    }
}
