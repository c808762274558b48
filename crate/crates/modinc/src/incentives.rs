//! Scalar incentive families and their potentials.
//!
//! An incentive is a deduction `C̃(|u|)` subtracted from a state cost,
//! zero on the boundary of the unit control ball and bounded by 1, so the
//! instantaneous total cost stays non-negative. Each family member
//! carries three scalar maps:
//!
//! * `C̃(s)` — the incentive itself on `[0, 1]`,
//! * `σ(s)` — the maximizer of `σ ↦ σ·s + C̃(σ)` over `[0, 1]`,
//! * `χ̃(s)` — the envelope `σ(s)·s + C̃(σ(s))`, with `χ̃′ = σ`.
//!
//! The control recovered from a costate vector `λ` is
//! `u = σ(|λ|)·λ/|λ| = ∇χ(λ)` where `χ(λ) = χ̃(|λ|)`.

use crate::error::{Error, Result};

/// A moderation incentive family member.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Incentive {
    /// `C̃ ≡ 0`: pure time minimization. The control saturates at the
    /// unit sphere and is not uniquely determined when `λ = 0`.
    Trivial,
    /// `C̃_μ(s) = μ·√(1 − s²)` with `0 < μ ≤ 1`. Controls stay strictly
    /// inside the unit ball.
    Elliptical { mu: f64 },
    /// `C̃_q(s) = (1 − s²)/2`. Controls move on and off the unit sphere.
    QuadraticPoly,
}

/// An optimal control magnitude, flagged when the maximizer was not
/// unique (trivial incentive at zero costate); the value reported in the
/// degenerate case is the left-hand-limit convention `σ = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Magnitude {
    pub value: f64,
    pub degenerate: bool,
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

impl Incentive {
    /// Elliptical member with parameter check `0 < mu ≤ 1`.
    pub fn elliptical(mu: f64) -> Result<Self> {
        if !(mu > 0.0 && mu <= 1.0) {
            return Err(Error::Domain(format!(
                "elliptical incentive requires 0 < mu <= 1, got {mu}"
            )));
        }
        Ok(Incentive::Elliptical { mu })
    }

    /// The incentive value `C̃(s)` for `s ∈ [0, 1]`.
    pub fn value(&self, s: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&s) {
            return Err(Error::Domain(format!(
                "incentive argument must lie in [0, 1], got {s}"
            )));
        }
        Ok(match self {
            Incentive::Trivial => 0.0,
            Incentive::Elliptical { mu } => mu * (1.0 - s * s).sqrt(),
            Incentive::QuadraticPoly => 0.5 * (1.0 - s * s),
        })
    }

    /// The optimal control magnitude `σ(s)` for `s = |λ| ≥ 0`.
    pub fn optimal_magnitude(&self, s: f64) -> Result<Magnitude> {
        if s < 0.0 {
            return Err(Error::Domain(format!(
                "sigma argument must be >= 0, got {s}"
            )));
        }
        let m = match self {
            Incentive::Trivial => Magnitude {
                value: 1.0,
                degenerate: s == 0.0,
            },
            Incentive::Elliptical { mu } => Magnitude {
                value: s / (mu * mu + s * s).sqrt(),
                degenerate: false,
            },
            Incentive::QuadraticPoly => Magnitude {
                value: s.min(1.0),
                degenerate: false,
            },
        };
        Ok(m)
    }

    /// The moderation potential `χ̃(s)` for `s ≥ 0`.
    pub fn potential(&self, s: f64) -> f64 {
        debug_assert!(s >= 0.0, "potential argument must be >= 0");
        match self {
            Incentive::Trivial => s,
            Incentive::Elliptical { mu } => (mu * mu + s * s).sqrt(),
            Incentive::QuadraticPoly => {
                if s <= 1.0 {
                    0.5 * (1.0 + s * s)
                } else {
                    s
                }
            }
        }
    }

    /// Inverts `χ̃` on its range: returns `s ≥ 0` with `χ̃(s) = v`.
    ///
    /// For the quadratic polynomial the branch `s = √(2v − 1)` serves
    /// `1/2 ≤ v ≤ 1` and `s = v` serves `v > 1` (the two branches meet
    /// continuously at `v = 1`).
    pub fn potential_inverse(&self, v: f64) -> Result<f64> {
        match self {
            Incentive::Trivial => {
                if v < 0.0 {
                    Err(Error::Domain(format!(
                        "trivial potential range is [0, inf), got {v}"
                    )))
                } else {
                    Ok(v)
                }
            }
            Incentive::Elliptical { mu } => {
                if v < *mu {
                    Err(Error::Domain(format!(
                        "elliptical potential range is [{mu}, inf), got {v}"
                    )))
                } else {
                    Ok((v * v - mu * mu).max(0.0).sqrt())
                }
            }
            Incentive::QuadraticPoly => {
                if v < 0.5 {
                    Err(Error::Domain(format!(
                        "quadratic potential range is [1/2, inf), got {v}"
                    )))
                } else if v <= 1.0 {
                    Ok((2.0 * v - 1.0).sqrt())
                } else {
                    Ok(v)
                }
            }
        }
    }

    /// The control recovered from a costate vector:
    /// `∇χ(λ) = σ(|λ|)·λ/|λ|`, and the zero vector at `λ = 0` for the
    /// members whose potential is differentiable there.
    pub fn potential_gradient(&self, lambda: &[f64]) -> Result<Vec<f64>> {
        let s = norm(lambda);
        if s == 0.0 {
            return match self {
                Incentive::Trivial => Err(Error::Degenerate(
                    "trivial incentive: control direction undefined at lambda = 0".into(),
                )),
                _ => Ok(vec![0.0; lambda.len()]),
            };
        }
        let sigma = self.optimal_magnitude(s)?.value;
        Ok(lambda.iter().map(|l| sigma * l / s).collect())
    }

    /// Inverts the elliptical gradient: returns `λ` with
    /// `∇χ_μ(λ) = u`, namely `λ = μ·u/√(1 − |u|²)`.
    ///
    /// Only the elliptical family has an everywhere-invertible gradient;
    /// the other kinds are rejected.
    pub fn inverse_gradient(&self, u: &[f64]) -> Result<Vec<f64>> {
        let mu = match self {
            Incentive::Elliptical { mu } => *mu,
            other => {
                return Err(Error::Unsupported(format!(
                    "inverse_gradient is only defined for the elliptical family, got {other:?}"
                )))
            }
        };
        let un = norm(u);
        if un >= 1.0 {
            return Err(Error::Domain(format!(
                "inverse_gradient requires |u| < 1, got |u| = {un}"
            )));
        }
        let scale = mu / (1.0 - un * un).sqrt();
        Ok(u.iter().map(|ui| scale * ui).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SQRT_HALF: f64 = std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn incentive_values() {
        let e1 = Incentive::elliptical(1.0).unwrap();
        assert_eq!(e1.value(0.0).unwrap(), 1.0);
        assert_eq!(Incentive::QuadraticPoly.value(1.0).unwrap(), 0.0);
        let e05 = Incentive::elliptical(0.5).unwrap();
        assert!((e05.value(0.6).unwrap() - 0.4).abs() < 1e-15);
        assert_eq!(Incentive::Trivial.value(0.3).unwrap(), 0.0);
        assert!(e1.value(1.5).is_err());
        assert!(e1.value(-0.1).is_err());
    }

    #[test]
    fn incentive_bounds_on_unit_interval() {
        for inc in [
            Incentive::Trivial,
            Incentive::elliptical(0.3).unwrap(),
            Incentive::elliptical(1.0).unwrap(),
            Incentive::QuadraticPoly,
        ] {
            for i in 0..=100 {
                let s = i as f64 / 100.0;
                let v = inc.value(s).unwrap();
                assert!((0.0..=1.0).contains(&v));
            }
            assert_eq!(inc.value(1.0).unwrap(), 0.0);
        }
    }

    #[test]
    fn elliptical_parameter_checked() {
        assert!(Incentive::elliptical(0.0).is_err());
        assert!(Incentive::elliptical(1.5).is_err());
        assert!(Incentive::elliptical(1.0).is_ok());
    }

    #[test]
    fn optimal_magnitudes() {
        let e1 = Incentive::elliptical(1.0).unwrap();
        assert!((e1.optimal_magnitude(1.0).unwrap().value - SQRT_HALF).abs() < 1e-15);
        let q = Incentive::QuadraticPoly;
        assert_eq!(q.optimal_magnitude(2.0).unwrap().value, 1.0);
        let e03 = Incentive::elliptical(0.3).unwrap();
        assert_eq!(e03.optimal_magnitude(0.0).unwrap().value, 0.0);
        assert!(e03.optimal_magnitude(-1.0).is_err());
    }

    #[test]
    fn trivial_magnitude_flagged_at_zero() {
        let m = Incentive::Trivial.optimal_magnitude(0.0).unwrap();
        assert_eq!(m.value, 1.0);
        assert!(m.degenerate);
        let m = Incentive::Trivial.optimal_magnitude(0.5).unwrap();
        assert_eq!(m.value, 1.0);
        assert!(!m.degenerate);
    }

    #[test]
    fn potentials() {
        let e06 = Incentive::elliptical(0.6).unwrap();
        assert!((e06.potential(0.8) - 1.0).abs() < 1e-15);
        assert!((Incentive::QuadraticPoly.potential(0.5) - 0.625).abs() < 1e-15);
        assert_eq!(Incentive::Trivial.potential(0.0), 0.0);
    }

    #[test]
    fn potential_inverse_branches() {
        let e06 = Incentive::elliptical(0.6).unwrap();
        assert!((e06.potential_inverse(1.0).unwrap() - 0.8).abs() < 1e-15);
        assert!(e06.potential_inverse(0.5).is_err());
        let q = Incentive::QuadraticPoly;
        assert!((q.potential_inverse(1.5).unwrap() - 1.5).abs() < 1e-15);
        assert!((q.potential_inverse(0.625).unwrap() - 0.5).abs() < 1e-15);
        assert!(q.potential_inverse(0.4).is_err());
        assert_eq!(Incentive::Trivial.potential_inverse(1.0).unwrap(), 1.0);
    }

    #[test]
    fn gradients() {
        let e1 = Incentive::elliptical(1.0).unwrap();
        assert_eq!(e1.potential_gradient(&[0.0]).unwrap(), vec![0.0]);
        let g = e1.potential_gradient(&[1.0]).unwrap();
        assert!((g[0] - SQRT_HALF).abs() < 1e-15);
        let g = Incentive::QuadraticPoly
            .potential_gradient(&[-3.0])
            .unwrap();
        assert!((g[0] + 1.0).abs() < 1e-15);
        assert!(matches!(
            Incentive::Trivial.potential_gradient(&[0.0]),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn inverse_gradient_round_trip() {
        let e1 = Incentive::elliptical(1.0).unwrap();
        assert_eq!(e1.inverse_gradient(&[0.0]).unwrap(), vec![0.0]);
        let lam = e1.inverse_gradient(&[SQRT_HALF]).unwrap();
        assert!((lam[0] - 1.0).abs() < 1e-5);
        let e05 = Incentive::elliptical(0.5).unwrap();
        let lam = e05.inverse_gradient(&[0.6]).unwrap();
        let u = e05.potential_gradient(&lam).unwrap();
        assert!((u[0] - 0.6).abs() < 1e-12);
    }

    #[test]
    fn inverse_gradient_rejections() {
        assert!(matches!(
            Incentive::Trivial.inverse_gradient(&[0.5]),
            Err(Error::Unsupported(_))
        ));
        assert!(matches!(
            Incentive::QuadraticPoly.inverse_gradient(&[0.5]),
            Err(Error::Unsupported(_))
        ));
        let e1 = Incentive::elliptical(1.0).unwrap();
        assert!(matches!(e1.inverse_gradient(&[1.0]), Err(Error::Domain(_))));
    }

    #[test]
    fn gradient_works_in_higher_dimension() {
        let e05 = Incentive::elliptical(0.5).unwrap();
        let lam = [3.0, 4.0];
        let u = e05.potential_gradient(&lam).unwrap();
        let sigma = 5.0 / (0.25f64 + 25.0).sqrt();
        assert!((u[0] - sigma * 3.0 / 5.0).abs() < 1e-15);
        assert!((u[1] - sigma * 4.0 / 5.0).abs() < 1e-15);
        let back = e05.inverse_gradient(&u).unwrap();
        assert!((back[0] - 3.0).abs() < 1e-12);
        assert!((back[1] - 4.0).abs() < 1e-12);
    }
}
