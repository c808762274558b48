//! Cross-module invariants: envelope properties of the incentive
//! families against brute force, conservation along the integrated flow,
//! and agreement between the solver routes.

use modinc::closed_form;
use modinc::dynamics::{self, ControlledSystem, PhaseState, PositionCost};
use modinc::incentives::Incentive;
use modinc::numerics::{self, IntegratorConfig};
use modinc::reparam::{self, ReparamProblem, SolveConfig};
use proptest::prelude::*;

fn all_kinds() -> Vec<Incentive> {
    vec![
        Incentive::Trivial,
        Incentive::elliptical(0.25).unwrap(),
        Incentive::elliptical(0.7).unwrap(),
        Incentive::elliptical(1.0).unwrap(),
        Incentive::QuadraticPoly,
    ]
}

/// Brute-force maximizer of `sigma -> sigma*s + C(sigma)` on a dense grid.
fn brute_force_magnitude(inc: &Incentive, s: f64, n: usize) -> (f64, f64) {
    let mut best = (0.0, f64::NEG_INFINITY);
    for i in 0..=n {
        let sigma = i as f64 / n as f64;
        let val = sigma * s + inc.value(sigma).unwrap();
        if val > best.1 {
            best = (sigma, val);
        }
    }
    best
}

#[test]
fn envelope_matches_brute_force_on_grid() {
    for inc in all_kinds() {
        for i in 0..=50 {
            let s = 10.0 * i as f64 / 50.0;
            let (sigma_star, chi_star) = brute_force_magnitude(&inc, s, 100_000);
            let sigma = inc.optimal_magnitude(s).unwrap().value;
            let chi = inc.potential(s);
            // the argmax is accurate to one grid cell; the grid maximum
            // understates the envelope by up to curvature * cell^2 / 8,
            // which reaches ~2e-7 where sigma approaches the ball boundary
            assert!(
                chi >= chi_star - 1e-12 && chi - chi_star < 5e-7,
                "{inc:?} s={s}"
            );
            assert!(sigma >= sigma_star - 1e-5 - 1e-9, "{inc:?} s={s}");
            // definition of the envelope at the reported magnitude
            let direct = sigma * s + inc.value(sigma.min(1.0)).unwrap();
            assert!((chi - direct).abs() < 1e-12, "{inc:?} s={s}");
        }
    }
}

#[test]
fn potential_derivative_is_magnitude() {
    // central differences of the potential at 200 points of [0.01, 5]
    let h = 1e-6;
    for inc in all_kinds() {
        for i in 0..200 {
            let s = 0.01 + (5.0 - 0.01) * i as f64 / 199.0;
            let fd = (inc.potential(s + h) - inc.potential(s - h)) / (2.0 * h);
            let sigma = inc.optimal_magnitude(s).unwrap().value;
            // the quadratic potential has a corner-free but second-order
            // kinked junction at s = 1; the central difference still
            // matches to O(h)
            assert!(
                (fd - sigma).abs() < 1e-6,
                "{inc:?} s={s}: fd={fd} sigma={sigma}"
            );
        }
    }
}

proptest! {
    #[test]
    fn envelope_identity_anywhere(s in 0.0f64..10.0) {
        for inc in all_kinds() {
            let sigma = inc.optimal_magnitude(s).unwrap().value;
            let chi = inc.potential(s);
            let direct = sigma * s + inc.value(sigma).unwrap();
            prop_assert!((chi - direct).abs() < 1e-12);
        }
    }

    #[test]
    fn magnitude_is_non_decreasing(a in 0.0f64..10.0, b in 0.0f64..10.0) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        for inc in all_kinds() {
            let slo = inc.optimal_magnitude(lo).unwrap().value;
            let shi = inc.optimal_magnitude(hi).unwrap().value;
            prop_assert!(shi >= slo - 1e-15);
        }
    }

    #[test]
    fn elliptical_gradient_round_trip(mu in 0.05f64..1.0, lam in -10.0f64..10.0) {
        let inc = Incentive::elliptical(mu).unwrap();
        let u = inc.potential_gradient(&[lam]).unwrap();
        let back = inc.inverse_gradient(&u).unwrap();
        // rounding of u propagates back with condition number 1 + (lam/mu)^2,
        // which dominates once the control approaches the ball boundary
        let cond = 1.0 + (lam / mu) * (lam / mu);
        prop_assert!((back[0] - lam).abs() < 1e-15 * cond.max(1e3) * lam.abs().max(1.0));
    }

    #[test]
    fn elliptical_round_trip_tight_when_well_conditioned(
        mu in 0.5f64..1.0,
        lam in -10.0f64..10.0,
    ) {
        let inc = Incentive::elliptical(mu).unwrap();
        let u = inc.potential_gradient(&[lam]).unwrap();
        let back = inc.inverse_gradient(&u).unwrap();
        prop_assert!((back[0] - lam).abs() < 1e-12 * lam.abs().max(1.0));
    }

    #[test]
    fn elliptical_potential_dominates(mu in 0.01f64..1.0, s in 0.001f64..10.0) {
        let inc = Incentive::elliptical(mu).unwrap();
        prop_assert!(inc.potential(s) > mu.max(s));
    }
}

#[test]
fn conservation_along_integrated_flow() {
    // integrate the extremal field at tolerance 1e-10 and check the
    // conserved scalar drifts by less than 1e-7
    let cases: Vec<(PositionCost, Incentive, f64)> = vec![
        (
            PositionCost::spook(1.0).unwrap(),
            Incentive::elliptical(0.5).unwrap(),
            3.0,
        ),
        (
            PositionCost::spook(5.0).unwrap(),
            Incentive::elliptical(0.9).unwrap(),
            1.5,
        ),
        (
            PositionCost::Constant,
            Incentive::elliptical(0.3).unwrap(),
            2.0,
        ),
        (
            PositionCost::spook(0.2).unwrap(),
            Incentive::QuadraticPoly,
            2.0,
        ),
    ];
    for (cost, inc, t_end) in cases {
        let sys = ControlledSystem::acceleration_1d(cost);
        let lam0 = inc.potential_inverse(cost.value(&[0.0]).unwrap()).unwrap();
        let y0 = PhaseState::accel_1d(0.0, 0.0, lam0, -0.4).to_flat();
        let cfg = IntegratorConfig {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            ..IntegratorConfig::default()
        };
        let sol = numerics::integrate(
            |_t, y, dy| dynamics::hamiltonian_field_flat(&sys, &inc, y, dy),
            &y0,
            (0.0, t_end),
            &cfg,
            &[],
            true,
        )
        .unwrap();
        let e0 =
            dynamics::conserved_quantity(&sys, &inc, &PhaseState::from_flat(2, 1, &y0).unwrap())
                .unwrap();
        let mut drift = 0.0f64;
        for i in 0..=1000 {
            let t = t_end * i as f64 / 1000.0;
            let y = sol.eval(t);
            let e =
                dynamics::conserved_quantity(&sys, &inc, &PhaseState::from_flat(2, 1, &y).unwrap())
                    .unwrap();
            drift = drift.max((e - e0).abs());
        }
        assert!(drift <= 1e-7, "{inc:?}: drift = {drift}");
    }
}

#[test]
fn conservation_in_higher_order_and_dimension() {
    // the extremal field is defined for any (k, n); check the conserved
    // scalar along a k = 3 flow and along a planar (n = 2) flow
    let cfg = IntegratorConfig {
        rel_tol: 1e-11,
        abs_tol: 1e-13,
        ..IntegratorConfig::default()
    };
    let inc = Incentive::elliptical(0.6).unwrap();

    let jerk = ControlledSystem::new(3, 1, PositionCost::Constant).unwrap();
    let y0 = PhaseState::new(
        vec![vec![0.0], vec![0.1], vec![-0.2]],
        vec![vec![0.9], vec![-0.3], vec![0.05]],
    )
    .unwrap();
    let planar = ControlledSystem::new(2, 2, PositionCost::Constant).unwrap();
    let z0 = PhaseState::new(
        vec![vec![0.0, 0.0], vec![0.2, -0.1]],
        vec![vec![0.7, 0.4], vec![-0.3, 0.1]],
    )
    .unwrap();

    for (sys, state0) in [(jerk, y0), (planar, z0)] {
        let flat0 = state0.to_flat();
        let e0 = dynamics::conserved_quantity(&sys, &inc, &state0).unwrap();
        let sol = numerics::integrate(
            |_t, y, dy| dynamics::hamiltonian_field_flat(&sys, &inc, y, dy),
            &flat0,
            (0.0, 1.5),
            &cfg,
            &[],
            true,
        )
        .unwrap();
        let mut drift = 0.0f64;
        for i in 0..=500 {
            let t = 1.5 * i as f64 / 500.0;
            let st = PhaseState::from_flat(sys.k, sys.n, &sol.eval(t)).unwrap();
            let e = dynamics::conserved_quantity(&sys, &inc, &st).unwrap();
            drift = drift.max((e - e0).abs());
        }
        assert!(drift <= 1e-8, "k={} n={}: drift {drift}", sys.k, sys.n);
    }
}

#[test]
fn reverse_time_consistency() {
    // integrating forward then backward returns to y0 within 10*rel_tol
    let sys = ControlledSystem::acceleration_1d(PositionCost::spook(1.0).unwrap());
    let inc = Incentive::elliptical(0.5).unwrap();
    let rel_tol = 1e-10;
    let cfg = IntegratorConfig {
        rel_tol,
        abs_tol: 1e-13,
        ..IntegratorConfig::default()
    };
    let y0 = PhaseState::accel_1d(0.0, 0.0, 2f64.sqrt(), -1.794).to_flat();
    let field =
        |_t: f64, y: &[f64], dy: &mut [f64]| dynamics::hamiltonian_field_flat(&sys, &inc, y, dy);
    let fwd = numerics::integrate(field, &y0, (0.0, 2.0), &cfg, &[], false).unwrap();
    let back = numerics::integrate(field, &fwd.y_end, (2.0, 0.0), &cfg, &[], false).unwrap();
    for (a, b) in back.y_end.iter().zip(&y0) {
        assert!(
            (a - b).abs() <= 10.0 * rel_tol * b.abs().max(1.0),
            "{a} vs {b}"
        );
    }
}

#[test]
fn control_magnitude_regimes() {
    // elliptical controls stay strictly inside the ball; the trivial
    // incentive with constant cost rides the boundary
    let prob = ReparamProblem::arbitrary_duration(
        PositionCost::spook(1.0).unwrap(),
        Incentive::elliptical(0.5).unwrap(),
        0.0,
        1.0,
    )
    .unwrap();
    let traj = reparam::solve_reparam(&prob, &SolveConfig::default())
        .unwrap()
        .to_trajectory(1001)
        .unwrap();
    assert!(traj.samples.iter().all(|s| s.u[0].abs() < 1.0));

    let bang = closed_form::warmup_general(&Incentive::Trivial, 1.0)
        .unwrap()
        .to_trajectory(1001)
        .unwrap();
    assert!(bang
        .samples
        .iter()
        .all(|s| (s.u[0].abs() - 1.0).abs() < 1e-12));
}

#[test]
fn hamiltonian_round_trip_from_reconstructed_state() {
    // forward integration of the extremal field from the reconstructed
    // initial state reproduces the endpoint within 1e-5
    for (cost, mu) in [
        (PositionCost::Constant, 0.6),
        (PositionCost::spook(1.0).unwrap(), 0.5),
        (PositionCost::spook(0.2).unwrap(), 0.25),
    ] {
        let inc = Incentive::elliptical(mu).unwrap();
        let prob = ReparamProblem::arbitrary_duration(cost, inc, 0.0, 1.0).unwrap();
        let sol = reparam::solve_reparam(&prob, &SolveConfig::default()).unwrap();
        let sys = ControlledSystem::acceleration_1d(cost);
        let dir = if prob.lambda_f >= prob.lambda0 {
            1.0
        } else {
            -1.0
        };
        let y0 = PhaseState::accel_1d(0.0, 0.0, prob.lambda0, dir * sol.q0.sqrt()).to_flat();
        let fwd = numerics::integrate(
            |_t, y, dy| dynamics::hamiltonian_field_flat(&sys, &inc, y, dy),
            &y0,
            (0.0, sol.duration),
            &IntegratorConfig {
                rel_tol: 1e-12,
                abs_tol: 1e-14,
                ..IntegratorConfig::default()
            },
            &[],
            false,
        )
        .unwrap();
        assert!(
            (fwd.y_end[0] - 1.0).abs() < 1e-5,
            "{cost:?} mu={mu}: x(t_f) = {}",
            fwd.y_end[0]
        );
    }
}

#[test]
fn fourth_order_residual_of_solved_trajectories() {
    // constant cost, closed-form samples: the diagnostic is pure
    // finite-difference noise
    let sys = ControlledSystem::acceleration_1d(PositionCost::Constant);
    let inc = Incentive::elliptical(0.5).unwrap();
    let warm = closed_form::warmup_elliptical(0.5)
        .unwrap()
        .to_trajectory(2000)
        .unwrap();
    let r = dynamics::fourth_order_residual(&sys, &inc, &warm).unwrap();
    assert!(r < 1e-3, "warmup residual = {r}");

    // spooking solution reconstructed from the solver
    let spook_sys = ControlledSystem::acceleration_1d(PositionCost::spook(1.0).unwrap());
    let prob = ReparamProblem::arbitrary_duration(PositionCost::spook(1.0).unwrap(), inc, 0.0, 1.0)
        .unwrap();
    let traj = reparam::solve_reparam(&prob, &SolveConfig::default())
        .unwrap()
        .to_trajectory(2000)
        .unwrap();
    let r = dynamics::fourth_order_residual(&spook_sys, &inc, &traj).unwrap();
    assert!(r < 1e-2, "spook residual = {r}");
}

#[test]
fn warmup_sweep_durations_increase_with_mu() {
    let mut prev = 0.0;
    for mu in [1e-2, 1.0 / 3.0, 2.0 / 3.0, 1.0 - 1e-2] {
        let sol = closed_form::warmup_elliptical(mu).unwrap();
        assert!(sol.duration > prev, "mu={mu}");
        prev = sol.duration;
    }
    assert!((closed_form::warmup_elliptical(1e-2).unwrap().duration - 2.0).abs() < 1e-2);
}
