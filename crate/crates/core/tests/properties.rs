//! Randomized invariants. Each property is something the implementation
//! must satisfy for *every* admissible input — symmetries, sign and
//! monotonicity constraints, closed-form anchors, and inequalities that the
//! moment machinery is built on — so shrinking a failure here points at a
//! logic error rather than a loose tolerance.

use proptest::prelude::*;

use gapdirac_core::bounds::{hardy_constant, lt_parameters, moment_report, BumpSpec};
use gapdirac_core::forms::chi_profile;
use gapdirac_core::geom::{Vec2, Vec3};
use gapdirac_core::mathieu::{count_negative, ground_eigenvalue, mathieu_eigs};
use gapdirac_core::potentials::{
    classify_charge, dipole_leading_term, eval_potential, ChargeClass, ChargeDistribution,
    InfiniteReason, PhysicalParams, PointCharge, PotentialModel,
};
use gapdirac_core::spectrum::RadialGrid;

fn two_center(x0_norm: f64, axis: f64) -> PotentialModel {
    let p = PhysicalParams::new(0.7, 1.0, Vec2::from_polar(x0_norm, axis)).unwrap();
    PotentialModel::TwoCenter(p)
}

/// Collapse a classification to something comparable without caring how the
/// enum is laid out.
fn canon(c: &ChargeClass) -> (u8, usize) {
    match c {
        ChargeClass::Zero => (0, 0),
        ChargeClass::Finite { leading_order } => (1, *leading_order),
        ChargeClass::InfinitelyMany(InfiniteReason::Monopole) => (2, 0),
        ChargeClass::InfinitelyMany(InfiniteReason::Dipole) => (2, 1),
    }
}

proptest! {
    /// Swapping the two centers is the same as negating the field point, so
    /// V(-x) = -V(x) bit for bit (the distances swap, the dot product flips
    /// sign, and every other operation is identical).
    #[test]
    fn two_center_potential_is_odd(
        x0_norm in 0.1_f64..10.0,
        axis in 0.0_f64..core::f64::consts::TAU,
        r_exp in -3.0_f64..12.0,
        theta in 0.0_f64..core::f64::consts::TAU,
    ) {
        let model = two_center(x0_norm, axis);
        let x = Vec2::from_polar(10.0_f64.powf(r_exp), theta);
        let v = eval_potential(&model, x).unwrap();
        let v_neg = eval_potential(&model, Vec2::new(-x.x, -x.y)).unwrap();
        prop_assert_eq!(v_neg, -v);
    }

    /// Beyond ten separations the closed form differs from its leading
    /// 2|x0| cos(theta)/r^2 term by at most the tail of the multipole
    /// series, sum_{l >= 3 odd} 2 (x0/r)^l / r <= 2 x0^3 / (r^4 (1 - t^2)).
    #[test]
    fn dipole_term_dominates_past_ten_separations(
        x0_norm in 0.1_f64..10.0,
        axis in 0.0_f64..core::f64::consts::TAU,
        decades in 1.0_f64..10.0,
        theta in 0.0_f64..core::f64::consts::TAU,
    ) {
        let model = two_center(x0_norm, axis);
        let r = x0_norm * 10.0_f64.powf(decades);
        let v = eval_potential(&model, Vec2::from_polar(r, axis + theta)).unwrap();
        let lead = dipole_leading_term(x0_norm, r, theta);
        let tail = 2.5 * x0_norm.powi(3) / r.powi(4);
        let noise = 1e-13 * x0_norm / (r * r);
        prop_assert!(
            (v - lead).abs() <= tail + noise,
            "remainder {:e} vs allowance {:e} at r/x0 = 1e{:.2}",
            (v - lead).abs(), tail + noise, decades
        );
    }

    /// The bottom of the angular well is strictly below zero and moves down
    /// as the dipole strengthens.
    #[test]
    fn angular_ground_level_decreases_with_strength(
        q in 1e-3_f64..15.0,
        dq in 0.01_f64..5.0,
    ) {
        let a = ground_eigenvalue(q).unwrap();
        let b = ground_eigenvalue(q + dq).unwrap();
        prop_assert!(a < 0.0, "lambda0({q}) = {a} not negative");
        prop_assert!(b < a, "lambda0 not decreasing: {a} -> {b}");
    }

    /// count_negative agrees with the sign pattern of the eigenvalue list.
    #[test]
    fn negative_count_matches_the_spectrum(q in 0.05_f64..6.0) {
        let n = count_negative(q).unwrap();
        let spec = mathieu_eigs(q, n + 2).unwrap();
        for (i, &lam) in spec.eigenvalues.iter().take(n).enumerate() {
            prop_assert!(lam < 0.0, "level {i} = {lam} should be negative");
        }
        prop_assert!(spec.eigenvalues[n] >= 0.0,
            "level {n} = {} should be nonnegative", spec.eigenvalues[n]);
    }

    /// The split-kinetic parameters satisfy their own defining equations.
    #[test]
    fn split_parameters_satisfy_their_equations(
        frac in 1e-6_f64..0.999_999,
        delta0 in 0.05_f64..0.95,
        extra in 0.0_f64..3.0,
    ) {
        let ch = gapdirac_core::bounds::critical_coupling();
        let gamma = frac * ch;
        let p = lt_parameters(gamma, delta0 + extra, delta0).unwrap();
        prop_assert!((p.c2 - 0.5 * (1.0 + gamma / ch)).abs() < 1e-15);
        let c2_back = ((p.rho * p.rho + 1.0).sqrt() - 1.0) / p.rho;
        prop_assert!((c2_back - p.c2).abs() < 1e-13, "c2 {} vs {}", p.c2, c2_back);
        prop_assert!((p.c1 * p.rho - p.c2).abs() < 1e-15);
        let gamma_back = p.c2 * (1.0 - p.theta) * ch;
        prop_assert!((gamma_back / gamma - 1.0).abs() < 1e-12);
        prop_assert!(p.theta > 0.0 && p.theta < 1.0);
    }

    /// Positivity of the momentum-space Hardy constant on its whole domain.
    #[test]
    fn hardy_constant_is_positive(n in 1u32..6, f in 0.01_f64..0.99) {
        let c = hardy_constant(n, f * n as f64).unwrap();
        prop_assert!(c > 0.0 && c.is_finite());
    }

    /// Partial sums grow monotonically and never exceed the reduction
    /// bound m^(delta - delta0) * sum (m - |E|)^delta0.
    #[test]
    fn moment_sums_obey_the_reduction_bound(
        m in 0.5_f64..2.0,
        us in prop::collection::vec(-0.999_f64..0.999, 1..32),
        delta0 in 0.1_f64..0.9,
        extra_a in 0.0_f64..2.5,
        extra_b in 0.0_f64..2.5,
    ) {
        let params = PhysicalParams::new(0.05, m, Vec2::new(1.0, 0.0)).unwrap();
        let energies: Vec<f64> = us.iter().map(|u| u * m).collect();
        let deltas = [delta0 + extra_a, delta0 + extra_b];
        let report = moment_report(&energies, &deltas, &params, delta0).unwrap();
        for entry in &report.entries {
            for pair in entry.partial_sums.windows(2) {
                prop_assert!(pair[1] >= pair[0]);
            }
            let total = *entry.partial_sums.last().unwrap();
            prop_assert!(
                total <= entry.reduction_bound * (1.0 + 1e-12),
                "sum {} above reduction bound {} at delta {}",
                total, entry.reduction_bound, entry.delta
            );
            if let Some(t) = entry.tail_estimate {
                prop_assert!(t.is_finite() && t >= 0.0);
            }
            // gamma is far below critical, so the closed-form factor exists
            prop_assert!(entry.bound_factor.unwrap() > 0.0);
        }
    }

    /// Logarithmic grids hit both endpoints exactly and space nodes evenly.
    #[test]
    fn log_grid_pins_endpoints(
        r_min in 1e-6_f64..1.0,
        decades in 1.0_f64..10.0,
        per_decade in 4usize..48,
    ) {
        let r_max = r_min * 10.0_f64.powf(decades);
        let grid = RadialGrid::log(r_min, r_max, per_decade).unwrap();
        prop_assert_eq!(grid.nodes[0], r_min);
        prop_assert_eq!(*grid.nodes.last().unwrap(), r_max);
        prop_assert_eq!(grid.nodes.len(), grid.n_nodes());
        let h = grid.log_step();
        for pair in grid.nodes.windows(2) {
            prop_assert!(pair[1] > pair[0]);
            prop_assert!(((pair[1] / pair[0]).ln() - h).abs() < 1e-12);
        }
    }

    /// The cutoff bump is 1 on its plateau, 0 past its support, stays in
    /// [0, 1], and never increases.
    #[test]
    fn bump_is_monotone_and_clamped(
        plateau in 0.1_f64..5.0,
        extent in 0.01_f64..10.0,
        u1 in 0.0_f64..1.0,
        u2 in 0.0_f64..1.0,
    ) {
        let bump = BumpSpec { plateau_end: plateau, support_end: plateau + extent };
        prop_assert_eq!(bump.eval(0.0), 1.0);
        prop_assert_eq!(bump.eval(plateau * u1), 1.0);
        prop_assert_eq!(bump.eval(bump.support_end * (1.0 + u2)), 0.0);
        let (lo, hi) = if u1 <= u2 { (u1, u2) } else { (u2, u1) };
        let f_lo = bump.eval(plateau + extent * lo);
        let f_hi = bump.eval(plateau + extent * hi);
        prop_assert!((0.0..=1.0).contains(&f_lo));
        prop_assert!(f_hi <= f_lo + 1e-12, "bump increased: {f_lo} -> {f_hi}");
    }

    /// The radial profile is supported on [k, k^4] (in units of R), equals
    /// 1 on [k^2, k^3], stays in [0, 1], and its ramps are monotone.
    #[test]
    fn chi_profile_shape(
        k in 2.0_f64..32.0,
        u1 in 0.0_f64..1.0,
        u2 in 0.0_f64..1.0,
    ) {
        prop_assert_eq!(chi_profile(k, k * u1), 0.0);
        prop_assert_eq!(chi_profile(k, k.powi(4) * (1.0 + u1)), 0.0);
        prop_assert_eq!(chi_profile(k, k * k * (1.0 + u1 * (k - 1.0))), 1.0);
        let (lo, hi) = if u1 <= u2 { (u1, u2) } else { (u2, u1) };
        // up ramp
        let a = chi_profile(k, k + lo * (k * k - k));
        let b = chi_profile(k, k + hi * (k * k - k));
        prop_assert!((0.0..=1.0).contains(&a) && (0.0..=1.0).contains(&b));
        prop_assert!(a <= b + 1e-12);
        // down ramp
        let c = chi_profile(k, k.powi(3) + lo * (k.powi(4) - k.powi(3)));
        let d = chi_profile(k, k.powi(3) + hi * (k.powi(4) - k.powi(3)));
        prop_assert!(d <= c + 1e-12);
    }

    /// Scaling every charge by a common positive factor cannot change how
    /// a distribution is classified.
    #[test]
    fn classification_is_scale_invariant(
        q in 0.5_f64..2.0,
        px in 0.5_f64..1.5,
        py in -1.0_f64..1.0,
        pz in -1.0_f64..1.0,
        scale in 0.25_f64..4.0,
        quadrupole in proptest::bool::ANY,
    ) {
        let p = Vec3::new(px, py, pz);
        let minus = Vec3::new(-px, -py, -pz);
        let points = if quadrupole {
            vec![
                PointCharge { pos: p, q },
                PointCharge { pos: minus, q },
                PointCharge { pos: Vec3::new(0.0, 0.0, 0.0), q: -2.0 * q },
            ]
        } else {
            vec![PointCharge { pos: p, q }, PointCharge { pos: minus, q: -q }]
        };
        let radius = 1.05 * (px * px + py * py + pz * pz).sqrt().max(1.0);
        let rho = ChargeDistribution::from_points(points.clone(), radius);
        let scaled = ChargeDistribution::from_points(
            points.into_iter().map(|c| PointCharge { pos: c.pos, q: c.q * scale }).collect(),
            radius,
        );
        let base = classify_charge(&rho).unwrap();
        let after = classify_charge(&scaled).unwrap();
        prop_assert_eq!(canon(&base), canon(&after), "{:?} vs {:?}", base, after);
        // and the configurations mean what they should
        if quadrupole {
            prop_assert_eq!(canon(&base), (1, 2));
        } else {
            prop_assert_eq!(canon(&base), (2, 1));
        }
    }
}

#[test]
fn hardy_constant_closed_form_anchors() {
    // n = 3, alpha = 2 is the classic quarter
    let c = hardy_constant(3, 2.0).unwrap();
    assert!((c - 0.25).abs() < 1e-13, "got {c}");
    // alpha -> 0 is the trivial constant 1
    let c = hardy_constant(2, 1e-9).unwrap();
    assert!((c - 1.0).abs() < 1e-6, "got {c}");
    // out-of-domain orders are rejected, not extrapolated
    assert!(hardy_constant(2, 2.0).is_err());
    assert!(hardy_constant(2, -0.5).is_err());
    assert!(hardy_constant(0, 0.5).is_err());
}
