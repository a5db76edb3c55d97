//! Eigenvalue-moment machinery for the gap spectrum: partial sums of
//! (m - |E_n|)^delta with geometric tail extrapolation, the reduction of a
//! delta-moment to a delta0-moment, the explicit right side of the dipole
//! moment bound (modulo the unnamed universal constant, set to 1), and the
//! semiclassical integral int (gamma V_pm)^{1+delta0} dx that feeds it.
//!
//! The semiclassical integral is split at |x| = 2|x0|. Inside, polar
//! coordinates around the singular center with the radius substituted as
//! rho = |x0| tau^{1/(1-delta0)} absorb the |x - x0|^{-1-delta0}
//! singularity completely: since rho * V equals 1 - rho/|x + x0| near the
//! center, the substituted integrand is a smooth O(1) quantity. Outside,
//! the potential decays like a dipole, r^{-2}, so the integrand falls as
//! r^{-2-2 delta0}; an origin-polar sweep covers six decades and the exact
//! dipole tail (whose angular factor is a Beta function) finishes the job.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::bounds::{critical_coupling, BoundsError};
use crate::potentials::{ChargeDistribution, PhysicalParams};
use crate::quad::{integrate_panels, log_breaks};
use crate::special::gamma;

/// Which signed part of the two-center potential to integrate. The two
/// give equal integrals (the potential is odd under reflection), which the
/// tests exploit as a consistency check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PotentialSide {
    Positive,
    Negative,
}

/// int (gamma V_side)^{1+delta0} dx over the plane. Finite exactly when
/// delta0 < 1; the coupling enters only through the exact prefactor
/// gamma^{1+delta0}.
pub fn semiclassical_integral(
    params: &PhysicalParams,
    delta0: f64,
    side: PotentialSide,
) -> Result<f64, BoundsError> {
    if delta0 >= 1.0 {
        return Err(BoundsError::NotIntegrable(
            "the center singularities defeat exponents >= 1",
        ));
    }
    if !(delta0 > 0.0) {
        return Err(BoundsError::Domain("delta0 must be positive"));
    }
    let a = params.x0.norm();
    let d = delta0;
    let p = 1.0 / (1.0 - d);
    // rotated frame: the singular center sits at (sign a, 0)
    let sign = match side {
        PotentialSide::Positive => 1.0,
        PotentialSide::Negative => -1.0,
    };

    let n_phi = 256usize;
    let dphi = 2.0 * core::f64::consts::PI / n_phi as f64;

    // inner disk |x| <= 2a, polar around the singular center; each ray is
    // clipped at the disk edge and at the sign change of the potential so
    // the integrand stays analytic on every panel
    let mut inner = 0.0;
    for i in 0..n_phi {
        let phi = (i as f64 + 0.5) * dphi;
        let cw = sign * a * phi.cos(); // center . ray direction
        let rho_edge = -cw + (cw * cw + 3.0 * a * a).sqrt();
        let mut rho_top = rho_edge;
        if cw < 0.0 {
            rho_top = rho_top.min(-a * a / cw);
        }
        let tau_top = (rho_top / a).powf(1.0 - d);
        let mut breaks: Vec<f64> = Vec::with_capacity(12);
        breaks.push(0.0);
        for k in (0..=10).rev() {
            breaks.push(tau_top * 10f64.powi(-k));
        }
        inner += dphi
            * integrate_panels(
                |tau| {
                    let rho = a * tau.powf(p);
                    // rho * V_side = 1 - rho / (distance to the far center)
                    let far = (4.0 * a * a + 4.0 * rho * cw + rho * rho).sqrt();
                    let s = (1.0 - rho / far).max(0.0);
                    s.powf(1.0 + d)
                },
                &breaks,
                10,
            );
    }
    inner *= a.powf(1.0 - d) * p;

    // outer annulus in origin polar coordinates, exact potential
    let r_mid = 1e6 * a;
    let breaks = log_breaks(2.0 * a, r_mid, 8, 48);
    let mut outer = 0.0;
    for i in 0..n_phi {
        let phi = (i as f64 + 0.5) * dphi;
        let c = phi.cos();
        outer += dphi
            * integrate_panels(
                |r| {
                    let d_plus = (r * r - 2.0 * a * r * c + a * a).sqrt();
                    let d_minus = (r * r + 2.0 * a * r * c + a * a).sqrt();
                    // cancellation-free form of 1/d_plus - 1/d_minus
                    let v = sign * 4.0 * a * r * c / (d_plus * d_minus * (d_plus + d_minus));
                    if v > 0.0 {
                        v.powf(1.0 + d) * r
                    } else {
                        0.0
                    }
                },
                &breaks,
                12,
            );
    }

    // dipole tail beyond r_mid: V ~ 2a cos(theta)/r^2, and
    // int cos^{1+d} over the positive half is a Beta value
    let angular = core::f64::consts::PI.sqrt() * gamma(1.0 + 0.5 * d) / gamma(1.5 + 0.5 * d);
    let tail = (2.0 * a).powf(1.0 + d) * angular * r_mid.powf(-2.0 * d) / (2.0 * d);

    Ok(params.gamma.powf(1.0 + d) * (inner + outer + tail))
}

/// One moment order delta: the running partial sums of (m - |E_n|)^delta
/// over the spectrum sorted deepest first, a geometric extrapolation of
/// what the unseen levels still contribute, the reduction to the delta0
/// moment, and the explicit bound the sum is compared against.
#[derive(Clone, Debug)]
pub struct MomentEntry {
    pub delta: f64,
    pub partial_sums: Vec<f64>,
    /// d_last * rho / (1 - rho) from the last two increments; None when
    /// fewer than two levels are available or the decay is not yet
    /// geometric (ratio >= 0.99).
    pub tail_estimate: Option<f64>,
    /// m^{delta - delta0} * sum (m - |E_n|)^{delta0} >= the delta sum.
    pub reduction_bound: f64,
    /// m^{1+delta-delta0} gamma^{1+delta0} |x0|^{1-delta0} /
    /// ((1 - gamma/C_H)^{2+delta0} delta0 (1 - delta0)), modulo the
    /// universal constant (taken as 1); None when gamma >= C_H, where the
    /// bound's hypothesis fails.
    pub bound_factor: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct MomentReport {
    pub delta0: f64,
    pub entries: Vec<MomentEntry>,
}

/// Moment sums of the in-gap spectrum. `energies` are eigenvalues inside
/// [-m, m]; each requested delta must be at least delta0 so the reduction
/// inequality applies.
pub fn moment_report(
    energies: &[f64],
    deltas: &[f64],
    params: &PhysicalParams,
    delta0: f64,
) -> Result<MomentReport, BoundsError> {
    let m = params.mass;
    if energies.is_empty() {
        return Err(BoundsError::Domain("empty spectrum"));
    }
    if !(delta0 > 0.0 && delta0 < 1.0) {
        return Err(BoundsError::Domain("delta0 must lie in (0,1)"));
    }
    let mut gaps: Vec<f64> = energies.iter().map(|e| m - e.abs()).collect();
    if gaps.iter().any(|t| *t < 0.0) {
        return Err(BoundsError::Domain("eigenvalue outside the gap"));
    }
    gaps.sort_by(|x, y| y.partial_cmp(x).unwrap());
    let sum0: f64 = gaps.iter().map(|t| t.powf(delta0)).sum();

    let gamma_ratio = params.gamma / critical_coupling();
    let x0 = params.x0.norm();
    let mut entries = Vec::with_capacity(deltas.len());
    for &delta in deltas {
        if delta < delta0 {
            return Err(BoundsError::Domain("delta must be at least delta0"));
        }
        let mut partial_sums = Vec::with_capacity(gaps.len());
        let mut acc = 0.0;
        for t in &gaps {
            acc += t.powf(delta);
            partial_sums.push(acc);
        }
        let n = gaps.len();
        let tail_estimate = if n >= 2 {
            let d_last = gaps[n - 1].powf(delta);
            let d_prev = gaps[n - 2].powf(delta);
            if d_prev > 0.0 && d_last / d_prev < 0.99 {
                let rho = d_last / d_prev;
                Some(d_last * rho / (1.0 - rho))
            } else {
                None
            }
        } else {
            None
        };
        let bound_factor = if gamma_ratio < 1.0 {
            Some(
                m.powf(1.0 + delta - delta0) * params.gamma.powf(1.0 + delta0)
                    * x0.powf(1.0 - delta0)
                    / ((1.0 - gamma_ratio).powf(2.0 + delta0) * delta0 * (1.0 - delta0)),
            )
        } else {
            None
        };
        entries.push(MomentEntry {
            delta,
            partial_sums,
            tail_estimate,
            reduction_bound: m.powf(delta - delta0) * sum0,
            bound_factor,
        });
    }
    Ok(MomentReport { delta0, entries })
}

#[derive(Clone, Copy, Debug)]
pub struct DensityNorms {
    pub exponent_a: f64,
    pub exponent_b: f64,
    /// L^{3(1+delta)/2(2+delta)} norm of the density.
    pub norm_a: f64,
    /// L^{3(2+delta)/2(3+delta)} norm of the density.
    pub norm_b: f64,
}

/// The two Lebesgue norms entering the finiteness criterion for extended
/// charge densities, by the midpoint rule on the density's own grid.
pub fn density_norms(rho: &ChargeDistribution, delta: f64) -> Result<DensityNorms, BoundsError> {
    if !(delta > 1.0) {
        return Err(BoundsError::Domain("need delta > 1"));
    }
    let Some(grid) = &rho.density else {
        return Err(BoundsError::PointChargesOnly);
    };
    let exponent_a = 3.0 * (1.0 + delta) / (2.0 * (2.0 + delta));
    let exponent_b = 3.0 * (2.0 + delta) / (2.0 * (3.0 + delta));
    let dv = grid.cell_volume();
    let lp = |p: f64| {
        grid.values
            .iter()
            .map(|v| v.abs().powf(p))
            .sum::<f64>()
            .mul_add(dv, 0.0)
            .powf(1.0 / p)
    };
    Ok(DensityNorms {
        exponent_a,
        exponent_b,
        norm_a: lp(exponent_a),
        norm_b: lp(exponent_b),
    })
}
