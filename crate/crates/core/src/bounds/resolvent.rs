//! Kernel of the shifted free resolvent R_0(i eta) = (D_0 + i eta)
//! (-Delta + kappa^2)^{-1}, kappa^2 = m^2 + eta^2, and the pointwise /
//! Hilbert-Schmidt bounds built on it.
//!
//! Writing the inverse Helmholtz operator through its heat-kernel
//! representation, every matrix entry of the kernel at displacement z is
//!
//!   (1/4 pi) int_0^inf c(t) exp(-kappa^2 t - |z|^2 / 4t) dt / t,
//!
//! with c = m + i eta, -m + i eta on the diagonal and c = (z_2 + i z_1)/2t
//! on both off-diagonals. Substituting t = (|z| / 2 kappa) e^u turns the
//! exponent into -kappa |z| cosh u, a fast saturating profile that a short
//! Gauss-Legendre sweep integrates to near machine accuracy; the same
//! integrals have Bessel closed forms (K0, K1) that the tests pin against.
//!
//! The exported bound is |entry| <= C(x0, eta0) exp(-kappa |z| / 4) for
//! |z| >= |x0| and |eta| >= eta0, with the explicit constant
//! C = (1/4 pi) (4/|x0| + 16 / (|x0|^2 sqrt(m^2 + eta0^2))).

#[allow(unused_imports)]
use num_traits::Float;

use num_complex::Complex64;

use crate::bounds::BoundsError;
use crate::potentials::PhysicalParams;
use crate::quad::{integrate_panels, lin_breaks};

/// Kernel entries of R_0(i eta) at one displacement, with the pointwise
/// bound they are checked against.
#[derive(Clone, Debug)]
pub struct ResolventSample {
    pub separation: f64,
    pub eta: f64,
    pub kappa: f64,
    /// Row-major 2x2 kernel block at z = (separation, 0).
    pub entries: [[Complex64; 2]; 2],
    /// C(separation, |eta|) exp(-kappa separation / 4), the tightest
    /// instance of the uniform bound that covers this sample.
    pub bound_value: f64,
}

/// The explicit constant in the pointwise kernel bound. Valid whenever the
/// displacement is at least `x0_norm` and the shift at least `eta0`.
pub fn resolvent_bound_constant(x0_norm: f64, eta0: f64, m: f64) -> Result<f64, BoundsError> {
    if !(x0_norm > 0.0) {
        return Err(BoundsError::Domain("separation threshold must be positive"));
    }
    let kappa0 = (m * m + eta0 * eta0).sqrt();
    if !(kappa0 > 0.0) {
        return Err(BoundsError::Domain("need a gap or a nonzero shift"));
    }
    Ok((4.0 / x0_norm + 16.0 / (x0_norm * x0_norm * kappa0))
        / (4.0 * core::f64::consts::PI))
}

/// int exp(-nu u - x cosh u) du over the real line (= 2 K_nu(x)),
/// integrated on a window chosen so the discarded tails are below 1e-21
/// relative.
fn cosh_integral(nu: f64, x: f64, doubled: bool) -> f64 {
    // window: kappa s (cosh U - 1) must beat 50 plus the e^{|nu| U} growth
    let mut u_max = 1.0f64;
    for _ in 0..4 {
        let t = 1.0 + (50.0 + nu.abs() * u_max) / x;
        u_max = (t + (t * t - 1.0).sqrt()).ln();
    }
    let mut panels = ((u_max * (1.0 + x).sqrt()).ceil() as usize).clamp(16, 256);
    if doubled {
        panels *= 2;
    }
    let breaks = lin_breaks(-u_max, u_max, panels);
    integrate_panels(|u| (-nu * u - x * u.cosh()).exp(), &breaks, 12)
}

/// Evaluate the 2x2 kernel block at displacement (separation, 0) by
/// quadrature, cross-checked against a doubled grid.
pub fn resolvent_kernel(
    separation: f64,
    eta: f64,
    m: f64,
) -> Result<ResolventSample, BoundsError> {
    if !(separation > 0.0 && separation.is_finite()) {
        return Err(BoundsError::Domain("separation must be positive"));
    }
    let kappa = (m * m + eta * eta).sqrt();
    if !(kappa > 0.0) {
        return Err(BoundsError::Domain("need a gap or a nonzero shift"));
    }
    let x = kappa * separation;
    let i0 = cosh_integral(0.0, x, false);
    let i0f = cosh_integral(0.0, x, true);
    let i1 = cosh_integral(1.0, x, false);
    let i1f = cosh_integral(1.0, x, true);
    for (coarse, fine) in [(i0, i0f), (i1, i1f)] {
        let drift = (fine - coarse).abs();
        if drift > 1e-8 * fine.abs().max(1e-300) {
            return Err(BoundsError::QuadratureFailure { value: fine, drift });
        }
    }

    let quarter = 1.0 / (4.0 * core::f64::consts::PI);
    // diagonal carries (m sigma_3 + i eta) K0; off-diagonals are the
    // gradient term, purely imaginary when z lies on the positive axis
    let diag_top = Complex64::new(m, eta) * (quarter * i0f);
    let diag_bot = Complex64::new(-m, eta) * (quarter * i0f);
    let off = Complex64::new(0.0, kappa * quarter * i1f);
    let constant = resolvent_bound_constant(separation, eta.abs(), m)?;
    Ok(ResolventSample {
        separation,
        eta,
        kappa,
        entries: [[diag_top, off], [off, diag_bot]],
        bound_value: constant * (-kappa * separation / 4.0).exp(),
    })
}

/// Radial cutoff profile for one charge center: identically 1 out to
/// `plateau_end`, a quintic descent to 0 at `support_end`. The supports of
/// the two cutoffs around the opposite centers must stay at least one
/// center distance apart, which pins them inside half that distance.
#[derive(Clone, Copy, Debug)]
pub struct BumpSpec {
    pub plateau_end: f64,
    pub support_end: f64,
}

impl BumpSpec {
    pub fn eval(&self, r: f64) -> f64 {
        if r <= self.plateau_end {
            1.0
        } else if r >= self.support_end {
            0.0
        } else {
            let t = (r - self.plateau_end) / (self.support_end - self.plateau_end);
            1.0 - t * t * t * (10.0 - 15.0 * t + 6.0 * t * t)
        }
    }

    fn validate(&self, x0_norm: f64) -> Result<(), BoundsError> {
        if !(self.plateau_end > 0.0 && self.support_end > self.plateau_end) {
            return Err(BoundsError::BadBumpSupport(
                "need 0 < plateau_end < support_end",
            ));
        }
        if self.plateau_end < 0.25 * x0_norm {
            return Err(BoundsError::BadBumpSupport(
                "plateau must cover a quarter of the center distance",
            ));
        }
        if self.support_end > 0.5 * x0_norm {
            return Err(BoundsError::BadBumpSupport(
                "support may not exceed half the center distance",
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug)]
pub struct HsBound {
    /// 2 pi int chi(r)^2 dr: the L1 mass of the cut potential piece, the
    /// Coulomb singularity cancelling the polar Jacobian.
    pub l1_norm: f64,
    /// C(|x0|, 0) from the pointwise kernel bound.
    pub constant: f64,
    /// 4 C exp(-kappa |x0| / 4) l1^2, dominating the squared
    /// Hilbert-Schmidt norm of the cross-center resolvent block.
    pub value: f64,
}

/// Hilbert-Schmidt bound on the off-diagonal (center-to-center) block of
/// the cut resolvent at shift i eta. Points under the two cutoffs are
/// separated by at least |x0|, so the pointwise kernel bound applies with
/// that threshold.
pub fn hs_offdiagonal_bound(
    params: &PhysicalParams,
    eta: f64,
    bump: &BumpSpec,
) -> Result<HsBound, BoundsError> {
    let x0 = params.x0.norm();
    bump.validate(x0)?;
    let breaks = lin_breaks(0.0, bump.support_end, 32);
    let l1_norm = 2.0
        * core::f64::consts::PI
        * integrate_panels(
            |r| {
                let c = bump.eval(r);
                c * c
            },
            &breaks,
            8,
        );
    let kappa = (params.mass * params.mass + eta * eta).sqrt();
    let constant = resolvent_bound_constant(x0, 0.0, params.mass)?;
    Ok(HsBound {
        l1_norm,
        constant,
        value: 4.0 * constant * (-kappa * x0 / 4.0).exp() * l1_norm * l1_norm,
    })
}
