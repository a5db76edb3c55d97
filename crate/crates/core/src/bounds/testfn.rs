//! Concrete test functions and the two inequality checks evaluated on
//! them: the fractional Hardy comparison |p|^alpha >= C |x-a|^{-alpha} on
//! Gaussian mixtures (whose Fourier transforms are exact), and the
//! weighted graph-norm estimate ||r^{1/2}(D_0 - i eta) r^{1/2} psi||^2 >=
//! ||psi||^2 / 4 on smooth channel spinors.
//!
//! Both checks report their own quadrature error so that a margin can be
//! asserted as "nonnegative up to noise" rather than by wishful tolerance.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::bounds::{hardy_constant, BoundsError};
use crate::geom::Vec2;
use crate::quad::{halve_panels, integrate_panels, lin_breaks, log_breaks};

/// weight * exp(-width |x - center|^2); width is the Gaussian decay rate.
#[derive(Clone, Copy, Debug)]
pub struct GaussianTerm {
    pub weight: f64,
    pub width: f64,
    pub center: Vec2,
}

/// A finite signed combination of planar Gaussians. Closed under the
/// Fourier transform, which is what makes the momentum-side quadrature
/// exact in structure: only plain 1D/periodic integrals remain.
#[derive(Clone, Debug, Default)]
pub struct GaussianMixture {
    pub terms: Vec<GaussianTerm>,
}

impl GaussianMixture {
    pub fn eval(&self, x: Vec2) -> f64 {
        self.terms
            .iter()
            .map(|t| {
                let d = x.sub(t.center);
                t.weight * (-t.width * d.dot(d)).exp()
            })
            .sum()
    }

    /// Transform with the convention psi_hat(k) = integral psi e^{-ik.x}:
    /// each term maps to weight (pi/width) e^{-|k|^2/(4 width)} e^{-ik.b}.
    pub fn fourier(&self, k: Vec2) -> (f64, f64) {
        let (mut re, mut im) = (0.0, 0.0);
        for t in &self.terms {
            let amp = t.weight * core::f64::consts::PI / t.width
                * (-k.dot(k) / (4.0 * t.width)).exp();
            let phase = k.dot(t.center);
            re += amp * phase.cos();
            im -= amp * phase.sin();
        }
        (re, im)
    }

    /// Exact L^2 norm squared via the pairwise Gaussian product formula.
    pub fn norm_sq(&self) -> f64 {
        let mut s = 0.0;
        for ti in &self.terms {
            for tj in &self.terms {
                let ab = ti.width + tj.width;
                let d = ti.center.sub(tj.center);
                s += ti.weight * tj.weight * core::f64::consts::PI / ab
                    * (-ti.width * tj.width / ab * d.dot(d)).exp();
            }
        }
        s
    }

    fn validate(&self) -> Result<(), BoundsError> {
        if self.terms.is_empty() {
            return Err(BoundsError::Domain("empty mixture"));
        }
        if self.terms.iter().any(|t| !(t.width > 0.0)) {
            return Err(BoundsError::Domain("widths must be positive"));
        }
        if self.norm_sq() < 1e-300 {
            return Err(BoundsError::NotIntegrable("test function vanishes"));
        }
        Ok(())
    }

    fn max_width(&self) -> f64 {
        self.terms.iter().fold(0.0f64, |m, t| m.max(t.width))
    }

    fn min_width(&self) -> f64 {
        self.terms.iter().fold(f64::MAX, |m, t| m.min(t.width))
    }
}

#[derive(Clone, Copy, Debug)]
pub struct HerbstReport {
    /// <psi, |p|^alpha psi>
    pub lhs: f64,
    /// <psi, |x - a|^{-alpha} psi>
    pub rhs: f64,
    /// The sharp comparison constant for the plane.
    pub constant: f64,
    /// lhs - constant * rhs; nonnegative up to quadrature noise.
    pub margin: f64,
    pub quadrature_error: f64,
}

/// <psi, |p|^alpha psi> = (2 pi)^{-2} int k^{1+alpha} |psi_hat|^2 dk dphi.
fn momentum_form(psi: &GaussianMixture, alpha: f64, radial_panels: usize, n_phi: usize) -> f64 {
    // slowest transform decay is exp(-k^2 / (2 max width))
    let k_max = (120.0 * psi.max_width()).sqrt();
    let breaks = lin_breaks(0.0, k_max, radial_panels);
    let dphi = 2.0 * core::f64::consts::PI / n_phi as f64;
    let radial = |k: f64| {
        let mut a = 0.0;
        for i in 0..n_phi {
            let phi = i as f64 * dphi;
            let (re, im) = psi.fourier(Vec2::from_polar(k, phi));
            a += re * re + im * im;
        }
        k.powf(1.0 + alpha) * a * dphi
    };
    integrate_panels(radial, &breaks, 12) / (4.0 * core::f64::consts::PI * core::f64::consts::PI)
}

/// <psi, |x - c|^{-alpha} psi> in polar coordinates around c, with the
/// radial variable substituted as r = u^{1/(2-alpha)} so the integrand is
/// regular at the weight's singularity.
fn position_form(
    psi: &GaussianMixture,
    alpha: f64,
    c: Vec2,
    radial_panels: usize,
    n_phi: usize,
) -> f64 {
    let a_min = psi.min_width();
    let d_max = psi
        .terms
        .iter()
        .fold(0.0f64, |m, t| m.max(t.center.sub(c).norm()));
    let r_max = d_max + (30.0 / a_min).sqrt();
    let p = 1.0 / (2.0 - alpha);
    let breaks = lin_breaks(0.0, r_max.powf(2.0 - alpha), radial_panels);
    let dphi = 2.0 * core::f64::consts::PI / n_phi as f64;
    let radial = |u: f64| {
        let r = u.powf(p);
        let mut g = 0.0;
        for i in 0..n_phi {
            let phi = i as f64 * dphi;
            let v = psi.eval(c.add(Vec2::from_polar(r, phi)));
            g += v * v;
        }
        g * dphi
    };
    integrate_panels(radial, &breaks, 8) * p
}

/// Fractional Hardy comparison on the plane, with the singular weight
/// centered at `weight_center`. Both quadratic forms are integrated twice
/// (grids doubled) and the drift is reported as the quadrature error.
pub fn herbst_check(
    psi: &GaussianMixture,
    alpha: f64,
    weight_center: Vec2,
) -> Result<HerbstReport, BoundsError> {
    if !(alpha > 0.0 && alpha < 2.0) {
        return Err(BoundsError::Domain("need 0 < alpha < 2 in the plane"));
    }
    psi.validate()?;

    let d_max = psi
        .terms
        .iter()
        .fold(0.0f64, |m, t| m.max(t.center.sub(weight_center).norm()));
    let k_max = (120.0 * psi.max_width()).sqrt();
    let n_phi_mom = (2.0 * k_max * d_max) as usize + 48;
    let lhs_c = momentum_form(psi, alpha, 32, n_phi_mom);
    let lhs_f = momentum_form(psi, alpha, 64, 2 * n_phi_mom);

    let a_min = psi.min_width();
    let r_max = d_max + (30.0 / a_min).sqrt();
    let n_phi_pos = (4.0 * psi.max_width() * r_max * d_max) as usize + 48;
    let rhs_c = position_form(psi, alpha, weight_center, 48, n_phi_pos);
    let rhs_f = position_form(psi, alpha, weight_center, 96, 2 * n_phi_pos);

    let constant = hardy_constant(2, alpha)?;
    let quadrature_error = (lhs_f - lhs_c).abs()
        + constant * (rhs_f - rhs_c).abs()
        + 1e-13 * (lhs_f.abs() + constant * rhs_f.abs());
    Ok(HerbstReport {
        lhs: lhs_f,
        rhs: rhs_f,
        constant,
        margin: lhs_f - constant * rhs_f,
        quadrature_error,
    })
}

/// One radial factor of a channel spinor, with its exact derivative.
pub struct RadialProfile<'a> {
    pub value: &'a dyn Fn(f64) -> f64,
    pub slope: &'a dyn Fn(f64) -> f64,
}

/// Two-component test function (f(r) e^{ij theta}, g(r) e^{i(j+1) theta})
/// supported in the annulus support.0 <= r <= support.1. The profiles must
/// vanish smoothly at the support ends (at the inner end only if it is
/// positive); the operator is evaluated exactly on this form, so only the
/// two radial factors are needed.
pub struct ChannelSpinor<'a> {
    pub j: i32,
    pub upper: RadialProfile<'a>,
    pub lower: RadialProfile<'a>,
    pub support: (f64, f64),
}

#[derive(Clone, Copy, Debug)]
pub struct SandwichReport {
    /// ||r^{1/2} (D_0 - i eta) r^{1/2} psi||^2 by direct quadrature.
    pub lhs: f64,
    /// ||psi||^2 / 4.
    pub rhs: f64,
    /// (m^2 + eta^2) ||r psi||^2.
    pub kappa_term: f64,
    /// ||r^{1/2} d/dr (r^{1/2} psi)||^2.
    pub radial_term: f64,
    /// j(j+1) ||psi||^2, the channel's angular contribution.
    pub centrifugal_term: f64,
    /// -4 pi eta int f g r^2 dr, the only term without a sign.
    pub eta_cross_term: f64,
    pub quadrature_error: f64,
}

struct SandwichPieces {
    lhs: f64,
    norm_sq: f64,
    r_norm_sq: f64,
    radial: f64,
    cross: f64,
}

fn sandwich_quadrature(psi: &ChannelSpinor<'_>, m: f64, eta: f64, breaks: &[f64]) -> SandwichPieces {
    let two_pi = 2.0 * core::f64::consts::PI;
    let j = psi.j as f64;
    let mut p = SandwichPieces {
        lhs: 0.0,
        norm_sq: 0.0,
        r_norm_sq: 0.0,
        radial: 0.0,
        cross: 0.0,
    };
    p.lhs = two_pi
        * integrate_panels(
            |r| {
                let (f, g) = ((psi.upper.value)(r), (psi.lower.value)(r));
                let (df, dg) = ((psi.upper.slope)(r), (psi.lower.slope)(r));
                let sq = r.sqrt();
                let (ff, gg) = (sq * f, sq * g);
                let fp = sq * df + f / (2.0 * sq);
                let gp = sq * dg + g / (2.0 * sq);
                let up_im = eta * ff + gp + (j + 1.0) * gg / r;
                let lo_im = eta * gg + fp - j * ff / r;
                (m * m * (ff * ff + gg * gg) + up_im * up_im + lo_im * lo_im) * r * r
            },
            breaks,
            12,
        );
    p.norm_sq = two_pi
        * integrate_panels(
            |r| {
                let (f, g) = ((psi.upper.value)(r), (psi.lower.value)(r));
                (f * f + g * g) * r
            },
            breaks,
            12,
        );
    p.r_norm_sq = two_pi
        * integrate_panels(
            |r| {
                let (f, g) = ((psi.upper.value)(r), (psi.lower.value)(r));
                (f * f + g * g) * r * r * r
            },
            breaks,
            12,
        );
    p.radial = two_pi
        * integrate_panels(
            |r| {
                let (f, g) = ((psi.upper.value)(r), (psi.lower.value)(r));
                let (df, dg) = ((psi.upper.slope)(r), (psi.lower.slope)(r));
                let sq = r.sqrt();
                let fp = sq * df + f / (2.0 * sq);
                let gp = sq * dg + g / (2.0 * sq);
                (fp * fp + gp * gp) * r * r
            },
            breaks,
            12,
        );
    p.cross = -2.0
        * two_pi
        * eta
        * integrate_panels(
            |r| (psi.upper.value)(r) * (psi.lower.value)(r) * r * r,
            breaks,
            12,
        );
    p
}

/// Direct evaluation of the weighted graph-norm inequality. The report
/// also carries the exact channel decomposition of the left side,
///
///   lhs = (m^2 + eta^2) ||r psi||^2 + ||r^{1/2} d_r r^{1/2} psi||^2
///         + j(j+1) ||psi||^2 - 4 pi eta int f g r^2 dr,
///
/// which the tests verify term by term; for a one-component radial state
/// it collapses to the familiar two-term chain.
pub fn sandwich_check(
    psi: &ChannelSpinor<'_>,
    m: f64,
    eta: f64,
) -> Result<SandwichReport, BoundsError> {
    let (a, b) = psi.support;
    if !(a >= 0.0 && b > a && b.is_finite()) {
        return Err(BoundsError::Domain("need 0 <= inner < outer < inf"));
    }
    if m < 0.0 {
        return Err(BoundsError::Domain("mass must be nonnegative"));
    }

    // support-end smoothness: the profiles must vanish where they stop
    let mut peak = 0.0f64;
    for i in 0..=256 {
        let r = a + (b - a) * i as f64 / 256.0;
        peak = peak
            .max((psi.upper.value)(r).abs())
            .max((psi.lower.value)(r).abs());
    }
    if peak == 0.0 {
        return Err(BoundsError::Domain("test function vanishes"));
    }
    let mut edge = (psi.upper.value)(b).abs().max((psi.lower.value)(b).abs());
    if a > 0.0 {
        edge = edge
            .max((psi.upper.value)(a).abs())
            .max((psi.lower.value)(a).abs());
    }
    if edge > 1e-8 * peak {
        return Err(BoundsError::NotSmoothEnough(
            "profiles do not vanish at the support ends",
        ));
    }

    let breaks = if a > 0.0 {
        log_breaks(a, b, 8, 48)
    } else {
        lin_breaks(a, b, 64)
    };
    let coarse = sandwich_quadrature(psi, m, eta, &breaks);
    let fine = sandwich_quadrature(psi, m, eta, &halve_panels(&breaks));

    let j = psi.j as f64;
    let scale = fine.lhs.abs() + fine.norm_sq + fine.r_norm_sq + fine.radial + fine.cross.abs();
    let quadrature_error = (fine.lhs - coarse.lhs).abs()
        + 0.25 * (fine.norm_sq - coarse.norm_sq).abs()
        + 1e-13 * scale;
    Ok(SandwichReport {
        lhs: fine.lhs,
        rhs: 0.25 * fine.norm_sq,
        kappa_term: (m * m + eta * eta) * fine.r_norm_sq,
        radial_term: fine.radial,
        centrifugal_term: j * (j + 1.0) * fine.norm_sq,
        eta_cross_term: fine.cross,
        quadrature_error,
    })
}

/// The log-concentrated family that saturates the 1/4: a single upper
/// component f = v(ln r / l) / r with the bump v(s) = (1 - s^2)^2. For
/// m = eta = 0 the ratio lhs/rhs equals 1 + 12/l^2 exactly, approaching
/// the sharp constant from above as the window l grows.
pub fn sharpness_probe(l: f64) -> Result<SandwichReport, BoundsError> {
    if !(l > 0.0) {
        return Err(BoundsError::Domain("window must be positive"));
    }
    let bump = move |s: f64| {
        if s.abs() >= 1.0 {
            0.0
        } else {
            (1.0 - s * s) * (1.0 - s * s)
        }
    };
    let bump_slope = move |s: f64| {
        if s.abs() >= 1.0 {
            0.0
        } else {
            -4.0 * s * (1.0 - s * s)
        }
    };
    let f = move |r: f64| bump(r.ln() / l) / r;
    let df = move |r: f64| (bump_slope(r.ln() / l) / l - bump(r.ln() / l)) / (r * r);
    let zero = |_: f64| 0.0;
    let spinor = ChannelSpinor {
        j: 0,
        upper: RadialProfile {
            value: &f,
            slope: &df,
        },
        lower: RadialProfile {
            value: &zero,
            slope: &zero,
        },
        support: ((-l).exp(), l.exp()),
    };
    sandwich_check(&spinor, 0.0, 0.0)
}
