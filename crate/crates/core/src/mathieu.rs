//! The angular operator M(q) = -d^2/dtheta^2 + 2 q cos(theta) on the circle.
//!
//! In the Fourier basis e^{i n theta} this is an exactly tridiagonal
//! symmetric matrix: n^2 on the diagonal, q on the off-diagonals (2 cos
//! shifts the index by +-1 with weight 1). Truncation at |n| <= N converges
//! spectrally; eigenvalues are accepted once doubling N moves them by less
//! than max(1e-10, 1e-8 |lambda|).
//!
//! The lowest eigenvalue lambda_0(q) is strictly negative for every q > 0
//! (to second order lambda_0 = -2 q^2 + O(q^4)), and the number of negative
//! eigenvalues counts the towers of gap eigenvalues the radial modules
//! build. Under theta = 2x the operator becomes the standard Mathieu
//! equation, so lambda_n(q) are the period-pi characteristic values at
//! parameter 4q, divided by 4 — which makes an independent continued-
//! fraction oracle available for tests.

use crate::linalg::SymTridiag;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

pub const START_TRUNCATION: usize = 32;
pub const MAX_TRUNCATION: usize = 4096;

#[derive(Clone, Debug)]
pub struct MathieuSpectrum {
    pub q: f64,
    /// Fourier modes -N..N actually used.
    pub truncation: usize,
    /// Lowest eigenvalues, ascending.
    pub eigenvalues: Vec<f64>,
    /// Fourier coefficients c_n (index n + N), unit norm, one per
    /// eigenvalue. Even levels are cosine-type (c_{-n} = c_n), odd levels
    /// sine-type (c_{-n} = -c_n).
    pub eigenvectors: Vec<Vec<f64>>,
    /// Per-eigenvalue change under the last truncation doubling.
    pub convergence: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum MathieuError {
    /// Doubling hit the truncation cap without meeting tolerance.
    NoConvergence { q: f64, cap: usize },
    /// An eigenvalue sits within tolerance of zero, so the negative count
    /// would depend on noise.
    SignAmbiguous { level: usize, lambda: f64, tol: f64 },
    IndexOutOfRange { n: usize, available: usize },
    BadParameter(&'static str),
}

impl core::fmt::Display for MathieuError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            MathieuError::NoConvergence { q, cap } => {
                write!(f, "eigenvalues at q = {q} not converged at truncation cap {cap}")
            }
            MathieuError::SignAmbiguous { level, lambda, tol } => write!(
                f,
                "level {level} has lambda = {lambda:e} within {tol:e} of zero; \
                 negative count is ambiguous"
            ),
            MathieuError::IndexOutOfRange { n, available } => {
                write!(f, "eigenfunction {n} requested, {available} computed")
            }
            MathieuError::BadParameter(msg) => write!(f, "{msg}"),
        }
    }
}

impl core::error::Error for MathieuError {}

/// The (2N+1) x (2N+1) truncation in the Fourier basis, modes -N..N.
pub fn assemble_mathieu_matrix(q: f64, n_trunc: usize) -> SymTridiag {
    assert!(n_trunc >= 1);
    let diag = (-(n_trunc as i64)..=n_trunc as i64)
        .map(|n| (n * n) as f64)
        .collect();
    let off = alloc::vec![q; 2 * n_trunc];
    SymTridiag::new(diag, off)
}

/// Lowest eigenvalues at a fixed truncation.
fn eigs_at(q: f64, n_trunc: usize, levels: usize) -> Vec<f64> {
    let m = assemble_mathieu_matrix(q, n_trunc);
    // Gershgorin below; lambda_k <= (k-th free level) + 2q above.
    let lo = -2.0 * q.abs() - 1.0;
    let top = (levels as f64 / 2.0).ceil();
    let hi = top * top + 2.0 * q.abs() + 1.0;
    let tol = 1e-13 * hi.max(-lo);
    let mut eigs = m.eigenvalues_in(lo, hi, tol);
    eigs.truncate(levels);
    eigs
}

/// Keep (even) or force (odd) the reflection symmetry c_{-n} = +-c_n; the
/// resolvent preserves each parity sector, so projecting the iterate kills
/// roundoff drift and keeps degenerate pairs orthogonal.
fn parity_project(v: &mut [f64], n_trunc: usize, even: bool) {
    for k in 1..=n_trunc {
        let hi = v[n_trunc + k];
        let lo = v[n_trunc - k];
        if even {
            let s = 0.5 * (hi + lo);
            v[n_trunc + k] = s;
            v[n_trunc - k] = s;
        } else {
            let d = 0.5 * (hi - lo);
            v[n_trunc + k] = d;
            v[n_trunc - k] = -d;
        }
    }
    if !even {
        v[n_trunc] = 0.0;
    }
}

fn unit_normalize(v: &mut [f64]) {
    let s = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if s > 0.0 {
        for x in v.iter_mut() {
            *x /= s;
        }
    }
}

/// Lowest `levels` eigenpairs of M(q), with the truncation doubled from
/// START_TRUNCATION until the eigenvalues settle.
///
/// For q > 0 the levels alternate parity strictly (the period-pi Mathieu
/// characteristic values interlace as a_0 < b_2 < a_2 < b_4 < ...), so
/// eigenvectors are computed by parity-projected inverse iteration: even
/// levels cosine-type, odd levels sine-type.
pub fn mathieu_eigs(q: f64, levels: usize) -> Result<MathieuSpectrum, MathieuError> {
    if !(q >= 0.0) {
        return Err(MathieuError::BadParameter("q must be nonnegative"));
    }
    if levels == 0 {
        return Err(MathieuError::BadParameter("need at least one level"));
    }
    let mut n_trunc = START_TRUNCATION.max(levels);
    let mut prev = eigs_at(q, n_trunc, levels);
    loop {
        let n_next = 2 * n_trunc;
        if n_next > MAX_TRUNCATION {
            return Err(MathieuError::NoConvergence {
                q,
                cap: MAX_TRUNCATION,
            });
        }
        let cur = eigs_at(q, n_next, levels);
        let conv: Vec<f64> = cur
            .iter()
            .zip(&prev)
            .map(|(c, p)| (c - p).abs())
            .collect();
        let settled = cur
            .iter()
            .zip(&conv)
            .all(|(lam, d)| *d < (1e-8 * lam.abs()).max(1e-10));
        if settled {
            let m = assemble_mathieu_matrix(q, n_next);
            let dim = 2 * n_next + 1;
            let mut vectors = Vec::with_capacity(levels);
            for (k, &lam) in cur.iter().enumerate() {
                let even = k % 2 == 0;
                // deterministic start with weight in every mode
                let mut v: Vec<f64> = (0..dim)
                    .map(|i| 1.0 / (1.0 + i as f64) - 0.3 * ((i * i) as f64).sin())
                    .collect();
                parity_project(&mut v, n_next, even);
                unit_normalize(&mut v);
                for _ in 0..4 {
                    v = m.solve_shifted(lam, &v);
                    parity_project(&mut v, n_next, even);
                    unit_normalize(&mut v);
                }
                // sign convention: largest coefficient positive
                let mut big = 0usize;
                for (i, x) in v.iter().enumerate() {
                    if x.abs() > v[big].abs() {
                        big = i;
                    }
                }
                if v[big] < 0.0 {
                    for x in v.iter_mut() {
                        *x = -*x;
                    }
                }
                vectors.push(v);
            }
            return Ok(MathieuSpectrum {
                q,
                truncation: n_next,
                eigenvalues: cur,
                eigenvectors: vectors,
                convergence: conv,
            });
        }
        prev = cur;
        n_trunc = n_next;
    }
}

/// lambda_0(q) alone.
pub fn ground_eigenvalue(q: f64) -> Result<f64, MathieuError> {
    Ok(mathieu_eigs(q, 1)?.eigenvalues[0])
}

/// Number of strictly negative eigenvalues of M(q) with convergence-
/// verified signs; this is the number of eigenvalue towers.
pub fn count_negative(q: f64) -> Result<usize, MathieuError> {
    if !(q >= 0.0) {
        return Err(MathieuError::BadParameter("q must be nonnegative"));
    }
    if q == 0.0 {
        return Ok(0); // exact: free Laplacian on the circle
    }
    // lambda_{2j} >= j^2 - 2q, so nothing beyond j > sqrt(2q) is negative
    let levels = 2 * ((2.0 * q).sqrt().floor() as usize + 1) + 1;
    let spec = mathieu_eigs(q, levels)?;
    let mut count = 0;
    for (k, (&lam, &conv)) in spec
        .eigenvalues
        .iter()
        .zip(&spec.convergence)
        .enumerate()
    {
        let tol = (4.0 * conv).max(1e-9);
        if lam < -tol {
            count += 1;
        } else if lam.abs() <= tol {
            return Err(MathieuError::SignAmbiguous {
                level: k,
                lambda: lam,
                tol,
            });
        } else {
            break; // ascending: all further levels are positive
        }
    }
    Ok(count)
}

impl MathieuSpectrum {
    /// Pointwise value of the n-th eigenfunction, L2(circle)-normalized.
    ///
    /// The real function is rebuilt from the coefficient vector as
    /// c_0 + sum_k [(c_k + c_{-k}) cos(k theta) + (c_k - c_{-k}) sin(k theta)],
    /// all over sqrt(2 pi); for parity-pure vectors this is the usual
    /// cosine or sine series and the map preserves the unit norm.
    pub fn eval_eigenfunction(&self, n: usize, theta: f64) -> Result<f64, MathieuError> {
        let c = self
            .eigenvectors
            .get(n)
            .ok_or(MathieuError::IndexOutOfRange {
                n,
                available: self.eigenvectors.len(),
            })?;
        let nt = self.truncation;
        let mut val = c[nt];
        for k in 1..=nt {
            let (ck, cmk) = (c[nt + k], c[nt - k]);
            let ang = k as f64 * theta;
            val += (ck + cmk) * ang.cos() + (ck - cmk) * ang.sin();
        }
        Ok(val / (2.0 * core::f64::consts::PI).sqrt())
    }

    /// Term-by-term derivative of the eigenfunction series in theta.
    pub fn eval_eigenfunction_deriv(&self, n: usize, theta: f64) -> Result<f64, MathieuError> {
        let c = self
            .eigenvectors
            .get(n)
            .ok_or(MathieuError::IndexOutOfRange {
                n,
                available: self.eigenvectors.len(),
            })?;
        let nt = self.truncation;
        let mut val = 0.0;
        for k in 1..=nt {
            let (ck, cmk) = (c[nt + k], c[nt - k]);
            let ang = k as f64 * theta;
            val += k as f64 * ((ck - cmk) * ang.cos() - (ck + cmk) * ang.sin());
        }
        Ok(val / (2.0 * core::f64::consts::PI).sqrt())
    }
}

pub fn eval_eigenfunction(
    spec: &MathieuSpectrum,
    n: usize,
    theta: f64,
) -> Result<f64, MathieuError> {
    spec.eval_eigenfunction(n, theta)
}
