//! Symmetric tridiagonal and banded eigensolvers built on inertia counts.
//!
//! Everything spectral downstream reduces to two primitives:
//!
//!   * counting eigenvalues below a shift (pivot signs of an LDL^T
//!     factorization, by Sylvester's law of inertia),
//!   * refining brackets by bisection on that count.
//!
//! Bisection is slower than QR-type iteration but it is the right tool for
//! the matrices we actually build: radial channel operators whose
//! eigenvalues span a dozen decades (the count is exact at every shift, so
//! no level is silently missed), generalized pencils A - mu B whose B spans
//! even more, and block operators where only a thin window inside the
//! spectral gap is wanted. Eigenvectors come from inverse iteration with a
//! partially pivoted LU; pivoting destroys symmetry, so the LU is never
//! used for counting.

use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

/// Deterministic start vectors for inverse iteration.
fn xorshift_unit(n: usize, mut state: u64) -> Vec<f64> {
    let mut v = Vec::with_capacity(n);
    for _ in 0..n {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        v.push((state >> 11) as f64 / (1u64 << 53) as f64 - 0.5);
    }
    normalize(&mut v);
    v
}

fn normalize(v: &mut [f64]) {
    let s = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if s > 0.0 {
        for x in v.iter_mut() {
            *x /= s;
        }
    }
}

/// Find all roots of `count_below` jumps in [lo, hi] by interval halving.
///
/// `count_below(t)` must be a nondecreasing step function (number of
/// eigenvalues below t, in whatever coordinate the caller works in). Each
/// eigenvalue is returned with its multiplicity, ascending, located to
/// absolute accuracy `tol`. Evaluations are shared across clustered
/// eigenvalues, which matters when the count needs a full factorization.
pub fn slice_eigenvalues<F: FnMut(f64) -> usize>(
    mut count_below: F,
    lo: f64,
    hi: f64,
    tol: f64,
) -> Vec<f64> {
    assert!(lo < hi && tol > 0.0);
    let k_lo = count_below(lo);
    let k_hi = count_below(hi);
    if k_hi <= k_lo {
        return Vec::new();
    }
    let mut out = Vec::with_capacity(k_hi - k_lo);
    let mut stack = alloc::vec![(lo, hi, k_lo, k_hi)];
    while let Some((a, b, ka, kb)) = stack.pop() {
        if kb == ka {
            continue;
        }
        let mid = 0.5 * (a + b);
        if b - a <= tol.max(f64::EPSILON * (a.abs() + b.abs())) {
            for _ in ka..kb {
                out.push(mid);
            }
            continue;
        }
        // Guarded eliminations can blip by one at shifts that essentially
        // hit an eigenvalue of a leading minor; the clamp keeps the
        // recursion consistent (exactly kb - ka values per interval).
        let km = count_below(mid).clamp(ka, kb);
        stack.push((mid, b, km, kb));
        stack.push((a, mid, ka, km));
    }
    out.sort_unstable_by(|x, y| x.partial_cmp(y).unwrap());
    out
}

/// Symmetric tridiagonal matrix; `off[i]` couples rows i and i+1.
#[derive(Clone, Debug)]
pub struct SymTridiag {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

impl SymTridiag {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Self {
        assert_eq!(off.len() + 1, diag.len());
        SymTridiag { diag, off }
    }

    pub fn n(&self) -> usize {
        self.diag.len()
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let n = self.n();
        let mut y = alloc::vec![0.0; n];
        for i in 0..n {
            y[i] = self.diag[i] * x[i];
            if i > 0 {
                y[i] += self.off[i - 1] * x[i - 1];
            }
            if i + 1 < n {
                y[i] += self.off[i] * x[i + 1];
            }
        }
        y
    }

    /// Number of eigenvalues strictly below `mu`, up to the usual caveat
    /// that a pivot landing exactly on zero is counted as negative.
    ///
    /// The recurrence d_i = a_i - mu - b_{i-1}^2 / d_{i-1} runs in plain
    /// IEEE arithmetic: a zero pivot is nudged to -MIN_POSITIVE, the
    /// resulting infinity propagates one step and then cancels out, and no
    /// NaN can appear because the numerator b^2 is finite.
    pub fn inertia_below(&self, mu: f64) -> usize {
        let mut count = 0usize;
        let mut d = 1.0;
        for i in 0..self.n() {
            let sub = if i > 0 {
                let b = self.off[i - 1];
                b * b / d
            } else {
                0.0
            };
            d = self.diag[i] - mu - sub;
            if d == 0.0 {
                d = -f64::MIN_POSITIVE;
            }
            if d < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// All eigenvalues in [lo, hi], ascending with multiplicity.
    pub fn eigenvalues_in(&self, lo: f64, hi: f64, tol: f64) -> Vec<f64> {
        slice_eigenvalues(|mu| self.inertia_below(mu), lo, hi, tol)
    }

    /// Inverse iteration at a converged eigenvalue estimate. Returns the
    /// normalized vector and the residual ||A v - lambda v||.
    pub fn eigenvector(&self, lambda: f64) -> (Vec<f64>, f64) {
        let n = self.n();
        let mut v = xorshift_unit(n, 0x9e37_79b9_7f4a_7c15);
        for _ in 0..3 {
            v = self.solve_shifted(lambda, &v);
            normalize(&mut v);
        }
        let av = self.matvec(&v);
        let res = av
            .iter()
            .zip(&v)
            .map(|(a, x)| (a - lambda * x) * (a - lambda * x))
            .sum::<f64>()
            .sqrt();
        (v, res)
    }

    /// Solve (A - lambda I) x = b by tridiagonal LU with partial pivoting.
    /// Row swaps introduce one extra superdiagonal of fill.
    pub fn solve_shifted(&self, lambda: f64, b: &[f64]) -> Vec<f64> {
        let n = self.n();
        assert_eq!(b.len(), n);
        let scale = self
            .diag
            .iter()
            .chain(self.off.iter())
            .fold(lambda.abs(), |m, &v| m.max(v.abs()));
        let guard = f64::EPSILON * scale.max(f64::MIN_POSITIVE);
        let mut u = alloc::vec![0.0; n]; // diagonal of U
        let mut v1 = alloc::vec![0.0; n]; // first superdiagonal
        let mut v2 = alloc::vec![0.0; n]; // second superdiagonal (pivot fill)
        let mut mult = alloc::vec![0.0; n];
        let mut flip = alloc::vec![false; n];
        for i in 0..n {
            u[i] = self.diag[i] - lambda;
            if i + 1 < n {
                v1[i] = self.off[i];
            }
        }
        let mut rhs = b.to_vec();
        for k in 0..n.saturating_sub(1) {
            let sub = self.off[k]; // current value of A(k+1, k): untouched by prior steps
            if sub.abs() > u[k].abs() {
                flip[k] = true;
                let (uk, v1k, v2k) = (u[k], v1[k], v2[k]);
                u[k] = sub;
                v1[k] = u[k + 1];
                v2[k] = v1[k + 1];
                let m = uk / u[k];
                mult[k] = m;
                u[k + 1] = v1k - m * v1[k];
                v1[k + 1] = v2k - m * v2[k];
            } else {
                let d = if u[k].abs() < guard {
                    if u[k] < 0.0 {
                        -guard
                    } else {
                        guard
                    }
                } else {
                    u[k]
                };
                u[k] = d;
                let m = sub / d;
                mult[k] = m;
                u[k + 1] -= m * v1[k];
                v1[k + 1] -= m * v2[k];
            }
        }
        if u[n - 1].abs() < guard {
            u[n - 1] = if u[n - 1] < 0.0 { -guard } else { guard };
        }
        for k in 0..n.saturating_sub(1) {
            if flip[k] {
                rhs.swap(k, k + 1);
            }
            let m = mult[k];
            rhs[k + 1] -= m * rhs[k];
        }
        let mut x = alloc::vec![0.0; n];
        for k in (0..n).rev() {
            let mut s = rhs[k];
            if k + 1 < n {
                s -= v1[k] * x[k + 1];
            }
            if k + 2 < n {
                s -= v2[k] * x[k + 2];
            }
            x[k] = s / u[k];
        }
        x
    }
}

/// Inertia of A - mu B for a tridiagonal A and positive diagonal B, i.e. the
/// number of pencil eigenvalues (A x = lam B x) strictly below mu.
///
/// Working with the pencil directly, instead of folding B into
/// B^{-1/2} A B^{-1/2}, keeps the count exact when the entries of B span
/// many decades: each pivot only ever mixes numbers of comparable size.
pub fn pencil_count_below(a: &SymTridiag, b_diag: &[f64], mu: f64) -> usize {
    assert_eq!(b_diag.len(), a.n());
    let shifted = SymTridiag {
        diag: a
            .diag
            .iter()
            .zip(b_diag)
            .map(|(&ad, &bd)| ad - mu * bd)
            .collect(),
        off: a.off.clone(),
    };
    shifted.inertia_below(0.0)
}

/// Symmetric banded matrix, upper triangle stored by rows:
/// entry (i, j) with i <= j <= i + hbw lives at rows[i * (hbw + 1) + (j - i)].
#[derive(Clone, Debug)]
pub struct SymBanded {
    n: usize,
    hbw: usize,
    rows: Vec<f64>,
}

impl SymBanded {
    pub fn zeros(n: usize, hbw: usize) -> Self {
        assert!(n > 0);
        SymBanded {
            n,
            hbw,
            rows: alloc::vec![0.0; n * (hbw + 1)],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn half_bandwidth(&self) -> usize {
        self.hbw
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (lo, hi) = if i <= j { (i, j) } else { (j, i) };
        if hi - lo > self.hbw {
            return 0.0;
        }
        self.rows[lo * (self.hbw + 1) + (hi - lo)]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        let (lo, hi) = if i <= j { (i, j) } else { (j, i) };
        assert!(hi - lo <= self.hbw, "entry outside band");
        self.rows[lo * (self.hbw + 1) + (hi - lo)] = v;
    }

    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        let (lo, hi) = if i <= j { (i, j) } else { (j, i) };
        assert!(hi - lo <= self.hbw, "entry outside band");
        self.rows[lo * (self.hbw + 1) + (hi - lo)] += v;
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n);
        let mut y = alloc::vec![0.0; self.n];
        let ld = self.hbw + 1;
        for i in 0..self.n {
            y[i] += self.rows[i * ld] * x[i];
            let reach = (self.n - 1 - i).min(self.hbw);
            for k in 1..=reach {
                let a = self.rows[i * ld + k];
                y[i] += a * x[i + k];
                y[i + k] += a * x[i];
            }
        }
        y
    }

    /// Largest entry magnitude, the natural scale for residual thresholds.
    pub fn max_abs(&self) -> f64 {
        self.rows.iter().fold(0.0f64, |m, &v| m.max(v.abs()))
    }

    /// Number of eigenvalues strictly below `mu`: banded LDL^T without
    /// pivoting, tiny pivots clamped to keep the elimination finite.
    ///
    /// The clamp must sit far below eps * ||A||: at a shift near a double
    /// eigenvalue the trailing pivot scales like (mu - lambda)^2, and
    /// flattening its sign would make the count non-monotone. A floor of
    /// 1e-100 * ||A|| only ever fires when mu hits an eigenvalue of a
    /// leading principal submatrix essentially exactly.
    pub fn inertia_below(&self, mu: f64) -> usize {
        let ld = self.hbw + 1;
        let mut a = self.rows.clone();
        for i in 0..self.n {
            a[i * ld] -= mu;
        }
        let guard = 1e-100 * (self.max_abs() + mu.abs()).max(f64::MIN_POSITIVE);
        let mut neg = 0usize;
        for k in 0..self.n {
            let mut d = a[k * ld];
            if d.abs() < guard {
                d = -guard;
            }
            if d < 0.0 {
                neg += 1;
            }
            let reach = (self.n - 1 - k).min(self.hbw);
            for i in 1..=reach {
                let lik = a[k * ld + i] / d;
                for j in i..=reach {
                    a[(k + i) * ld + (j - i)] -= lik * a[k * ld + j];
                }
            }
        }
        neg
    }

    /// All eigenvalues in [lo, hi], ascending with multiplicity.
    pub fn eigenvalues_in(&self, lo: f64, hi: f64, tol: f64) -> Vec<f64> {
        slice_eigenvalues(|mu| self.inertia_below(mu), lo, hi, tol)
    }

    /// Rayleigh-quotient refinement of an estimate coming out of slicing.
    ///
    /// The counting factorization is unpivoted, so near clustered
    /// eigenvalues its sign pattern is only trustworthy to about
    /// sqrt(eps) * ||A||; counts (and hence multiplicities) survive, but
    /// positions can be that fuzzy. Inverse iteration runs on a pivoted LU,
    /// which is backward stable, and two Rayleigh updates restore full
    /// precision. Returns (eigenvalue, vector, residual).
    pub fn refine_eigenvalue(&self, lambda0: f64) -> (f64, Vec<f64>, f64) {
        let mut lam = lambda0;
        let mut out_v = alloc::vec![0.0; self.n];
        let mut out_res = f64::INFINITY;
        for _ in 0..3 {
            let (v, _) = self.eigenvector(lam);
            let av = self.matvec(&v);
            let rq: f64 = v.iter().zip(&av).map(|(x, y)| x * y).sum();
            out_res = av
                .iter()
                .zip(&v)
                .map(|(a, x)| (a - rq * x) * (a - rq * x))
                .sum::<f64>()
                .sqrt();
            out_v = v;
            lam = rq;
        }
        (lam, out_v, out_res)
    }

    /// Inverse iteration at a converged eigenvalue estimate. Returns the
    /// normalized vector and the residual ||A v - lambda v||.
    pub fn eigenvector(&self, lambda: f64) -> (Vec<f64>, f64) {
        let lu = BandedLu::factor(self, lambda);
        let mut v = xorshift_unit(self.n, 0xd1b5_4a32_d192_ed03);
        for _ in 0..3 {
            v = lu.solve(&v);
            normalize(&mut v);
        }
        let av = self.matvec(&v);
        let res = av
            .iter()
            .zip(&v)
            .map(|(a, x)| (a - lambda * x) * (a - lambda * x))
            .sum::<f64>()
            .sqrt();
        (v, res)
    }
}

/// Banded LU of A - lambda I with row partial pivoting, LAPACK-style band
/// storage: kl subdiagonals, kl extra superdiagonals of pivot fill.
struct BandedLu {
    n: usize,
    kl: usize,
    ku: usize, // = 2 * kl after fill
    data: Vec<f64>,
    piv: Vec<usize>,
}

impl BandedLu {
    // column-major band: entry (i, j) at data[j * ld + (ku + i - j)]
    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        j * (self.kl + self.ku + 1) + (self.ku + i - j)
    }

    fn factor(a: &SymBanded, lambda: f64) -> Self {
        let n = a.n;
        let kl = a.hbw;
        let ku = 2 * kl;
        let ld = kl + ku + 1;
        let mut lu = BandedLu {
            n,
            kl,
            ku,
            data: alloc::vec![0.0; n * ld],
            piv: alloc::vec![0; n],
        };
        for j in 0..n {
            let i_lo = j.saturating_sub(kl);
            let i_hi = (j + kl).min(n - 1);
            for i in i_lo..=i_hi {
                let v = a.get(i, j) - if i == j { lambda } else { 0.0 };
                let at = lu.idx(i, j);
                lu.data[at] = v;
            }
        }
        let guard = f64::EPSILON * (a.max_abs() + lambda.abs()).max(f64::MIN_POSITIVE);
        for j in 0..n {
            let i_hi = (j + kl).min(n - 1);
            // partial pivot within the column
            let mut p = j;
            let mut best = lu.data[lu.idx(j, j)].abs();
            for i in (j + 1)..=i_hi {
                let v = lu.data[lu.idx(i, j)].abs();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            lu.piv[j] = p;
            let col_hi = (j + ku).min(n - 1);
            if p != j {
                for c in j..=col_hi {
                    let (ij, pj) = (lu.idx(j, c), lu.idx(p, c));
                    lu.data.swap(ij, pj);
                }
            }
            let djj = lu.idx(j, j);
            if lu.data[djj].abs() < guard {
                // expected when lambda sits on an eigenvalue; keep it finite
                lu.data[djj] = if lu.data[djj] < 0.0 { -guard } else { guard };
            }
            let pivot = lu.data[djj];
            for i in (j + 1)..=i_hi {
                let lij = lu.data[lu.idx(i, j)] / pivot;
                let at = lu.idx(i, j);
                lu.data[at] = lij;
                for c in (j + 1)..=col_hi {
                    let (ic, jc) = (lu.idx(i, c), lu.idx(j, c));
                    lu.data[ic] -= lij * lu.data[jc];
                }
            }
        }
        lu
    }

    fn solve(&self, b: &[f64]) -> Vec<f64> {
        assert_eq!(b.len(), self.n);
        let mut x = b.to_vec();
        for j in 0..self.n {
            let p = self.piv[j];
            if p != j {
                x.swap(j, p);
            }
            let i_hi = (j + self.kl).min(self.n - 1);
            for i in (j + 1)..=i_hi {
                x[i] -= self.data[self.idx(i, j)] * x[j];
            }
        }
        for j in (0..self.n).rev() {
            let c_hi = (j + self.ku).min(self.n - 1);
            let mut s = x[j];
            for c in (j + 1)..=c_hi {
                s -= self.data[self.idx(j, c)] * x[c];
            }
            x[j] = s / self.data[self.idx(j, j)];
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    /// Dirichlet Laplacian stencil (-1, 2, -1): eigenvalues are
    /// 4 sin^2(k pi / (2 (n + 1))), k = 1..n.
    fn laplace_1d(n: usize) -> SymTridiag {
        SymTridiag::new(alloc::vec![2.0; n], alloc::vec![-1.0; n - 1])
    }

    fn laplace_eigs(n: usize) -> Vec<f64> {
        (1..=n)
            .map(|k| {
                let s = (k as f64 * core::f64::consts::PI / (2.0 * (n as f64 + 1.0))).sin();
                4.0 * s * s
            })
            .collect()
    }

    #[test]
    fn tridiag_inertia_matches_closed_form() {
        let t = laplace_1d(12);
        let eigs = laplace_eigs(12);
        for &mu in &[-0.5, 0.01, 0.3, 1.0, 2.0, 3.7, 4.5] {
            let expect = eigs.iter().filter(|&&e| e < mu).count();
            assert_eq!(t.inertia_below(mu), expect, "mu = {mu}");
        }
    }

    #[test]
    fn tridiag_slicing_finds_every_eigenvalue() {
        let t = laplace_1d(12);
        let got = t.eigenvalues_in(-1.0, 5.0, 1e-12);
        let want = laplace_eigs(12);
        assert_eq!(got.len(), want.len());
        for (g, w) in got.iter().zip(&want) {
            assert_relative_eq!(g, w, epsilon = 1e-10);
        }
    }

    #[test]
    fn slicing_reports_multiplicity() {
        // decoupled pair: eigenvalue 2 twice
        let t = SymTridiag::new(alloc::vec![2.0, 2.0], alloc::vec![0.0]);
        let got = t.eigenvalues_in(1.0, 3.0, 1e-12);
        assert_eq!(got.len(), 2);
        assert_relative_eq!(got[0], 2.0, epsilon = 1e-10);
        assert_relative_eq!(got[1], 2.0, epsilon = 1e-10);
    }

    #[test]
    fn tridiag_inverse_iteration() {
        let n = 30;
        let t = laplace_1d(n);
        let eigs = laplace_eigs(n);
        let (v, res) = t.eigenvector(eigs[2]);
        assert!(res < 1e-9, "residual {res}");
        // third eigenvector is sin(3 pi i / (n + 1)) up to sign
        let mut overlap = 0.0;
        let mut norm = 0.0;
        for i in 0..n {
            let s = (3.0 * core::f64::consts::PI * (i + 1) as f64 / (n as f64 + 1.0)).sin();
            overlap += s * v[i];
            norm += s * s;
        }
        assert_relative_eq!(overlap.abs() / norm.sqrt(), 1.0, epsilon = 1e-8);
    }

    #[test]
    fn pencil_count_agrees_with_congruence() {
        // For diagonal B, D A D with D = B^{-1/2} is still tridiagonal, so
        // the two routes can be compared directly.
        let a = SymTridiag::new(
            alloc::vec![1.3, -0.2, 0.8, 2.1, -1.0],
            alloc::vec![0.4, -0.7, 0.2, 0.9],
        );
        let b = [0.5, 2.0, 1.0, 0.1, 3.0];
        let d: Vec<f64> = b.iter().map(|x| 1.0 / x.sqrt()).collect();
        let mut diag = alloc::vec![0.0; 5];
        let mut off = alloc::vec![0.0; 4];
        for i in 0..5 {
            diag[i] = d[i] * a.diag[i] * d[i];
        }
        for i in 0..4 {
            off[i] = d[i] * a.off[i] * d[i + 1];
        }
        let folded = SymTridiag::new(diag, off);
        let mut mu = -6.0;
        while mu < 6.0 {
            assert_eq!(pencil_count_below(&a, &b, mu), folded.inertia_below(mu));
            mu += 0.37;
        }
    }

    #[test]
    fn pencil_survives_wide_dynamic_range() {
        // B entries span 16 decades; the pencil eigenvalues are 1, 1e-8,
        // 1e-16 and the counts must flip at exactly those scales. Folding
        // into B^{-1/2} A B^{-1/2} and shifting would lose the small ones.
        let a = SymTridiag::new(alloc::vec![1.0, 1.0, 1.0], alloc::vec![0.0, 0.0]);
        let b = [1.0, 1e8, 1e16];
        assert_eq!(pencil_count_below(&a, &b, 1e-17), 0);
        assert_eq!(pencil_count_below(&a, &b, 3e-16), 1);
        assert_eq!(pencil_count_below(&a, &b, 3e-8), 2);
        assert_eq!(pencil_count_below(&a, &b, 1.5), 3);
    }

    /// 2D Dirichlet Laplacian on an n1 x n2 grid as a banded matrix
    /// (row-major indexing, half-bandwidth n2). Eigenvalues are sums of the
    /// 1D ones, which makes an exact oracle for counts and slices.
    fn laplace_2d(n1: usize, n2: usize) -> SymBanded {
        let mut a = SymBanded::zeros(n1 * n2, n2);
        for i in 0..n1 {
            for j in 0..n2 {
                let at = i * n2 + j;
                a.set(at, at, 4.0);
                if j + 1 < n2 {
                    a.set(at, at + 1, -1.0);
                }
                if i + 1 < n1 {
                    a.set(at, at + n2, -1.0);
                }
            }
        }
        a
    }

    fn laplace_2d_eigs(n1: usize, n2: usize) -> Vec<f64> {
        let e1 = laplace_eigs(n1);
        let e2 = laplace_eigs(n2);
        let mut out: Vec<f64> = e1
            .iter()
            .flat_map(|a| e2.iter().map(move |b| a + b))
            .collect();
        out.sort_unstable_by(|x, y| x.partial_cmp(y).unwrap());
        out
    }

    #[test]
    fn banded_inertia_matches_kronecker_sum() {
        let a = laplace_2d(7, 5);
        let eigs = laplace_2d_eigs(7, 5);
        for &mu in &[0.1, 0.9, 2.0, 3.3, 4.0, 5.5, 7.9] {
            let expect = eigs.iter().filter(|&&e| e < mu).count();
            assert_eq!(a.inertia_below(mu), expect, "mu = {mu}");
        }
    }

    #[test]
    fn banded_slicing_with_degeneracies() {
        // square grid: lambda_{p,q} = lambda_{q,p} gives exact double
        // eigenvalues, which the slicer must report twice
        let a = laplace_2d(6, 6);
        let got = a.eigenvalues_in(0.0, 9.0, 1e-11);
        let want = laplace_2d_eigs(6, 6);
        assert_eq!(got.len(), want.len());
        for (g, w) in got.iter().zip(&want) {
            // raw slice positions are sqrt(eps)-grade near the doubles
            assert_relative_eq!(g, w, epsilon = 1e-6);
            let (refined, _, res) = a.refine_eigenvalue(*g);
            assert_relative_eq!(refined, w, epsilon = 1e-11);
            assert!(res < 1e-10, "residual {res}");
        }
    }

    #[test]
    fn banded_matches_tridiag_at_bandwidth_one() {
        let t = laplace_1d(9);
        let mut a = SymBanded::zeros(9, 1);
        for i in 0..9 {
            a.set(i, i, 2.0);
            if i + 1 < 9 {
                a.set(i, i + 1, -1.0);
            }
        }
        let mut mu = -0.3;
        while mu < 4.3 {
            assert_eq!(a.inertia_below(mu), t.inertia_below(mu));
            mu += 0.17;
        }
    }

    #[test]
    fn banded_inverse_iteration_residual() {
        let a = laplace_2d(7, 5);
        let eigs = laplace_2d_eigs(7, 5);
        for &e in &[eigs[0], eigs[10], eigs[eigs.len() - 1]] {
            let (v, res) = a.eigenvector(e);
            assert!(res < 1e-8, "residual {res} at {e}");
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            assert_relative_eq!(norm, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn banded_matvec_symmetry() {
        let a = laplace_2d(4, 3);
        let x = xorshift_unit(12, 7);
        let y = xorshift_unit(12, 11);
        let ax = a.matvec(&x);
        let ay = a.matvec(&y);
        let xay: f64 = x.iter().zip(&ay).map(|(p, q)| p * q).sum();
        let yax: f64 = y.iter().zip(&ax).map(|(p, q)| p * q).sum();
        assert_relative_eq!(xay, yax, epsilon = 1e-13);
    }
}
