//! In-gap eigenvalue solvers on logarithmic radial grids.
//!
//! The workhorse change of variables is s = ln r with f = r^{1/2} w, under
//! which the radial Schrodinger operator of angular coefficient c,
//!
//!   -f'' + (c - 1/4) / r^2 f   on (0, inf), measure dr,
//!
//! becomes the uniform-grid pencil
//!
//!   [-d^2/ds^2 + c] w = mu e^{2s} w,   measure ds,
//!
//! whose centered second difference is symmetric by construction and whose
//! weight e^{2s} is positive, so inertia counts of A - mu B are exact and
//! bisection never miscounts. The dynamic range of e^{2s} across r_max/r_min
//! up to 1e8 is no obstacle to the factorization-based counts.
//!
//! Per channel, the gap eigenvalues of the squared problem are mu = -kappa^2
//! with kappa^2 in (0, m^2), mapped to energies E = sqrt(m^2 - kappa^2).
//! Near the gap edge the difference m - E collapses in that form, so it is
//! always computed as kappa^2 / (m + sqrt(m^2 - kappa^2)).
//!
//! `solve_towers` runs one such solve per negative Mathieu channel of the
//! dipole problem; the ladder of each channel contracts geometrically with
//! ratio exp(-2 pi / sqrt(-lambda_n)), which `clustering_report` fits and
//! compares. `solve_finite_count` runs the same radial machinery over the
//! comparison operators of a higher-order multipole tail, where the count is
//! finite. The full two-component block solver lives in [`block`].

pub mod block;

pub use block::{solve_dirac_block, BlockMeta, GapSpectrum, RejectReason};

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::linalg::{pencil_count_below, slice_eigenvalues, SymTridiag};
use crate::mathieu::{count_negative, mathieu_eigs, MathieuError};
use crate::potentials::{MultipoleTable, PhysicalParams, PotentialError};

/// Minimum admissible log-grid density.
const MIN_NODES_PER_DECADE: f64 = 16.0;

/// Smallest trustworthy kappa^2 is 100 / r_max^2: a bound state must fit
/// well inside the domain before Dirichlet truncation stops distorting it.
const KAPPA_SQ_FLOOR: f64 = 100.0;

#[derive(Clone, Debug)]
pub struct RadialGrid {
    pub r_min: f64,
    pub r_max: f64,
    /// Strictly increasing, log-uniform, endpoints included.
    pub nodes: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum SpectrumError {
    BadGrid(&'static str),
    BadParameter(&'static str),
    GridTooCoarse { nodes_per_decade: f64 },
    NoNegativeChannel,
    /// The deepest channel resolved fewer than 3 levels; widen [r_min, r_max].
    GridRangeTooSmall { resolved: usize },
    TooFewLevels { have: usize },
    /// The last angular channel still binds, so the sum over channels is
    /// not yet complete.
    ChannelBudgetExceeded { channel: usize, still_binding: usize },
    Mathieu(MathieuError),
    Potential(PotentialError),
}

impl core::fmt::Display for SpectrumError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            SpectrumError::BadGrid(what) => write!(f, "bad grid: {what}"),
            SpectrumError::BadParameter(what) => write!(f, "bad parameter: {what}"),
            SpectrumError::GridTooCoarse { nodes_per_decade } => write!(
                f,
                "grid too coarse: {nodes_per_decade:.1} nodes per decade, need {MIN_NODES_PER_DECADE}"
            ),
            SpectrumError::NoNegativeChannel => {
                write!(f, "no negative Mathieu channel at this coupling")
            }
            SpectrumError::GridRangeTooSmall { resolved } => write!(
                f,
                "grid range resolves only {resolved} levels in the deepest channel"
            ),
            SpectrumError::TooFewLevels { have } => {
                write!(f, "clustering fit needs at least 4 levels, have {have}")
            }
            SpectrumError::ChannelBudgetExceeded {
                channel,
                still_binding,
            } => write!(
                f,
                "channel budget exceeded: j = {channel} still binds {still_binding} states"
            ),
            SpectrumError::Mathieu(e) => write!(f, "angular solve failed: {e}"),
            SpectrumError::Potential(e) => write!(f, "potential data invalid: {e}"),
        }
    }
}

impl core::error::Error for SpectrumError {
    fn source(&self) -> Option<&(dyn core::error::Error + 'static)> {
        match self {
            SpectrumError::Mathieu(e) => Some(e),
            SpectrumError::Potential(e) => Some(e),
            _ => None,
        }
    }
}

impl From<MathieuError> for SpectrumError {
    fn from(e: MathieuError) -> Self {
        SpectrumError::Mathieu(e)
    }
}

impl From<PotentialError> for SpectrumError {
    fn from(e: PotentialError) -> Self {
        SpectrumError::Potential(e)
    }
}

impl RadialGrid {
    /// Log-uniform grid with at least `per_decade` nodes per decade,
    /// endpoints exactly r_min and r_max.
    pub fn log(r_min: f64, r_max: f64, per_decade: usize) -> Result<Self, SpectrumError> {
        if !(r_min > 0.0) || !(r_max > r_min) || !r_max.is_finite() {
            return Err(SpectrumError::BadGrid("need 0 < r_min < r_max < inf"));
        }
        if per_decade == 0 {
            return Err(SpectrumError::BadGrid("need per_decade >= 1"));
        }
        let decades = (r_max / r_min).log10();
        let n = (decades * per_decade as f64).ceil() as usize + 1;
        let (la, lb) = (r_min.ln(), r_max.ln());
        let mut nodes: Vec<f64> = (0..n)
            .map(|i| (la + (lb - la) * i as f64 / (n - 1) as f64).exp())
            .collect();
        nodes[0] = r_min;
        nodes[n - 1] = r_max;
        Ok(RadialGrid { r_min, r_max, nodes })
    }

    pub fn n_nodes(&self) -> usize {
        self.nodes.len()
    }

    /// Uniform spacing in s = ln r.
    pub fn log_step(&self) -> f64 {
        (self.r_max / self.r_min).ln() / (self.n_nodes() - 1) as f64
    }

    pub fn nodes_per_decade(&self) -> f64 {
        (self.n_nodes() - 1) as f64 / (self.r_max / self.r_min).log10()
    }

    /// Same span at twice the density.
    pub fn refined(&self) -> Self {
        RadialGrid::log(
            self.r_min,
            self.r_max,
            (2.0 * self.nodes_per_decade()).ceil() as usize,
        )
        .expect("refinement of a valid grid")
    }

    /// Consecutive node ratios agree to 1e-12.
    pub fn is_log_uniform(&self) -> bool {
        if self.nodes.len() < 3 {
            return true;
        }
        let q0 = self.nodes[1] / self.nodes[0];
        self.nodes
            .windows(2)
            .all(|p| (p[1] / p[0] / q0 - 1.0).abs() < 1e-12)
    }

    fn check_density(&self) -> Result<(), SpectrumError> {
        let npd = self.nodes_per_decade();
        if npd < MIN_NODES_PER_DECADE - 1e-9 {
            return Err(SpectrumError::GridTooCoarse {
                nodes_per_decade: npd,
            });
        }
        Ok(())
    }
}

/// The Liouville form of one radial channel: A w = -kappa^2 B w with
/// A = -d^2/ds^2 + c(s) on the interior nodes (Dirichlet ends) and
/// B = diag(r_i^2). The coefficient c is lambda_n outside the cutoff and
/// 1/4 inside it (the inverse-square term is switched off for r < r_cut,
/// and 1/4 is what remains of the free radial Laplacian in log variables).
#[derive(Clone, Debug)]
pub struct ChannelOperator {
    pub a: SymTridiag,
    pub weight: Vec<f64>,
    pub r_cut: f64,
}

impl ChannelOperator {
    /// Number of bound states (all kappa^2 > 0).
    pub fn count_binding(&self) -> usize {
        pencil_count_below(&self.a, &self.weight, 0.0)
    }

    /// Nonincreasing count of pencil eigenvalues below -kappa^2.
    pub fn count_deeper(&self, kappa_sq: f64) -> usize {
        pencil_count_below(&self.a, &self.weight, -kappa_sq)
    }

    /// All kappa^2 in [lo, hi], deepest first, resolved to a relative
    /// tolerance of about 1e-10 by bisection in ln kappa^2 (the ladders are
    /// geometric, so only the log scale resolves every rung at once).
    pub fn kappa_sq_ladder(&self, lo: f64, hi: f64) -> Vec<f64> {
        assert!(lo > 0.0 && hi > lo);
        // x = -ln kappa^2 makes the count function nondecreasing in x
        let xs = slice_eigenvalues(
            |x| pencil_count_below(&self.a, &self.weight, -(-x).exp()),
            -hi.ln(),
            -lo.ln(),
            1e-10,
        );
        xs.into_iter().map(|x| (-x).exp()).collect()
    }
}

pub fn assemble_channel_operator(
    lambda_n: f64,
    grid: &RadialGrid,
    r_cut: f64,
) -> Result<ChannelOperator, SpectrumError> {
    grid.check_density()?;
    if !(r_cut >= grid.r_min) {
        return Err(SpectrumError::BadGrid("r_cut must be at least r_min"));
    }
    let n = grid.n_nodes();
    if n < 4 {
        return Err(SpectrumError::BadGrid("need at least two interior nodes"));
    }
    let h = grid.log_step();
    let s_cut = r_cut.ln();
    let interior = &grid.nodes[1..n - 1];
    let mut diag = Vec::with_capacity(interior.len());
    let mut weight = Vec::with_capacity(interior.len());
    for &r in interior {
        // cell average of the stepped coefficient; a pointwise value at the
        // node nearest the cut would cost one full order of convergence
        let (s_lo, s_hi) = (r.ln() - 0.5 * h, r.ln() + 0.5 * h);
        let c = if s_hi <= s_cut {
            0.25
        } else if s_lo >= s_cut {
            lambda_n
        } else {
            let f = (s_cut - s_lo) / h;
            f * 0.25 + (1.0 - f) * lambda_n
        };
        diag.push(2.0 / (h * h) + c);
        weight.push(r * r);
    }
    let off = alloc::vec![-1.0 / (h * h); interior.len() - 1];
    Ok(ChannelOperator {
        a: SymTridiag::new(diag, off),
        weight,
        r_cut,
    })
}

/// One channel's tower of gap eigenvalues.
#[derive(Clone, Debug)]
pub struct ChannelSpectrum {
    pub channel: usize,
    pub lambda: f64,
    /// Deepest first (descending).
    pub kappa_sq: Vec<f64>,
    /// E_j = sqrt(m^2 - kappa_j^2), strictly increasing toward m.
    pub energies: Vec<f64>,
    /// m - E_j in the cancellation-free form kappa^2 / (m + sqrt(...)).
    pub gap_to_edge: Vec<f64>,
    /// Successive (m - E_{j+1}) / (m - E_j).
    pub ratios: Vec<f64>,
    pub r_cut: f64,
}

/// Per negative Mathieu channel, every bound level the grid can support,
/// mapped into the upper half of the gap. The mirror tower at negative
/// energies follows by the reflection symmetry of the two forms and is not
/// re-solved.
pub fn solve_towers(
    params: &PhysicalParams,
    grid: &RadialGrid,
    r_cut: f64,
) -> Result<Vec<ChannelSpectrum>, SpectrumError> {
    grid.check_density()?;
    let q = params.dipole_strength();
    let m = params.mass;
    let n_neg = count_negative(q)?;
    if n_neg == 0 {
        return Err(SpectrumError::NoNegativeChannel);
    }
    let angular = mathieu_eigs(q, n_neg)?;

    let lo = KAPPA_SQ_FLOOR / (grid.r_max * grid.r_max);
    let hi = m * m * (1.0 - 1e-10);
    if lo >= hi {
        return Err(SpectrumError::GridRangeTooSmall { resolved: 0 });
    }

    let mut out = Vec::with_capacity(n_neg);
    for (channel, &lambda) in angular.eigenvalues.iter().take(n_neg).enumerate() {
        let op = assemble_channel_operator(lambda, grid, r_cut)?;
        let kappa_sq = op.kappa_sq_ladder(lo, hi);
        if channel == 0 && kappa_sq.len() < 3 {
            return Err(SpectrumError::GridRangeTooSmall {
                resolved: kappa_sq.len(),
            });
        }
        let energies: Vec<f64> = kappa_sq.iter().map(|&k2| (m * m - k2).sqrt()).collect();
        let gap_to_edge: Vec<f64> = kappa_sq
            .iter()
            .map(|&k2| k2 / (m + (m * m - k2).sqrt()))
            .collect();
        let ratios = gap_to_edge.windows(2).map(|p| p[1] / p[0]).collect();
        out.push(ChannelSpectrum {
            channel,
            lambda,
            kappa_sq,
            energies,
            gap_to_edge,
            ratios,
            r_cut,
        });
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug)]
pub struct ClusteringReport {
    /// Geometric ratio from a least-squares line through ln(m - E_j) over
    /// the last resolved levels.
    pub ratio_estimate: f64,
    /// exp(-2 pi / sqrt(-lambda_n)).
    pub predicted_ratio: f64,
    pub levels_used: usize,
    pub relative_deviation: f64,
}

pub fn clustering_report(ch: &ChannelSpectrum) -> Result<ClusteringReport, SpectrumError> {
    let n = ch.gap_to_edge.len();
    if n < 4 {
        return Err(SpectrumError::TooFewLevels { have: n });
    }
    // the last levels are the most asymptotic; the deepest are cutoff-shaped
    let levels_used = 4;
    let tail = &ch.gap_to_edge[n - levels_used..];
    let xbar = 0.5 * (levels_used - 1) as f64;
    let ybar = tail.iter().map(|g| g.ln()).sum::<f64>() / levels_used as f64;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (i, g) in tail.iter().enumerate() {
        let dx = i as f64 - xbar;
        sxy += dx * (g.ln() - ybar);
        sxx += dx * dx;
    }
    let ratio_estimate = (sxy / sxx).exp();
    let predicted_ratio = (-2.0 * core::f64::consts::PI / (-ch.lambda).sqrt()).exp();
    Ok(ClusteringReport {
        ratio_estimate,
        predicted_ratio,
        levels_used,
        relative_deviation: (ratio_estimate / predicted_ratio - 1.0).abs(),
    })
}

/// Count the negative eigenvalues of the radial comparison operators of a
/// higher-order multipole tail:
///
///   -f'' + (j^2 - 1/4)/r^2 f - [U(r)^2 + m U(r)] f,    U = B_l / r^{l+1},
///
/// summed over angular channels j = 0..channels with multiplicity 2 for
/// j >= 1. B_l dominates the tail series at the grid radii: B_l =
/// sum_{l' >= l} S_{l'} (2R)^{-(l'-l)} with S_l the absolute moment sums, so
/// |V| <= B_l r^{-(l+1)} wherever the expansion is valid, and the count is
/// an upper-bound surrogate for the in-gap total. The unit coupling is
/// baked into the moments.
pub fn solve_finite_count(
    table: &MultipoleTable,
    m: f64,
    grid: &RadialGrid,
    channels: usize,
) -> Result<usize, SpectrumError> {
    grid.check_density()?;
    let l = match table.leading_order {
        None => return Ok(0), // zero potential binds nothing
        Some(l) => l,
    };
    if l < 2 {
        return Err(SpectrumError::Potential(
            PotentialError::LeadingOrderTooLow { found: Some(l) },
        ));
    }
    if grid.r_min < 2.0 * table.support_radius {
        return Err(SpectrumError::BadGrid(
            "tail comparison only valid from twice the support radius",
        ));
    }
    let mut b_l = 0.0;
    for lp in l..=table.l_max {
        let s: f64 = table.q[lp].iter().map(|v| v.abs()).sum();
        b_l += s * (2.0 * table.support_radius).powi(-((lp - l) as i32));
    }

    let n = grid.n_nodes();
    let h = grid.log_step();
    let interior = &grid.nodes[1..n - 1];
    let mut total = 0;
    for j in 0..=channels {
        // Liouville form: -w'' + [j^2 - e^{2s} (U^2 + m U)] w, plain L2(ds)
        let mut diag = Vec::with_capacity(interior.len());
        for &r in interior {
            let u = b_l * r.powi(-(l as i32 + 1));
            diag.push(2.0 / (h * h) + (j * j) as f64 - r * r * (u * u + m * u));
        }
        let off = alloc::vec![-1.0 / (h * h); interior.len() - 1];
        let count = SymTridiag::new(diag, off).inertia_below(0.0);
        if count > 0 && j == channels {
            return Err(SpectrumError::ChannelBudgetExceeded {
                channel: j,
                still_binding: count,
            });
        }
        total += if j == 0 { count } else { 2 * count };
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Vec2;
    use crate::mathieu::ground_eigenvalue;
    use crate::potentials::{multipole_moments, ChargeDistribution, PointCharge};
    use approx::assert_relative_eq;

    #[test]
    fn grid_is_log_uniform() {
        let g = RadialGrid::log(0.01, 1e6, 32).unwrap();
        assert!(g.is_log_uniform());
        assert_eq!(g.nodes[0], 0.01);
        assert_relative_eq!(*g.nodes.last().unwrap(), 1e6, max_relative = 1e-14);
        assert!(g.nodes_per_decade() >= 32.0);
        assert!(g.refined().nodes_per_decade() >= 64.0);
        let coarse = RadialGrid::log(0.01, 1e6, 8).unwrap();
        match assemble_channel_operator(-0.5, &coarse, 1.0) {
            Err(SpectrumError::GridTooCoarse { .. }) => {}
            other => panic!("expected coarse-grid error, got {other:?}"),
        }
    }

    #[test]
    fn quarter_coefficient_is_free_and_unbound() {
        // lambda = 1/4 makes the r-space coefficient (lambda - 1/4)/r^2
        // vanish identically; no negative spectrum.
        let g = RadialGrid::log(0.01, 1e4, 32).unwrap();
        let op = assemble_channel_operator(0.25, &g, 0.01).unwrap();
        assert_eq!(op.count_binding(), 0);
        // symmetry is structural: tridiagonal storage has one off-diagonal
        assert_eq!(op.a.off.len(), op.a.diag.len() - 1);
    }

    #[test]
    fn deepest_level_converges_at_second_order() {
        let lam = ground_eigenvalue(1.0).unwrap();
        let mut vals = Vec::new();
        for per_decade in [16, 32, 64] {
            let g = RadialGrid::log(0.01, 1e4, per_decade).unwrap();
            let op = assemble_channel_operator(lam, &g, 1.0).unwrap();
            let ladder = op.kappa_sq_ladder(1e-12, 1.0);
            vals.push(ladder[0]);
        }
        let d1 = vals[0] - vals[1];
        let d2 = vals[1] - vals[2];
        let rate = d1 / d2;
        assert!(
            (3.0..5.5).contains(&rate),
            "refinement rate {rate} not second order: {vals:?}"
        );
    }

    #[test]
    fn towers_follow_the_geometric_ladder() {
        let p = PhysicalParams::new(1.0, 1.0, Vec2::new(1.0, 0.0)).unwrap();
        let g = RadialGrid::log(0.01, 1e8, 32).unwrap();
        let towers = solve_towers(&p, &g, 1.0).unwrap();
        assert_eq!(towers.len(), count_negative(1.0).unwrap());

        let ch0 = &towers[0];
        assert!(ch0.kappa_sq.len() >= 3);
        for (e, k2) in ch0.energies.iter().zip(&ch0.kappa_sq) {
            assert!(*e > 0.0 && *e < 1.0);
            assert!(*k2 > 0.0 && *k2 < 1.0);
        }
        for pair in ch0.energies.windows(2) {
            assert!(pair[1] > pair[0], "energies not increasing: {pair:?}");
        }
        // the asymptotic contraction of the inverse-square ladder
        let predicted = (-2.0 * core::f64::consts::PI / (-ch0.lambda).sqrt()).exp();
        let last = *ch0.ratios.last().unwrap();
        assert_relative_eq!(last, predicted, max_relative = 0.05);
    }

    #[test]
    fn clustering_fit_recovers_synthetic_ratio() {
        let rho = 3.7e-4;
        let gaps: Vec<f64> = (0..6).map(|j| 0.3 * rho.powi(j)).collect();
        let ch = ChannelSpectrum {
            channel: 0,
            lambda: -0.5,
            kappa_sq: gaps.iter().map(|g| 2.0 * g).collect(),
            energies: gaps.iter().map(|g| 1.0 - g).collect(),
            gap_to_edge: gaps.clone(),
            ratios: gaps.windows(2).map(|p| p[1] / p[0]).collect(),
            r_cut: 1.0,
        };
        let rep = clustering_report(&ch).unwrap();
        assert_relative_eq!(rep.ratio_estimate, rho, max_relative = 1e-12);
        assert_eq!(rep.levels_used, 4);

        let short = ChannelSpectrum {
            gap_to_edge: gaps[..3].to_vec(),
            ..ch
        };
        match clustering_report(&short) {
            Err(SpectrumError::TooFewLevels { have: 3 }) => {}
            other => panic!("expected level-count error, got {other:?}"),
        }
    }

    #[test]
    fn clustering_deviation_improves_with_range() {
        let p = PhysicalParams::new(1.0, 1.0, Vec2::new(1.0, 0.0)).unwrap();
        let mut devs = Vec::new();
        for r_max in [1e6, 1e8] {
            let g = RadialGrid::log(0.01, r_max, 48).unwrap();
            let towers = solve_towers(&p, &g, 1.0).unwrap();
            devs.push(clustering_report(&towers[0]).unwrap().relative_deviation);
        }
        assert!(
            devs[1] < devs[0],
            "deviation did not shrink with range: {devs:?}"
        );
        assert!(devs[1] < 0.05, "asymptotic deviation too large: {devs:?}");
    }

    #[test]
    fn weaker_coupling_binds_shallower() {
        let mut deepest = Vec::new();
        for gamma in [0.25, 0.5, 1.0] {
            let p = PhysicalParams::new(gamma, 1.0, Vec2::new(1.0, 0.0)).unwrap();
            let g = RadialGrid::log(0.01, 1e13, 32).unwrap();
            let towers = solve_towers(&p, &g, 1.0).unwrap();
            deepest.push(towers[0].gap_to_edge[0]);
        }
        assert!(
            deepest[0] < deepest[1] && deepest[1] < deepest[2],
            "binding depth not monotone in gamma: {deepest:?}"
        );
    }

    #[test]
    fn moment_sums_are_cauchy() {
        // partial sums of (m - E)^delta with the geometric tail estimated
        // from the fitted ratio: the remainder is far below the sum
        let p = PhysicalParams::new(1.0, 1.0, Vec2::new(1.0, 0.0)).unwrap();
        let g = RadialGrid::log(0.01, 1e8, 32).unwrap();
        let towers = solve_towers(&p, &g, 1.0).unwrap();
        let ch0 = &towers[0];
        let ratio = clustering_report(ch0).unwrap().ratio_estimate;
        for delta in [0.5, 1.0, 2.0] {
            let partial: f64 = ch0.gap_to_edge.iter().map(|g| g.powf(delta)).sum();
            let last = ch0.gap_to_edge.last().unwrap().powf(delta);
            let r = ratio.powf(delta);
            let tail = last * r / (1.0 - r);
            assert!(
                tail < 1e-6 * partial,
                "tail {tail} not negligible against {partial} at delta {delta}"
            );
        }
    }

    fn quadrupole_triple(scale: f64) -> MultipoleTable {
        let rho = ChargeDistribution {
            points: alloc::vec![
                PointCharge {
                    pos: Vec3::new(1.0, 0.0, 0.0),
                    q: scale,
                },
                PointCharge {
                    pos: Vec3::new(-1.0, 0.0, 0.0),
                    q: scale,
                },
                PointCharge {
                    pos: Vec3::new(0.0, 0.0, 0.0),
                    q: -2.0 * scale,
                },
            ],
            density: None,
            support_radius: 1.0,
        };
        multipole_moments(&rho, 6).unwrap()
    }

    use crate::geom::Vec3;

    #[test]
    fn finite_count_is_finite_and_stable() {
        let table = quadrupole_triple(4.0);
        assert_eq!(table.leading_order, Some(2));
        let g1 = RadialGrid::log(2.0, 1e5, 32).unwrap();
        let g2 = RadialGrid::log(2.0, 2e5, 32).unwrap();
        let n1 = solve_finite_count(&table, 1.0, &g1, 8).unwrap();
        let n2 = solve_finite_count(&table, 1.0, &g2, 8).unwrap();
        assert!(n1 > 0, "expected some bound states");
        assert_eq!(n1, n2, "count not stable under r_max growth");
    }

    #[test]
    fn finite_count_monotone_in_charge() {
        let g = RadialGrid::log(2.0, 1e5, 32).unwrap();
        let mut counts = Vec::new();
        for scale in [1.0, 4.0, 16.0] {
            counts.push(solve_finite_count(&quadrupole_triple(scale), 1.0, &g, 12).unwrap());
        }
        assert!(counts[0] <= counts[1] && counts[1] <= counts[2]);
    }

    #[test]
    fn finite_count_edge_cases() {
        // exactly cancelling charges: every moment vanishes
        let rho = ChargeDistribution {
            points: alloc::vec![
                PointCharge {
                    pos: Vec3::new(0.3, 0.0, 0.0),
                    q: 1.0,
                },
                PointCharge {
                    pos: Vec3::new(0.3, 0.0, 0.0),
                    q: -1.0,
                },
            ],
            density: None,
            support_radius: 0.5,
        };
        let table = multipole_moments(&rho, 4).unwrap();
        assert_eq!(table.leading_order, None);
        let g = RadialGrid::log(1.0, 1e4, 32).unwrap();
        assert_eq!(solve_finite_count(&table, 1.0, &g, 4).unwrap(), 0);

        // a very strong quadrupole binds in many channels; tiny budget fails
        let strong = quadrupole_triple(300.0);
        let far = RadialGrid::log(2.0, 1e4, 32).unwrap();
        match solve_finite_count(&strong, 1.0, &far, 1) {
            Err(SpectrumError::ChannelBudgetExceeded { .. }) => {}
            other => panic!("expected budget error, got {other:?}"),
        }

        // grid reaching into the near zone is refused
        let close = RadialGrid::log(0.5, 1e4, 32).unwrap();
        match solve_finite_count(&quadrupole_triple(4.0), 1.0, &close, 4) {
            Err(SpectrumError::BadGrid(_)) => {}
            other => panic!("expected near-zone error, got {other:?}"),
        }
    }
}
