//! Rank-profile classification, product-vector search, constructive
//! separability certificates, and Schmidt-number bounds.
//!
//! Three rule families act on a rank profile: separability (low rank of
//! the state or of any view), edge exclusion (all ranks maximal except
//! specific one-off patterns), and extremality exclusion (the
//! squared-rank counting inequality). The remaining operations are
//! numerical: a grid-plus-descent search for a product vector compatible
//! with every kernel, the largest positivity-preserving subtraction of
//! such a vector, and the greedy decomposition those two steps induce.

use nalgebra::DVector;
use num_complex::Complex64;

use crate::dicke::{compress_half, partial_transpose_view, ProductVector, SymmetricState};
use crate::spectra::{spectral_summary, RankProfile, SpectralSummary};
use crate::{Error, Result};

/// Default residual threshold for accepting a product vector, applied to
/// normalized coordinates.
pub const EDGE_RESIDUAL_THRESHOLD: f64 = 1e-16;

/// Stereographic grid resolution of the product-vector search.
const GRID_STEPS: usize = 64;
/// Iteration budget of the derivative-free local refinement.
const REFINE_STEPS: usize = 200;

fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Separability verdict for a rank profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// A deterministic rank rule certifies full separability.
    Separable,
    /// Only a generic rule fired: typical states with this profile are
    /// separable, but exceptions are possible.
    GenericallySeparable,
    /// No rule fired; this profile can host PPT entanglement.
    CandidateEntangled,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Verdict::Separable => "separable",
            Verdict::GenericallySeparable => "generically-separable",
            Verdict::CandidateEntangled => "candidate-entangled",
        };
        write!(f, "{s}")
    }
}

/// A classification rule that fired.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rule {
    /// `r(rho) <= n`: the state is not of maximal rank.
    MaximalRank,
    /// `r(rho^Tk) <= n - k + 1` for the recorded `k`.
    PtRank { k: usize },
    /// `r(rho^Tk) <= (k+1)(n-k)` for the recorded `k` (generic rule).
    Generic { k: usize },
    /// An explicit convex decomposition into product projectors was found.
    ConstructiveDecomposition,
}

impl std::fmt::Display for Rule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Rule::MaximalRank => write!(f, "thm-maximal-rank"),
            Rule::PtRank { k } => write!(f, "thm-pt-rank(k={k})"),
            Rule::Generic { k } => write!(f, "thm-generic(k={k})"),
            Rule::ConstructiveDecomposition => write!(f, "constructive-decomposition"),
        }
    }
}

/// Verdict plus the provenance of every rule that fired.
#[derive(Debug, Clone, PartialEq)]
pub struct Classification {
    pub verdict: Verdict,
    pub triggered_rules: Vec<Rule>,
}

/// Counts rank configurations for `n` qubits: the total number of
/// profiles with maximal state rank, and how many of them survive the
/// separability rules (`(floor(n/2)+1)!`).
pub fn count_configs(n: usize) -> Result<(u128, u128)> {
    if n < 4 {
        return Err(Error::InvalidInput("config counting needs n >= 4".into()));
    }
    let m = n / 2;
    let mut total: u128 = 1;
    for s in 1..=m {
        total *= ((s + 1) * (n - s + 1)) as u128;
    }
    let mut remaining: u128 = 1;
    for i in 2..=(m + 1) as u128 {
        remaining *= i;
    }
    Ok((total, remaining))
}

/// Applies the deterministic and generic separability rules to a profile.
///
/// Deterministic: separable if `r(rho) <= n` or `r(rho^Tk) <= n - k + 1`
/// for any `k >= 1`. Generic: typically separable if
/// `r(rho^Tk) <= (k+1)(n-k)` for any `k >= 1`. Deterministic rules
/// dominate generic ones.
pub fn classify_ranks(p: &RankProfile, n: usize) -> Classification {
    let mut deterministic = Vec::new();
    let mut generic = Vec::new();
    if p.state_rank() <= n {
        deterministic.push(Rule::MaximalRank);
    }
    for k in 1..p.len() {
        let r = p.rank(k);
        if r <= n - k + 1 {
            deterministic.push(Rule::PtRank { k });
        }
        if r <= (k + 1) * (n - k) {
            generic.push(Rule::Generic { k });
        }
    }
    if !deterministic.is_empty() {
        return Classification {
            verdict: Verdict::Separable,
            triggered_rules: deterministic,
        };
    }
    if !generic.is_empty() {
        return Classification {
            verdict: Verdict::GenericallySeparable,
            triggered_rules: generic,
        };
    }
    Classification {
        verdict: Verdict::CandidateEntangled,
        triggered_rules: Vec::new(),
    }
}

/// The squared-rank counting inequality: when it holds, the kernel
/// constraint system is guaranteed a nontrivial solution and no state
/// with this profile is extremal.
pub fn extremality_excluded(p: &RankProfile, n: usize) -> bool {
    let m = n / 2;
    let lhs: u64 = (1..=m).map(|k| (p.rank(k) * p.rank(k)) as u64).sum();
    let cap: u64 = (1..=m)
        .map(|k| {
            let d = ((k + 1) * (n - k + 1)) as u64;
            d * d
        })
        .sum();
    let rhs = cap - ((n + 1) * (n + 1)) as u64 + 1;
    lhs >= rhs
}

/// Outcome of the edge-exclusion tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeExclusion {
    /// No state with this profile is edge.
    NotEdge,
    /// Generic states with this profile are not edge.
    GenericallyNotEdge,
    /// Not covered by any exclusion rule.
    Unknown,
}

impl std::fmt::Display for EdgeExclusion {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            EdgeExclusion::NotEdge => "not-edge",
            EdgeExclusion::GenericallyNotEdge => "generically-not-edge",
            EdgeExclusion::Unknown => "unknown",
        };
        write!(f, "{s}")
    }
}

/// Table lookup of the edge-exclusion rules.
///
/// A maximal profile is never edge (every kernel is empty, so any
/// product vector is compatible). All ranks maximal except one view with
/// `1 <= k <= ceil(n/2) - 1` lowered by exactly one is generically not
/// edge. For `n = 4` and `n = 6` the half-system view lowered by one is
/// not edge, and for `n = 4` the profile `(5, 8, 7)` is generically not
/// edge. Anything else is unknown.
pub fn edge_excluded(p: &RankProfile, n: usize) -> EdgeExclusion {
    let maxp = crate::spectra::max_rank_profile(n);
    if p == &maxp {
        return EdgeExclusion::NotEdge;
    }
    if p.state_rank() != maxp.state_rank() {
        return EdgeExclusion::Unknown;
    }
    let m = n / 2;
    let deficits: Vec<isize> = (1..=m)
        .map(|k| maxp.rank(k) as isize - p.rank(k) as isize)
        .collect();
    if deficits.iter().any(|&d| d < 0) {
        return EdgeExclusion::Unknown;
    }
    let lowered: Vec<(usize, isize)> = deficits
        .iter()
        .enumerate()
        .filter(|(_, &d)| d > 0)
        .map(|(i, &d)| (i + 1, d))
        .collect();
    if lowered.len() == 1 {
        let (k, d) = lowered[0];
        if d == 1 {
            if k < n.div_ceil(2) {
                return EdgeExclusion::GenericallyNotEdge;
            }
            if (n == 4 || n == 6) && k == m {
                return EdgeExclusion::NotEdge;
            }
        }
        if n == 4 && k == 2 && d == 2 {
            // profile (5, 8, 7)
            return EdgeExclusion::GenericallyNotEdge;
        }
    }
    EdgeExclusion::Unknown
}

/// Result of the product-vector search.
#[derive(Debug, Clone)]
pub struct EdgeReport {
    /// Present iff the residual fell below the acceptance threshold.
    pub found_vector: Option<ProductVector>,
    /// Sum over all views (including the state itself) of squared
    /// overlaps between the normalized candidate coordinates and the
    /// kernel vectors.
    pub residual: f64,
    /// Local-refinement iterations spent.
    pub iterations: usize,
}

struct KernelSet {
    /// (k, kernel basis of view k); k = 0 is the state itself.
    kernels: Vec<(usize, Vec<DVector<Complex64>>)>,
}

impl KernelSet {
    fn collect(s: &SymmetricState, rank_tol: f64) -> Result<Self> {
        let mut kernels = Vec::new();
        let sum = spectral_summary(s.matrix(), rank_tol)?;
        kernels.push((0, sum.kernel_basis));
        for k in 1..=s.num_bipartitions() {
            let view = partial_transpose_view(s, k)?;
            let sum = spectral_summary(view.matrix(), rank_tol)?;
            kernels.push((k, sum.kernel_basis));
        }
        Ok(Self { kernels })
    }

    fn is_empty(&self) -> bool {
        self.kernels.iter().all(|(_, basis)| basis.is_empty())
    }

    /// f(e) = sum_k sum_i |<Psi_i^k | e_k>|^2 on normalized coordinates.
    fn residual(&self, e: &ProductVector, n: usize) -> f64 {
        let mut acc = 0.0;
        for (k, basis) in &self.kernels {
            if basis.is_empty() {
                continue;
            }
            let coords = match e.normalized_conjugated_coords(n, *k) {
                Ok(v) => v,
                Err(_) => return f64::INFINITY,
            };
            for psi in basis {
                acc += psi.dotc(&coords).norm_sqr();
            }
        }
        acc
    }
}

/// Candidate parametrized by a chart: `(1, alpha)` or `(beta, 1)`.
#[derive(Clone, Copy)]
struct ChartPoint {
    inverted: bool,
    re: f64,
    im: f64,
}

impl ChartPoint {
    fn vector(&self) -> ProductVector {
        if self.inverted {
            ProductVector::new(c64(self.re, self.im), c64(1.0, 0.0))
                .unwrap_or_else(|_| ProductVector::pole())
        } else {
            ProductVector::from_alpha(c64(self.re, self.im))
        }
    }
}

/// Hops charts so the working coordinate stays inside the unit disk.
fn normalize_chart(p: ChartPoint) -> ChartPoint {
    if p.re.hypot(p.im) <= 1.0 {
        return p;
    }
    let inv = 1.0 / c64(p.re, p.im);
    ChartPoint {
        inverted: !p.inverted,
        re: inv.re,
        im: inv.im,
    }
}

/// Stacked kernel overlaps at a chart point (the residual is their
/// squared norm).
fn overlap_stack(kernels: &KernelSet, n: usize, p: ChartPoint) -> Vec<Complex64> {
    let e = p.vector();
    let mut out = Vec::new();
    for (k, basis) in &kernels.kernels {
        if basis.is_empty() {
            continue;
        }
        match e.normalized_conjugated_coords(n, *k) {
            Ok(coords) => {
                for psi in basis {
                    out.push(psi.dotc(&coords));
                }
            }
            Err(_) => out.push(c64(f64::INFINITY, 0.0)),
        }
    }
    out
}

/// Levenberg-damped Gauss-Newton on the overlap stack in the current
/// chart, Jacobian by central differences. Returns the refined point,
/// its residual, and the iterations spent.
fn gauss_newton_refine(
    kernels: &KernelSet,
    n: usize,
    start: ChartPoint,
    start_value: f64,
    max_iters: usize,
    threshold: f64,
) -> (ChartPoint, f64, usize) {
    let mut point = start;
    let mut value = start_value;
    let mut damping = 1e-8;
    let mut iterations = 0;
    for _ in 0..max_iters {
        iterations += 1;
        let g = overlap_stack(kernels, n, point);
        let h = 1e-7 * point.re.hypot(point.im).max(1.0);
        let probe = |dre: f64, dim: f64| -> Vec<Complex64> {
            overlap_stack(
                kernels,
                n,
                ChartPoint {
                    inverted: point.inverted,
                    re: point.re + dre,
                    im: point.im + dim,
                },
            )
        };
        let (gp_re, gm_re) = (probe(h, 0.0), probe(-h, 0.0));
        let (gp_im, gm_im) = (probe(0.0, h), probe(0.0, -h));
        // real normal equations over the 2m-dimensional residual
        let mut jtj = [[0.0_f64; 2]; 2];
        let mut jtg = [0.0_f64; 2];
        for (i, gi) in g.iter().enumerate() {
            let dre = (gp_re[i] - gm_re[i]) / (2.0 * h);
            let dim = (gp_im[i] - gm_im[i]) / (2.0 * h);
            jtj[0][0] += dre.norm_sqr();
            jtj[1][1] += dim.norm_sqr();
            let cross = (dre.conj() * dim).re;
            jtj[0][1] += cross;
            jtj[1][0] += cross;
            jtg[0] += (dre.conj() * gi).re;
            jtg[1] += (dim.conj() * gi).re;
        }
        let mut improved = false;
        for _ in 0..8 {
            let a = jtj[0][0] + damping;
            let d = jtj[1][1] + damping;
            let b = jtj[0][1];
            let det = a * d - b * b;
            if det.abs() < 1e-300 {
                break;
            }
            let step_re = -(d * jtg[0] - b * jtg[1]) / det;
            let step_im = -(a * jtg[1] - b * jtg[0]) / det;
            let cand = normalize_chart(ChartPoint {
                inverted: point.inverted,
                re: point.re + step_re,
                im: point.im + step_im,
            });
            let cand_value = kernels.residual(&cand.vector(), n);
            if cand_value < value {
                point = cand;
                value = cand_value;
                damping = (damping / 3.0).max(1e-12);
                improved = true;
                break;
            }
            damping *= 10.0;
        }
        if value < threshold * 1e-4 || !improved {
            break;
        }
    }
    (point, value, iterations)
}

/// Searches for a product vector whose partial conjugates are orthogonal
/// to every kernel: a stereographic grid over the Riemann sphere
/// (including the pole) followed by compass descent in the winning chart.
///
/// The usual acceptance `threshold` is [`EDGE_RESIDUAL_THRESHOLD`];
/// `rank_tol` fixes which eigenvectors count as kernel. Not finding a
/// vector is a valid result, reported through `found_vector: None`.
pub fn find_product_vector(
    s: &SymmetricState,
    threshold: f64,
    rank_tol: f64,
) -> Result<EdgeReport> {
    let n = s.n_qubits();
    let kernels = KernelSet::collect(s, rank_tol)?;
    if kernels.is_empty() {
        // every product vector qualifies; report the simplest one
        return Ok(EdgeReport {
            found_vector: Some(ProductVector::from_alpha(c64(0.0, 0.0))),
            residual: 0.0,
            iterations: 0,
        });
    }

    let mut best_point = ChartPoint {
        inverted: false,
        re: 0.0,
        im: 0.0,
    };
    let mut best = kernels.residual(&best_point.vector(), n);

    // pole, then stereographic grid: alpha = tan(theta/2) e^{i phi}
    let pole = ChartPoint {
        inverted: true,
        re: 0.0,
        im: 0.0,
    };
    let pole_value = kernels.residual(&pole.vector(), n);
    if pole_value < best {
        best = pole_value;
        best_point = pole;
    }
    for i in 0..GRID_STEPS {
        let theta = std::f64::consts::PI * (i as f64 + 0.5) / GRID_STEPS as f64;
        let r = (theta / 2.0).tan();
        for j in 0..GRID_STEPS {
            let phi = 2.0 * std::f64::consts::PI * j as f64 / GRID_STEPS as f64;
            let (re, im) = (r * phi.cos(), r * phi.sin());
            // evaluate in the chart that keeps the coordinate small
            let point = if r <= 1.0 {
                ChartPoint {
                    inverted: false,
                    re,
                    im,
                }
            } else {
                let inv = 1.0 / c64(re, im);
                ChartPoint {
                    inverted: true,
                    re: inv.re,
                    im: inv.im,
                }
            };
            let value = kernels.residual(&point.vector(), n);
            if value < best {
                best = value;
                best_point = point;
            }
        }
    }

    // local refinement: Levenberg-damped Gauss-Newton on the stacked
    // kernel overlaps (finite-difference Jacobian), with compass descent
    // as fallback; plain coordinate descent crawls in the curved valleys
    // that nearby product-vector pairs produce
    let mut iterations = 0;
    let budget = REFINE_STEPS;
    let (gn_point, gn_value, gn_iters) =
        gauss_newton_refine(&kernels, n, best_point, best, budget / 2, threshold);
    iterations += gn_iters;
    if gn_value < best {
        best = gn_value;
        best_point = gn_point;
    }
    if best >= threshold {
        let mut step = 2.0 * std::f64::consts::PI / GRID_STEPS as f64;
        while iterations < budget {
            iterations += 1;
            let here = best_point;
            let mut improved = false;
            for (dx, dy) in [(1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (0.0, -1.0)] {
                let cand = normalize_chart(ChartPoint {
                    inverted: here.inverted,
                    re: here.re + step * dx,
                    im: here.im + step * dy,
                });
                let value = kernels.residual(&cand.vector(), n);
                if value < best {
                    best = value;
                    best_point = cand;
                    improved = true;
                }
            }
            if improved {
                step *= 1.5;
            } else {
                step *= 0.5;
                if step < 1e-17 {
                    break;
                }
            }
        }
    }

    let found = best < threshold;
    Ok(EdgeReport {
        found_vector: found.then(|| best_point.vector()),
        residual: best,
        iterations,
    })
}

/// Recomputes the kernel residual of a given vector from scratch.
pub fn product_vector_residual(
    s: &SymmetricState,
    e: &ProductVector,
    rank_tol: f64,
) -> Result<f64> {
    let kernels = KernelSet::collect(s, rank_tol)?;
    Ok(kernels.residual(e, s.n_qubits()))
}

fn view_summaries(s: &SymmetricState, rank_tol: f64) -> Result<Vec<(usize, SpectralSummary)>> {
    let mut out = Vec::with_capacity(s.num_bipartitions() + 1);
    out.push((0, spectral_summary(s.matrix(), rank_tol)?));
    for k in 1..=s.num_bipartitions() {
        let view = partial_transpose_view(s, k)?;
        out.push((k, spectral_summary(view.matrix(), rank_tol)?));
    }
    Ok(out)
}

/// Largest weight of the product projector `[e^{(x)n}]` subtractable
/// while the state and every view stay PSD:
/// `min_k 1 / <e_k| (view_k)^+ |e_k>` over `k = 0..=floor(n/2)`.
fn max_subtraction_weight(s: &SymmetricState, e: &ProductVector, rank_tol: f64) -> Result<f64> {
    let n = s.n_qubits();
    let mut lambda = f64::INFINITY;
    for (k, sum) in view_summaries(s, rank_tol)? {
        let coords = e.normalized_conjugated_coords(n, k)?;
        let pinv = sum.pseudo_inverse();
        let quad = coords.dotc(&(&pinv * &coords)).re;
        if !quad.is_finite() || quad <= 0.0 {
            return Err(Error::Internal(format!(
                "nonpositive quadratic form {quad:.3e} in subtraction weight (k = {k})"
            )));
        }
        lambda = lambda.min(1.0 / quad);
    }
    Ok(lambda)
}

/// Subtracts the largest admissible multiple of `[e^{(x)n}]` from `s`.
///
/// `e` must first pass the kernel-residual test on `s` (it has to lie in
/// the range of the state and of every view). Returns the renormalized
/// remainder and the weight subtracted from the unit-trace input; a pure
/// product input yields the zero matrix with weight one.
pub fn subtract_product_vector(
    s: &SymmetricState,
    e: &ProductVector,
    rank_tol: f64,
) -> Result<(SymmetricState, f64)> {
    let residual = product_vector_residual(s, e, rank_tol)?;
    if residual >= EDGE_RESIDUAL_THRESHOLD {
        return Err(Error::InvalidInput(format!(
            "product vector fails the kernel-residual test: residual {residual:.3e}"
        )));
    }
    // for a unit-trace PSD input the admissible weight never exceeds one
    let lambda = max_subtraction_weight(s, e, rank_tol)?.min(1.0);
    let coords = e.normalized_coords(s.n_qubits());
    let projector = &coords * coords.adjoint();
    let remainder = s.matrix() - projector.scale(lambda);
    let rest = SymmetricState::from_hermitized(s.n_qubits(), &remainder);
    // a near-total subtraction leaves only numerical noise; renormalizing
    // it would inflate that noise into an arbitrary matrix
    if rest.trace().abs() <= 1e-9 {
        return Ok((rest, lambda));
    }
    Ok((rest.renormalized()?, lambda))
}

/// Outcome of the greedy constructive separability certificate.
#[derive(Debug, Clone)]
pub enum SeparableDecomposition {
    /// `s = sum_i w_i [e_i^{(x)n}]` within tolerance.
    Decomposed(Vec<(f64, ProductVector)>),
    /// The greedy loop stalled; the remainder is an edge-state candidate.
    Irreducible {
        terms: Vec<(f64, ProductVector)>,
        remainder: SymmetricState,
    },
}

impl SeparableDecomposition {
    pub fn is_decomposed(&self) -> bool {
        matches!(self, SeparableDecomposition::Decomposed(_))
    }

    pub fn terms(&self) -> &[(f64, ProductVector)] {
        match self {
            SeparableDecomposition::Decomposed(t) => t,
            SeparableDecomposition::Irreducible { terms, .. } => terms,
        }
    }
}

/// Default term cap for [`decompose_separable`], `(n+1)^2`.
pub const fn default_max_terms(n: usize) -> usize {
    (n + 1) * (n + 1)
}

/// Greedy constructive separability certificate: repeatedly find the
/// best product vector and subtract its largest admissible weight.
///
/// Succeeds when the remainder reaches the zero matrix; otherwise the
/// irreducible remainder is returned as an edge-state candidate.
/// Failure is a result, not an error.
pub fn decompose_separable(
    s: &SymmetricState,
    max_terms: usize,
    rank_tol: f64,
) -> Result<SeparableDecomposition> {
    let mut work = s.clone();
    let mut remaining_weight = 1.0;
    let mut terms: Vec<(f64, ProductVector)> = Vec::new();
    for _ in 0..max_terms {
        if remaining_weight <= 1e-10 {
            return Ok(SeparableDecomposition::Decomposed(terms));
        }
        let report = find_product_vector(&work, EDGE_RESIDUAL_THRESHOLD, rank_tol)?;
        let e = match report.found_vector {
            Some(e) => e,
            None => {
                return Ok(SeparableDecomposition::Irreducible {
                    terms,
                    remainder: work,
                })
            }
        };
        let (rest, lambda) = subtract_product_vector(&work, &e, rank_tol)?;
        if lambda <= 1e-12 {
            return Ok(SeparableDecomposition::Irreducible {
                terms,
                remainder: work,
            });
        }
        // lambda is relative to the current normalized remainder
        if lambda >= 1.0 - 1e-9 || rest.trace().abs() <= 1e-9 {
            terms.push((remaining_weight, e));
            return Ok(SeparableDecomposition::Decomposed(terms));
        }
        let absolute = lambda * remaining_weight;
        terms.push((absolute, e));
        remaining_weight -= absolute;
        work = rest;
    }
    if remaining_weight <= 1e-10 {
        Ok(SeparableDecomposition::Decomposed(terms))
    } else {
        Ok(SeparableDecomposition::Irreducible {
            terms,
            remainder: work,
        })
    }
}

/// Schmidt-number bound via half-system compression.
///
/// Compresses the state onto `C^2 (x) C^(floor(n/2)+1)` and certifies
/// the compressed state: if it is PPT and supported (both reduced states
/// of full rank), entangled symmetric states of `n` qubits admit
/// decompositions with `n/2` (even `n`) or `ceil(n/2)` (odd `n`) product
/// terms per vector. Rank-one inputs report 1. Returns `None` when the
/// certificate does not apply.
pub fn schmidt_bound(s: &SymmetricState, rank_tol: f64) -> Result<Option<usize>> {
    let n = s.n_qubits();
    let state_rank = spectral_summary(s.matrix(), rank_tol)?.rank;
    let compressed = compress_half(s)?;
    if state_rank == 1 {
        let cr = spectral_summary(compressed.matrix(), rank_tol)?.rank;
        return Ok((cr == 1).then_some(1));
    }
    let pt = compressed.partial_transpose_qubit();
    let min_pt = crate::eigen::min_eigenvalue(&pt);
    let scale = compressed.matrix().trace().re.abs().max(1.0);
    if min_pt < -rank_tol * scale {
        return Ok(None);
    }
    let qubit_rank = spectral_summary(&compressed.reduced_qubit(), rank_tol)?.rank;
    let sym_rank = spectral_summary(&compressed.reduced_sym(), rank_tol)?.rank;
    if qubit_rank != 2 || sym_rank != compressed.sym_dim() {
        return Ok(None);
    }
    Ok(Some(if n.is_multiple_of(2) { n / 2 } else { n.div_ceil(2) }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectra::{max_rank_profile, rank_profile};
    use crate::DEFAULT_RANK_TOL;

    #[test]
    fn config_counts() {
        assert_eq!(count_configs(4).unwrap(), (72, 6));
        assert_eq!(count_configs(5).unwrap(), (120, 6));
        assert_eq!(count_configs(6).unwrap(), (2880, 24));
        assert!(count_configs(3).is_err());
    }

    #[test]
    fn classify_rules_n4() {
        let c = classify_ranks(&RankProfile::new(vec![4, 8, 9]), 4);
        assert_eq!(c.verdict, Verdict::Separable);
        assert!(c.triggered_rules.contains(&Rule::MaximalRank));

        let c = classify_ranks(&RankProfile::new(vec![5, 6, 9]), 4);
        assert_eq!(c.verdict, Verdict::GenericallySeparable);
        assert_eq!(c.triggered_rules, vec![Rule::Generic { k: 1 }]);

        let c = classify_ranks(&RankProfile::new(vec![5, 7, 8]), 4);
        assert_eq!(c.verdict, Verdict::CandidateEntangled);
        assert!(c.triggered_rules.is_empty());
    }

    #[test]
    fn deterministic_dominates_generic() {
        // both the pt-rank rule (k = 2: 3 <= 3) and generic rules apply
        let c = classify_ranks(&RankProfile::new(vec![5, 7, 3]), 4);
        assert_eq!(c.verdict, Verdict::Separable);
        assert!(c
            .triggered_rules
            .iter()
            .all(|r| matches!(r, Rule::PtRank { .. })));
    }

    #[test]
    fn extremality_inequality_n4() {
        assert!(extremality_excluded(&RankProfile::new(vec![5, 7, 9]), 4));
        assert!(extremality_excluded(&RankProfile::new(vec![5, 8, 8]), 4));
        assert!(extremality_excluded(&RankProfile::new(vec![5, 8, 9]), 4));
        assert!(!extremality_excluded(&RankProfile::new(vec![5, 7, 8]), 4));
        assert!(!extremality_excluded(&RankProfile::new(vec![5, 7, 7]), 4));
    }

    #[test]
    fn extremality_inequality_n6() {
        assert!(extremality_excluded(
            &RankProfile::new(vec![7, 12, 15, 15]),
            6
        ));
        assert!(!extremality_excluded(
            &RankProfile::new(vec![7, 12, 14, 14]),
            6
        ));
    }

    #[test]
    fn edge_tables() {
        assert_eq!(
            edge_excluded(&max_rank_profile(4), 4),
            EdgeExclusion::NotEdge
        );
        assert_eq!(
            edge_excluded(&RankProfile::new(vec![5, 8, 8]), 4),
            EdgeExclusion::NotEdge
        );
        assert_eq!(
            edge_excluded(&RankProfile::new(vec![5, 8, 7]), 4),
            EdgeExclusion::GenericallyNotEdge
        );
        assert_eq!(
            edge_excluded(&RankProfile::new(vec![5, 7, 9]), 4),
            EdgeExclusion::GenericallyNotEdge
        );
        assert_eq!(
            edge_excluded(&RankProfile::new(vec![6, 10, 10]), 5),
            EdgeExclusion::Unknown
        );
        assert_eq!(
            edge_excluded(&RankProfile::new(vec![6, 9, 12]), 5),
            EdgeExclusion::GenericallyNotEdge
        );
        assert_eq!(
            edge_excluded(&RankProfile::new(vec![6, 10, 11]), 5),
            EdgeExclusion::GenericallyNotEdge
        );
        assert_eq!(
            edge_excluded(&RankProfile::new(vec![7, 12, 15, 15]), 6),
            EdgeExclusion::NotEdge
        );
        assert_eq!(
            edge_excluded(&RankProfile::new(vec![7, 12, 14, 16]), 6),
            EdgeExclusion::GenericallyNotEdge
        );
        assert_eq!(
            edge_excluded(&RankProfile::new(vec![7, 11, 15, 16]), 6),
            EdgeExclusion::GenericallyNotEdge
        );
        assert_eq!(
            edge_excluded(&RankProfile::new(vec![5, 7, 8]), 4),
            EdgeExclusion::Unknown
        );
    }

    #[test]
    fn find_vector_in_two_term_mixture() {
        let plus = ProductVector::from_alpha(c64(1.0, 0.0));
        let minus = ProductVector::from_alpha(c64(-1.0, 0.0));
        let s = SymmetricState::mixture(4, &[(0.5, plus), (0.5, minus)]).unwrap();
        let report = find_product_vector(&s, EDGE_RESIDUAL_THRESHOLD, DEFAULT_RANK_TOL).unwrap();
        let found = report.found_vector.expect("member should be found");
        assert!(report.residual < 1e-20, "residual {}", report.residual);
        let alpha = found.alpha().expect("finite alpha");
        assert!(
            (alpha - c64(1.0, 0.0)).norm() < 1e-7 || (alpha - c64(-1.0, 0.0)).norm() < 1e-7,
            "found alpha = {alpha}"
        );
        // reported residual is reproducible from scratch
        let again = product_vector_residual(&s, &found, DEFAULT_RANK_TOL).unwrap();
        assert!((again - report.residual).abs() < 1e-12);
    }

    #[test]
    fn find_vector_maximally_mixed_trivial() {
        let s = SymmetricState::maximally_mixed(5);
        let report = find_product_vector(&s, EDGE_RESIDUAL_THRESHOLD, DEFAULT_RANK_TOL).unwrap();
        assert_eq!(report.residual, 0.0);
        assert!(report.found_vector.is_some());
        assert_eq!(report.iterations, 0);
    }

    #[test]
    fn subtract_pure_product_leaves_zero() {
        let e = ProductVector::from_alpha(c64(0.0, 0.0));
        let s = SymmetricState::pure_product(4, &e);
        let (rest, lambda) = subtract_product_vector(&s, &e, DEFAULT_RANK_TOL).unwrap();
        assert!((lambda - 1.0).abs() < 1e-10);
        assert!(rest.matrix().iter().all(|z| z.norm() < 1e-10));
    }

    #[test]
    fn subtract_orthogonal_two_term_mixture() {
        let zero = ProductVector::from_alpha(c64(0.0, 0.0));
        let one = ProductVector::pole();
        let s = SymmetricState::mixture(4, &[(0.5, zero), (0.5, one)]).unwrap();
        let (rest, lambda) = subtract_product_vector(&s, &zero, DEFAULT_RANK_TOL).unwrap();
        assert!((lambda - 0.5).abs() < 1e-10, "lambda = {lambda}");
        // remainder is the pure |1^4> projector
        let want = SymmetricState::pure_product(4, &one);
        let diff = (rest.matrix() - want.matrix())
            .iter()
            .map(|z| z.norm())
            .fold(0.0_f64, f64::max);
        assert!(diff < 1e-10);
    }

    #[test]
    fn subtract_rejects_incompatible_vector() {
        let zero = ProductVector::from_alpha(c64(0.0, 0.0));
        let one = ProductVector::pole();
        let s = SymmetricState::mixture(4, &[(0.5, zero), (0.5, one)]).unwrap();
        let stranger = ProductVector::from_alpha(c64(0.37, 0.2));
        assert!(subtract_product_vector(&s, &stranger, DEFAULT_RANK_TOL).is_err());
    }

    #[test]
    fn decompose_two_orthogonal_terms() {
        let zero = ProductVector::from_alpha(c64(0.0, 0.0));
        let one = ProductVector::pole();
        let s = SymmetricState::mixture(5, &[(0.5, zero), (0.5, one)]).unwrap();
        match decompose_separable(&s, default_max_terms(5), DEFAULT_RANK_TOL).unwrap() {
            SeparableDecomposition::Decomposed(terms) => {
                assert_eq!(terms.len(), 2);
                let reconstructed = SymmetricState::mixture(5, &terms).unwrap();
                let diff = (reconstructed.matrix() - s.matrix())
                    .iter()
                    .map(|z| z.norm())
                    .fold(0.0_f64, f64::max);
                assert!(diff < 1e-8);
            }
            SeparableDecomposition::Irreducible { .. } => panic!("expected success"),
        }
    }

    #[test]
    fn decompose_random_six_term_mixture() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        let (s, _) = crate::sampling::random_separable_mixture(4, 6, &mut rng);
        match decompose_separable(&s, default_max_terms(4), DEFAULT_RANK_TOL).unwrap() {
            SeparableDecomposition::Decomposed(terms) => {
                let reconstructed = SymmetricState::mixture(4, &terms).unwrap();
                let diff = (reconstructed.matrix() - s.matrix())
                    .iter()
                    .map(|z| z.norm())
                    .fold(0.0_f64, f64::max);
                assert!(diff < 1e-8, "reconstruction off by {diff:.3e}");
            }
            SeparableDecomposition::Irreducible { remainder, .. } => {
                panic!("expected success, remainder trace {}", remainder.trace())
            }
        }
    }

    #[test]
    fn subtraction_lowers_profile_and_keeps_ppt() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let mut checked = 0;
        for _ in 0..20 {
            let (s, members) = crate::sampling::random_separable_mixture(4, 6, &mut rng);
            let before = rank_profile(&s, DEFAULT_RANK_TOL).unwrap();
            let e = members[0].1;
            let Ok((rest, _)) = subtract_product_vector(&s, &e, DEFAULT_RANK_TOL) else {
                continue;
            };
            if rest.trace().abs() <= 1e-12 {
                continue;
            }
            let after = rank_profile(&rest, DEFAULT_RANK_TOL).unwrap();
            assert!(
                after.ranks().iter().zip(before.ranks()).any(|(a, b)| a < b),
                "no rank decreased: {before} -> {after}"
            );
            assert!(
                crate::spectra::is_ppt(&rest, DEFAULT_RANK_TOL)
                    .unwrap()
                    .is_ppt
            );
            checked += 1;
        }
        assert!(checked >= 15, "only {checked} random subtractions checked");
    }

    #[test]
    fn schmidt_bound_pure_product() {
        let e = ProductVector::from_alpha(c64(0.3, -0.4));
        for n in [4, 5] {
            let s = SymmetricState::pure_product(n, &e);
            assert_eq!(schmidt_bound(&s, DEFAULT_RANK_TOL).unwrap(), Some(1));
        }
    }
}
