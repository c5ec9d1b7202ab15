//! Randomized search for extremal PPT symmetric states.
//!
//! A PPT state is extremal iff the only Hermitian matrix whose every
//! partial-transposition view annihilates the corresponding kernel of
//! the state is the state itself. The search repeats three moves until
//! that fixed point: assemble the kernel constraint system, draw a random
//! Hermitian solution orthogonal to the state, and walk along
//! `rho(x) = (1 + x tr h) rho - x h` to the first `x` where some view
//! gains a new zero eigenvalue, which lowers exactly one rank.
//!
//! Hermitian matrices are flattened to `(n+1)^2` real parameters with
//! off-diagonal entries scaled by `sqrt(2)`, so the Euclidean inner
//! product of parameter vectors equals the Hilbert-Schmidt inner product
//! and singular-vector bases translate to Frobenius-orthonormal matrices.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::classify::{classify_ranks, Classification};
use crate::dicke::{compression_isometry, view_with_isometry, CompressionIsometry, SymmetricState};
use crate::spectra::{is_ppt, rank_profile, spectral_summary, RankProfile};
use crate::{Error, Result};

fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Tunables of the line search and of the surrounding iteration.
#[derive(Debug, Clone)]
pub struct SearchOpts {
    /// Relative rank tolerance handed to every spectral decision.
    pub rank_tol: f64,
    /// An eigenvalue below `-cross_tol` counts as a boundary crossing.
    pub cross_tol: f64,
    /// Bisection terminates at this bracket width.
    pub bisect_width: f64,
    /// First probe of the doubling bracket.
    pub probe_x: f64,
    /// Give up on a direction beyond this step length.
    pub max_x: f64,
    /// Redraws tolerated per step after degenerate directions.
    pub max_degenerate_redraws: usize,
    /// Redraws tolerated per step while targeting specific ranks.
    pub max_target_redraws: usize,
    /// Only accept steps that lower ranks still above this profile.
    pub target_profile: Option<RankProfile>,
    /// Hard cap on steps; `None` derives it from the maximal profile.
    pub max_steps: Option<usize>,
}

impl Default for SearchOpts {
    fn default() -> Self {
        Self {
            rank_tol: crate::DEFAULT_RANK_TOL,
            cross_tol: 1e-10,
            bisect_width: 1e-12,
            probe_x: 1e-3,
            max_x: 1e6,
            max_degenerate_redraws: 10,
            max_target_redraws: 50,
            target_profile: None,
            max_steps: None,
        }
    }
}

/// A traceless-orthogonalized, Frobenius-normalized Hermitian solution
/// of the kernel constraint system.
#[derive(Debug, Clone)]
pub struct HermitianDirection {
    matrix: DMatrix<Complex64>,
    trace: f64,
}

impl HermitianDirection {
    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.trace
    }
}

/// Number of real parameters of a Hermitian matrix on `dim` dimensions.
fn param_count(dim: usize) -> usize {
    dim * dim
}

#[doc(hidden)]
pub fn test_params(m: &DMatrix<Complex64>) -> DVector<f64> {
    hermitian_to_params(m)
}

/// Flattens a Hermitian matrix into the isometric parameter vector.
pub(crate) fn hermitian_to_params(m: &DMatrix<Complex64>) -> DVector<f64> {
    let d = m.nrows();
    let mut v = DVector::zeros(param_count(d));
    let s = 2.0_f64.sqrt();
    for i in 0..d {
        v[i] = m[(i, i)].re;
    }
    let mut idx = d;
    for i in 0..d {
        for j in (i + 1)..d {
            v[idx] = s * m[(i, j)].re;
            v[idx + 1] = s * m[(i, j)].im;
            idx += 2;
        }
    }
    v
}

/// Inverse of [`hermitian_to_params`].
pub(crate) fn params_to_hermitian(v: &DVector<f64>, dim: usize) -> DMatrix<Complex64> {
    let s = 0.5_f64.sqrt();
    let mut m = DMatrix::zeros(dim, dim);
    for i in 0..dim {
        m[(i, i)] = c64(v[i], 0.0);
    }
    let mut idx = dim;
    for i in 0..dim {
        for j in (i + 1)..dim {
            let z = c64(s * v[idx], s * v[idx + 1]);
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
            idx += 2;
        }
    }
    m
}

/// Coefficient of the matrix unit `E_{n n'}` at component `(i, j)` of
/// `(B h B^T)^{T_k} Psi`, exploiting that column `n` of the isometry is
/// supported on `i + j = n`.
struct ViewConstraint<'a> {
    iso: &'a CompressionIsometry,
    psi: &'a DVector<Complex64>,
}

impl ViewConstraint<'_> {
    fn coefficient(&self, n: usize, np: usize, i: usize, j: usize) -> Complex64 {
        let k = self.iso.k();
        let nq = self.iso.n_qubits();
        let cols = nq - k + 1;
        let b = self.iso.matrix();
        // row factor index forced by sparsity: i' = n - j, j' = n' - i
        if n < j || n - j > k || np < i || np - i > cols - 1 {
            return c64(0.0, 0.0);
        }
        let ip = n - j;
        let jp = np - i;
        let w = b[(ip * cols + j, n)] * b[(i * cols + jp, np)];
        w * self.psi[ip * cols + jp]
    }
}

/// Assembles the kernel constraint system `R p(h) = 0`.
///
/// Row blocks run over `k = 0..=floor(n/2)` (with `k = 0` the state
/// itself); each kernel vector of view `k` contributes the real and
/// imaginary parts of all `(k+1)(n-k+1)` components of
/// `view_k(h) Psi = 0`, i.e. `2 (k+1)(n-k+1)` real rows. The parameter
/// vector of the state itself always lies in the nullspace.
pub fn build_constraint_system(s: &SymmetricState, rank_tol: f64) -> Result<DMatrix<f64>> {
    let n = s.n_qubits();
    let dim = n + 1;
    let d2 = param_count(dim);
    let sqrt_half = 0.5_f64.sqrt();

    // gather kernels of the state and of every view
    let mut blocks: Vec<(Option<CompressionIsometry>, Vec<DVector<Complex64>>)> = Vec::new();
    let state_kernel = spectral_summary(s.matrix(), rank_tol)?.kernel_basis;
    blocks.push((None, state_kernel));
    for k in 1..=s.num_bipartitions() {
        let iso = compression_isometry(n, k)?;
        let view = view_with_isometry(s.matrix(), &iso)?;
        let kernel = spectral_summary(view.matrix(), rank_tol)?.kernel_basis;
        blocks.push((Some(iso), kernel));
    }

    let total_rows: usize = blocks
        .iter()
        .map(|(iso, kernel)| {
            let d = match iso {
                Some(iso) => (iso.k() + 1) * (n - iso.k() + 1),
                None => dim,
            };
            2 * d * kernel.len()
        })
        .sum();
    let mut r = DMatrix::zeros(total_rows, d2);

    // complex coefficient of E_{n n'} at output component `comp`
    let mut base_row = 0;
    for (iso, kernel) in &blocks {
        let d = match iso {
            Some(iso) => (iso.k() + 1) * (n - iso.k() + 1),
            None => dim,
        };
        for psi in kernel {
            let coeff = |nn: usize, np: usize, comp: usize| -> Complex64 {
                match iso {
                    None => {
                        if comp == nn {
                            psi[np]
                        } else {
                            c64(0.0, 0.0)
                        }
                    }
                    Some(iso) => {
                        let cols = n - iso.k() + 1;
                        let vc = ViewConstraint { iso, psi };
                        vc.coefficient(nn, np, comp / cols, comp % cols)
                    }
                }
            };
            for comp in 0..d {
                let re_row = base_row + 2 * comp;
                let im_row = re_row + 1;
                // diagonal parameters
                for p in 0..dim {
                    let w = coeff(p, p, comp);
                    r[(re_row, p)] = w.re;
                    r[(im_row, p)] = w.im;
                }
                // off-diagonal parameters
                let mut idx = dim;
                for i in 0..dim {
                    for j in (i + 1)..dim {
                        let wij = coeff(i, j, comp);
                        let wji = coeff(j, i, comp);
                        let wre = (wij + wji) * sqrt_half;
                        let wim = (wij - wji) * c64(0.0, sqrt_half);
                        r[(re_row, idx)] = wre.re;
                        r[(im_row, idx)] = wre.im;
                        r[(re_row, idx + 1)] = wim.re;
                        r[(im_row, idx + 1)] = wim.im;
                        idx += 2;
                    }
                }
            }
            base_row += 2 * d;
        }
    }
    Ok(r)
}

/// Orthonormal basis of the numerical nullspace of `r` (dimension-`d2`
/// parameter space). Zero rows mean an unconstrained space.
fn nullspace_basis(r: &DMatrix<f64>, d2: usize, tol: f64) -> Vec<DVector<f64>> {
    if r.nrows() == 0 {
        return (0..d2)
            .map(|i| {
                let mut v = DVector::zeros(d2);
                v[i] = 1.0;
                v
            })
            .collect();
    }
    // pad with zero rows so the thin SVD returns the complete V factor
    let work = if r.nrows() < d2 {
        let mut padded = DMatrix::zeros(d2, d2);
        padded.view_mut((0, 0), (r.nrows(), d2)).copy_from(r);
        padded
    } else {
        r.clone()
    };
    let svd = work.svd(false, true);
    let v_t = svd.v_t.expect("V requested");
    let sigma_max = svd.singular_values.iter().copied().fold(0.0_f64, f64::max);
    let cut = tol * sigma_max.max(1.0);
    let mut basis = Vec::new();
    for (i, sigma) in svd.singular_values.iter().enumerate() {
        if *sigma <= cut {
            let v = v_t.row(i).transpose();
            // guard against mis-paired singular triplets
            debug_assert!((r * &v).norm() <= cut * 10.0 + 1e-12);
            basis.push(v);
        }
    }
    basis
}

/// Dimension of the solution space of the kernel constraint system.
///
/// `1` means the state itself is the only solution, i.e. the state is
/// extremal.
pub fn constraint_nullity(s: &SymmetricState, rank_tol: f64) -> Result<usize> {
    let r = build_constraint_system(s, rank_tol)?;
    Ok(nullspace_basis(&r, param_count(s.dim()), rank_tol).len())
}

fn draw_from_nullspace(
    basis: &[DVector<f64>],
    state_params: &DVector<f64>,
    rng: &mut impl Rng,
) -> Option<HermitianDirection> {
    let dim_sq = state_params.len();
    let dim = (dim_sq as f64).sqrt().round() as usize;
    let rho_hat = state_params / state_params.norm();
    for _ in 0..16 {
        let mut v = DVector::zeros(dim_sq);
        for b in basis {
            let c: f64 = rng.sample(StandardNormal);
            v += b * c;
        }
        let overlap = v.dot(&rho_hat);
        v -= &rho_hat * overlap;
        let norm = v.norm();
        if norm > 1e-8 {
            v /= norm;
            let matrix = params_to_hermitian(&v, dim);
            let trace = (0..dim).map(|i| v[i]).sum();
            return Some(HermitianDirection { matrix, trace });
        }
    }
    None
}

/// Draws a Hermitian direction from the constraint nullspace, or reports
/// extremality.
///
/// Returns `None` iff the nullity is exactly 1 (the state is extremal).
/// The returned direction is Frobenius-normalized and Hilbert-Schmidt
/// orthogonal to the state.
pub fn find_direction(
    s: &SymmetricState,
    rng_seed: u64,
    rank_tol: f64,
) -> Result<Option<HermitianDirection>> {
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    find_direction_with_rng(s, &mut rng, rank_tol)
}

/// [`find_direction`] with a caller-managed generator.
pub fn find_direction_with_rng(
    s: &SymmetricState,
    rng: &mut impl Rng,
    rank_tol: f64,
) -> Result<Option<HermitianDirection>> {
    let r = build_constraint_system(s, rank_tol)?;
    let basis = nullspace_basis(&r, param_count(s.dim()), rank_tol);
    match basis.len() {
        0 => Err(Error::Internal(
            "constraint system lost its trivial solution (the state itself)".into(),
        )),
        1 => Ok(None),
        _ => {
            let p = hermitian_to_params(s.matrix());
            draw_from_nullspace(&basis, &p, rng)
                .map(Some)
                .ok_or_else(|| Error::Internal("nullspace sampling degenerated".into()))
        }
    }
}

/// One accepted step of the eigenvalue line search.
#[derive(Debug, Clone)]
pub struct LineStep {
    pub state: SymmetricState,
    pub x_star: f64,
    /// View whose eigenvalue crossing stopped the walk (0 = the state).
    pub dropped_view: usize,
    /// All views whose rank decreased; usually just `dropped_view`,
    /// more in the measure-zero simultaneous-crossing case.
    pub dropped_views: Vec<usize>,
}

/// Matrices of the state and of the direction in every view, so the
/// pencil `(1 + x tr h) V_rho - x V_h` can be probed cheaply.
struct LinePencil {
    rho_views: Vec<DMatrix<Complex64>>,
    h_views: Vec<DMatrix<Complex64>>,
    tr_h: f64,
}

impl LinePencil {
    fn build(s: &SymmetricState, h: &HermitianDirection) -> Result<Self> {
        let n = s.n_qubits();
        let mut rho_views = vec![s.matrix().clone()];
        let mut h_views = vec![h.matrix().clone()];
        for k in 1..=s.num_bipartitions() {
            let iso = compression_isometry(n, k)?;
            rho_views.push(view_with_isometry(s.matrix(), &iso)?.matrix().clone());
            h_views.push(view_with_isometry(h.matrix(), &iso)?.matrix().clone());
        }
        Ok(Self {
            rho_views,
            h_views,
            tr_h: h.trace(),
        })
    }

    fn eigenvalues_at(&self, view: usize, x: f64) -> Vec<f64> {
        let m = self.rho_views[view].scale(1.0 + x * self.tr_h) - self.h_views[view].scale(x);
        crate::eigen::hermitian_eigenvalues(&m)
    }

    fn views(&self) -> usize {
        self.rho_views.len()
    }
}

/// The state on the line at parameter `x`, hermitized and renormalized.
pub fn line_state(s: &SymmetricState, h: &HermitianDirection, x: f64) -> SymmetricState {
    let m = s.matrix().scale(1.0 + x * h.trace()) - h.matrix().scale(x);
    let state = SymmetricState::from_hermitized(s.n_qubits(), &m);
    state.renormalized().unwrap_or(state)
}

/// Walks `rho(x) = (1 + x tr h) rho - x h` to the first boundary
/// crossing and returns the state there.
///
/// The crossing is bracketed by doubling from `opts.probe_x` (the
/// positive direction first, the negative one as fallback; the sign of a
/// random direction carries no information), bisected to
/// `opts.bisect_width`, then polished by secant iteration so the crossing
/// eigenvalue parks at zero instead of at the detection threshold. The
/// result must lower at least one rank, raise none, and stay PPT;
/// otherwise the direction is reported as degenerate so the caller can
/// redraw.
pub fn line_search_step(
    s: &SymmetricState,
    h: &HermitianDirection,
    opts: &SearchOpts,
) -> Result<LineStep> {
    let pencil = LinePencil::build(s, h)?;
    let views = pencil.views();
    let baseline: Vec<usize> = (0..views)
        .map(|v| {
            pencil
                .eigenvalues_at(v, 0.0)
                .iter()
                .filter(|&&e| e < -opts.cross_tol)
                .count()
        })
        .collect();

    // deepest view whose count of sub-threshold eigenvalues grew
    let crossed = |x: f64| -> Option<usize> {
        let mut worst: Option<(usize, f64)> = None;
        for v in 0..views {
            let eig = pencil.eigenvalues_at(v, x);
            let count = eig.iter().filter(|&&e| e < -opts.cross_tol).count();
            if count > baseline[v] {
                let depth = -eig[0];
                if worst.is_none_or(|(_, d)| depth > d) {
                    worst = Some((v, depth));
                }
            }
        }
        worst.map(|(v, _)| v)
    };

    let bracket = |sign: f64| -> Option<(f64, f64, usize)> {
        let mut lo = 0.0;
        let mut hi = opts.probe_x;
        while hi <= opts.max_x {
            if let Some(view) = crossed(sign * hi) {
                let mut lo = lo;
                let mut hi = hi;
                let mut view = view;
                while hi - lo > opts.bisect_width {
                    let mid = 0.5 * (lo + hi);
                    match crossed(sign * mid) {
                        Some(v) => {
                            hi = mid;
                            view = v;
                        }
                        None => lo = mid,
                    }
                }
                return Some((lo, hi, view));
            }
            lo = hi;
            hi *= 2.0;
        }
        None
    };

    let (sign, lo, hi, view) = match bracket(1.0) {
        Some((lo, hi, view)) => (1.0, lo, hi, view),
        None => match bracket(-1.0) {
            Some((lo, hi, view)) => (-1.0, lo, hi, view),
            None => return Err(Error::DegenerateDirection(opts.max_x)),
        },
    };

    // secant polish: park the crossing eigenvalue at zero rather than at
    // the detection threshold, so it cannot confuse later crossings
    let g = |x: f64| -> f64 { pencil.eigenvalues_at(view, sign * x)[baseline[view]] };
    let mut x_star = hi;
    let (mut x0, mut g0) = (lo, g(lo));
    let (mut x1, mut g1) = (hi, g(hi));
    for _ in 0..4 {
        if (g1 - g0).abs() < 1e-300 {
            break;
        }
        let x2 = x1 - g1 * (x1 - x0) / (g1 - g0);
        if !x2.is_finite() || x2 <= 0.0 {
            break;
        }
        let g2 = g(x2);
        if g2.abs() <= 0.2 * opts.cross_tol {
            x_star = x2;
            break;
        }
        (x0, g0) = (x1, g1);
        (x1, g1) = (x2, g2);
    }

    let new_state = line_state(s, h, sign * x_star);
    let before = rank_profile(s, opts.rank_tol)?;
    let after = rank_profile(&new_state, opts.rank_tol)?;
    let mut dropped = Vec::new();
    for (k, (a, b)) in after.ranks().iter().zip(before.ranks()).enumerate() {
        if a > b {
            return Err(Error::DegenerateDirection(x_star));
        }
        if a < b {
            dropped.push(k);
        }
    }
    if dropped.is_empty() {
        return Err(Error::DegenerateDirection(x_star));
    }
    if !is_ppt(&new_state, crate::DEFAULT_RANK_TOL)?.is_ppt {
        return Err(Error::DegenerateDirection(x_star));
    }
    let primary = if dropped.contains(&view) {
        view
    } else {
        dropped[0]
    };
    Ok(LineStep {
        state: new_state,
        x_star: sign * x_star,
        dropped_view: primary,
        dropped_views: dropped,
    })
}

/// How a search run ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchStatus {
    /// The constraint system pinned the state: nullity one.
    Extremal,
    /// Every targeted rank reached its requested value first.
    TargetReached,
    /// Too many degenerate directions in a row.
    AbortedDegenerate,
    /// Step budget exhausted.
    AbortedStepLimit,
}

/// One accepted step in a trajectory.
#[derive(Debug, Clone)]
pub struct TrajectoryStep {
    /// Profile after the step.
    pub profile: RankProfile,
    pub x_star: f64,
    pub dropped_view: usize,
    /// Solution-space dimension seen when the direction was drawn.
    pub nullity: usize,
}

/// Full record of one search run.
#[derive(Debug, Clone)]
pub struct SearchTrajectory {
    pub steps: Vec<TrajectoryStep>,
    pub terminal: SymmetricState,
    pub terminal_profile: RankProfile,
    pub terminal_extremal: bool,
    pub terminal_classification: Classification,
    pub seed: u64,
    pub status: SearchStatus,
}

/// Runs the rank-lowering walk from `initial` until an extremal state.
///
/// The default initial state is the maximally mixed one (every rank
/// maximal; low initial ranks cannot reach entangled terminals). A
/// rank-one terminal is a pure product state and thus separable; any
/// other extremal terminal is entangled.
pub fn run_to_extremal(
    initial: &SymmetricState,
    rng_seed: u64,
    opts: &SearchOpts,
) -> Result<SearchTrajectory> {
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    run_to_extremal_with_rng(initial, &mut rng, rng_seed, opts)
}

/// [`run_to_extremal`] with a caller-managed generator (campaigns key
/// one stream per run index).
pub fn run_to_extremal_with_rng(
    initial: &SymmetricState,
    rng: &mut impl Rng,
    seed_label: u64,
    opts: &SearchOpts,
) -> Result<SearchTrajectory> {
    let n = initial.n_qubits();
    let d2 = param_count(initial.dim());
    let max_steps = opts.max_steps.unwrap_or_else(|| {
        crate::spectra::max_rank_profile(n)
            .ranks()
            .iter()
            .sum::<usize>()
            + 8
    });

    let mut state = initial.clone();
    let mut profile = rank_profile(&state, opts.rank_tol)?;
    let mut steps: Vec<TrajectoryStep> = Vec::new();
    let status;

    loop {
        if steps.len() >= max_steps {
            status = SearchStatus::AbortedStepLimit;
            break;
        }
        let r = build_constraint_system(&state, opts.rank_tol)?;
        let basis = nullspace_basis(&r, d2, opts.rank_tol);
        let nullity = basis.len();
        if nullity == 0 {
            return Err(Error::Internal(
                "constraint system lost its trivial solution (the state itself)".into(),
            ));
        }
        if nullity == 1 {
            status = SearchStatus::Extremal;
            break;
        }
        if let Some(target) = &opts.target_profile {
            let any_above = profile
                .ranks()
                .iter()
                .zip(target.ranks())
                .any(|(have, want)| have > want);
            if !any_above {
                status = SearchStatus::TargetReached;
                break;
            }
        }

        let state_params = hermitian_to_params(state.matrix());
        let mut degenerate_left = opts.max_degenerate_redraws;
        let mut target_left = opts.max_target_redraws;
        let mut accepted: Option<LineStep> = None;
        while degenerate_left > 0 && target_left > 0 {
            let Some(h) = draw_from_nullspace(&basis, &state_params, rng) else {
                degenerate_left -= 1;
                continue;
            };
            match line_search_step(&state, &h, opts) {
                Ok(step) => {
                    if let Some(target) = &opts.target_profile {
                        let on_target = step
                            .dropped_views
                            .iter()
                            .all(|&k| profile.rank(k) > target.rank(k));
                        if !on_target {
                            target_left -= 1;
                            continue;
                        }
                    }
                    accepted = Some(step);
                    break;
                }
                Err(Error::DegenerateDirection(_)) => {
                    degenerate_left -= 1;
                }
                Err(e) => return Err(e),
            }
        }
        let Some(step) = accepted else {
            status = SearchStatus::AbortedDegenerate;
            break;
        };

        state = step.state;
        profile = rank_profile(&state, opts.rank_tol)?;
        steps.push(TrajectoryStep {
            profile: profile.clone(),
            x_star: step.x_star,
            dropped_view: step.dropped_view,
            nullity,
        });
    }

    let terminal_classification = classify_ranks(&profile, n);
    Ok(SearchTrajectory {
        steps,
        terminal: state,
        terminal_profile: profile,
        terminal_extremal: status == SearchStatus::Extremal,
        terminal_classification,
        seed: seed_label,
        status,
    })
}
