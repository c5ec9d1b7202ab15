//! Eigenstructure, numerical rank, and rank profiles.
//!
//! One tolerance policy drives every rank decision in the crate: an
//! eigenvalue counts toward the rank iff `|lambda| > tol * max(|lambda|_max, 1)`.
//! Near-threshold eigenvalues (within a factor 10 of the cut) are
//! reported so callers can flag borderline decisions.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::dicke::{partial_transpose_view, SymmetricState};
use crate::{Error, Result};

/// Eigenvalues, numerical rank, and kernel basis of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct SpectralSummary {
    /// Eigenvalues in descending order.
    pub eigenvalues: Vec<f64>,
    /// Number of eigenvalues above the rank cut.
    pub rank: usize,
    /// Orthonormal eigenvectors spanning the numerical kernel.
    pub kernel_basis: Vec<DVector<Complex64>>,
    /// Eigenvectors carrying the rank part, paired with their eigenvalues.
    pub range_basis: Vec<(f64, DVector<Complex64>)>,
    /// Absolute threshold actually used for the rank cut.
    pub tolerance_used: f64,
    /// Eigenvalues within a factor 10 of the cut on either side.
    pub borderline: Vec<f64>,
}

impl SpectralSummary {
    pub fn kernel_dim(&self) -> usize {
        self.kernel_basis.len()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        *self.eigenvalues.last().expect("nonempty spectrum")
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues[0]
    }

    /// Moore-Penrose pseudo-inverse built from the rank part.
    pub fn pseudo_inverse(&self) -> DMatrix<Complex64> {
        let d = self.eigenvalues.len();
        let mut out = DMatrix::zeros(d, d);
        for (lambda, v) in &self.range_basis {
            out += (v * v.adjoint()).scale(1.0 / lambda);
        }
        out
    }
}

/// Hermitian eigendecomposition with the uniform rank policy.
///
/// Fails if the input deviates from Hermiticity by more than `1e-10`
/// relative to its largest entry. Uses the Hermitian-specialized solver,
/// so eigenvalues are real and eigenvectors orthonormal.
pub fn spectral_summary(m: &DMatrix<Complex64>, rel_tol: f64) -> Result<SpectralSummary> {
    let d = m.nrows();
    if d == 0 || m.ncols() != d {
        return Err(Error::InvalidInput(
            "matrix must be square and nonempty".into(),
        ));
    }
    let scale = m.iter().map(|z| z.norm()).fold(1.0_f64, f64::max);
    let mut dev: f64 = 0.0;
    for i in 0..d {
        for j in 0..=i {
            dev = dev.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    if dev > 1e-10 * scale {
        return Err(Error::InvalidInput(format!(
            "matrix is not Hermitian: max deviation {dev:.3e}"
        )));
    }
    let herm = (m + m.adjoint()).scale(0.5);
    let eig = crate::eigen::hermitian_eigen(&herm, true);
    let vectors = eig.eigenvectors.expect("vectors requested");

    let lambda_max = eig
        .eigenvalues
        .iter()
        .map(|e| e.abs())
        .fold(0.0_f64, f64::max);
    let tol = rel_tol * lambda_max.max(1.0);

    let mut eigenvalues = Vec::with_capacity(d);
    let mut kernel_basis = Vec::new();
    let mut range_basis = Vec::new();
    let mut borderline = Vec::new();
    // descending order
    for i in (0..d).rev() {
        let lambda = eig.eigenvalues[i];
        eigenvalues.push(lambda);
        let v = vectors.column(i).into_owned();
        if lambda.abs() > tol {
            range_basis.push((lambda, v));
        } else {
            kernel_basis.push(v);
        }
        if lambda.abs() > tol / 10.0 && lambda.abs() <= tol * 10.0 {
            borderline.push(lambda);
        }
    }
    Ok(SpectralSummary {
        rank: range_basis.len(),
        eigenvalues,
        kernel_basis,
        range_basis,
        tolerance_used: tol,
        borderline,
    })
}

/// The tuple `(r(rho), r(rho^T1), ..., r(rho^T_floor(n/2)))`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RankProfile(Vec<usize>);

impl RankProfile {
    pub fn new(ranks: Vec<usize>) -> Self {
        Self(ranks)
    }

    pub fn ranks(&self) -> &[usize] {
        &self.0
    }

    /// Rank of the state itself.
    pub fn state_rank(&self) -> usize {
        self.0[0]
    }

    /// Rank of the `k`-th partial transposition (`k >= 1`), or of the
    /// state for `k = 0`.
    pub fn rank(&self, k: usize) -> usize {
        self.0[k]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Parses a dash- or comma-separated list such as `5-7-8` or `5,7,8`.
    pub fn parse(text: &str) -> Result<Self> {
        let ranks: std::result::Result<Vec<usize>, _> = text
            .split(['-', ','])
            .map(|t| t.trim().parse::<usize>())
            .collect();
        match ranks {
            Ok(v) if !v.is_empty() => Ok(Self(v)),
            _ => Err(Error::InvalidInput(format!(
                "cannot parse rank profile '{text}'"
            ))),
        }
    }
}

impl std::fmt::Display for RankProfile {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|r| r.to_string()).collect();
        write!(f, "{}", parts.join("-"))
    }
}

/// Ranks of the state and of every inequivalent partial transposition.
pub fn rank_profile(s: &SymmetricState, rel_tol: f64) -> Result<RankProfile> {
    let mut ranks = Vec::with_capacity(s.num_bipartitions() + 1);
    ranks.push(spectral_summary(s.matrix(), rel_tol)?.rank);
    for k in 1..=s.num_bipartitions() {
        let view = partial_transpose_view(s, k)?;
        ranks.push(spectral_summary(view.matrix(), rel_tol)?.rank);
    }
    Ok(RankProfile(ranks))
}

/// The componentwise-maximal profile: entry 0 is `n+1`, entry `k` is
/// `(k+1)(n-k+1)`.
pub fn max_rank_profile(n: usize) -> RankProfile {
    let mut ranks = vec![n + 1];
    for k in 1..=n / 2 {
        ranks.push((k + 1) * (n - k + 1));
    }
    RankProfile(ranks)
}

/// Outcome of a PPT check: the most negative eigenvalue seen across all
/// views and the bipartition it occurred in.
#[derive(Debug, Clone, Copy)]
pub struct PptCheck {
    pub is_ppt: bool,
    pub min_eigenvalue: f64,
    pub witness_k: usize,
}

/// Tests positivity of every partial transposition `k = 1..=floor(n/2)`.
///
/// Passes iff each view's smallest eigenvalue is `>= -rel_tol`.
pub fn is_ppt(s: &SymmetricState, rel_tol: f64) -> Result<PptCheck> {
    let mut min_eig = f64::INFINITY;
    let mut witness_k = 1;
    for k in 1..=s.num_bipartitions() {
        let view = partial_transpose_view(s, k)?;
        let low = crate::eigen::min_eigenvalue(view.matrix());
        if low < min_eig {
            min_eig = low;
            witness_k = k;
        }
    }
    if s.num_bipartitions() == 0 {
        min_eig = crate::eigen::min_eigenvalue(s.matrix());
        witness_k = 0;
    }
    Ok(PptCheck {
        is_ppt: min_eig >= -rel_tol,
        min_eigenvalue: min_eig,
        witness_k,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dicke::ProductVector;
    use crate::DEFAULT_RANK_TOL;
    use approx::assert_abs_diff_eq;
    use num_complex::Complex64;

    fn c64(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_summary() {
        let m = DMatrix::from_diagonal_element(5, 5, c64(0.2, 0.0));
        let sum = spectral_summary(&m, DEFAULT_RANK_TOL).unwrap();
        assert_eq!(sum.rank, 5);
        assert_eq!(sum.kernel_dim(), 0);
    }

    #[test]
    fn rank_one_projector_summary() {
        let mut m = DMatrix::zeros(5, 5);
        m[(0, 0)] = c64(1.0, 0.0);
        let sum = spectral_summary(&m, DEFAULT_RANK_TOL).unwrap();
        assert_eq!(sum.rank, 1);
        assert_eq!(sum.kernel_dim(), 4);
        for v in &sum.kernel_basis {
            assert!((&m * v).norm() <= 10.0 * sum.tolerance_used);
        }
    }

    #[test]
    fn triplet_view_summary() {
        let s = SymmetricState::pure_dicke(2, 1).unwrap();
        let view = partial_transpose_view(&s, 1).unwrap();
        let sum = spectral_summary(view.matrix(), DEFAULT_RANK_TOL).unwrap();
        assert_eq!(sum.rank, 4);
        assert_eq!(sum.kernel_dim(), 0);
        assert_abs_diff_eq!(sum.min_eigenvalue(), -0.5, epsilon = 1e-12);
    }

    #[test]
    fn non_hermitian_rejected() {
        let mut m = DMatrix::zeros(3, 3);
        m[(0, 1)] = c64(1.0, 0.0);
        assert!(spectral_summary(&m, DEFAULT_RANK_TOL).is_err());
    }

    #[test]
    fn ppt_triplet_fails_with_witness() {
        let s = SymmetricState::pure_dicke(2, 1).unwrap();
        let check = is_ppt(&s, DEFAULT_RANK_TOL).unwrap();
        assert!(!check.is_ppt);
        assert_eq!(check.witness_k, 1);
        assert_abs_diff_eq!(check.min_eigenvalue, -0.5, epsilon = 1e-12);
    }

    #[test]
    fn ppt_maximally_mixed_and_product_mixture() {
        let s = SymmetricState::maximally_mixed(4);
        assert!(is_ppt(&s, DEFAULT_RANK_TOL).unwrap().is_ppt);

        let plus = ProductVector::from_alpha(c64(1.0, 0.0));
        let minus = ProductVector::from_alpha(c64(-1.0, 0.0));
        let mix = SymmetricState::mixture(4, &[(0.5, plus), (0.5, minus)]).unwrap();
        assert!(is_ppt(&mix, DEFAULT_RANK_TOL).unwrap().is_ppt);
    }

    #[test]
    fn profile_examples() {
        let s = SymmetricState::maximally_mixed(4);
        let p = rank_profile(&s, DEFAULT_RANK_TOL).unwrap();
        assert_eq!(p.ranks(), &[5, 8, 9]);

        let s = SymmetricState::maximally_mixed(6);
        let p = rank_profile(&s, DEFAULT_RANK_TOL).unwrap();
        assert_eq!(p.ranks(), &[7, 12, 15, 16]);

        let e = ProductVector::from_alpha(c64(0.4, -0.9));
        for n in [4, 5, 7] {
            let s = SymmetricState::pure_product(n, &e);
            let p = rank_profile(&s, DEFAULT_RANK_TOL).unwrap();
            assert!(p.ranks().iter().all(|&r| r == 1));
        }
    }

    #[test]
    fn max_profiles() {
        assert_eq!(max_rank_profile(4).ranks(), &[5, 8, 9]);
        assert_eq!(max_rank_profile(5).ranks(), &[6, 10, 12]);
        assert_eq!(max_rank_profile(2).ranks(), &[3, 4]);
    }

    #[test]
    fn profile_display_and_parse() {
        let p = RankProfile::new(vec![5, 7, 8]);
        assert_eq!(p.to_string(), "5-7-8");
        assert_eq!(RankProfile::parse("5-7-8").unwrap(), p);
        assert_eq!(RankProfile::parse("5,7,8").unwrap(), p);
        assert!(RankProfile::parse("a,b").is_err());
    }

    #[test]
    fn rank_kernel_dims_sum_to_view_dim() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for n in [4usize, 6] {
            let s = crate::sampling::random_psd_state(n, 3, &mut rng);
            for k in 1..=n / 2 {
                let view = partial_transpose_view(&s, k).unwrap();
                let sum = spectral_summary(view.matrix(), DEFAULT_RANK_TOL).unwrap();
                assert_eq!(sum.rank + sum.kernel_dim(), (k + 1) * (n - k + 1));
            }
        }
    }
}
