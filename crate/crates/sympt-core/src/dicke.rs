//! Compressed Dicke-basis representation of symmetric states.
//!
//! An `n`-qubit permutation-symmetric operator is stored as an
//! `(n+1) x (n+1)` matrix over the normalized Dicke states, where basis
//! index `m` counts the number of `1`s. All basis changes used by the
//! rest of the crate live here: the bipartite compression isometries,
//! the partial-transposition views they induce, and the half-system
//! compression map that sends `(1,a)^{(x)n}` to `(1,a^ceil(n/2)) (x) (1,a)^{(x)floor(n/2)}`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::binom::{binomial_f, sqrt_binomial};
use crate::{Error, Result};

/// Entrywise Hermiticity tolerance enforced at construction.
pub const HERMITICITY_TOL: f64 = 1e-12;
/// Trace deviation tolerated for density states.
pub const TRACE_TOL: f64 = 1e-12;
/// Most negative eigenvalue tolerated when validating a density state.
pub const PSD_TOL: f64 = 1e-9;
/// Largest qubit count accepted by [`expand_to_full`].
pub const MAX_FULL_QUBITS: usize = 12;

fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// An `n`-qubit symmetric operator in the compressed Dicke representation.
///
/// The wrapped matrix is Hermitian by construction (validated to
/// [`HERMITICITY_TOL`] and then exactly symmetrized). Density states are
/// additionally trace-one and positive semidefinite within tolerance;
/// direction-like matrices produced by the extremal search relax those
/// two conditions.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricState {
    n: usize,
    matrix: DMatrix<Complex64>,
}

impl SymmetricState {
    /// Wraps a Hermitian `(n+1) x (n+1)` matrix.
    pub fn new(n: usize, matrix: DMatrix<Complex64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("need at least one qubit".into()));
        }
        let d = n + 1;
        if matrix.nrows() != d || matrix.ncols() != d {
            return Err(Error::InvalidInput(format!(
                "matrix is {}x{}, expected {d}x{d} for {n} qubits",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let mut dev: f64 = 0.0;
        for i in 0..d {
            for j in 0..d {
                dev = dev.max((matrix[(i, j)] - matrix[(j, i)].conj()).norm());
            }
        }
        if dev > HERMITICITY_TOL * scale_of(&matrix) {
            return Err(Error::InvalidInput(format!(
                "matrix is not Hermitian: max deviation {dev:.3e}"
            )));
        }
        let herm = hermitize(&matrix);
        Ok(Self { n, matrix: herm })
    }

    /// Wraps a matrix and additionally validates the density-state
    /// invariants (unit trace, PSD within tolerance).
    pub fn new_density(n: usize, matrix: DMatrix<Complex64>) -> Result<Self> {
        let s = Self::new(n, matrix)?;
        let tr = s.trace();
        if (tr - 1.0).abs() > TRACE_TOL {
            return Err(Error::InvalidInput(format!(
                "trace {tr:.17e} differs from 1 beyond tolerance"
            )));
        }
        let min = crate::eigen::min_eigenvalue(&s.matrix);
        if min < -PSD_TOL {
            return Err(Error::InvalidInput(format!(
                "matrix has eigenvalue {min:.3e}, not PSD within tolerance"
            )));
        }
        Ok(s)
    }

    /// The maximally mixed symmetric state, `identity / (n+1)`.
    ///
    /// This is the projector onto the symmetric subspace normalized to
    /// unit trace; it has every rank maximal.
    pub fn maximally_mixed(n: usize) -> Self {
        let d = n + 1;
        let m = DMatrix::from_diagonal_element(d, d, c64(1.0 / d as f64, 0.0));
        Self { n, matrix: m }
    }

    /// Projector onto the normalized product state `e^{(x)n}`.
    pub fn pure_product(n: usize, e: &ProductVector) -> Self {
        let v = e.normalized_coords(n);
        let m = &v * v.adjoint();
        Self {
            n,
            matrix: hermitize(&m),
        }
    }

    /// Projector onto the normalized Dicke state with `m` ones.
    pub fn pure_dicke(n: usize, m: usize) -> Result<Self> {
        if m > n {
            return Err(Error::InvalidInput(format!(
                "Dicke index {m} exceeds qubit count {n}"
            )));
        }
        let d = n + 1;
        let mut mat = DMatrix::zeros(d, d);
        mat[(m, m)] = c64(1.0, 0.0);
        Ok(Self { n, matrix: mat })
    }

    /// Convex mixture of product projectors. Weights are renormalized to
    /// unit sum.
    pub fn mixture(n: usize, terms: &[(f64, ProductVector)]) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::InvalidInput(
                "mixture needs at least one term".into(),
            ));
        }
        let total: f64 = terms.iter().map(|(w, _)| *w).sum();
        if total <= 0.0 {
            return Err(Error::InvalidInput(
                "mixture weights must sum to > 0".into(),
            ));
        }
        let d = n + 1;
        let mut m = DMatrix::zeros(d, d);
        for (w, e) in terms {
            if *w < 0.0 {
                return Err(Error::InvalidInput(
                    "mixture weights must be nonnegative".into(),
                ));
            }
            let v = e.normalized_coords(n);
            m += (&v * v.adjoint()).scale(*w / total);
        }
        Ok(Self {
            n,
            matrix: hermitize(&m),
        })
    }

    pub(crate) fn from_hermitized(n: usize, matrix: &DMatrix<Complex64>) -> Self {
        Self {
            n,
            matrix: hermitize(matrix),
        }
    }

    /// Number of qubits.
    pub fn n_qubits(&self) -> usize {
        self.n
    }

    /// Dimension of the compressed representation, `n + 1`.
    pub fn dim(&self) -> usize {
        self.n + 1
    }

    /// Number of inequivalent partial transpositions, `floor(n/2)`.
    pub fn num_bipartitions(&self) -> usize {
        self.n / 2
    }

    /// The compressed matrix.
    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    /// Real part of the trace (the imaginary part is zero by Hermiticity).
    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    /// Returns a copy rescaled to unit trace.
    pub fn renormalized(&self) -> Result<Self> {
        let tr = self.trace();
        if tr.abs() < 1e-300 {
            return Err(Error::InvalidInput(
                "cannot renormalize a traceless matrix".into(),
            ));
        }
        Ok(Self {
            n: self.n,
            matrix: self.matrix.scale(1.0 / tr),
        })
    }
}

fn hermitize(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    (m + m.adjoint()).scale(0.5)
}

fn scale_of(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(1.0_f64, f64::max)
}

/// A one-qubit amplitude pair `(a, b)`, not both zero.
///
/// The canonical form is `(1, alpha)`; the pole of the Riemann sphere
/// (`alpha -> infinity`) is represented as `(0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProductVector {
    a: Complex64,
    b: Complex64,
}

impl ProductVector {
    pub fn new(a: Complex64, b: Complex64) -> Result<Self> {
        if a.norm_sqr() + b.norm_sqr() == 0.0 {
            return Err(Error::InvalidInput(
                "product vector amplitudes are both zero".into(),
            ));
        }
        Ok(Self { a, b })
    }

    /// `(1, alpha)`.
    pub fn from_alpha(alpha: Complex64) -> Self {
        Self {
            a: c64(1.0, 0.0),
            b: alpha,
        }
    }

    /// `(0, 1)`, the point at infinity.
    pub fn pole() -> Self {
        Self {
            a: c64(0.0, 0.0),
            b: c64(1.0, 0.0),
        }
    }

    pub fn amplitudes(&self) -> (Complex64, Complex64) {
        (self.a, self.b)
    }

    /// `b / a` when `a` is nonzero.
    pub fn alpha(&self) -> Option<Complex64> {
        if self.a.norm_sqr() == 0.0 {
            None
        } else {
            Some(self.b / self.a)
        }
    }

    /// Whether this vector is (numerically) the pole `(0, 1)`.
    pub fn is_pole(&self) -> bool {
        self.a.norm() <= 1e-14 * self.b.norm()
    }

    /// Dicke coordinates of `e^{(x)n}`, scaled to unit norm.
    pub fn normalized_coords(&self, n: usize) -> DVector<Complex64> {
        let mut v = product_state_coords(self, n, 0).expect("k = 0 is always valid");
        let norm = v.norm();
        v /= c64(norm, 0.0);
        v
    }

    /// Coordinates of the partial conjugate of `e^{(x)n}` in the
    /// bipartite Dicke basis of the `k`-view, scaled to unit norm.
    pub fn normalized_conjugated_coords(&self, n: usize, k: usize) -> Result<DVector<Complex64>> {
        let mut v = product_state_coords(self, n, k)?;
        let norm = v.norm();
        v /= c64(norm, 0.0);
        Ok(v)
    }
}

/// Coordinates of `e^{(x)n}` with the first `conjugate_first_k`
/// tensor factors conjugated.
///
/// For `conjugate_first_k = 0` this is the plain Dicke expansion: entry
/// `m` equals `sqrt(C(n,m)) a^{n-m} b^m`. For `k >= 1` the result lives
/// in the `(k+1)(n-k+1)`-dimensional product basis of two Dicke bases
/// (the `k`-qubit factor first, row-major), matching the basis of
/// [`partial_transpose_view`] for the same `k`. Either way the squared
/// norm is `(|a|^2 + |b|^2)^n`.
pub fn product_state_coords(
    e: &ProductVector,
    n: usize,
    conjugate_first_k: usize,
) -> Result<DVector<Complex64>> {
    let k = conjugate_first_k;
    if k > n / 2 {
        return Err(Error::InvalidInput(format!(
            "conjugate_first_k = {k} exceeds floor({n}/2)"
        )));
    }
    let (a, b) = e.amplitudes();
    if a.norm_sqr() + b.norm_sqr() == 0.0 {
        return Err(Error::InvalidInput(
            "product vector amplitudes are both zero".into(),
        ));
    }
    if k == 0 {
        let mut v = DVector::zeros(n + 1);
        for m in 0..=n {
            v[m] = sqrt_binomial(n, m) * a.powu((n - m) as u32) * b.powu(m as u32);
        }
        return Ok(v);
    }
    let (ac, bc) = (a.conj(), b.conj());
    let rest = n - k;
    let mut v = DVector::zeros((k + 1) * (rest + 1));
    for i in 0..=k {
        let row = sqrt_binomial(k, i) * ac.powu((k - i) as u32) * bc.powu(i as u32);
        for j in 0..=rest {
            let col = sqrt_binomial(rest, j) * a.powu((rest - j) as u32) * b.powu(j as u32);
            v[i * (rest + 1) + j] = row * col;
        }
    }
    Ok(v)
}

/// Which binomial formula produced a validated compression isometry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IsometryVariant {
    /// `sqrt(C(n,i) C(n,j) / C(n,m))` on `i + j = m`.
    PlainBinomials,
    /// `sqrt(C(k,i) C(n-k,j) / C(n,m))` on `i + j = m`.
    FactoredBinomials,
}

/// The isometry carrying the `(n+1)`-dimensional symmetric
/// representation into the `(k+1)(n-k+1)`-dimensional bipartite
/// Dicke (x) Dicke representation.
#[derive(Debug, Clone)]
pub struct CompressionIsometry {
    n: usize,
    k: usize,
    variant: IsometryVariant,
    matrix: DMatrix<f64>,
}

impl CompressionIsometry {
    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// The formula that passed the isometry validation.
    pub fn variant(&self) -> IsometryVariant {
        self.variant
    }

    /// The `(k+1)(n-k+1) x (n+1)` matrix, row index `(i, j)` flattened as
    /// `i * (n-k+1) + j`.
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }
}

fn isometry_candidate(n: usize, k: usize, variant: IsometryVariant) -> DMatrix<f64> {
    let rows = (k + 1) * (n - k + 1);
    let mut m = DMatrix::zeros(rows, n + 1);
    for i in 0..=k {
        for j in 0..=(n - k) {
            let col = i + j;
            let num = match variant {
                IsometryVariant::PlainBinomials => binomial_f(n, i) * binomial_f(n, j),
                IsometryVariant::FactoredBinomials => binomial_f(k, i) * binomial_f(n - k, j),
            };
            m[(i * (n - k + 1) + j, col)] = (num / binomial_f(n, col)).sqrt();
        }
    }
    m
}

fn isometry_defect(m: &DMatrix<f64>) -> f64 {
    let gram = m.transpose() * m;
    let d = gram.nrows();
    let mut defect: f64 = 0.0;
    for i in 0..d {
        for j in 0..d {
            let target = if i == j { 1.0 } else { 0.0 };
            defect = defect.max((gram[(i, j)] - target).abs());
        }
    }
    defect
}

/// Builds the compression isometry for the bipartition `k | n-k`.
///
/// Two candidate entry formulas are validated against the exact isometry
/// requirement `B^T B = I` and the one that passes (the plain-binomial
/// form is tried first) is returned with its provenance recorded in
/// [`CompressionIsometry::variant`].
pub fn compression_isometry(n: usize, k: usize) -> Result<CompressionIsometry> {
    let max = n / 2;
    if k < 1 || k > max {
        return Err(Error::BipartitionOutOfRange { k, max, n });
    }
    for variant in [
        IsometryVariant::PlainBinomials,
        IsometryVariant::FactoredBinomials,
    ] {
        let m = isometry_candidate(n, k, variant);
        if isometry_defect(&m) < 1e-12 {
            return Ok(CompressionIsometry {
                n,
                k,
                variant,
                matrix: m,
            });
        }
    }
    Err(Error::Internal(format!(
        "no isometry-entry formula validated for n = {n}, k = {k}"
    )))
}

/// The matrix of a partial transposition in the bipartite Dicke basis.
///
/// `matrix` is `(k+1)(n-k+1)`-square Hermitian; the row factor of
/// dimension `k+1` is the transposed subsystem.
#[derive(Debug, Clone)]
pub struct BipartiteView {
    k: usize,
    rows_dim: usize,
    cols_dim: usize,
    matrix: DMatrix<Complex64>,
}

impl BipartiteView {
    pub fn k(&self) -> usize {
        self.k
    }

    /// Dimension of the transposed factor, `k + 1`.
    pub fn rows_dim(&self) -> usize {
        self.rows_dim
    }

    /// Dimension of the complementary factor, `n - k + 1`.
    pub fn cols_dim(&self) -> usize {
        self.cols_dim
    }

    pub fn dim(&self) -> usize {
        self.rows_dim * self.cols_dim
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }
}

/// Transposes the first (row) factor of a matrix over a product basis
/// with factor dimensions `rows_dim x cols_dim`.
pub(crate) fn transpose_row_factor(
    m: &DMatrix<Complex64>,
    rows_dim: usize,
    cols_dim: usize,
) -> DMatrix<Complex64> {
    let d = rows_dim * cols_dim;
    let mut out = DMatrix::zeros(d, d);
    for i in 0..rows_dim {
        for j in 0..cols_dim {
            for ip in 0..rows_dim {
                for jp in 0..cols_dim {
                    out[(i * cols_dim + j, ip * cols_dim + jp)] =
                        m[(ip * cols_dim + j, i * cols_dim + jp)];
                }
            }
        }
    }
    out
}

/// The partial transposition of `s` with respect to `k` qubits, computed
/// entirely in the compressed representation.
pub fn partial_transpose_view(s: &SymmetricState, k: usize) -> Result<BipartiteView> {
    let iso = compression_isometry(s.n_qubits(), k)?;
    view_with_isometry(s.matrix(), &iso)
}

/// Same as [`partial_transpose_view`] with a precomputed isometry.
pub fn view_with_isometry(
    matrix: &DMatrix<Complex64>,
    iso: &CompressionIsometry,
) -> Result<BipartiteView> {
    let n = iso.n_qubits();
    let k = iso.k();
    let b = iso.matrix();
    let bc = b.map(|x| c64(x, 0.0));
    let lifted = &bc * matrix * bc.transpose();
    let rows_dim = k + 1;
    let cols_dim = n - k + 1;
    let pt = transpose_row_factor(&lifted, rows_dim, cols_dim);
    Ok(BipartiteView {
        k,
        rows_dim,
        cols_dim,
        matrix: pt,
    })
}

/// Embeds the compressed matrix back into the full `2^n`-dimensional
/// space. Brute-force oracle; refuses `n > 12`.
///
/// Full-space basis index: qubit 0 is the most significant bit.
pub fn expand_to_full(s: &SymmetricState) -> Result<DMatrix<Complex64>> {
    let n = s.n_qubits();
    if n > MAX_FULL_QUBITS {
        return Err(Error::TooManyQubits {
            n,
            max: MAX_FULL_QUBITS,
        });
    }
    let dim = 1usize << n;
    let red = s.matrix();
    // full[a, b] = red[pop(a), pop(b)] / sqrt(C(n, pop(a)) C(n, pop(b)))
    let weights: Vec<f64> = (0..=n).map(|m| sqrt_binomial(n, m)).collect();
    let mut full = DMatrix::zeros(dim, dim);
    for a in 0..dim {
        let pa = (a as u32).count_ones() as usize;
        for b in 0..dim {
            let pb = (b as u32).count_ones() as usize;
            full[(a, b)] = red[(pa, pb)] / (weights[pa] * weights[pb]);
        }
    }
    Ok(full)
}

/// A symmetric state compressed onto `C^2 (x) C^(floor(n/2)+1)`.
///
/// Produced by [`compress_half`]; the map acts on normalized Dicke
/// coordinates by sending index `m = b * ceil(n/2) + j` to the basis pair
/// `(b, j)` with coefficient `sqrt(C(floor(n/2), j) / C(n, m))`, which is
/// exactly the linear extension of
/// `(1,a)^{(x)n} -> (1, a^ceil(n/2)) (x) (1,a)^{(x)floor(n/2)}`.
#[derive(Debug, Clone)]
pub struct CompressedHalf {
    source_qubits: usize,
    matrix: DMatrix<Complex64>,
}

impl CompressedHalf {
    pub fn source_qubits(&self) -> usize {
        self.source_qubits
    }

    /// Dimension of the symmetric factor, `floor(n/2) + 1`.
    pub fn sym_dim(&self) -> usize {
        self.source_qubits / 2 + 1
    }

    /// The `2 (floor(n/2)+1)`-square matrix, row index `(b, j)` flattened
    /// as `b * sym_dim + j`.
    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    /// Partial transpose over the qubit factor.
    pub fn partial_transpose_qubit(&self) -> DMatrix<Complex64> {
        transpose_row_factor(&self.matrix, 2, self.sym_dim())
    }

    /// Reduced state of the qubit factor (2x2).
    pub fn reduced_qubit(&self) -> DMatrix<Complex64> {
        let sd = self.sym_dim();
        let mut out = DMatrix::zeros(2, 2);
        for b in 0..2 {
            for bp in 0..2 {
                let mut acc = c64(0.0, 0.0);
                for j in 0..sd {
                    acc += self.matrix[(b * sd + j, bp * sd + j)];
                }
                out[(b, bp)] = acc;
            }
        }
        out
    }

    /// Reduced state of the symmetric factor.
    pub fn reduced_sym(&self) -> DMatrix<Complex64> {
        let sd = self.sym_dim();
        let mut out = DMatrix::zeros(sd, sd);
        for j in 0..sd {
            for jp in 0..sd {
                let mut acc = c64(0.0, 0.0);
                for b in 0..2 {
                    acc += self.matrix[(b * sd + j, b * sd + jp)];
                }
                out[(j, jp)] = acc;
            }
        }
        out
    }
}

fn half_map(n: usize) -> DMatrix<f64> {
    let f = n / 2; // floor
    let c = n - f; // ceil
    let mut m = DMatrix::zeros(2 * (f + 1), n + 1);
    for b in 0..2usize {
        for j in 0..=f {
            let src = b * c + j;
            if src <= n {
                m[(b * (f + 1) + j, src)] = (binomial_f(f, j) / binomial_f(n, src)).sqrt();
            }
        }
    }
    m
}

/// Compresses a symmetric state onto `C^2 (x) C^(floor(n/2)+1)`.
///
/// The forward map preserves the rank of any symmetric state; the exact
/// inverse on its image is [`expand_half`].
pub fn compress_half(s: &SymmetricState) -> Result<CompressedHalf> {
    let n = s.n_qubits();
    if n < 2 {
        return Err(Error::InvalidInput("compress_half needs n >= 2".into()));
    }
    let f = half_map(n).map(|x| c64(x, 0.0));
    let m = &f * s.matrix() * f.adjoint();
    Ok(CompressedHalf {
        source_qubits: n,
        matrix: hermitize(&m),
    })
}

/// Recovers the symmetric state from its half-system compression via the
/// pseudo-inverse of the forward map.
pub fn expand_half(c: &CompressedHalf) -> Result<SymmetricState> {
    let n = c.source_qubits;
    let f = half_map(n);
    // Columns of the forward map have disjoint row supports, so F^T F is
    // diagonal and the pseudo-inverse is a columnwise rescaling.
    let gram_diag: Vec<f64> = (0..=n).map(|m| f.column(m).norm_squared()).collect();
    let mut g = f.transpose();
    for (m, d) in gram_diag.iter().enumerate() {
        for r in 0..g.ncols() {
            g[(m, r)] /= d;
        }
    }
    let gc = g.map(|x| c64(x, 0.0));
    let red = &gc * c.matrix() * gc.adjoint();
    SymmetricState::new(n, red)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn norm_inf(m: &DMatrix<Complex64>) -> f64 {
        m.iter().map(|z| z.norm()).fold(0.0_f64, f64::max)
    }

    #[test]
    fn coords_alpha_zero() {
        let e = ProductVector::from_alpha(c64(0.0, 0.0));
        let v = product_state_coords(&e, 4, 0).unwrap();
        let expect = [1.0, 0.0, 0.0, 0.0, 0.0];
        for (i, want) in expect.iter().enumerate() {
            assert_abs_diff_eq!(v[i].re, want, epsilon = 1e-15);
            assert_abs_diff_eq!(v[i].im, 0.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn coords_alpha_one() {
        let e = ProductVector::from_alpha(c64(1.0, 0.0));
        let v = product_state_coords(&e, 2, 0).unwrap();
        assert_abs_diff_eq!(v[0].re, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(v[1].re, 2.0_f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(v[2].re, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(v.norm_squared(), 4.0, epsilon = 1e-12);
    }

    #[test]
    fn coords_alpha_i_matches_tensor_expansion() {
        // Oracle: expand (|0> + i|1>)^{(x)3} in the full 8-dimensional
        // space and project onto each normalized Dicke state.
        let alpha = c64(0.0, 1.0);
        let n = 3;
        let mut full = [c64(0.0, 0.0); 8];
        for bits in 0..8usize {
            let ones = (bits as u32).count_ones();
            full[bits] = alpha.powu(ones);
        }
        let mut oracle = vec![c64(0.0, 0.0); n + 1];
        for (bits, amp) in full.iter().enumerate() {
            let m = (bits as u32).count_ones() as usize;
            oracle[m] += amp / sqrt_binomial(n, m);
        }
        let e = ProductVector::from_alpha(alpha);
        let v = product_state_coords(&e, n, 0).unwrap();
        let expect = [
            c64(1.0, 0.0),
            c64(0.0, 3.0_f64.sqrt()),
            c64(-(3.0_f64.sqrt()), 0.0),
            c64(0.0, -1.0),
        ];
        for m in 0..=n {
            assert!((v[m] - oracle[m]).norm() < 1e-13);
            assert!((v[m] - expect[m]).norm() < 1e-13);
        }
    }

    #[test]
    fn coords_rejects_zero_pair() {
        let e = ProductVector {
            a: c64(0.0, 0.0),
            b: c64(0.0, 0.0),
        };
        assert!(product_state_coords(&e, 3, 0).is_err());
        assert!(ProductVector::new(c64(0.0, 0.0), c64(0.0, 0.0)).is_err());
    }

    #[test]
    fn conjugated_coords_norm() {
        let e = ProductVector::new(c64(0.3, -1.1), c64(0.7, 0.2)).unwrap();
        let (a, b) = e.amplitudes();
        let n = 6;
        let want = (a.norm_sqr() + b.norm_sqr()).powi(n as i32);
        for k in 0..=3 {
            let v = product_state_coords(&e, n, k).unwrap();
            assert_abs_diff_eq!(v.norm_squared(), want, epsilon = 1e-10 * want);
        }
        assert!(product_state_coords(&e, n, 4).is_err());
    }

    #[test]
    fn isometry_n2_k1_entries() {
        let iso = compression_isometry(2, 1).unwrap();
        assert_eq!(iso.variant(), IsometryVariant::FactoredBinomials);
        let m = iso.matrix();
        let h = 0.5_f64.sqrt();
        assert_abs_diff_eq!(m[(0, 0)], 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(m[(1, 1)], h, epsilon = 1e-15);
        assert_abs_diff_eq!(m[(2, 1)], h, epsilon = 1e-15);
        assert_abs_diff_eq!(m[(3, 2)], 1.0, epsilon = 1e-15);
    }

    #[test]
    fn isometry_n4_k2_entry() {
        let iso = compression_isometry(4, 2).unwrap();
        let m = iso.matrix();
        // ((i, j), m) = ((1, 1), 2), row 1 * 3 + 1 = 4
        assert_abs_diff_eq!(m[(4, 2)], (2.0_f64 / 3.0).sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn isometry_columns_unit_norm() {
        for n in 2..=10 {
            for k in 1..=n / 2 {
                let iso = compression_isometry(n, k).unwrap();
                for c in 0..=n {
                    assert_abs_diff_eq!(iso.matrix().column(c).norm(), 1.0, epsilon = 1e-13);
                }
            }
        }
    }

    #[test]
    fn isometry_rejects_bad_k() {
        assert!(compression_isometry(4, 0).is_err());
        assert!(compression_isometry(4, 3).is_err());
    }

    #[test]
    fn triplet_view_eigenvalues() {
        let s = SymmetricState::pure_dicke(2, 1).unwrap();
        let view = partial_transpose_view(&s, 1).unwrap();
        let mut eig: Vec<f64> = view
            .matrix()
            .clone()
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .collect();
        eig.sort_by(|x, y| x.partial_cmp(y).unwrap());
        let want = [-0.5, 0.5, 0.5, 0.5];
        for (got, want) in eig.iter().zip(want.iter()) {
            assert_abs_diff_eq!(got, want, epsilon = 1e-12);
        }
    }

    #[test]
    fn product_state_views_rank_one_psd() {
        let e = ProductVector::new(c64(0.8, 0.1), c64(-0.3, 0.55)).unwrap();
        for n in [4, 5, 6] {
            let s = SymmetricState::pure_product(n, &e);
            for k in 1..=n / 2 {
                let view = partial_transpose_view(&s, k).unwrap();
                let eig = view.matrix().clone().symmetric_eigenvalues();
                let max = eig.max();
                assert!(eig.min() > -1e-12);
                // rank one: a single eigenvalue carries the whole trace
                assert_abs_diff_eq!(max, view.trace(), epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn view_trace_matches_state() {
        let s = SymmetricState::maximally_mixed(6);
        for k in 1..=3 {
            let view = partial_transpose_view(&s, k).unwrap();
            assert_abs_diff_eq!(view.trace(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn expand_single_qubit_identity_embedding() {
        let mut m = DMatrix::zeros(2, 2);
        m[(0, 0)] = c64(0.25, 0.0);
        m[(0, 1)] = c64(0.1, 0.2);
        m[(1, 0)] = c64(0.1, -0.2);
        m[(1, 1)] = c64(0.75, 0.0);
        let s = SymmetricState::new(1, m.clone()).unwrap();
        let full = expand_to_full(&s).unwrap();
        assert!(norm_inf(&(full - m)) < 1e-15);
    }

    #[test]
    fn expand_dicke_two_qubits() {
        let s = SymmetricState::pure_dicke(2, 1).unwrap();
        let full = expand_to_full(&s).unwrap();
        // |01>, |10> are indices 1 and 2
        for (a, b) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
            assert_abs_diff_eq!(full[(a, b)].re, 0.5, epsilon = 1e-15);
        }
        assert_abs_diff_eq!(full.trace().re, 1.0, epsilon = 1e-15);
        assert!(norm_inf(&(full.clone() - full.adjoint())) < 1e-15);
    }

    #[test]
    fn expand_maximally_mixed_is_projector_over_dim() {
        let s = SymmetricState::maximally_mixed(4);
        let full = expand_to_full(&s).unwrap();
        // P/5 is idempotent up to the 1/5 weight: (5 full)^2 = 5 full
        let p = full.scale(5.0);
        assert!(norm_inf(&(&p * &p - p.clone())) < 1e-12);
        assert_abs_diff_eq!(full.trace().re, 1.0, epsilon = 1e-13);
    }

    #[test]
    fn expand_refuses_large_n() {
        let s = SymmetricState::maximally_mixed(13);
        assert!(matches!(
            expand_to_full(&s),
            Err(Error::TooManyQubits { .. })
        ));
    }

    #[test]
    fn compress_half_alpha_zero() {
        let e = ProductVector::from_alpha(c64(0.0, 0.0));
        let s = SymmetricState::pure_product(4, &e);
        let c = compress_half(&s).unwrap();
        // projector onto (1,0) (x) (1,0,0): single unit entry at (0,0)
        assert_abs_diff_eq!(c.matrix()[(0, 0)].re, 1.0, epsilon = 1e-13);
        assert_abs_diff_eq!(c.matrix().trace().re, 1.0, epsilon = 1e-13);
        let back = expand_half(&c).unwrap();
        assert!(norm_inf(&(back.matrix() - s.matrix())) < 1e-12);
    }

    #[test]
    fn compress_half_n4_coefficients() {
        let f = half_map(4);
        let s = 0.5_f64.sqrt();
        let t = (1.0_f64 / 6.0).sqrt();
        assert_abs_diff_eq!(f[(1, 1)], s, epsilon = 1e-15); // (b,j)=(0,1) <- m=1
        assert_abs_diff_eq!(f[(4, 3)], s, epsilon = 1e-15); // (b,j)=(1,1) <- m=3
        assert_abs_diff_eq!(f[(2, 2)], t, epsilon = 1e-15); // (b,j)=(0,2) <- m=2
        assert_abs_diff_eq!(f[(3, 2)], t, epsilon = 1e-15); // (b,j)=(1,0) <- m=2
    }

    #[test]
    fn compress_half_matches_product_action() {
        // F applied to (1,a)^{(x)n} must give (1, a^ceil) (x) (1,a)^{(x)floor}
        // in normalized Dicke coordinates, for random a.
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for n in 2..=9usize {
            let fl = n / 2;
            let ce = n - fl;
            let f = half_map(n).map(|x| c64(x, 0.0));
            for _ in 0..20 {
                let alpha = c64(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5));
                let v = product_state_coords(&ProductVector::from_alpha(alpha), n, 0).unwrap();
                let got = &f * v;
                for b in 0..2usize {
                    for j in 0..=fl {
                        let want = alpha.powu((b * ce) as u32)
                            * sqrt_binomial(fl, j)
                            * alpha.powu(j as u32);
                        assert!((got[b * (fl + 1) + j] - want).norm() < 1e-10);
                    }
                }
            }
        }
    }

    #[test]
    fn compress_half_round_trip_random_states() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for n in 2..=10usize {
            for _ in 0..50 {
                let s = crate::sampling::random_psd_state(n, n + 1, &mut rng);
                let c = compress_half(&s).unwrap();
                let back = expand_half(&c).unwrap();
                assert!(norm_inf(&(back.matrix() - s.matrix())) < 1e-10);
            }
        }
    }

    #[test]
    fn density_validation() {
        let bad = DMatrix::from_diagonal_element(5, 5, c64(0.3, 0.0));
        assert!(SymmetricState::new_density(4, bad).is_err());
        let mut non_herm = DMatrix::zeros(3, 3);
        non_herm[(0, 1)] = c64(0.5, 0.0);
        assert!(SymmetricState::new(2, non_herm).is_err());
    }
}
