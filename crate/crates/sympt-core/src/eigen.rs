//! Hermitian eigendecomposition by cyclic complex Jacobi rotations.
//!
//! Every rank and kernel decision in the crate flows through this
//! solver. Jacobi is a little slower than tridiagonalization methods but
//! its eigenpairs are accurate to machine precision even for tightly
//! clustered spectra, and the fixed cyclic sweep order makes the output
//! deterministic. Matrix dimensions here never exceed a few hundred.

use nalgebra::DMatrix;
use num_complex::Complex64;

/// Convergence threshold on the off-diagonal Frobenius mass, relative to
/// the matrix norm.
const OFF_TOL: f64 = 1e-15;
const MAX_SWEEPS: usize = 60;

/// Eigenvalues (ascending) and, on request, the matching orthonormal
/// eigenvectors as matrix columns.
pub struct HermitianEigen {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Option<DMatrix<Complex64>>,
}

/// Diagonalizes a Hermitian matrix. The strict lower triangle is
/// ignored; the caller is responsible for handing in a Hermitian matrix.
pub fn hermitian_eigen(m: &DMatrix<Complex64>, with_vectors: bool) -> HermitianEigen {
    let d = m.nrows();
    assert_eq!(d, m.ncols(), "matrix must be square");

    // flat row-major working copy, kept Hermitian throughout
    let mut a: Vec<Complex64> = Vec::with_capacity(d * d);
    for i in 0..d {
        for j in 0..d {
            let z = if i <= j { m[(i, j)] } else { m[(j, i)].conj() };
            a.push(z);
        }
    }
    let mut v: Vec<Complex64> = if with_vectors {
        let mut id = vec![Complex64::new(0.0, 0.0); d * d];
        for i in 0..d {
            id[i * d + i] = Complex64::new(1.0, 0.0);
        }
        id
    } else {
        Vec::new()
    };

    let fro: f64 = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if fro > 0.0 && d > 1 {
        for _ in 0..MAX_SWEEPS {
            let mut off = 0.0_f64;
            for p in 0..d {
                for q in (p + 1)..d {
                    off += a[p * d + q].norm_sqr();
                }
            }
            if (2.0 * off).sqrt() <= OFF_TOL * fro {
                break;
            }
            for p in 0..d {
                for q in (p + 1)..d {
                    rotate(&mut a, &mut v, d, p, q, with_vectors);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&i, &j| a[i * d + i].re.partial_cmp(&a[j * d + j].re).unwrap());
    let eigenvalues: Vec<f64> = order.iter().map(|&i| a[i * d + i].re).collect();
    let eigenvectors = with_vectors.then(|| DMatrix::from_fn(d, d, |r, c| v[r * d + order[c]]));
    HermitianEigen {
        eigenvalues,
        eigenvectors,
    }
}

/// Applies the unitary Jacobi rotation annihilating `a[p, q]`.
#[inline]
fn rotate(
    a: &mut [Complex64],
    v: &mut [Complex64],
    d: usize,
    p: usize,
    q: usize,
    with_vectors: bool,
) {
    let apq = a[p * d + q];
    let mag = apq.norm();
    let app = a[p * d + p].re;
    let aqq = a[q * d + q].re;
    // skip rotations that cannot change anything at working precision
    if mag <= f64::EPSILON * 1e-3 * (app.abs() + aqq.abs() + f64::MIN_POSITIVE) {
        a[p * d + q] = Complex64::new(0.0, 0.0);
        a[q * d + p] = Complex64::new(0.0, 0.0);
        return;
    }
    let phase = apq / mag;
    let tau = (aqq - app) / (2.0 * mag);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let sigma = phase.scale(s);
    let sigma_conj = sigma.conj();

    a[p * d + p] = Complex64::new(app * c * c - 2.0 * mag * c * s + aqq * s * s, 0.0);
    a[q * d + q] = Complex64::new(app * s * s + 2.0 * mag * c * s + aqq * c * c, 0.0);
    a[p * d + q] = Complex64::new(0.0, 0.0);
    a[q * d + p] = Complex64::new(0.0, 0.0);

    for r in 0..d {
        if r == p || r == q {
            continue;
        }
        let arp = a[r * d + p];
        let arq = a[r * d + q];
        let new_p = arp.scale(c) - sigma_conj * arq;
        let new_q = sigma * arp + arq.scale(c);
        a[r * d + p] = new_p;
        a[p * d + r] = new_p.conj();
        a[r * d + q] = new_q;
        a[q * d + r] = new_q.conj();
    }
    if with_vectors {
        for r in 0..d {
            let vrp = v[r * d + p];
            let vrq = v[r * d + q];
            v[r * d + p] = vrp.scale(c) - sigma_conj * vrq;
            v[r * d + q] = sigma * vrp + vrq.scale(c);
        }
    }
}

/// Eigenvalues only, ascending.
pub fn hermitian_eigenvalues(m: &DMatrix<Complex64>) -> Vec<f64> {
    hermitian_eigen(m, false).eigenvalues
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue(m: &DMatrix<Complex64>) -> f64 {
    hermitian_eigen(m, false).eigenvalues[0]
}
