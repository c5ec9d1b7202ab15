//! Brute-force reference path in the full `2^n`-dimensional space.
//!
//! Everything here is oracle machinery: it never touches the compressed
//! isometries, so it can independently cross-check
//! [`partial_transpose_view`](crate::dicke::partial_transpose_view)
//! (expand, literally transpose the first `k` qubits, then project onto
//! the bipartite Dicke product basis).

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::binom::sqrt_binomial;
use crate::{Error, Result};

/// Literal partial transposition of the first `k` of `n` qubits.
///
/// Indexing convention matches [`crate::dicke::expand_to_full`]: qubit 0
/// is the most significant bit.
pub fn partial_transpose_full(
    m: &DMatrix<Complex64>,
    n: usize,
    k: usize,
) -> Result<DMatrix<Complex64>> {
    let dim = 1usize << n;
    if m.nrows() != dim || m.ncols() != dim {
        return Err(Error::InvalidInput(format!(
            "matrix is {}x{}, expected {dim}x{dim}",
            m.nrows(),
            m.ncols()
        )));
    }
    if k == 0 || k > n {
        return Err(Error::BipartitionOutOfRange { k, max: n, n });
    }
    let rest_bits = n - k;
    let rest_mask = (1usize << rest_bits) - 1;
    let mut out = DMatrix::zeros(dim, dim);
    for a in 0..dim {
        let (a_s, a_r) = (a >> rest_bits, a & rest_mask);
        for b in 0..dim {
            let (b_s, b_r) = (b >> rest_bits, b & rest_mask);
            out[(a, b)] = m[((b_s << rest_bits) | a_r, (a_s << rest_bits) | b_r)];
        }
    }
    Ok(out)
}

/// Projects a full-space matrix onto the basis
/// `|Dicke_i^k> (x) |Dicke_j^(n-k)>`, returning the
/// `(k+1)(n-k+1)`-square matrix of its elements there.
pub fn to_bipartite_dicke_basis(
    m: &DMatrix<Complex64>,
    n: usize,
    k: usize,
) -> Result<DMatrix<Complex64>> {
    let dim = 1usize << n;
    if m.nrows() != dim || m.ncols() != dim {
        return Err(Error::InvalidInput("matrix dimension mismatch".into()));
    }
    let rest = n - k;
    let rest_mask = (1usize << rest) - 1;
    let rows = (k + 1) * (rest + 1);
    // basis vector ((i, j), full index a) weight
    let weight = |i: usize, j: usize, a: usize| -> Option<f64> {
        let (a_s, a_r) = (a >> rest, a & rest_mask);
        if (a_s as u32).count_ones() as usize == i && (a_r as u32).count_ones() as usize == j {
            Some(1.0 / (sqrt_binomial(k, i) * sqrt_binomial(rest, j)))
        } else {
            None
        }
    };
    let mut out = DMatrix::zeros(rows, rows);
    for i in 0..=k {
        for j in 0..=rest {
            for ip in 0..=k {
                for jp in 0..=rest {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for a in 0..dim {
                        let wa = match weight(i, j, a) {
                            Some(w) => w,
                            None => continue,
                        };
                        for b in 0..dim {
                            if let Some(wb) = weight(ip, jp, b) {
                                acc += m[(a, b)] * wa * wb;
                            }
                        }
                    }
                    out[(i * (rest + 1) + j, ip * (rest + 1) + jp)] = acc;
                }
            }
        }
    }
    Ok(out)
}

/// Checks that a full-space matrix commutes with every adjacent qubit
/// swap (adjacent transpositions generate the full permutation group).
/// Returns the largest commutator entry.
pub fn symmetry_defect(m: &DMatrix<Complex64>, n: usize) -> f64 {
    let dim = 1usize << n;
    let mut defect: f64 = 0.0;
    for q in 0..n.saturating_sub(1) {
        // swap bits for qubits q and q+1 (qubit 0 = most significant)
        let hi = n - 1 - q;
        let lo = n - 2 - q;
        let swap = |x: usize| -> usize {
            let bh = (x >> hi) & 1;
            let bl = (x >> lo) & 1;
            if bh == bl {
                x
            } else {
                x ^ ((1 << hi) | (1 << lo))
            }
        };
        for a in 0..dim {
            for b in 0..dim {
                let d = (m[(swap(a), swap(b))] - m[(a, b)]).norm();
                defect = defect.max(d);
            }
        }
    }
    defect
}
