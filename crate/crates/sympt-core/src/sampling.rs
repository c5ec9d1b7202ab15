//! Seeded random generators for states and product vectors.
//!
//! Used by the test oracles and the `oracle-check` command; campaigns
//! themselves always start from the maximally mixed state.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::dicke::{ProductVector, SymmetricState};

fn normal(rng: &mut impl Rng) -> f64 {
    rng.sample(StandardNormal)
}

/// Random PSD symmetric state of the given rank (clamped to `n + 1`),
/// normalized to unit trace. Drawn as `G G^dagger` with Gaussian `G`.
pub fn random_psd_state(n: usize, rank: usize, rng: &mut impl Rng) -> SymmetricState {
    let d = n + 1;
    let r = rank.clamp(1, d);
    let g = DMatrix::from_fn(d, r, |_, _| Complex64::new(normal(rng), normal(rng)));
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    SymmetricState::new(n, m.scale(1.0 / tr)).expect("G G^dagger is Hermitian")
}

/// Random product vector, uniformly distributed on the Bloch sphere.
pub fn random_product_vector(rng: &mut impl Rng) -> ProductVector {
    let a = Complex64::new(normal(rng), normal(rng));
    let b = Complex64::new(normal(rng), normal(rng));
    ProductVector::new(a, b).unwrap_or_else(|_| ProductVector::from_alpha(Complex64::new(0.0, 0.0)))
}

/// Random mixture of `terms` symmetric product projectors with uniform
/// Dirichlet-ish weights. Returns the state and its construction.
pub fn random_separable_mixture(
    n: usize,
    terms: usize,
    rng: &mut impl Rng,
) -> (SymmetricState, Vec<(f64, ProductVector)>) {
    assert!(terms >= 1);
    let mut parts: Vec<(f64, ProductVector)> = (0..terms)
        .map(|_| {
            let w: f64 = rng.gen_range(0.1..1.0);
            (w, random_product_vector(rng))
        })
        .collect();
    let total: f64 = parts.iter().map(|(w, _)| *w).sum();
    for (w, _) in &mut parts {
        *w /= total;
    }
    let state = SymmetricState::mixture(n, &parts).expect("valid mixture");
    (state, parts)
}
