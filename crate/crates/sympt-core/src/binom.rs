//! Exact binomial coefficients.
//!
//! Isometry entries are ratios of binomials; computing them from exact
//! integers keeps the isometry checks at machine precision for every
//! supported qubit count (the design ceiling is n = 30, far below the
//! u128 overflow point of the multiplicative scheme used here).

/// `C(n, k)` as an exact integer. Returns 0 for `k > n`.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// `C(n, k)` as a floating-point number.
pub fn binomial_f(n: usize, k: usize) -> f64 {
    binomial(n, k) as f64
}

/// `sqrt(C(n, k))` as a floating-point number.
pub fn sqrt_binomial(n: usize, k: usize) -> f64 {
    binomial_f(n, k).sqrt()
}
