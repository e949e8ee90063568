//! Deterministic sampling of random polynomials for randomized checks.
//!
//! A small splitmix64 generator keeps seeded runs reproducible across
//! platforms without pulling in an RNG dependency; frozen expected values in
//! tests rely on that stability.

use num::bigint::BigInt;
use num::rational::BigRational;

use crate::ring::{Monomial, Poly, Trunc, VarId};

/// splitmix64; passes through the full 2^64 state space.
#[derive(Debug, Clone)]
pub struct Rng {
    state: u64,
}

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform in `0..bound` (bound >= 1).
    pub fn below(&mut self, bound: u64) -> u64 {
        self.next_u64() % bound
    }

    /// Uniform in `lo..=hi`.
    pub fn range_i64(&mut self, lo: i64, hi: i64) -> i64 {
        lo + self.below((hi - lo + 1) as u64) as i64
    }
}

/// Sample a sparse polynomial with integer coefficients over `vars`.
pub fn random_integral_poly(
    rng: &mut Rng,
    vars: &[VarId],
    max_terms: usize,
    max_exp: u32,
    coeff_bound: i64,
) -> Poly {
    let n_terms = 1 + rng.below(max_terms as u64) as usize;
    let mut terms = Vec::with_capacity(n_terms);
    for _ in 0..n_terms {
        let mut pairs = Vec::new();
        for &v in vars {
            let e = rng.below(max_exp as u64 + 1) as u32;
            if e > 0 {
                pairs.push((v, e));
            }
        }
        let mut c = rng.range_i64(-coeff_bound, coeff_bound);
        if c == 0 {
            c = 1;
        }
        terms.push((BigRational::from_integer(BigInt::from(c)), Monomial::from_pairs(pairs)));
    }
    Poly::from_terms(terms, Trunc::Exact)
}

/// Sample with rational coefficients (denominators up to `den_bound`).
pub fn random_rational_poly(
    rng: &mut Rng,
    vars: &[VarId],
    max_terms: usize,
    max_exp: u32,
    coeff_bound: i64,
    den_bound: i64,
) -> Poly {
    let base = random_integral_poly(rng, vars, max_terms, max_exp, coeff_bound);
    let den = 1 + rng.below(den_bound as u64) as i64;
    base.scale(&BigRational::new(BigInt::from(1), BigInt::from(den)))
}
