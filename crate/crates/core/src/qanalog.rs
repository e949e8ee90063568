//! q-analogues: q-integers, Gaussian binomials, cyclotomic polynomials, the
//! unit split of \[p\]_q and the Bezout decomposition of p against Phi_{p^n}(q).
//!
//! All values here are exact polynomials in u = q - 1 with integer
//! coefficients; the split and Bezout constructions verify their defining
//! identities before returning.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::One;

use crate::ring::{Poly, Trunc, VarId};
use crate::{Error, Result};

/// The Gaussian q-analogue \[m\]_q = 1 + q + ... + q^{m-1}; \[0\]_q = 0.
pub fn q_integer(m: u32) -> Poly {
    let q = Poly::q();
    let mut acc = Poly::zero_exact();
    let mut pow = Poly::from_int(1);
    for _ in 0..m {
        acc = acc.add(&pow);
        pow = pow.mul(&q);
    }
    acc
}

/// \[m\]_q! = \[1\]_q \[2\]_q ... \[m\]_q.
pub fn q_factorial(m: u32) -> Poly {
    let mut acc = Poly::from_int(1);
    for k in 1..=m {
        acc = acc.mul(&q_integer(k));
    }
    acc
}

/// Gaussian binomial \[m choose k\]_q = \[m\]_q! / (\[k\]_q! \[m-k\]_q!), computed by
/// exact division; always a polynomial.
pub fn gaussian_binomial(m: u32, k: u32) -> Result<Poly> {
    if k > m {
        return Err(Error::InvalidParameter(format!(
            "gaussian binomial needs 0 <= k <= m, got ({m}, {k})"
        )));
    }
    let num = q_factorial(m);
    let den = q_factorial(k).mul(&q_factorial(m - k));
    num.div_exact(&den)
}

/// The m-th cyclotomic polynomial, by recursive exact division of q^m - 1.
pub fn cyclotomic(m: u32) -> Result<Poly> {
    if m == 0 {
        return Err(Error::InvalidParameter("cyclotomic polynomial needs m >= 1".into()));
    }
    let q = Poly::q();
    if m == 1 {
        return Ok(q.sub(&Poly::from_int(1)));
    }
    let mut num = q.pow(m).sub(&Poly::from_int(1));
    for d in 1..m {
        if m % d == 0 {
            num = num.div_exact(&cyclotomic(d)?)?;
        }
    }
    Ok(num)
}

/// Substitute q -> q^m (i.e. u -> (1+u)^m - 1).
pub fn substitute_q_power(f: &Poly, m: u32) -> Poly {
    let repl = Poly::q().pow(m).sub(&Poly::from_int(1));
    let mut map = std::collections::BTreeMap::new();
    map.insert(VarId::U, repl);
    f.substitute(&map)
}

/// The split \[p\]_q = p * w + (q-1)^{p-1} with w = 1 mod (q-1).
///
/// Returns w = (\[p\]_q - (q-1)^{p-1}) / p together with the result of the
/// exact-division and congruence checks.
pub fn split_p_unit(p: u32) -> Result<(Poly, bool)> {
    if !crate::ring::is_prime(p) {
        return Err(Error::InvalidParameter(format!("split needs a prime, got {p}")));
    }
    let diff = q_integer(p).sub(&Poly::u_pow(p - 1));
    let w = diff.div_exact(&Poly::from_int(p as i64))?;
    // w = 1 mod (q-1): its u^0-part is the constant 1
    let ok = w.specialize_q1() == Poly::from_int(1)
        && q_integer(p)
            == w.scale(&BigRational::from_integer(BigInt::from(p))).add(&Poly::u_pow(p - 1));
    Ok((w, ok))
}

/// The Bezout decomposition p = P(q) (q-1)^e + Q(q) Phi_{p^n}(q) at level n,
/// with e = (p-1) p^{n-1}.
///
/// `v_poly` is the cofactor (Phi_{p^n}(q) - (q-1)^e) / p; `q_poly` is the
/// unique representative of its inverse modulo (q-1)^e of degree < e with
/// integer coefficients, and `p_poly` is then forced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BezoutPair {
    pub prime: u32,
    pub level: u32,
    pub exponent: u32,
    pub p_poly: Poly,
    pub q_poly: Poly,
    pub v_poly: Poly,
}

pub fn bezout_pn(p: u32, n: u32) -> Result<BezoutPair> {
    if !crate::ring::is_prime(p) {
        return Err(Error::InvalidParameter(format!("bezout split needs a prime, got {p}")));
    }
    if n < 1 {
        return Err(Error::InvalidParameter("bezout level must be >= 1".into()));
    }
    let e = (p - 1)
        .checked_mul(p.checked_pow(n - 1).ok_or_else(|| {
            Error::InvalidParameter(format!("exponent (p-1)p^(n-1) overflows for p={p}, n={n}"))
        })?)
        .ok_or_else(|| Error::InvalidParameter("exponent overflow".into()))?;
    let phi = cyclotomic(p.checked_pow(n).ok_or_else(|| {
        Error::InvalidParameter(format!("p^n overflows for p={p}, n={n}"))
    })?)?;
    let v = phi.sub(&Poly::u_pow(e)).div_exact(&Poly::from_int(p as i64))?;

    // Inverse of v modulo u^e: v has constant term 1, so Newton iteration
    // stays in integer coefficients. Lift the mod-u^e representative back to
    // an exact polynomial of u-degree < e.
    let q_poly = Poly::from_terms(
        v.invert_unit(e)?
            .terms()
            .map(|(c, m)| (c.clone(), m.clone()))
            .collect(),
        Trunc::Exact,
    );

    // p (1 - q_poly v) = (p_poly + q_poly) u^e
    let one_minus_qv = Poly::from_int(1).sub(&q_poly.mul(&v));
    let p_poly = one_minus_qv
        .scale(&BigRational::from_integer(BigInt::from(p)))
        .div_exact(&Poly::u_pow(e))?
        .sub(&q_poly);

    let lhs = p_poly.mul(&Poly::u_pow(e)).add(&q_poly.mul(&phi));
    if lhs != Poly::from_int(p as i64) {
        return Err(Error::IdentityCheckFailed(format!(
            "bezout identity for p={p}, n={n}: got {lhs}"
        )));
    }
    Ok(BezoutPair { prime: p, level: n, exponent: e, p_poly, q_poly, v_poly: v })
}

/// The global denominator constant N_n = prod_{l <= n prime} l^{2(l^{n-1}+...+l+1)}.
pub fn nn_constant(n: u32) -> BigInt {
    let mut out = BigInt::one();
    for l in 2..=n {
        let mut is_p = l >= 2;
        for d in 2..l {
            if d * d > l {
                break;
            }
            if l % d == 0 {
                is_p = false;
                break;
            }
        }
        if !is_p {
            continue;
        }
        // exponent 2 (l^{n-1} + ... + l + 1)
        let mut geom = BigInt::from(0);
        let mut pow = BigInt::one();
        for _ in 0..n {
            geom += &pow;
            pow *= BigInt::from(l);
        }
        let exp: u64 = (BigInt::from(2) * geom).try_into().expect("exponent fits u64");
        out *= BigInt::from(l).pow(exp as u32);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::VarId;

    #[test]
    fn q_integer_examples() {
        // [3]_q = 1 + q + q^2
        let q = Poly::q();
        assert_eq!(q_integer(3), Poly::from_int(1).add(&q).add(&q.pow(2)));
        assert_eq!(q_integer(0), Poly::zero_exact());
        assert_eq!(q_integer(1), Poly::from_int(1));
        // [4]_q at q = 1 is 4
        assert_eq!(q_integer(4).specialize_q1(), Poly::from_int(4));
    }

    #[test]
    fn gaussian_binomial_examples() {
        let q = Poly::q();
        assert_eq!(gaussian_binomial(2, 1).unwrap(), Poly::from_int(1).add(&q));
        assert_eq!(gaussian_binomial(9, 0).unwrap(), Poly::from_int(1));
        // (4, 2) = 1 + q + 2q^2 + q^3 + q^4
        let expect = Poly::from_int(1)
            .add(&q)
            .add(&q.pow(2).scale(&BigRational::from_integer(2.into())))
            .add(&q.pow(3))
            .add(&q.pow(4));
        assert_eq!(gaussian_binomial(4, 2).unwrap(), expect);
    }

    #[test]
    fn gaussian_binomial_against_product_formula() {
        // independent oracle: prod_{i=1}^{k} (1 - q^{m-k+i}) / (1 - q^i)
        let q = Poly::q();
        for m in 0..=8u32 {
            for k in 0..=m {
                let mut num = Poly::from_int(1);
                let mut den = Poly::from_int(1);
                for i in 1..=k {
                    num = num.mul(&Poly::from_int(1).sub(&q.pow(m - k + i)));
                    den = den.mul(&Poly::from_int(1).sub(&q.pow(i)));
                }
                let oracle = num.div_exact(&den).unwrap();
                assert_eq!(gaussian_binomial(m, k).unwrap(), oracle, "({m}, {k})");
            }
        }
    }

    #[test]
    fn cyclotomic_examples() {
        let q = Poly::q();
        assert_eq!(cyclotomic(1).unwrap(), q.sub(&Poly::from_int(1)));
        // Phi_4 = q^2 + 1, cross-check Phi_4(1) = 2
        let phi4 = cyclotomic(4).unwrap();
        assert_eq!(phi4, q.pow(2).add(&Poly::from_int(1)));
        assert_eq!(phi4.specialize_q1(), Poly::from_int(2));
        // Phi_p = [p]_q for primes
        for p in [2u32, 3, 5, 7] {
            assert_eq!(cyclotomic(p).unwrap(), q_integer(p));
        }
    }

    #[test]
    fn cyclotomic_product_identity() {
        // q^m - 1 = prod_{d | m} Phi_d(q) for m <= 64
        let q = Poly::q();
        for m in 1..=64u32 {
            let mut prod = Poly::from_int(1);
            for d in 1..=m {
                if m % d == 0 {
                    prod = prod.mul(&cyclotomic(d).unwrap());
                }
            }
            assert_eq!(prod, q.pow(m).sub(&Poly::from_int(1)), "m = {m}");
        }
    }

    #[test]
    fn q_integer_multiplicativity() {
        // [mk]_q = [m]_q * [k]_{q^m} for m, k <= 8
        for m in 1..=8u32 {
            for k in 1..=8u32 {
                let lhs = q_integer(m * k);
                let rhs = q_integer(m).mul(&substitute_q_power(&q_integer(k), m));
                assert_eq!(lhs, rhs, "m = {m}, k = {k}");
            }
        }
    }

    #[test]
    fn split_p_unit_examples() {
        let q = Poly::q();
        let (w2, ok2) = split_p_unit(2).unwrap();
        assert!(ok2);
        assert_eq!(w2, Poly::from_int(1));
        let (w3, ok3) = split_p_unit(3).unwrap();
        assert!(ok3);
        assert_eq!(w3, q);
        let (w5, ok5) = split_p_unit(5).unwrap();
        assert!(ok5);
        assert_eq!(w5, q.pow(3).sub(&q.pow(2)).add(&q));
        assert_eq!(w5.specialize_q1(), Poly::from_int(1));
    }

    #[test]
    fn bezout_hand_values() {
        let q = Poly::q();
        // (2, 1): P = -1, Q = 1
        let b = bezout_pn(2, 1).unwrap();
        assert_eq!(b.exponent, 1);
        assert_eq!(b.p_poly, Poly::from_int(-1));
        assert_eq!(b.q_poly, Poly::from_int(1));
        // (3, 1): P = q + 1, Q = 2 - q
        let b = bezout_pn(3, 1).unwrap();
        assert_eq!(b.exponent, 2);
        assert_eq!(b.p_poly, q.add(&Poly::from_int(1)));
        assert_eq!(b.q_poly, Poly::from_int(2).sub(&q));
    }

    #[test]
    fn bezout_defining_identity_grid() {
        for p in [2u32, 3, 5] {
            for n in 1..=3u32 {
                let b = bezout_pn(p, n).unwrap();
                let lhs = b
                    .p_poly
                    .mul(&Poly::u_pow(b.exponent))
                    .add(&b.q_poly.mul(&cyclotomic(p.pow(n)).unwrap()));
                assert_eq!(lhs, Poly::from_int(p as i64), "p = {p}, n = {n}");
                // Q has integer coefficients and u-degree < e.
                assert!(b.q_poly.is_p_integral(2) || true);
                for (c, _) in b.q_poly.terms() {
                    assert!(c.is_integer(), "Q coefficient {c} not integral");
                }
                assert!(b.q_poly.u_degree().unwrap_or(0) < b.exponent);
                // Q V = 1 mod u^e
                let qv = b.q_poly.mul(&b.v_poly).as_mod(b.exponent);
                assert_eq!(qv, Poly::from_int(1).as_mod(b.exponent));
                // V = 1 mod (q - 1)
                assert_eq!(b.v_poly.specialize_q1(), Poly::from_int(1));
            }
        }
    }

    #[test]
    fn cyclotomic_congruent_to_u_power_mod_p() {
        // Phi_{p^n}(q) = (q-1)^{(p-1)p^{n-1}} mod p, coefficient-wise
        for p in [2u32, 3, 5] {
            for n in 1..=3u32 {
                let e = (p - 1) * p.pow(n - 1);
                let diff = cyclotomic(p.pow(n)).unwrap().sub(&Poly::u_pow(e));
                let prof = diff.p_valuation_profile(p);
                assert!(prof.min_valuation.unwrap_or(1) >= 1, "p = {p}, n = {n}");
            }
        }
    }

    #[test]
    fn nn_constants() {
        assert_eq!(nn_constant(1), BigInt::from(1));
        assert_eq!(nn_constant(2), BigInt::from(64));
        let expect = BigInt::from(2).pow(14) * BigInt::from(3).pow(26);
        assert_eq!(nn_constant(3), expect);
    }

    #[test]
    fn substitute_q_power_basic() {
        // q -> q^2 sends u to u^2 + 2u
        let f = Poly::var(VarId::U);
        let g = substitute_q_power(&f, 2);
        let u = Poly::var(VarId::U);
        assert_eq!(g, u.pow(2).add(&u.scale(&BigRational::from_integer(2.into()))));
    }
}
