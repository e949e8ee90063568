//! The free delta-ring on the coordinates x_i up to tower depth D.
//!
//! The Frobenius lift acts on generators by phi(v) = v^p + p d(v), pushing
//! d^k(x_i) one level down the tower, and on u = q - 1 by
//! phi(u) = (1+u)^p - 1, so that delta(q) = 0. The delta-operator is
//! delta(a) = (phi(a) - a^p) / p, always an exact division over the
//! rationals. Divided powers: gamma(a) = a^p / p and the q-deformation
//! gamma_q(a) = phi(a)/\[p\]_q - delta(a), computed in the rationalised
//! truncated ring by inverting \[p\]_q modulo u^N.
//!
//! Depth overflow (an operation needing d^k with k > D) is a hard error,
//! never a silent truncation.

use std::collections::BTreeMap;

use num::bigint::BigInt;
use num::rational::BigRational;

use crate::qanalog::q_integer;
use crate::ring::{Poly, PrimeContext, VarId};
use crate::{Error, Result};

/// Check that applying delta `extra` more times stays within the depth bound.
fn check_depth_budget(a: &Poly, extra: u32, ctx: &PrimeContext) -> Result<()> {
    for (_, m) in a.terms() {
        for (v, _) in m.iter() {
            if let VarId::Delta { var, depth } = v {
                if depth + extra > ctx.depth {
                    return Err(Error::DepthExceeded {
                        var,
                        needed: depth + extra,
                        max: ctx.depth,
                    });
                }
            }
        }
    }
    Ok(())
}

/// Substitution map realising the Frobenius lift on every variable of `a`.
fn frobenius_map(a: &Poly, ctx: &PrimeContext) -> Result<BTreeMap<VarId, Poly>> {
    check_depth_budget(a, 1, ctx)?;
    let p = ctx.p;
    let p_big = BigRational::from_integer(BigInt::from(p));
    let mut map = BTreeMap::new();
    for v in a.variables() {
        let image = match v {
            VarId::U => Poly::q().pow(p).sub(&Poly::from_int(1)),
            VarId::X(i) => Poly::var(VarId::X(i))
                .pow(p)
                .add(&Poly::var(VarId::delta(i, 1)).scale(&p_big)),
            VarId::Delta { var, depth } => Poly::var(v)
                .pow(p)
                .add(&Poly::var(VarId::delta(var, depth + 1)).scale(&p_big)),
        };
        map.insert(v, image);
    }
    Ok(map)
}

/// The Frobenius lift phi.
pub fn frobenius(a: &Poly, ctx: &PrimeContext) -> Result<Poly> {
    let map = frobenius_map(a, ctx)?;
    Ok(a.substitute(&map))
}

/// i-fold composition of the Frobenius lift.
pub fn frobenius_iter(a: &Poly, i: u32, ctx: &PrimeContext) -> Result<Poly> {
    check_depth_budget(a, i, ctx)?;
    let mut out = a.clone();
    for _ in 0..i {
        out = frobenius(&out, ctx)?;
    }
    Ok(out)
}

/// delta(a) = (phi(a) - a^p) / p.
pub fn delta_op(a: &Poly, ctx: &PrimeContext) -> Result<Poly> {
    let phi = frobenius(a, ctx)?;
    let num = phi.sub(&a.pow(ctx.p));
    num.div_exact(&Poly::from_int(ctx.p as i64))
}

/// The p-adic divided power gamma(a) = a^p / p.
pub fn gamma(a: &Poly, ctx: &PrimeContext) -> Poly {
    a.pow(ctx.p)
        .scale(&BigRational::new(BigInt::from(1), BigInt::from(ctx.p)))
}

/// The q-divided power gamma_q(a) = phi(a) / \[p\]_q - delta(a), truncated
/// modulo u^N.
pub fn gamma_q(a: &Poly, ctx: &PrimeContext) -> Result<Poly> {
    let inv = q_integer(ctx.p).invert_unit(ctx.trunc)?;
    let phi = frobenius(a, ctx)?;
    Ok(phi.mul(&inv).sub(&delta_op(a, ctx)?))
}

/// An element of the free delta-ring together with its ambient parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct DeltaElement {
    pub value: Poly,
    pub ctx: PrimeContext,
}

impl DeltaElement {
    pub fn new(value: Poly, ctx: PrimeContext) -> Result<Self> {
        check_depth_budget(&value, 0, &ctx)?;
        Ok(DeltaElement { value, ctx })
    }

    /// All coefficients p-integral?
    pub fn is_integral(&self) -> bool {
        self.value.is_p_integral(self.ctx.p)
    }

    pub fn frobenius(&self) -> Result<DeltaElement> {
        Ok(DeltaElement { value: frobenius(&self.value, &self.ctx)?, ctx: self.ctx })
    }

    pub fn frobenius_iter(&self, i: u32) -> Result<DeltaElement> {
        Ok(DeltaElement { value: frobenius_iter(&self.value, i, &self.ctx)?, ctx: self.ctx })
    }

    pub fn delta(&self) -> Result<DeltaElement> {
        Ok(DeltaElement { value: delta_op(&self.value, &self.ctx)?, ctx: self.ctx })
    }

    pub fn gamma(&self) -> DeltaElement {
        DeltaElement { value: gamma(&self.value, &self.ctx), ctx: self.ctx }
    }

    pub fn gamma_q(&self) -> Result<DeltaElement> {
        Ok(DeltaElement { value: gamma_q(&self.value, &self.ctx)?, ctx: self.ctx })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Trunc;

    fn ctx(p: u32, trunc: u32, depth: u32) -> PrimeContext {
        PrimeContext::new(p, trunc, depth).unwrap()
    }

    fn x() -> Poly {
        Poly::var(VarId::X(1))
    }

    fn dx(k: u32) -> Poly {
        Poly::var(VarId::delta(1, k))
    }

    fn u() -> Poly {
        Poly::var(VarId::U)
    }

    fn int(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn frobenius_on_generator() {
        // phi(x) = x^2 + 2 d(x) at p = 2
        let c = ctx(2, 8, 2);
        let expect = x().pow(2).add(&dx(1).scale(&int(2)));
        assert_eq!(frobenius(&x(), &c).unwrap(), expect);
    }

    #[test]
    fn frobenius_fixes_rationals() {
        let c = ctx(3, 8, 1);
        assert_eq!(frobenius(&Poly::from_int(7), &c).unwrap(), Poly::from_int(7));
    }

    #[test]
    fn frobenius_on_u() {
        // phi(u) = (1+u)^2 - 1 = u^2 + 2u at p = 2
        let c = ctx(2, 8, 1);
        let expect = u().pow(2).add(&u().scale(&int(2)));
        assert_eq!(frobenius(&u(), &c).unwrap(), expect);
    }

    #[test]
    fn delta_of_q_vanishes() {
        // q = 1 + u has phi(q) = q^p, so delta(q) = 0
        for p in [2u32, 3, 5] {
            let c = ctx(p, 8, 1);
            assert_eq!(delta_op(&Poly::q(), &c).unwrap(), Poly::zero_exact());
        }
    }

    #[test]
    fn delta_of_x_squared() {
        // delta(x^2) = 2 x^p d(x) + p d(x)^2
        for p in [2u32, 3, 5] {
            let c = ctx(p, 8, 1);
            let expect = x()
                .pow(p)
                .mul(&dx(1))
                .scale(&int(2))
                .add(&dx(1).pow(2).scale(&int(p as i64)));
            assert_eq!(delta_op(&x().pow(2), &c).unwrap(), expect, "p = {p}");
        }
    }

    #[test]
    fn delta_of_constants() {
        let c = ctx(3, 8, 1);
        // delta(c) = (c - c^p)/p; delta(1) = 0
        assert_eq!(delta_op(&Poly::from_int(1), &c).unwrap(), Poly::zero_exact());
        let d2 = delta_op(&Poly::from_int(2), &c).unwrap();
        assert_eq!(d2, Poly::constant(BigRational::new((-6).into(), 3.into())));
    }

    #[test]
    fn delta_of_negative_p_power() {
        // delta(p^{-a}) = (p^{-a} - p^{-pa})/p has p-valuation -(pa+1)
        for p in [2u32, 3, 5] {
            for a in 1..=2u32 {
                let c = ctx(p, 8, 1);
                let inv = Poly::constant(BigRational::new(
                    BigInt::from(1),
                    BigInt::from(p).pow(a),
                ));
                let d = delta_op(&inv, &c).unwrap();
                let prof = d.p_valuation_profile(p);
                assert_eq!(prof.min_valuation, Some(-((p * a) as i64 + 1)), "p={p}, a={a}");
            }
        }
    }

    #[test]
    fn depth_overflow_is_hard_error() {
        let c = ctx(2, 8, 1);
        let err = delta_op(&dx(1), &c).unwrap_err();
        assert!(matches!(err, Error::DepthExceeded { needed: 2, max: 1, .. }));
    }

    #[test]
    fn frobenius_iter_matches_composition() {
        let c = ctx(2, 8, 3);
        let once = frobenius(&x(), &c).unwrap();
        let twice = frobenius(&once, &c).unwrap();
        assert_eq!(frobenius_iter(&x(), 2, &c).unwrap(), twice);
        assert_eq!(frobenius_iter(&x(), 0, &c).unwrap(), x());
    }

    #[test]
    fn frobenius_of_q_power_minus_one() {
        // phi(q^{p^i} - 1) = q^{p^{i+1}} - 1
        let c = ctx(3, 8, 1);
        for i in 0..=2u32 {
            let f = Poly::q().pow(3u32.pow(i)).sub(&Poly::from_int(1));
            let expect = Poly::q().pow(3u32.pow(i + 1)).sub(&Poly::from_int(1));
            assert_eq!(frobenius(&f, &c).unwrap(), expect, "i = {i}");
        }
    }

    #[test]
    fn gamma_examples() {
        let c = ctx(2, 8, 2);
        // gamma(x^a) = x^{ap}/p
        let g = gamma(&x().pow(3), &c);
        assert_eq!(g, x().pow(6).scale(&BigRational::new(1.into(), 2.into())));
        assert_eq!(gamma(&Poly::zero_exact(), &c), Poly::zero_exact());
        // gamma^2(x) = x^4/8 at p = 2
        let gg = gamma(&gamma(&x(), &c), &c);
        assert_eq!(gg, x().pow(4).scale(&BigRational::new(1.into(), 8.into())));
    }

    #[test]
    fn gamma_q_specialises_to_gamma() {
        // q = 1 forces gamma_q(a) = a^p/p
        for p in [2u32, 3, 5] {
            let c = ctx(p, 6, 2);
            let a = x().pow(2).add(&dx(1).scale(&int(3)));
            let gq = gamma_q(&a, &c).unwrap();
            assert_eq!(gq.specialize_q1(), gamma(&a, &c).specialize_q1(), "p = {p}");
        }
    }

    #[test]
    fn gamma_q_of_u_closed_form() {
        // gamma_q(q-1) = -(q-1)^2 sum_{i=2}^{p-1} (1/p) C(p,i) (q-1)^{i-2}
        for p in [2u32, 3, 5] {
            let c = ctx(p, 10, 1);
            let gq = gamma_q(&u(), &c).unwrap();
            let mut sum = Poly::zero_exact();
            let mut binom = BigInt::from(1);
            for i in 1..p {
                binom = binom * BigInt::from(p - i + 1) / BigInt::from(i);
                if i >= 2 {
                    let coeff = BigRational::new(binom.clone(), BigInt::from(p));
                    sum = sum.add(&u().pow(i - 2).scale(&coeff));
                }
            }
            let expect = u().pow(2).mul(&sum).neg().as_mod(10);
            assert_eq!(gq, expect, "p = {p}");
            // divisible by (q-1)^2
            if !gq.is_zero() {
                assert!(gq.u_order().unwrap() >= 2);
            }
        }
    }

    #[test]
    fn gamma_q_p2_explicit_truncation() {
        // gamma_q(x) at p=2, N=3: (x^2 + 2 dx) (1/2 - u/4 + u^2/8) - dx mod u^3
        let c = ctx(2, 3, 1);
        let gq = gamma_q(&x(), &c).unwrap();
        let series = Poly::constant(BigRational::new(1.into(), 2.into()))
            .add(&u().scale(&BigRational::new((-1).into(), 4.into())))
            .add(&u().pow(2).scale(&BigRational::new(1.into(), 8.into())))
            .as_mod(3);
        let expect = x().pow(2).add(&dx(1).scale(&int(2))).mul(&series).sub(&dx(1));
        assert_eq!(gq, expect);
        assert_eq!(gq.trunc(), Trunc::Mod(3));
    }

    #[test]
    fn delta_product_across_coordinates() {
        // delta(x1 x2) = x1^p d(x2) + x2^p d(x1) + p d(x1) d(x2)
        for p in [2u32, 3] {
            let c = ctx(p, 8, 1);
            let x2 = Poly::var(VarId::X(2));
            let dx2 = Poly::var(VarId::delta(2, 1));
            let lhs = delta_op(&x().mul(&x2), &c).unwrap();
            let rhs = x()
                .pow(p)
                .mul(&dx2)
                .add(&x2.pow(p).mul(&dx(1)))
                .add(&dx(1).mul(&dx2).scale(&int(p as i64)));
            assert_eq!(lhs, rhs, "p = {p}");
        }
    }

    #[test]
    fn integrality_flag() {
        let c = ctx(2, 8, 2);
        let e = DeltaElement::new(x().pow(2).add(&dx(1)), c).unwrap();
        assert!(e.is_integral());
        // delta of an integral element stays integral
        assert!(e.delta().unwrap().is_integral());
        let half = DeltaElement::new(x().scale(&BigRational::new(1.into(), 2.into())), c).unwrap();
        assert!(!half.is_integral());
    }
}
