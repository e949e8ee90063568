//! Coordinate q-de Rham and q-Hodge complexes in Koszul form, and the
//! coordinate q-Hodge filtration test.
//!
//! Degree k of the complex is free of rank C(r, k) on the basis
//! dx_{i1} ^ ... ^ dx_{ik} with i1 < ... < ik; the differential inserts
//! dx_i with sign (-1)^{number of smaller indices already present}. In
//! q-de Rham mode the inserted operator is the partial q-derivative; in
//! q-Hodge mode every entry additionally carries a factor u = q - 1.
//!
//! The d o d = 0 check works with the differential matrices themselves:
//! entries are formal words in commuting symbols g_i (standing for the
//! partial q-derivatives, which commute pairwise) with polynomial
//! coefficients, so the matrix product is exact polynomial algebra. The
//! commutation of the realised operators is property-tested separately.

use std::collections::BTreeMap;

use num::bigint::BigInt;
use num::rational::BigRational;

use crate::ring::{Monomial, Poly, Trunc, VarId};
use crate::{Error, Result};

use super::q_partial;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComplexMode {
    QDeRham,
    QHodge,
}

/// A Koszul-shaped cochain complex on r coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QComplex {
    pub r: usize,
    pub mode: ComplexMode,
    /// Set once the complex has been specialised at q = 1.
    pub specialized: bool,
}

/// Result of specialising a complex at q = 1. For a q-Hodge complex the
/// image has zero differentials (u maps to 0); that is flagged rather than
/// treated as an error.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecializedComplex {
    pub complex: QComplex,
    /// True when the specialisation collapsed every differential to zero.
    pub zero_differential_warning: bool,
}

/// All k-subsets of {0, .., r-1} as sorted index vectors, in lexicographic
/// order; this fixes the basis numbering of every degree.
pub fn subsets(r: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, r: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..r {
            cur.push(i);
            rec(i + 1, r, k, cur, out);
            cur.pop();
        }
    }
    rec(0, r, k, &mut cur, &mut out);
    out
}

fn binomial(r: usize, k: usize) -> usize {
    if k > r {
        return 0;
    }
    let mut n = 1usize;
    for i in 0..k {
        n = n * (r - i) / (i + 1);
    }
    n
}

/// Matrix entry of a differential (or a composition of differentials): a sum
/// of formal words in the commuting derivative symbols, with polynomial
/// coefficients. Words are kept sorted, which encodes the commutativity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpPoly {
    pub terms: BTreeMap<Vec<usize>, Poly>,
}

impl OpPoly {
    pub fn zero() -> Self {
        OpPoly { terms: BTreeMap::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.values().all(|p| p.is_zero())
    }

    fn add_term(&mut self, word: Vec<usize>, coeff: Poly) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(word).or_insert_with(Poly::zero_exact);
        *entry = entry.add(&coeff);
        if self.terms.values().any(|p| p.is_zero()) {
            self.terms.retain(|_, p| !p.is_zero());
        }
    }

    pub fn compose(&self, inner: &OpPoly) -> OpPoly {
        let mut out = OpPoly::zero();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &inner.terms {
                let mut w = w1.clone();
                w.extend_from_slice(w2);
                w.sort_unstable();
                out.add_term(w, c1.mul(c2));
            }
        }
        out
    }

    pub fn add(&self, other: &OpPoly) -> OpPoly {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }
}

impl QComplex {
    pub fn module_rank(&self, k: usize) -> usize {
        binomial(self.r, k)
    }

    /// The formal differential matrix from degree k to degree k+1. Row
    /// indices run over (k+1)-subsets, columns over k-subsets, both in the
    /// order of [`subsets`].
    pub fn differential_matrix(&self, k: usize) -> Vec<Vec<OpPoly>> {
        let rows = subsets(self.r, k + 1);
        let cols = subsets(self.r, k);
        let coeff_one = Poly::from_int(1);
        let coeff_u = Poly::var(VarId::U);
        let mut matrix = vec![vec![OpPoly::zero(); cols.len()]; rows.len()];
        for (cj, s) in cols.iter().enumerate() {
            for i in 0..self.r {
                if s.contains(&i) {
                    continue;
                }
                let mut t = s.clone();
                let pos = t.iter().filter(|&&j| j < i).count();
                t.insert(pos, i);
                let ri = rows.iter().position(|row| row == &t).expect("subset present");
                let sign = if pos % 2 == 0 { BigInt::from(1) } else { BigInt::from(-1) };
                let base = if self.specialized && self.mode == ComplexMode::QHodge {
                    Poly::zero_exact()
                } else {
                    match self.mode {
                        ComplexMode::QDeRham => coeff_one.clone(),
                        ComplexMode::QHodge => coeff_u.clone(),
                    }
                };
                let coeff = base.scale(&BigRational::from_integer(sign));
                matrix[ri][cj].add_term(vec![i], coeff);
            }
        }
        matrix
    }

    /// Exact check that d_{k+1} o d_k = 0 on the full formal matrices for
    /// every degree.
    pub fn d_squared_is_zero(&self) -> bool {
        for k in 0..self.r.saturating_sub(1) {
            let d0 = self.differential_matrix(k);
            let d1 = self.differential_matrix(k + 1);
            let rows = d1.len();
            let mids = d0.len();
            let cols = if mids == 0 { 0 } else { d0[0].len() };
            for ri in 0..rows {
                for cj in 0..cols {
                    let mut acc = OpPoly::zero();
                    for m in 0..mids {
                        acc = acc.add(&d1[ri][m].compose(&d0[m][cj]));
                    }
                    if !acc.is_zero() {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Apply the degree-k differential to a cochain vector.
    pub fn apply_differential(&self, k: usize, v: &[Poly]) -> Result<Vec<Poly>> {
        let expected = self.module_rank(k);
        if v.len() != expected {
            return Err(Error::DimensionMismatch { expected, got: v.len() });
        }
        let rows = subsets(self.r, k + 1);
        let cols = subsets(self.r, k);
        let mut out = vec![Poly::zero_exact(); rows.len()];
        for (cj, s) in cols.iter().enumerate() {
            if v[cj].is_zero() {
                continue;
            }
            for i in 0..self.r {
                if s.contains(&i) {
                    continue;
                }
                let mut t = s.clone();
                let pos = t.iter().filter(|&&j| j < i).count();
                t.insert(pos, i);
                let ri = rows.iter().position(|row| row == &t).expect("subset present");
                let applied = self.apply_operator(i, &v[cj])?;
                let signed = if pos % 2 == 0 { applied } else { applied.neg() };
                out[ri] = out[ri].add(&signed);
            }
        }
        Ok(out)
    }

    /// The single-coordinate operator realised by matrix entries: q-d_i,
    /// u q-d_i, the classical d_i after specialisation, or zero.
    fn apply_operator(&self, i: usize, f: &Poly) -> Result<Poly> {
        let var = (i + 1) as u32; // coordinates are 1-indexed in VarId
        match (self.mode, self.specialized) {
            (ComplexMode::QDeRham, false) => q_partial(f, var),
            (ComplexMode::QHodge, false) => {
                Ok(Poly::var(VarId::U).mul(&q_partial(f, var)?))
            }
            (ComplexMode::QDeRham, true) => classical_partial(f, var),
            (ComplexMode::QHodge, true) => Ok(Poly::zero(f.trunc())),
        }
    }

    /// Specialise at q = 1. q-de Rham mode yields the classical de Rham
    /// complex; q-Hodge mode yields the zero-differential complex, flagged.
    pub fn specialize_to_derham(&self) -> SpecializedComplex {
        SpecializedComplex {
            complex: QComplex { r: self.r, mode: self.mode, specialized: true },
            zero_differential_warning: self.mode == ComplexMode::QHodge,
        }
    }
}

/// Classical partial derivative in the i-th coordinate (used by specialised
/// complexes); coefficients of the input are specialised at q = 1 first.
fn classical_partial(f: &Poly, i: u32) -> Result<Poly> {
    let f = f.specialize_q1();
    let mut terms = Vec::new();
    for (c, m) in f.terms() {
        let e = m.exp(VarId::X(i));
        if e == 0 {
            continue;
        }
        let lowered = m
            .try_div(&Monomial::var(VarId::X(i)))
            .expect("positive exponent divides");
        terms.push((c * BigRational::from_integer(BigInt::from(e)), lowered));
    }
    Ok(Poly::from_terms(terms, Trunc::Exact))
}

/// Build the Koszul complex on r coordinates in the given mode.
pub fn build_complex(r: usize, mode: ComplexMode) -> Result<QComplex> {
    if r < 1 {
        return Err(Error::InvalidParameter("complex needs r >= 1 coordinates".into()));
    }
    Ok(QComplex { r, mode, specialized: false })
}

/// A cochain with components in degrees 0..r, tested against filtration
/// level i.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FilteredCochain {
    pub level: u32,
    /// components\[k\] is the coefficient vector in degree k; a missing degree
    /// means zero there.
    pub components: Vec<Poly>,
}

/// Outcome of the coordinate q-Hodge filtration test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FiltrationResult {
    Member,
    /// The degree and offending monomial that violates the u-order bound.
    NonMember { degree: usize, monomial: Monomial },
}

/// Degree-k component of Fil^i must lie in (q-1)^{max(i-k, 0)} times the
/// module; checked as a minimum u-exponent per component.
pub fn qhodge_filtration_member(cochain: &FilteredCochain) -> FiltrationResult {
    for (k, comp) in cochain.components.iter().enumerate() {
        let required = cochain.level.saturating_sub(k as u32);
        if required == 0 {
            continue;
        }
        for (_, m) in comp.terms() {
            if m.u_exp() < required {
                return FiltrationResult::NonMember { degree: k, monomial: m.clone() };
            }
        }
    }
    FiltrationResult::Member
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qanalog::q_integer;

    fn x(i: u32) -> Poly {
        Poly::var(VarId::X(i))
    }

    fn u() -> Poly {
        Poly::var(VarId::U)
    }

    #[test]
    fn ranks_and_bases() {
        let c = build_complex(3, ComplexMode::QDeRham).unwrap();
        assert_eq!(c.module_rank(0), 1);
        assert_eq!(c.module_rank(1), 3);
        assert_eq!(c.module_rank(2), 3);
        assert_eq!(c.module_rank(3), 1);
        assert_eq!(subsets(3, 2), vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
    }

    #[test]
    fn degree_zero_differential_single_variable() {
        // r = 1 QDR: d0(x^2) = (1 + q) x
        let c = build_complex(1, ComplexMode::QDeRham).unwrap();
        let out = c.apply_differential(0, &[x(1).pow(2)]).unwrap();
        assert_eq!(out, vec![q_integer(2).mul(&x(1))]);
    }

    #[test]
    fn qhodge_multiplies_by_u() {
        // r = 1 QHODGE: d0(x) = u
        let c = build_complex(1, ComplexMode::QHodge).unwrap();
        let out = c.apply_differential(0, &[x(1)]).unwrap();
        assert_eq!(out, vec![u()]);
    }

    #[test]
    fn gradient_of_product() {
        // r = 2, k = 0, f = x1 x2 -> (x2, x1)
        let c = build_complex(2, ComplexMode::QDeRham).unwrap();
        let out = c.apply_differential(0, &[x(1).mul(&x(2))]).unwrap();
        assert_eq!(out, vec![x(2), x(1)]);
    }

    #[test]
    fn d_squared_zero_on_applied_cochain() {
        let c = build_complex(2, ComplexMode::QDeRham).unwrap();
        let f = x(1).pow(3).mul(&x(2).pow(2));
        let df = c.apply_differential(0, &[f]).unwrap();
        let ddf = c.apply_differential(1, &df).unwrap();
        assert!(ddf.iter().all(|p| p.is_zero()));
    }

    #[test]
    fn d_squared_zero_formal_matrices() {
        for r in 1..=3 {
            for mode in [ComplexMode::QDeRham, ComplexMode::QHodge] {
                let c = build_complex(r, mode).unwrap();
                assert!(c.d_squared_is_zero(), "r = {r}, mode = {mode:?}");
            }
        }
    }

    #[test]
    fn zero_vector_maps_to_zero() {
        let c = build_complex(3, ComplexMode::QDeRham).unwrap();
        let z = vec![Poly::zero_exact(); 3];
        let out = c.apply_differential(1, &z).unwrap();
        assert!(out.iter().all(|p| p.is_zero()));
    }

    #[test]
    fn dimension_mismatch() {
        let c = build_complex(2, ComplexMode::QDeRham).unwrap();
        let err = c.apply_differential(0, &[x(1), x(2)]).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { expected: 1, got: 2 }));
    }

    #[test]
    fn specialization_gives_classical_derivative() {
        // d0(x^3) specialises to 3 x^2
        let c = build_complex(1, ComplexMode::QDeRham).unwrap();
        let s = c.specialize_to_derham();
        assert!(!s.zero_differential_warning);
        let out = s.complex.apply_differential(0, &[x(1).pow(3)]).unwrap();
        let expect = x(1).pow(2).scale(&BigRational::from_integer(3.into()));
        assert_eq!(out, vec![expect]);
    }

    #[test]
    fn qhodge_specialization_is_zero_with_warning() {
        let c = build_complex(2, ComplexMode::QHodge).unwrap();
        let s = c.specialize_to_derham();
        assert!(s.zero_differential_warning);
        let out = s.complex.apply_differential(0, &[x(1).pow(4)]).unwrap();
        assert!(out.iter().all(|p| p.is_zero()));
        // formal matrices are zero as well, so d^2 = 0 trivially
        assert!(s.complex.d_squared_is_zero());
    }

    #[test]
    fn specialized_complex_still_a_complex() {
        let c = build_complex(2, ComplexMode::QDeRham).unwrap().specialize_to_derham();
        assert!(c.complex.d_squared_is_zero());
        let f = x(1).pow(2).mul(&x(2).pow(3));
        let df = c.complex.apply_differential(0, &[f]).unwrap();
        let ddf = c.complex.apply_differential(1, &df).unwrap();
        assert!(ddf.iter().all(|p| p.is_zero()));
    }

    #[test]
    fn filtration_member_examples() {
        // i = 2, r = 1, (u^2 x, u) is in Fil^2
        let w = FilteredCochain {
            level: 2,
            components: vec![u().pow(2).mul(&x(1)), u()],
        };
        assert_eq!(qhodge_filtration_member(&w), FiltrationResult::Member);
        // i = 0 accepts anything
        let w0 = FilteredCochain { level: 0, components: vec![x(1), Poly::from_int(3)] };
        assert_eq!(qhodge_filtration_member(&w0), FiltrationResult::Member);
        // i = 2, (u x, u) fails in degree 0 with witness u x
        let bad = FilteredCochain {
            level: 2,
            components: vec![u().mul(&x(1)), u()],
        };
        match qhodge_filtration_member(&bad) {
            FiltrationResult::NonMember { degree, monomial } => {
                assert_eq!(degree, 0);
                assert_eq!(
                    monomial,
                    Monomial::from_pairs([(VarId::U, 1), (VarId::X(1), 1)])
                );
            }
            FiltrationResult::Member => panic!("should fail"),
        }
    }

    #[test]
    fn filtration_mod_u_degenerates_to_hodge() {
        // at u = 0 a cochain is in Fil^i iff components below degree i vanish
        let f = x(1).pow(2); // u-free
        let w = FilteredCochain { level: 1, components: vec![f.clone(), Poly::zero_exact()] };
        assert!(matches!(
            qhodge_filtration_member(&w),
            FiltrationResult::NonMember { degree: 0, .. }
        ));
        let ok = FilteredCochain { level: 1, components: vec![Poly::zero_exact(), f] };
        assert_eq!(qhodge_filtration_member(&ok), FiltrationResult::Member);
    }
}
