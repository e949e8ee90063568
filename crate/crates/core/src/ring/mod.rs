//! Sparse exact multivariate polynomials over Q with (u)-adic truncation.
//!
//! Values live in Q[x_1, x_2, ..., d^k(x_i), u] where `u = q - 1`; the symbol
//! q itself is never a variable and parses to `1 + u`. Each polynomial
//! carries a truncation order: either `Exact` or `Mod(n)`, meaning the value
//! is a representative modulo u^n. Arithmetic between two truncated values
//! combines truncation orders by taking the minimum.
//!
//! Monomials are compared in graded reverse lexicographic order with the
//! variable order `u < x1 < x2 < ... < d1(x1) < d2(x1) < ... < d1(x2) < ...`;
//! terms are stored leading-first. Canonical form is an invariant: no zero
//! coefficients, strictly sorted terms, no term with u-exponent at or above
//! the truncation order. Two equal values have identical representations.

mod display;
mod parse;

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Zero};

use crate::{Error, Result};

pub use parse::parse_poly;

/// A variable of the ambient ring.
///
/// `U` is the element `u = q - 1`; `X(i)` is the i-th coordinate (indices
/// start at 1); `Delta { var, depth }` is `d^depth(x_var)` in the free
/// delta-ring tower (depth starts at 1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VarId {
    U,
    X(u32),
    Delta { var: u32, depth: u32 },
}

impl VarId {
    pub fn delta(var: u32, depth: u32) -> Self {
        VarId::Delta { var, depth }
    }
}

/// Ambient parameters: the prime p, the truncation order N in u and the
/// delta-tower depth bound D.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeContext {
    pub p: u32,
    pub trunc: u32,
    pub depth: u32,
}

pub(crate) fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while d.saturating_mul(d) <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl PrimeContext {
    pub fn new(p: u32, trunc: u32, depth: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidParameter(format!("p = {p} is not prime")));
        }
        if trunc < 1 {
            return Err(Error::InvalidParameter("truncation order must be >= 1".into()));
        }
        if depth < 1 {
            return Err(Error::InvalidParameter("delta-tower depth must be >= 1".into()));
        }
        Ok(PrimeContext { p, trunc, depth })
    }
}

/// Truncation order of a polynomial: exact, or a representative modulo u^n.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Trunc {
    Exact,
    Mod(u32),
}

impl Trunc {
    /// Combine the truncation orders of two operands (minimum wins).
    pub fn meet(self, other: Trunc) -> Trunc {
        match (self, other) {
            (Trunc::Exact, t) => t,
            (t, Trunc::Exact) => t,
            (Trunc::Mod(a), Trunc::Mod(b)) => Trunc::Mod(a.min(b)),
        }
    }

    /// `true` if a term with the given u-exponent survives this truncation.
    fn keeps(self, u_exp: u32) -> bool {
        match self {
            Trunc::Exact => true,
            Trunc::Mod(n) => u_exp < n,
        }
    }

    pub fn order(self) -> Option<u32> {
        match self {
            Trunc::Exact => None,
            Trunc::Mod(n) => Some(n),
        }
    }
}

/// A monomial: a sparse exponent map over [`VarId`], zero exponents absent.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    /// Sorted by `VarId`, all exponents nonzero.
    exps: Vec<(VarId, u32)>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial { exps: Vec::new() }
    }

    pub fn var(v: VarId) -> Self {
        Monomial { exps: vec![(v, 1)] }
    }

    pub fn var_pow(v: VarId, e: u32) -> Self {
        if e == 0 {
            Monomial::one()
        } else {
            Monomial { exps: vec![(v, e)] }
        }
    }

    /// Build from arbitrary (variable, exponent) pairs; merges and drops zeros.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (VarId, u32)>) -> Self {
        let mut map: BTreeMap<VarId, u32> = BTreeMap::new();
        for (v, e) in pairs {
            if e > 0 {
                *map.entry(v).or_insert(0) += e;
            }
        }
        Monomial { exps: map.into_iter().collect() }
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (VarId, u32)> + '_ {
        self.exps.iter().copied()
    }

    pub fn exp(&self, v: VarId) -> u32 {
        self.exps
            .binary_search_by(|(w, _)| w.cmp(&v))
            .map(|i| self.exps[i].1)
            .unwrap_or(0)
    }

    pub fn u_exp(&self) -> u32 {
        self.exp(VarId::U)
    }

    pub fn total_degree(&self) -> u64 {
        self.exps.iter().map(|&(_, e)| e as u64).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.exps.len() + other.exps.len());
        let (mut i, mut j) = (0, 0);
        while i < self.exps.len() && j < other.exps.len() {
            match self.exps[i].0.cmp(&other.exps[j].0) {
                Ordering::Less => {
                    out.push(self.exps[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(other.exps[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((self.exps[i].0, self.exps[i].1 + other.exps[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.exps[i..]);
        out.extend_from_slice(&other.exps[j..]);
        Monomial { exps: out }
    }

    /// Divide by `other` if every exponent allows it.
    pub fn try_div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.exps.len());
        let mut j = 0;
        for &(v, e) in &self.exps {
            let mut rem = e;
            if j < other.exps.len() && other.exps[j].0 < v {
                return None; // divisor has a variable we lack
            }
            if j < other.exps.len() && other.exps[j].0 == v {
                let d = other.exps[j].1;
                if d > e {
                    return None;
                }
                rem = e - d;
                j += 1;
            }
            if rem > 0 {
                out.push((v, rem));
            }
        }
        if j < other.exps.len() {
            return None;
        }
        Some(Monomial { exps: out })
    }

    pub fn pow(&self, k: u32) -> Monomial {
        Monomial { exps: self.exps.iter().map(|&(v, e)| (v, e * k)).collect() }
    }

    /// Largest delta depth per variable appearing in this monomial.
    pub fn max_delta_depth(&self) -> Option<u32> {
        self.exps
            .iter()
            .filter_map(|&(v, _)| match v {
                VarId::Delta { depth, .. } => Some(depth),
                _ => None,
            })
            .max()
    }

    /// Graded reverse lexicographic comparison under the fixed variable order.
    ///
    /// Higher total degree is larger; on ties the monomial whose exponent
    /// vector has the rightmost (largest-variable) nonzero difference with a
    /// *smaller* entry there is the larger one.
    fn cmp_grevlex(&self, other: &Monomial) -> Ordering {
        match self.total_degree().cmp(&other.total_degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        // Walk the union of variables from largest to smallest.
        let (mut i, mut j) = (self.exps.len(), other.exps.len());
        loop {
            match (i, j) {
                (0, 0) => return Ordering::Equal,
                (0, _) => {
                    // `other` has a larger variable with positive exponent:
                    // its rightmost difference is positive => other is smaller.
                    return Ordering::Greater;
                }
                (_, 0) => return Ordering::Less,
                _ => {}
            }
            let (va, ea) = self.exps[i - 1];
            let (vb, eb) = other.exps[j - 1];
            match va.cmp(&vb) {
                Ordering::Greater => return Ordering::Less, // self has extra large var
                Ordering::Less => return Ordering::Greater,
                Ordering::Equal => match ea.cmp(&eb) {
                    Ordering::Equal => {
                        i -= 1;
                        j -= 1;
                    }
                    // larger exponent at the rightmost difference => smaller
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Less => return Ordering::Greater,
                },
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_grevlex(other)
    }
}

/// A polynomial in canonical form: strictly descending monomials, nonzero
/// coefficients, truncated at `trunc`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    terms: Vec<(BigRational, Monomial)>,
    trunc: Trunc,
}

/// Per-term p-valuation data of a polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValuationProfile {
    /// p-adic valuation of the coefficient of each stored monomial.
    pub per_term: BTreeMap<Monomial, i64>,
    /// Minimum valuation over all terms; `None` for the zero polynomial.
    pub min_valuation: Option<i64>,
    /// Minimum u-exponent present; `None` for the zero polynomial.
    pub min_u_exp: Option<u32>,
}

/// p-adic valuation of an exact rational (negative for denominators).
pub fn rational_p_valuation(r: &BigRational, p: u32) -> i64 {
    fn int_val(mut n: BigInt, p: &BigInt) -> i64 {
        let mut v = 0i64;
        while !n.is_zero() && (&n % p).is_zero() {
            n /= p;
            v += 1;
        }
        v
    }
    let p = BigInt::from(p);
    int_val(r.numer().clone(), &p) - int_val(r.denom().clone(), &p)
}

impl Poly {
    pub fn zero(trunc: Trunc) -> Self {
        Poly { terms: Vec::new(), trunc }
    }

    pub fn zero_exact() -> Self {
        Poly::zero(Trunc::Exact)
    }

    pub fn constant(c: BigRational) -> Self {
        if c.is_zero() {
            Poly::zero_exact()
        } else {
            Poly { terms: vec![(c, Monomial::one())], trunc: Trunc::Exact }
        }
    }

    pub fn from_int(n: i64) -> Self {
        Poly::constant(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn var(v: VarId) -> Self {
        Poly { terms: vec![(BigRational::one(), Monomial::var(v))], trunc: Trunc::Exact }
    }

    /// The element q = 1 + u.
    pub fn q() -> Self {
        Poly::from_int(1).add(&Poly::var(VarId::U))
    }

    pub fn u_pow(k: u32) -> Self {
        if k == 0 {
            Poly::from_int(1)
        } else {
            Poly {
                terms: vec![(BigRational::one(), Monomial::var_pow(VarId::U, k))],
                trunc: Trunc::Exact,
            }
        }
    }

    pub fn monomial(c: BigRational, m: Monomial) -> Self {
        Poly::from_terms(vec![(c, m)], Trunc::Exact)
    }

    /// Canonicalise: merge duplicates, drop zeros and truncated terms, sort
    /// leading-first.
    pub fn from_terms(terms: Vec<(BigRational, Monomial)>, trunc: Trunc) -> Self {
        let mut map: BTreeMap<Monomial, BigRational> = BTreeMap::new();
        for (c, m) in terms {
            if c.is_zero() || !trunc.keeps(m.u_exp()) {
                continue;
            }
            let entry = map.entry(m).or_insert_with(BigRational::zero);
            *entry += c;
        }
        let mut out: Vec<(BigRational, Monomial)> = map
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(m, c)| (c, m))
            .collect();
        out.reverse(); // BTreeMap yields ascending grevlex; store leading-first
        Poly { terms: out, trunc }
    }

    pub fn trunc(&self) -> Trunc {
        self.trunc
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BigRational, &Monomial)> {
        self.terms.iter().map(|(c, m)| (c, m))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn leading(&self) -> Option<(&BigRational, &Monomial)> {
        self.terms.first().map(|(c, m)| (c, m))
    }

    pub fn coeff_of(&self, m: &Monomial) -> BigRational {
        self.terms
            .iter()
            .find(|(_, mm)| mm == m)
            .map(|(c, _)| c.clone())
            .unwrap_or_else(BigRational::zero)
    }

    /// Minimum u-exponent over stored terms (`None` for zero).
    pub fn u_order(&self) -> Option<u32> {
        self.terms.iter().map(|(_, m)| m.u_exp()).min()
    }

    /// Maximum u-exponent over stored terms (`None` for zero).
    pub fn u_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(_, m)| m.u_exp()).max()
    }

    pub fn total_degree(&self) -> Option<u64> {
        self.terms.iter().map(|(_, m)| m.total_degree()).max()
    }

    /// All variables appearing in the polynomial.
    pub fn variables(&self) -> Vec<VarId> {
        let mut vs: Vec<VarId> = self
            .terms
            .iter()
            .flat_map(|(_, m)| m.iter().map(|(v, _)| v))
            .collect();
        vs.sort();
        vs.dedup();
        vs
    }

    /// Largest delta depth appearing anywhere, with its variable.
    pub fn max_delta_depth(&self) -> Option<u32> {
        self.terms.iter().filter_map(|(_, m)| m.max_delta_depth()).max()
    }

    /// Re-truncate to the given order (must be compatible: only ever deepen).
    pub fn truncate(&self, trunc: Trunc) -> Poly {
        let t = self.trunc.meet(trunc);
        if t == self.trunc {
            return self.clone();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .filter(|(_, m)| t.keeps(m.u_exp()))
                .cloned()
                .collect(),
            trunc: t,
        }
    }

    /// Reinterpret an exact value as a representative modulo u^n.
    pub fn as_mod(&self, n: u32) -> Poly {
        self.truncate(Trunc::Mod(n))
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let trunc = self.trunc.meet(other.trunc);
        let mut terms = Vec::with_capacity(self.terms.len() + other.terms.len());
        terms.extend(self.terms.iter().cloned());
        terms.extend(other.terms.iter().cloned());
        Poly::from_terms(terms, trunc)
    }

    pub fn neg(&self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(c, m)| (-c.clone(), m.clone())).collect(),
            trunc: self.trunc,
        }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let trunc = self.trunc.meet(other.trunc);
        let mut map: BTreeMap<Monomial, BigRational> = BTreeMap::new();
        for (ca, ma) in &self.terms {
            for (cb, mb) in &other.terms {
                let m = ma.mul(mb);
                if !trunc.keeps(m.u_exp()) {
                    continue;
                }
                let entry = map.entry(m).or_insert_with(BigRational::zero);
                *entry += ca * cb;
            }
        }
        let mut out: Vec<(BigRational, Monomial)> = map
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(m, c)| (c, m))
            .collect();
        out.reverse();
        Poly { terms: out, trunc }
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.trunc);
        }
        Poly {
            terms: self.terms.iter().map(|(a, m)| (a * c, m.clone())).collect(),
            trunc: self.trunc,
        }
    }

    pub fn mul_monomial(&self, c: &BigRational, m: &Monomial) -> Poly {
        let terms = self
            .terms
            .iter()
            .map(|(a, mm)| (a * c, mm.mul(m)))
            .collect();
        Poly::from_terms(terms, self.trunc)
    }

    pub fn pow(&self, mut k: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::from_int(1).truncate(self.trunc);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Exact division: returns q with `self = q * divisor` up to the shared
    /// truncation. Fails with a witness remainder term otherwise.
    ///
    /// When the divisor has positive u-order d, the quotient is only
    /// determined modulo u^(n-d) and its truncation order is lowered
    /// accordingly.
    pub fn div_exact(&self, divisor: &Poly) -> Result<Poly> {
        if divisor.is_zero() {
            return Err(Error::NotDivisible { witness: "division by zero".into() });
        }
        let meet = self.trunc.meet(divisor.trunc);
        let d_ord = divisor.u_order().unwrap_or(0);
        let out_trunc = match meet {
            Trunc::Exact => Trunc::Exact,
            Trunc::Mod(n) => {
                if d_ord >= n {
                    return Err(Error::NotDivisible {
                        witness: format!("divisor vanishes modulo u^{n}"),
                    });
                }
                Trunc::Mod(n - d_ord)
            }
        };
        // Single-term divisor: divide term by term for a precise witness.
        if divisor.terms.len() == 1 {
            let (dc, dm) = &divisor.terms[0];
            let mut out = Vec::with_capacity(self.terms.len());
            for (c, m) in &self.terms {
                match m.try_div(dm) {
                    Some(q) => out.push((c / dc, q)),
                    None => {
                        return Err(Error::NotDivisible {
                            witness: display::term_string(c, m),
                        })
                    }
                }
            }
            return Ok(Poly::from_terms(out, out_trunc));
        }
        let mut rem = self.truncate(meet);
        let mut quo: Vec<(BigRational, Monomial)> = Vec::new();
        let (lead_c, lead_m) = {
            let (c, m) = divisor.terms.first().expect("nonzero divisor");
            (c.clone(), m.clone())
        };
        while let Some((rc, rm)) = rem.leading() {
            let qm = match rm.try_div(&lead_m) {
                Some(q) => q,
                None => {
                    return Err(Error::NotDivisible {
                        witness: display::term_string(rc, rm),
                    })
                }
            };
            let qc = rc / &lead_c;
            let part = divisor.mul_monomial(&qc, &qm).truncate(meet);
            rem = rem.sub(&part);
            quo.push((qc, qm));
        }
        Ok(Poly::from_terms(quo, out_trunc))
    }

    /// Invert a unit modulo u^n by Newton iteration.
    ///
    /// The u^0-part must be a single nonzero rational constant term.
    pub fn invert_unit(&self, n: u32) -> Result<Poly> {
        let n_eff = match self.trunc {
            Trunc::Exact => n,
            Trunc::Mod(m) => n.min(m),
        };
        if n_eff == 0 {
            return Err(Error::InsufficientPrecision { required: 1, available: 0 });
        }
        let u0: Vec<&(BigRational, Monomial)> =
            self.terms.iter().filter(|(_, m)| m.u_exp() == 0).collect();
        let c = match u0.as_slice() {
            [(c, m)] if m.is_one() => c.clone(),
            _ => return Err(Error::NotAUnit),
        };
        let a = self.as_mod(n_eff);
        let mut b = Poly::constant(c.recip()).as_mod(n_eff);
        let two = Poly::from_int(2).as_mod(n_eff);
        loop {
            let prod = a.mul(&b);
            if prod == Poly::from_int(1).as_mod(n_eff) {
                return Ok(b);
            }
            b = b.mul(&two.sub(&prod));
        }
    }

    /// Set u := 0; keeps only u-free terms. The result is exact in the
    /// remaining variables (truncation at order >= 1 determines them).
    pub fn specialize_q1(&self) -> Poly {
        let terms = self
            .terms
            .iter()
            .filter(|(_, m)| m.u_exp() == 0)
            .cloned()
            .collect();
        Poly { terms, trunc: Trunc::Exact }
    }

    /// Per-term p-adic valuations of the coefficients, with the minimum over
    /// all terms and the minimum u-exponent present.
    pub fn p_valuation_profile(&self, p: u32) -> ValuationProfile {
        let mut per_term = BTreeMap::new();
        for (c, m) in &self.terms {
            per_term.insert(m.clone(), rational_p_valuation(c, p));
        }
        ValuationProfile {
            min_valuation: per_term.values().min().copied(),
            min_u_exp: self.u_order(),
            per_term,
        }
    }

    /// Ring-homomorphic substitution: variables in `map` are replaced by the
    /// given polynomials, all others are fixed.
    pub fn substitute(&self, map: &BTreeMap<VarId, Poly>) -> Poly {
        let mut acc = Poly::zero(self.trunc);
        for (c, m) in &self.terms {
            let mut term = Poly::constant(c.clone()).truncate(self.trunc);
            let mut fixed = Monomial::one();
            for (v, e) in m.iter() {
                match map.get(&v) {
                    Some(repl) => term = term.mul(&repl.pow(e)),
                    None => fixed = fixed.mul(&Monomial::var_pow(v, e)),
                }
            }
            if !fixed.is_one() {
                term = term.mul_monomial(&BigRational::one(), &fixed);
            }
            acc = acc.add(&term);
        }
        acc
    }

    /// Whether all coefficients are p-integral.
    pub fn is_p_integral(&self, p: u32) -> bool {
        self.terms.iter().all(|(c, _)| rational_p_valuation(c, p) >= 0)
    }

    /// Parse a polynomial from the text grammar.
    pub fn parse(input: &str) -> Result<Poly> {
        parse::parse_poly(input)
    }

    /// Canonical text form re-expressed in q instead of u.
    pub fn to_q_string(&self) -> String {
        display::q_form_string(self)
    }
}

impl std::ops::Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        Poly::add(self, rhs)
    }
}

impl std::ops::Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        Poly::sub(self, rhs)
    }
}

impl std::ops::Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        Poly::mul(self, rhs)
    }
}

impl std::ops::Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::neg(self)
    }
}
