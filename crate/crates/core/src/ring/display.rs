//! Canonical text form of polynomials.
//!
//! Printing always uses the strict grammar
//! `term := rational ["*" factor {"*" factor}]`, terms joined by ` + ` with
//! signs carried in the rational. Factors within a monomial print as the
//! coordinates first, then delta-variables, then `u` (or `q`) last. Parsing
//! accepts this form back bit-exactly.

use std::collections::BTreeMap;
use std::fmt;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Zero};

use super::{Monomial, Poly, VarId};

fn var_string(v: VarId) -> String {
    match v {
        VarId::U => "u".to_string(),
        VarId::X(i) => format!("x{i}"),
        VarId::Delta { var, depth } => format!("d{depth}(x{var})"),
    }
}

/// Print order within a monomial: x's, then delta's, then u.
fn factor_sort_key(v: VarId) -> (u8, u32, u32) {
    match v {
        VarId::X(i) => (0, i, 0),
        VarId::Delta { var, depth } => (1, var, depth),
        VarId::U => (2, 0, 0),
    }
}

pub(super) fn term_string(c: &BigRational, m: &Monomial) -> String {
    let mut factors: Vec<(VarId, u32)> = m.iter().collect();
    factors.sort_by_key(|&(v, _)| factor_sort_key(v));
    let mut s = c.to_string();
    for (v, e) in factors {
        s.push('*');
        s.push_str(&var_string(v));
        if e > 1 {
            s.push('^');
            s.push_str(&e.to_string());
        }
    }
    s
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut factors: Vec<(VarId, u32)> = self.iter().collect();
        factors.sort_by_key(|&(v, _)| factor_sort_key(v));
        let parts: Vec<String> = factors
            .iter()
            .map(|&(v, e)| {
                if e > 1 {
                    format!("{}^{e}", var_string(v))
                } else {
                    var_string(v)
                }
            })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms().map(|(c, m)| term_string(c, m)).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Re-express in q: substitute u = q - 1 and collect coefficients of powers
/// of q. Only used for display; arithmetic stays in u-form.
pub(super) fn q_form_string(p: &Poly) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    // Group terms by the u-free part of the monomial, keeping the u-profile.
    let mut groups: BTreeMap<Monomial, Vec<(u32, BigRational)>> = BTreeMap::new();
    for (c, m) in p.terms() {
        let u_exp = m.u_exp();
        let rest = Monomial::from_pairs(m.iter().filter(|&(v, _)| v != VarId::U));
        groups.entry(rest).or_default().push((u_exp, c.clone()));
    }
    // Expand each u-profile sum_k c_k u^k as sum_j d_j q^j via
    // u^k = (q - 1)^k = sum_j C(k, j) (-1)^{k-j} q^j.
    let mut q_terms: Vec<(Monomial, u32, BigRational)> = Vec::new();
    for (rest, profile) in groups {
        let mut qcoeffs: BTreeMap<u32, BigRational> = BTreeMap::new();
        for (k, c) in profile {
            let mut binom = BigInt::one(); // C(k, 0)
            for j in 0..=k {
                if j > 0 {
                    binom = binom * BigInt::from(k - j + 1) / BigInt::from(j);
                }
                let sign = if (k - j) % 2 == 0 { BigInt::one() } else { -BigInt::one() };
                let add = &c * BigRational::from_integer(&binom * sign);
                let entry = qcoeffs.entry(j).or_insert_with(BigRational::zero);
                *entry += add;
            }
        }
        for (j, d) in qcoeffs {
            if !d.is_zero() {
                q_terms.push((rest.clone(), j, d));
            }
        }
    }
    // Deterministic order: grevlex-descending on (rest * u^j), reusing the
    // u slot for the q-power.
    q_terms.sort_by(|a, b| {
        let ma = a.0.mul(&Monomial::var_pow(VarId::U, a.1));
        let mb = b.0.mul(&Monomial::var_pow(VarId::U, b.1));
        mb.cmp(&ma)
    });
    let parts: Vec<String> = q_terms
        .iter()
        .map(|(rest, j, d)| {
            let mut s = term_string(d, rest);
            if *j > 0 {
                s.push_str("*q");
                if *j > 1 {
                    s.push('^');
                    s.push_str(&j.to_string());
                }
            }
            s
        })
        .collect();
    parts.join(" + ")
}
