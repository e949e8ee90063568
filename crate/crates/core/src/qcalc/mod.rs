//! Jackson q-derivatives, the multivariate q-nabla and the log-series
//! comparison operator.
//!
//! The q-derivative is computed by its defining quotient
//! (f(q x_i) - f) / ((q-1) x_i), an exact division on polynomials; the
//! log-series operator Theta_i = (q^{theta_i} - 1) / ((q-1) x_i) with
//! theta_i the Euler operator is an independent truncated-series route to
//! the same values. Inputs may involve the coordinates and q but no
//! delta-variables.

pub mod complex;

use std::collections::BTreeMap;

use num::bigint::BigInt;
use num::rational::BigRational;

use crate::ring::{Monomial, Poly, Trunc, VarId};
use crate::{Error, Result};

pub use complex::{
    build_complex, qhodge_filtration_member, ComplexMode, FiltrationResult, FilteredCochain,
    QComplex, SpecializedComplex,
};

fn reject_delta_vars(f: &Poly, operation: &str) -> Result<()> {
    for v in f.variables() {
        if matches!(v, VarId::Delta { .. }) {
            return Err(Error::UnsupportedVariable {
                operation: operation.to_string(),
                var: format!("{v:?}"),
            });
        }
    }
    Ok(())
}

/// Substitute x_i -> q x_i.
pub fn shift_q(f: &Poly, i: u32) -> Result<Poly> {
    reject_delta_vars(f, "shift_q")?;
    let mut map = BTreeMap::new();
    map.insert(VarId::X(i), Poly::q().mul(&Poly::var(VarId::X(i))));
    Ok(f.substitute(&map))
}

/// The Jackson q-derivative in the i-th coordinate:
/// (f(q x_i) - f) / ((q-1) x_i).
pub fn q_partial(f: &Poly, i: u32) -> Result<Poly> {
    let shifted = shift_q(f, i)?;
    let num = shifted.sub(f);
    if num.is_zero() {
        return Ok(Poly::zero(f.trunc()));
    }
    let divisor = Poly::var(VarId::U).mul(&Poly::var(VarId::X(i)));
    num.div_exact(&divisor)
}

/// log(1+u) as a truncated series modulo u^n.
fn log_one_plus_u(n: u32) -> Poly {
    let mut terms = Vec::new();
    for k in 1..n {
        let sign = if k % 2 == 1 { 1 } else { -1 };
        terms.push((
            BigRational::new(BigInt::from(sign), BigInt::from(k)),
            Monomial::var_pow(VarId::U, k),
        ));
    }
    Poly::from_terms(terms, Trunc::Mod(n))
}

/// exp(m L) modulo u^n for a series L of positive u-order.
fn exp_scaled(l: &Poly, m: u32, n: u32) -> Poly {
    let ml = l.scale(&BigRational::from_integer(BigInt::from(m)));
    let mut acc = Poly::from_int(1).as_mod(n);
    let mut term = Poly::from_int(1).as_mod(n);
    for j in 1..n as u64 {
        term = term.mul(&ml).scale(&BigRational::new(BigInt::from(1), BigInt::from(j)));
        if term.is_zero() {
            break;
        }
        acc = acc.add(&term);
    }
    acc
}

/// The log-series operator Theta_i f = (q^{theta_i} - 1) f / ((q-1) x_i)
/// with q^{theta_i} = exp(theta_i log q) truncated modulo u^n.
///
/// On a monomial of x_i-degree m, q^{theta_i} multiplies by exp(m log(1+u)).
/// The series are carried at one guard order so the quotient by (q-1) x_i
/// comes out determined modulo u^n.
pub fn log_operator(f: &Poly, i: u32, n: u32) -> Result<Poly> {
    reject_delta_vars(f, "log_operator")?;
    if n < 1 {
        return Err(Error::InsufficientPrecision { required: 1, available: 0 });
    }
    let n_int = n + 1;
    let l = log_one_plus_u(n_int);
    let mut exp_cache: BTreeMap<u32, Poly> = BTreeMap::new();
    let mut num = Poly::zero(Trunc::Mod(n_int));
    for (c, m) in f.terms() {
        let deg = m.exp(VarId::X(i));
        if deg == 0 {
            continue; // exp(0) - 1 = 0
        }
        let e = exp_cache
            .entry(deg)
            .or_insert_with(|| exp_scaled(&l, deg, n_int))
            .clone();
        let factor = e.sub(&Poly::from_int(1).as_mod(n_int));
        num = num.add(&factor.mul_monomial(c, m));
    }
    if num.is_zero() {
        return Ok(Poly::zero(Trunc::Mod(n)));
    }
    let divisor = Poly::var(VarId::U).mul(&Poly::var(VarId::X(i)));
    num.div_exact(&divisor)
}
