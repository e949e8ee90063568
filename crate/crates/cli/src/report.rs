//! Canonical serialisation of verification data.
//!
//! JSON output uses sorted keys (the default serde_json map), contains no
//! floats, and renders every rational as an exact "num/den" string so
//! certificates round-trip. Timing is deliberately excluded from emitted
//! reports: identical runs must be byte-identical.

use serde_json::{json, Map, Value};

use qforge_core::envelope::{FilStatus, FilWitness};
use qforge_core::membership::{IdealSpec, MembershipCertificate};
use qforge_core::tower::{VerificationReport, VerifyStatus};
use qforge_core::Poly;

/// Render a polynomial for output, optionally re-expressed in q.
pub fn poly_string(p: &Poly, print_q: bool) -> String {
    if print_q {
        p.to_q_string()
    } else {
        p.to_string()
    }
}

pub fn status_string(s: VerifyStatus) -> &'static str {
    match s {
        VerifyStatus::Verified => "verified",
        VerifyStatus::Refuted => "refuted",
        VerifyStatus::Inconclusive => "inconclusive",
    }
}

/// Certificate in the documented schema: the materialised ideal, one
/// cofactor string per generator, the target and the (always re-verified)
/// zero residual.
pub fn certificate_json(
    target: &Poly,
    ideal: &IdealSpec,
    cert: &MembershipCertificate,
    print_q: bool,
) -> Value {
    let materialized = ideal.materialize();
    let gens: Vec<Value> = materialized
        .iter()
        .map(|(_, g)| Value::String(poly_string(g, print_q)))
        .collect();
    let mut cofs = vec![Poly::zero_exact(); materialized.len()];
    for (idx, c) in &cert.cofactors {
        cofs[*idx] = c.clone();
    }
    let cof_strings: Vec<Value> = cofs
        .iter()
        .map(|c| Value::String(poly_string(c, print_q)))
        .collect();
    let mut residual = target.clone();
    for (idx, c) in &cert.cofactors {
        residual = residual.sub(&c.mul(&materialized[*idx].1));
    }
    json!({
        "ideal": gens,
        "cofactors": cof_strings,
        "target": poly_string(target, print_q),
        "residual": poly_string(&residual, print_q),
        "basis": cert.basis_note,
    })
}

pub fn verification_json(r: &VerificationReport, print_q: bool) -> Value {
    let mut m = Map::new();
    m.insert("property".into(), Value::String(r.property.tag()));
    m.insert("level".into(), json!(r.level));
    m.insert("status".into(), Value::String(status_string(r.status).into()));
    m.insert("detail".into(), Value::String(r.detail.clone()));
    if let Some(w) = &r.witness {
        m.insert("witness".into(), Value::String(w.clone()));
    }
    if let (Some(cert), Some(ideal), Some(target)) =
        (&r.certificate, &r.certificate_ideal, &r.certificate_target)
    {
        m.insert("certificate".into(), certificate_json(target, ideal, cert, print_q));
    }
    if let Some(b) = r.degree_bound {
        m.insert("degree_bound".into(), json!(b));
    }
    Value::Object(m)
}

pub fn fil_witness_json(w: &FilWitness, print_q: bool) -> Value {
    let mut m = Map::new();
    m.insert("level".into(), json!(w.level));
    m.insert(
        "status".into(),
        Value::String(
            match w.status {
                FilStatus::Member => "member",
                FilStatus::NonMember => "non-member",
            }
            .into(),
        ),
    );
    if let Some((mon, coeff)) = &w.offending {
        m.insert("witness".into(), Value::String(format!("{coeff}*{mon}")));
        let _ = print_q;
    }
    Value::Object(m)
}

/// Canonical byte rendering: pretty JSON with sorted keys and a trailing
/// newline.
pub fn to_canonical_bytes(v: &Value) -> Vec<u8> {
    let mut s = serde_json::to_string_pretty(v).expect("serialisable");
    s.push('\n');
    s.into_bytes()
}
