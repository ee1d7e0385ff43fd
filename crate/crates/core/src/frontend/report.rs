//! Machine-readable (`schema_version` "1") and plain-text reports.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde_json::{json, Map, Value};

use crate::analyzers::{Classification, NormalFormCase, ObstructionSequence, Verdict, Witness};
use crate::coeffring::rational::format_rational;
use crate::coeffring::{ParamPolynomial, ParamTable};
use crate::normalform::{FirstIndex, NormalFormResult, ResonanceData};
use crate::vectorfield::PlanarVectorField;

use super::normalize::Normalized;

pub const SCHEMA_VERSION: &str = "1";

fn index_value(i: &FirstIndex) -> Value {
    match i {
        FirstIndex::At(k) => json!(k),
        FirstIndex::AtLeast(_) => json!(i.to_string()),
    }
}

fn poly_map(m: &BTreeMap<u32, ParamPolynomial>, t: &ParamTable) -> Value {
    Value::Object(
        m.iter()
            .map(|(k, v)| (k.to_string(), json!(v.to_canonical_string(t))))
            .collect(),
    )
}

pub fn scalings_json(n: &Normalized) -> Value {
    json!({
        "time": format_rational(&n.time_scale),
        "z": format_rational(&n.z_scale),
    })
}

pub fn resonance_json(r: &ResonanceData, t: &ParamTable) -> Value {
    let s = |p: &Option<ParamPolynomial>| {
        p.as_ref()
            .map_or(Value::Null, |p| json!(p.to_canonical_string(t)))
    };
    json!({
        "l0": index_value(&r.l0),
        "m0": index_value(&r.m0),
        "n0": index_value(&r.n0),
        "a_principal": s(&r.principal_a),
        "b_principal": s(&r.principal_b),
    })
}

pub fn normal_form_json(nf: &NormalFormResult, t: &ParamTable) -> Value {
    json!({
        "max_index": nf.max_index,
        "a": poly_map(&nf.a, t),
        "b": poly_map(&nf.b, t),
    })
}

pub fn obstructions_json(s: &ObstructionSequence, t: &ParamTable) -> Value {
    let degrees: Map<String, Value> = s
        .entries
        .keys()
        .map(|k| (k.to_string(), json!(2 * k)))
        .collect();
    json!({
        "method": s.method.tag(),
        "max_index": s.max_index,
        "entries": poly_map(&s.entries, t),
        "degrees": degrees,
    })
}

pub fn verdict_json(verdict: &Verdict, case: Option<&NormalFormCase>) -> Value {
    let mut o = Map::new();
    o.insert("verdict".into(), json!(verdict.tag()));
    o.insert("case".into(), case.map_or(Value::Null, |c| json!(c.tag())));
    if let Verdict::NotIntegrable(Witness::Obstruction { method, index }) = verdict {
        o.insert("witness_method".into(), json!(method.tag()));
        o.insert("witness_index".into(), json!(index));
        o.insert("witness_degree".into(), json!(2 * index));
    }
    if let Some(NormalFormCase::B3(Some((n1, n2)))) = case {
        o.insert("coprime_pair".into(), json!([n1.to_string(), n2.to_string()]));
    }
    Value::Object(o)
}

/// Full report of a classification run.
pub fn classification_json(c: &Classification, t: &ParamTable, n: &Normalized) -> Value {
    let mut seqs = c.sequences.iter();
    json!({
        "schema_version": SCHEMA_VERSION,
        "parameters": t.names(),
        "scalings_applied": scalings_json(n),
        "resonance": resonance_json(&c.resonance, t),
        "normal_form": normal_form_json(&c.normal_form, t),
        "obstructions": seqs.next().map_or(Value::Null, |s| obstructions_json(s, t)),
        "additional_obstructions": seqs.map(|s| obstructions_json(s, t)).collect::<Vec<_>>(),
        "classification": verdict_json(&c.verdict, Some(&c.case)),
    })
}

pub fn planar_json(p: &PlanarVectorField, t: &ParamTable) -> Value {
    json!({
        "du": p.pu.to_text(("u", "v"), t),
        "dv": p.pv.to_text(("u", "v"), t),
    })
}

pub fn scalings_text(n: &Normalized) -> String {
    if n.is_identity() {
        String::new()
    } else {
        format!(
            "scalings: t -> {}*t, z -> {}*z\n",
            format_rational(&n.time_scale),
            format_rational(&n.z_scale)
        )
    }
}

pub fn resonance_text(r: &ResonanceData, t: &ParamTable) -> String {
    let mut s = format!("resonance: l0 = {}, m0 = {}, n0 = {}\n", r.l0, r.m0, r.n0);
    if let (Some(k), Some(a)) = (r.l0.value(), &r.principal_a) {
        let _ = writeln!(s, "  a_{k} = {}", a.to_canonical_string(t));
    }
    if let (Some(k), Some(b)) = (r.m0.value(), &r.principal_b) {
        let _ = writeln!(s, "  b_{k} = {}", b.to_canonical_string(t));
    }
    s
}

pub fn normal_form_text(nf: &NormalFormResult, t: &ParamTable) -> String {
    let mut s = String::new();
    for k in 1..=nf.max_index {
        let _ = writeln!(s, "a_{k} = {}", nf.a(k).to_canonical_string(t));
        let _ = writeln!(s, "b_{k} = {}", nf.b(k).to_canonical_string(t));
    }
    s
}

pub fn obstructions_text(seq: &ObstructionSequence, t: &ParamTable) -> String {
    let mut s = format!("{} obstructions:\n", seq.method);
    for (k, v) in &seq.entries {
        let _ = writeln!(s, "  z^{k} (degree {}): {}", 2 * k, v.to_canonical_string(t));
    }
    s
}

pub fn classification_text(c: &Classification, t: &ParamTable, n: &Normalized) -> String {
    let mut s = scalings_text(n);
    s.push_str(&resonance_text(&c.resonance, t));
    s.push_str(&format!("case: {}", c.case.tag()));
    if let NormalFormCase::B3(Some((n1, n2))) = &c.case {
        s.push_str(&format!(" (n1, n2) = ({n1}, {n2})"));
    }
    s.push('\n');
    for seq in &c.sequences {
        s.push_str(&obstructions_text(seq, t));
    }
    let _ = writeln!(s, "verdict: {}", c.verdict.tag());
    s
}
