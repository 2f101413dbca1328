//! JSON encodings of engine objects, used for certificates in reports.

use purederive_core::complex::Homotopy;
use purederive_core::purity::{DegreeVerdict, FactorPart, FailureReason, NotPureWitness, PureQuasiIsoVerdict};
use purederive_core::{BoundedComplex, ChainMap, ExtendedInt, FgModule, Int, ModuleMap, PurityProfile, RingMatrix};
use serde_json::{json, Value};

pub fn int(v: &Int) -> Value {
    match i64::try_from(v) {
        Ok(n) => json!(n),
        Err(_) => json!(v.to_string()),
    }
}

pub fn ints(v: &[Int]) -> Value {
    Value::Array(v.iter().map(int).collect())
}

pub fn matrix(m: &RingMatrix) -> Value {
    Value::Array((0..m.rows()).map(|i| ints(m.row(i))).collect())
}

pub fn ext(v: ExtendedInt) -> Value {
    match v {
        ExtendedInt::Finite(n) => json!(n),
        other => json!(other.to_string()),
    }
}

pub fn module(m: &FgModule) -> Value {
    json!({
        "canonical": m.canonical_form().to_string(),
        "generators": m.gens(),
        "relations": matrix(m.relations()),
    })
}

pub fn map(f: &ModuleMap) -> Value {
    json!({
        "codomain": f.codomain().canonical_form().to_string(),
        "domain": f.domain().canonical_form().to_string(),
        "matrix": matrix(f.matrix()),
    })
}

pub fn complex(x: &BoundedComplex) -> Value {
    let Some((lo, hi)) = x.range() else { return json!({ "terms": [], "differentials": [] }) };
    let terms: Vec<Value> = (lo..=hi).map(|n| json!({ "degree": n, "module": module(&x.term(n)) })).collect();
    let diffs: Vec<Value> = (lo..hi).map(|n| json!({ "degree": n, "matrix": matrix(x.differential(n).matrix()) })).collect();
    json!({ "terms": terms, "differentials": diffs })
}

pub fn chain_map(f: &ChainMap) -> Value {
    let range = match (f.source().range(), f.target().range()) {
        (Some((a, b)), Some((c, d))) => Some((a.max(c), b.min(d))),
        _ => None,
    };
    let comps: Vec<Value> = match range {
        Some((lo, hi)) if lo <= hi => {
            (lo..=hi).map(|n| json!({ "degree": n, "matrix": matrix(f.component(n).matrix()) })).collect()
        }
        _ => Vec::new(),
    };
    Value::Array(comps)
}

pub fn homotopy(h: &Homotopy) -> Value {
    Value::Array(h.components.iter().map(|(n, m)| json!({ "degree": n, "matrix": matrix(m.matrix()) })).collect())
}

pub fn witness(w: &NotPureWitness) -> Value {
    json!({ "test_module": w.test_module.canonical_form().to_string(), "unliftable": map(&w.unliftable) })
}

fn reason(r: &FailureReason) -> Value {
    match r {
        FailureReason::Factorization { map_degree, part, witness: w } => json!({
            "clause": "image_factorization",
            "map_degree": map_degree,
            "part": match part { FactorPart::Epi => "kernel_image", FactorPart::Mono => "image_cokernel" },
            "witness": witness(w),
        }),
        FailureReason::Homology { homology } => json!({
            "clause": "kernel_cokernel",
            "homology": homology.canonical_form().to_string(),
        }),
        FailureReason::KernelCokernel { witness: w } => json!({
            "clause": "kernel_cokernel",
            "witness": witness(w),
        }),
    }
}

pub fn profile(p: &PurityProfile) -> Value {
    let degrees: Vec<Value> = p
        .verdicts
        .iter()
        .map(|(n, v)| match v {
            DegreeVerdict::PureExact => json!({ "degree": n, "pure_exact": true }),
            DegreeVerdict::Fails(rs) => json!({
                "degree": n,
                "pure_exact": false,
                "reasons": rs.iter().map(reason).collect::<Vec<_>>(),
            }),
        })
        .collect();
    json!({
        "degrees": degrees,
        "family_capped": p.family_capped,
        "inf_p": ext(p.inf_p),
        "sup_p": ext(p.sup_p),
        "tests_used": p.tests_used,
    })
}

pub fn qiso(v: &PureQuasiIsoVerdict) -> Value {
    match v {
        PureQuasiIsoVerdict::Yes { cone_profile } => json!({ "pure_quasi_iso": true, "cone_profile": profile(cone_profile) }),
        PureQuasiIsoVerdict::No { first_failing_degree } => {
            json!({ "pure_quasi_iso": false, "first_failing_degree": first_failing_degree })
        }
    }
}
