//! JSON renderings of core results. Field order is fixed by construction.

use grpvol_core::hopf::{
    render_decimal, BoundReport, ComplexityBound, CoverReport, GrowthReport, PairingResult, Rounding,
};
use grpvol_core::linalg::Rational;
use grpvol_core::presentations::{
    abelianization, deficiency_bounds, rank_bounds, tietze_simplify, AbelianInvariants, ExtInt, Interval,
    Presentation,
};
use grpvol_core::simplicial::{homology, qhs_failure, Homology, Triangulation};
use grpvol_core::subgroups::SubgroupFilter;
use grpvol_core::volumes::{AxiomReport, DistinctabilityReport, HopfianReport, VolumeEstimate};
use serde_json::{json, Value};

use crate::formats::{cochain_json, rational_string};

fn q(r: &Rational) -> Value {
    json!(rational_string(r))
}

fn opt_q(r: Option<&Rational>) -> Value {
    r.map_or(Value::Null, q)
}

pub fn decimal(r: &Rational, mode: Rounding) -> Value {
    json!({"value": render_decimal(r, mode), "rounding": mode.to_string()})
}

fn ext(v: ExtInt) -> Value {
    match v.finite() {
        Some(x) => json!(x),
        None => json!(v.to_string()),
    }
}

pub fn interval(i: &Interval) -> Value {
    json!({"lo": ext(i.lo), "hi": ext(i.hi)})
}

pub fn abelian(a: &AbelianInvariants) -> Value {
    json!({"group": a.to_string(), "free_rank": a.free_rank, "torsion": a.torsion})
}

pub fn filter_name(f: SubgroupFilter) -> &'static str {
    match f {
        SubgroupFilter::All => "all",
        SubgroupFilter::ConjugacyClasses => "conjugacy",
        SubgroupFilter::Normal => "normal",
    }
}

pub fn analyze(p: &Presentation, budget: usize) -> Value {
    let simplified = tietze_simplify(p, budget);
    json!({
        "generators": p.generator_count(),
        "relators": p.relator_count(),
        "presentation_deficiency": p.deficiency(),
        "abelianization": abelian(&abelianization(p)),
        "rank": interval(&rank_bounds(p, budget)),
        "deficiency": interval(&deficiency_bounds(p, budget)),
        "simplified": {
            "generators": simplified.generator_count(),
            "relators": simplified.relator_count(),
            "presentation": simplified.to_string(),
        },
    })
}

pub fn volume(v: &VolumeEstimate) -> Value {
    let per_index: Vec<Value> = v
        .per_index
        .iter()
        .map(|s| {
            json!({
                "d": s.index,
                "count": s.count,
                "min_ratio": opt_q(s.min_ratio.as_ref()),
                "max_ratio": opt_q(s.max_ratio.as_ref()),
            })
        })
        .collect();
    json!({
        "kind": v.kind.to_string(),
        "max_index": v.max_index,
        "filter": filter_name(v.filter),
        "per_index": per_index,
        "truncated_value": q(&v.truncated_value),
        "truncated_liminf": q(&v.truncated_liminf),
        "truncated_limsup": q(&v.truncated_limsup),
        "base_value": q(&v.base_value),
        "assumptions": v.assumptions,
        "findings": v.findings,
    })
}

pub fn axioms(r: &AxiomReport) -> Value {
    let checks: Vec<Value> = r
        .checks
        .iter()
        .map(|c| {
            json!({
                "d": c.index,
                "rank_ub": c.rank_ub,
                "def_lb": c.def_lb,
                "rank_holds": c.rank_holds,
                "rank_equality": c.rank_equality,
                "def_holds": c.def_holds,
                "def_equality": c.def_equality,
            })
        })
        .collect();
    let findings: Vec<String> = r
        .violations()
        .map(|c| format!("index {} subgroup violates the volume inequality", c.index))
        .collect();
    json!({
        "max_index": r.max_index,
        "rank_ub": r.rank_ub,
        "def_lb": r.def_lb,
        "all_hold": r.all_hold(),
        "checks": checks,
        "findings": findings,
    })
}

pub fn distinct(r: &DistinctabilityReport) -> Value {
    let certificate = r.certificate.as_ref().map_or(Value::Null, |c| {
        json!({
            "functional": c.functional,
            "lower_bound": q(&c.lower_bound),
            "deficiency": interval(&c.deficiency),
        })
    });
    json!({
        "distinctable": r.distinctable,
        "certificate": certificate,
        "conclusion": r.conclusion,
    })
}

pub fn hopfian(r: &HopfianReport) -> Value {
    let findings: Vec<&str> = if r.holds {
        vec![]
    } else {
        vec!["truncated rank volume of the source is below that of the target"]
    };
    json!({
        "source_value": q(&r.source_value),
        "target_value": q(&r.target_value),
        "source_abelianization": abelian(&r.source_abelianization),
        "target_abelianization": abelian(&r.target_abelianization),
        "holds": r.holds,
        "assumptions": r.assumptions,
        "findings": findings,
    })
}

fn homology_json(h: &Homology) -> Value {
    let groups: Vec<String> = h.groups.iter().map(|g| g.to_string()).collect();
    let betti: Vec<usize> = (0..4).map(|k| h.betti(k)).collect();
    json!({"groups": groups, "betti": betti, "text": h.to_string()})
}

pub fn check(t: &Triangulation, dplusdelta: Option<Value>) -> Value {
    let h = homology(t);
    let failure = qhs_failure(t, &h);
    let c = t.counts();
    let euler = c[0] as i64 - c[1] as i64 + c[2] as i64 - c[3] as i64;
    json!({
        "vertices": t.vertex_count(),
        "counts": c,
        "euler_characteristic": euler,
        "orientable": t.is_orientable(),
        "connected": h.is_connected(),
        "homology": homology_json(&h),
        "qhs": failure.is_none(),
        "qhs_failure": failure.map(|f| f.to_string()),
        "adjacency": t.adjacency(),
        "dplusdelta": dplusdelta,
    })
}

pub fn pairing(r: &PairingResult, with_potential: bool) -> Value {
    let mut v = json!({
        "pairing": q(&r.value),
        "gauge": r.gauge.to_string(),
    });
    if with_potential {
        v["potential"] = cochain_json(&r.potential);
    }
    v
}

pub fn bound(b: &ComplexityBound) -> Value {
    json!({
        "a": b.a,
        "n": b.n,
        "c3": b.c3,
        "sup_norm": b.sup_norm.to_string(),
        "bound": decimal(&b.upper, Rounding::Up),
        "bound_lower": decimal(&b.lower, Rounding::Down),
    })
}

pub fn bound_report(r: &BoundReport) -> Value {
    json!({
        "pairing": q(&r.pairing),
        "gauge": "harmonic",
        "gamma_sup_norm": q(&r.gamma_sup_norm),
        "bound": decimal(&r.bound.upper, Rounding::Up),
        "margin": decimal(&r.margin, Rounding::Down),
        "status": r.status.to_string(),
        "complexity": bound(&r.bound),
        "findings": r.findings,
    })
}

pub fn cover(r: &CoverReport) -> Value {
    let d = Rational::from_integer(r.degree.into());
    json!({
        "degree": r.degree,
        "connected": r.connected,
        "cover_qhs": r.cover_qhs,
        "counts": r.counts,
        "base_pairing": q(&r.base_pairing),
        "expected_pairing": q(&(d * &r.base_pairing)),
        "cover_pairing": opt_q(r.cover_pairing.as_ref()),
        "multiplicative": r.multiplicative,
        "bound": r.bound.as_ref().map(bound),
        "bound_status": r.bound_status.map(|s| s.to_string()),
        "skipped": r.skipped,
        "findings": r.findings,
    })
}

pub fn growth_rows(r: &GrowthReport) -> Vec<Value> {
    r.rows
        .iter()
        .map(|row| {
            json!({
                "d": row.degree,
                "c3": row.c3,
                "bound": decimal(&row.bound.upper, Rounding::Up),
                "pairing": opt_q(row.pairing.as_ref()),
                "expected_pairing": q(&row.expected_pairing),
                "implied_c3_lower": row.implied_c3_lower,
                "note": row.note,
            })
        })
        .collect()
}

pub fn growth(r: &GrowthReport) -> Value {
    json!({
        "constant": r.constant.map(|c| format!("{:.12}", c)),
        "constant_definition": r.constant_definition,
        "inapplicable": r.inapplicable,
        "table": growth_rows(r),
    })
}

/// `d,c3,bound,pairing,expected_pairing,implied_c3_lower,note`
pub fn growth_csv(r: &GrowthReport) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["d", "c3", "bound", "pairing", "expected_pairing", "implied_c3_lower", "note"])
        .unwrap();
    for row in &r.rows {
        w.write_record([
            row.degree.to_string(),
            row.c3.to_string(),
            render_decimal(&row.bound.upper, Rounding::Up),
            row.pairing.as_ref().map(rational_string).unwrap_or_default(),
            rational_string(&row.expected_pairing),
            row.implied_c3_lower.map(|x| x.to_string()).unwrap_or_default(),
            row.note.clone().unwrap_or_default(),
        ])
        .unwrap();
    }
    String::from_utf8(w.into_inner().unwrap()).unwrap()
}

/// Indented `key: value` lines.
pub fn pretty(v: &Value) -> String {
    fn walk(v: &Value, indent: usize, out: &mut String) {
        let pad = "  ".repeat(indent);
        match v {
            Value::Object(m) => {
                for (k, x) in m {
                    if x.is_object() || (x.is_array() && x.as_array().unwrap().iter().any(|e| e.is_object())) {
                        out.push_str(&format!("{}{}:\n", pad, k));
                        walk(x, indent + 1, out);
                    } else {
                        out.push_str(&format!("{}{}: {}\n", pad, k, scalar(x)));
                    }
                }
            }
            Value::Array(a) => {
                for (i, x) in a.iter().enumerate() {
                    out.push_str(&format!("{}[{}]\n", pad, i));
                    walk(x, indent + 1, out);
                }
            }
            other => out.push_str(&format!("{}{}\n", pad, scalar(other))),
        }
    }
    fn scalar(v: &Value) -> String {
        match v {
            Value::String(s) => s.clone(),
            Value::Null => "-".into(),
            other => other.to_string(),
        }
    }
    let mut out = String::new();
    walk(v, 0, &mut out);
    out
}

/// Indented JSON with arrays of scalars kept on one line.
pub fn json_text(v: &Value) -> String {
    fn scalar_array(v: &Value) -> bool {
        v.as_array().is_some_and(|a| a.iter().all(|e| !e.is_array() && !e.is_object()))
    }
    fn walk(v: &Value, indent: usize, out: &mut String) {
        let pad = "  ".repeat(indent + 1);
        match v {
            Value::Object(m) if !m.is_empty() => {
                out.push_str("{\n");
                for (i, (k, x)) in m.iter().enumerate() {
                    out.push_str(&pad);
                    out.push_str(&serde_json::to_string(k).unwrap());
                    out.push_str(": ");
                    walk(x, indent + 1, out);
                    out.push_str(if i + 1 < m.len() { ",\n" } else { "\n" });
                }
                out.push_str(&"  ".repeat(indent));
                out.push('}');
            }
            Value::Array(a) if !a.is_empty() && !scalar_array(v) => {
                out.push_str("[\n");
                for (i, x) in a.iter().enumerate() {
                    out.push_str(&pad);
                    walk(x, indent + 1, out);
                    out.push_str(if i + 1 < a.len() { ",\n" } else { "\n" });
                }
                out.push_str(&"  ".repeat(indent));
                out.push(']');
            }
            Value::Array(a) => {
                let items: Vec<String> = a.iter().map(|e| serde_json::to_string(e).unwrap()).collect();
                out.push('[');
                out.push_str(&items.join(", "));
                out.push(']');
            }
            other => out.push_str(&serde_json::to_string(other).unwrap()),
        }
    }
    let mut out = String::new();
    walk(v, 0, &mut out);
    out.push('\n');
    out
}
