//! Report serialization. JSON reports are wrapped as
//! `{"schema": 1, "instance": ..., "command": ..., "payload": ...}` with
//! stable key order; text mode prints the same facts for humans.

use derham_core::derham_decompose::{DecompositionReport, Indecomposability, Summand};
use derham_core::oracle::CrosscheckReport;
use derham_core::phi_analysis::{ModuleVerdict, PhiVerdict, SummandPhi};
use derham_core::quadratic_space::Signature;
use derham_core::uniqueness::ComparisonReport;
use derham_core::{PhiStatus, RatMatrix, Subspace, SummandKind, UniquenessVerdict, Verdict};
use serde_json::{json, Value};

use crate::instance::matrix_value;

pub fn wrap(instance: &str, command: &str, payload: Value) -> Value {
    json!({
        "schema": 1,
        "instance": instance,
        "command": command,
        "payload": payload,
    })
}

/// Pretty-printer that keeps scalar-only arrays (matrix rows, prime lists)
/// on one line. Keys come out sorted, so the bytes are canonical.
pub fn pretty(v: &Value) -> String {
    let mut out = String::new();
    write_value(v, 0, &mut out);
    out.push('\n');
    out
}

fn is_scalar(v: &Value) -> bool {
    !matches!(v, Value::Array(_) | Value::Object(_))
}

fn write_value(v: &Value, indent: usize, out: &mut String) {
    match v {
        Value::Array(items) if items.is_empty() => out.push_str("[]"),
        Value::Array(items) if items.iter().all(is_scalar) => {
            let inline: Vec<String> =
                items.iter().map(|x| serde_json::to_string(x).expect("scalar")).collect();
            out.push('[');
            out.push_str(&inline.join(", "));
            out.push(']');
        }
        Value::Array(items) => {
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                push_indent(indent + 1, out);
                write_value(item, indent + 1, out);
                if i + 1 < items.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            push_indent(indent, out);
            out.push(']');
        }
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(map) => {
            out.push_str("{\n");
            for (i, (key, value)) in map.iter().enumerate() {
                push_indent(indent + 1, out);
                out.push_str(&serde_json::to_string(key).expect("string"));
                out.push_str(": ");
                write_value(value, indent + 1, out);
                if i + 1 < map.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            push_indent(indent, out);
            out.push('}');
        }
        scalar => out.push_str(&serde_json::to_string(scalar).expect("scalar")),
    }
}

fn push_indent(indent: usize, out: &mut String) {
    for _ in 0..indent {
        out.push_str("  ");
    }
}

pub fn kind_name(kind: SummandKind) -> &'static str {
    match kind {
        SummandKind::TrivialFlat => "trivial_flat",
        SummandKind::FixedZero => "fixed_zero",
        SummandKind::FixedIsotropic => "fixed_isotropic",
    }
}

pub fn phi_status_name(status: PhiStatus) -> &'static str {
    match status {
        PhiStatus::SatisfiedCertified => "satisfied_certified",
        PhiStatus::SatisfiedProbabilistic => "satisfied_probabilistic",
        PhiStatus::Violated => "violated",
        PhiStatus::Inconclusive => "inconclusive",
    }
}

pub fn module_verdict_name(verdict: ModuleVerdict) -> &'static str {
    match verdict {
        ModuleVerdict::IndecomposableCertified => "indecomposable_certified",
        ModuleVerdict::IndecomposableProbabilistic => "indecomposable_probabilistic",
        ModuleVerdict::Decomposable => "decomposable",
    }
}

pub fn verdict_name(verdict: Verdict) -> &'static str {
    match verdict {
        Verdict::Identical => "identical",
        Verdict::EquivalentUpToIsometry => "equivalent_up_to_isometry",
        Verdict::Distinct => "distinct",
    }
}

fn signature_json(sig: &Signature) -> Value {
    json!({"plus": sig.plus, "minus": sig.minus, "zero": sig.zero})
}

fn signature_text(sig: &Signature) -> String {
    format!("({}, {}, {})", sig.plus, sig.minus, sig.zero)
}

pub fn subspace_json(s: &Subspace) -> Value {
    json!({"dim": s.dim(), "basis": matrix_value(s.basis())})
}

fn indecomposability_json(i: &Indecomposability) -> Value {
    match i {
        Indecomposability::Certified => json!({"status": "certified"}),
        Indecomposability::Probabilistic { retries } => {
            json!({"status": "probabilistic", "retries": retries})
        }
        Indecomposability::NotClaimed => json!({"status": "not_claimed"}),
    }
}

fn indecomposability_text(i: &Indecomposability) -> String {
    match i {
        Indecomposability::Certified => "indecomposable (certified)".into(),
        Indecomposability::Probabilistic { retries } => {
            format!("indecomposable (probabilistic, {retries} retries)")
        }
        Indecomposability::NotClaimed => "indecomposability not claimed".into(),
    }
}

fn summand_json(s: &Summand) -> Value {
    json!({
        "subspace": subspace_json(&s.subspace),
        "kind": kind_name(s.kind),
        "signature": signature_json(&s.signature),
        "fixed_dim": s.fixed_dim,
        "fixed_subspace": subspace_json(&s.fixed_subspace),
        "moved_span": subspace_json(&s.moved_span_local),
        "indecomposability": indecomposability_json(&s.indecomposability),
    })
}

pub fn matrix_lines(m: &RatMatrix, out: &mut String) {
    for r in 0..m.rows() {
        let row: Vec<String> = (0..m.cols()).map(|c| m.get(r, c).to_string()).collect();
        out.push_str("  [");
        out.push_str(&row.join(", "));
        out.push_str("]\n");
    }
}

pub fn decompose_payload(report: &DecompositionReport, oracle: Option<&CrosscheckReport>) -> Value {
    let mut payload = json!({
        "seed": report.seed,
        "trivial_part": summand_json(&report.trivial_part),
        "summands": report.summands.iter().map(summand_json).collect::<Vec<_>>(),
        "p1": report.p1,
        "p2": report.p2,
        "certificates": report.certificates.iter().map(matrix_value).collect::<Vec<_>>(),
    });
    if let Some(check) = oracle {
        payload["oracle"] = crosscheck_json(check);
    }
    payload
}

pub fn crosscheck_json(check: &CrosscheckReport) -> Value {
    let evidence: Vec<Value> = check
        .evidence
        .iter()
        .map(|e| {
            json!({
                "prime": e.prime,
                "valid": e.valid,
                "certificates_reduce_to_idempotents": e.certificates_reduce_to_idempotents,
                "nontrivial_selfadjoint": e.nontrivial_selfadjoint,
                "nontrivial_full": e.nontrivial_full,
                "note": e.note,
            })
        })
        .collect();
    json!({
        "evidence": evidence,
        "soundness_violation": check.soundness_violation,
        "needs_manual_review": check.needs_manual_review,
        "notes": check.notes,
    })
}

pub fn decompose_text(name: &str, report: &DecompositionReport, oracle: Option<&CrosscheckReport>) -> String {
    let mut out = format!("instance: {name} (seed {})\n", report.seed);
    let trivial = &report.trivial_part;
    out.push_str(&format!(
        "trivial part: dim {}, signature {}\n",
        trivial.subspace.dim(),
        signature_text(&trivial.signature)
    ));
    if !trivial.subspace.is_zero() {
        matrix_lines(trivial.subspace.basis(), &mut out);
    }
    for (i, s) in report.summands.iter().enumerate() {
        out.push_str(&format!(
            "summand {}: dim {}, kind {}, signature {}, fixed dim {}, {}\n",
            i + 1,
            s.subspace.dim(),
            kind_name(s.kind),
            signature_text(&s.signature),
            s.fixed_dim,
            indecomposability_text(&s.indecomposability),
        ));
        matrix_lines(s.subspace.basis(), &mut out);
    }
    out.push_str(&format!(
        "counts: p1 = {} (fixed_zero), p2 = {} (fixed_isotropic)\n",
        report.p1, report.p2
    ));
    out.push_str(&format!("certificates: {} verified projector(s)\n", report.certificates.len()));
    if let Some(check) = oracle {
        let primes: Vec<String> = check.evidence.iter().map(|e| e.prime.to_string()).collect();
        out.push_str(&format!(
            "oracle: primes {} — soundness violation: {}\n",
            primes.join(", "),
            if check.soundness_violation { "YES" } else { "no" }
        ));
    }
    out
}

pub fn analyze_payload(
    signature: &Signature,
    fixed: &Subspace,
    isotropic: bool,
    moved: &Subspace,
    duality_holds: bool,
) -> Value {
    json!({
        "signature": signature_json(signature),
        "fixed_space": subspace_json(fixed),
        "fixed_space_isotropic": isotropic,
        "moved_span": subspace_json(moved),
        "duality": if duality_holds { "holds" } else { "fails" },
    })
}

pub fn analyze_text(
    name: &str,
    dim: usize,
    signature: &Signature,
    fixed: &Subspace,
    isotropic: bool,
    moved: &Subspace,
    duality_holds: bool,
) -> String {
    let mut out = format!("instance: {name}\n");
    out.push_str(&format!("dimension: {dim}, signature: {}\n", signature_text(signature)));
    out.push_str(&format!(
        "fixed space: dim {}, isotropic: {}\n",
        fixed.dim(),
        if isotropic { "yes" } else { "no" }
    ));
    matrix_lines(fixed.basis(), &mut out);
    out.push_str(&format!("moved span: dim {}\n", moved.dim()));
    matrix_lines(moved.basis(), &mut out);
    out.push_str(&format!("duality: {}\n", if duality_holds { "holds" } else { "FAILS" }));
    out
}

fn witness_json(w: &SummandPhi) -> Value {
    json!({
        "summand_index": w.summand_index,
        "neutral_signature": w.neutral_signature,
        "verdict": module_verdict_name(w.verdict),
        "splitting_idempotent": w.splitting_idempotent.as_ref().map(matrix_value),
        "isotropic_pair": w.isotropic_pair.as_ref().map(|(a, b)| {
            json!([subspace_json(a), subspace_json(b)])
        }),
        "note": w.note,
    })
}

pub fn phi_payload(phi: &PhiVerdict) -> Value {
    json!({
        "status": phi_status_name(phi.status),
        "witnesses": phi.witnesses.iter().map(witness_json).collect::<Vec<_>>(),
    })
}

pub fn phi_text(name: &str, phi: &PhiVerdict) -> String {
    let mut out = format!("instance: {name}\nstatus: {}\n", phi_status_name(phi.status));
    for w in &phi.witnesses {
        out.push_str(&format!(
            "summand {}: neutral signature: {}, verdict: {}\n",
            w.summand_index + 1,
            if w.neutral_signature { "yes" } else { "no" },
            module_verdict_name(w.verdict),
        ));
        if let Some((a, b)) = &w.isotropic_pair {
            out.push_str(&format!(
                "  isotropic invariant pair: dims {} + {}\n",
                a.dim(),
                b.dim()
            ));
        }
        if !w.note.is_empty() {
            out.push_str(&format!("  note: {}\n", w.note));
        }
    }
    out
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

pub fn compare_payload(cmp: &ComparisonReport) -> Value {
    json!({
        "matching": cmp.matching.as_ref().map(|pairs| {
            pairs.iter().map(|&(i, j)| json!([i, j])).collect::<Vec<_>>()
        }),
        "counts_equal": [cmp.counts_equal.0, cmp.counts_equal.1],
        "dims_equal": cmp.dims_equal,
        "moved_spans_equal": cmp.moved_spans_equal,
        "subspace_identical": cmp.subspace_identical,
        "factors_equal": cmp.factors_equal,
        "isometry": cmp.isometry.as_ref().map(|map| {
            json!({
                "matrix": matrix_value(&map.matrix),
                "block_structure": map.block_structure,
            })
        }),
        "verdict": verdict_name(cmp.verdict),
        "notes": cmp.notes,
    })
}

pub fn compare_text(name: &str, label_a: &str, label_b: &str, cmp: &ComparisonReport) -> String {
    let mut out = format!("instance: {name}\ncomparing {label_a:?} vs {label_b:?}\n");
    out.push_str(&format!(
        "counts equal: {} / {}\n",
        yes_no(cmp.counts_equal.0),
        yes_no(cmp.counts_equal.1)
    ));
    if let Some(pairs) = &cmp.matching {
        for (k, &(i, j)) in pairs.iter().enumerate() {
            out.push_str(&format!(
                "pair {}: summand {} ↔ summand {}, dims equal: {}, moved spans equal: {}, identical: {}\n",
                k + 1,
                i + 1,
                j + 1,
                yes_no(cmp.dims_equal.get(k).copied().unwrap_or(false)),
                yes_no(cmp.moved_spans_equal.get(k).copied().unwrap_or(false)),
                yes_no(cmp.subspace_identical.get(k).copied().unwrap_or(false)),
            ));
        }
    } else {
        out.push_str("no consistent pairing of summands exists\n");
    }
    match &cmp.isometry {
        Some(map) => {
            out.push_str(&format!(
                "isometry: found, blocks [{}]\n",
                map.block_structure.join(", ")
            ));
            matrix_lines(&map.matrix, &mut out);
        }
        None => out.push_str("isometry: none constructed\n"),
    }
    if !cmp.factors_equal.is_empty() {
        out.push_str(&format!(
            "factors equal: {}\n",
            yes_no(cmp.factors_equal.iter().all(|&x| x))
        ));
    }
    out.push_str(&format!("verdict: {}\n", verdict_name(cmp.verdict)));
    for note in &cmp.notes {
        out.push_str(&format!("note: {note}\n"));
    }
    out
}

pub fn uniqueness_json(verdict: &UniquenessVerdict) -> Value {
    match verdict {
        UniquenessVerdict::UniqueUpToOrder { certified } => {
            json!({"verdict": "unique_up_to_order", "certified": certified})
        }
        UniquenessVerdict::UniqueOneBadFactor { summand_index } => {
            json!({"verdict": "unique_one_bad_factor", "summand_index": summand_index})
        }
        UniquenessVerdict::NonuniqueWitnessed { witness } => json!({
            "verdict": "nonunique_witnessed",
            "witness": witness.iter().map(subspace_json).collect::<Vec<_>>(),
        }),
        UniquenessVerdict::Unknown => json!({"verdict": "unknown"}),
    }
}

pub fn uniqueness_text(verdict: &UniquenessVerdict) -> String {
    match verdict {
        UniquenessVerdict::UniqueUpToOrder { certified } => format!(
            "uniqueness: unique up to order (certified: {})\n",
            yes_no(*certified)
        ),
        UniquenessVerdict::UniqueOneBadFactor { summand_index } => format!(
            "uniqueness: unique except for one decomposable factor (summand {})\n",
            summand_index + 1
        ),
        UniquenessVerdict::NonuniqueWitnessed { witness } => {
            let mut out = String::from("uniqueness: nonunique_witnessed\n");
            for (i, part) in witness.iter().enumerate() {
                out.push_str(&format!("witness part {}: dim {}\n", i + 1, part.dim()));
                matrix_lines(part.basis(), &mut out);
            }
            out
        }
        UniquenessVerdict::Unknown => "uniqueness: unknown\n".into(),
    }
}
