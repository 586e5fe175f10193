//! Report objects and the JSON encoders for engine results.

use morita_gp::complex::{AnchoredWindow, GPCertificate, Verdict, Witness};
use morita_gp::gp::{
    AuditClass, AuditReport, Clause, CompatReason, CompatVerdict, CompatWitness, CriterionReport, IsoTest, Overall,
    TotalComplex,
};
use morita_gp::io::{complex_json, matrix_json, module_json, InputError, REPORT_SCHEMA};
use morita_gp::linalg::kernel_basis;
use morita_gp::morita::QuadrupleModule;
use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    Pass,
    Fail,
    Unknown,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Unknown => "unknown",
        }
    }

    pub fn exit_code(self) -> u8 {
        match self {
            Status::Ok | Status::Pass => 0,
            Status::Fail => 1,
            Status::Unknown => 2,
        }
    }

    pub fn of_option(v: Option<bool>) -> Status {
        match v {
            Some(true) => Status::Pass,
            Some(false) => Status::Fail,
            None => Status::Unknown,
        }
    }
}

pub struct Report {
    pub command: String,
    pub invocation: Value,
    pub status: Status,
    pub result: Value,
    pub witness: Option<Value>,
    /// Lines for the human-readable form.
    pub summary: Vec<String>,
}

impl Report {
    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "schema": REPORT_SCHEMA,
            "command": self.command,
            "invocation": self.invocation,
            "status": self.status.label(),
            "exit": self.status.exit_code(),
            "result": self.result,
        });
        if let Some(w) = &self.witness {
            v["witness"] = w.clone();
        }
        v
    }

    pub fn render_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("report serializes")
    }

    pub fn render_text(&self) -> String {
        let mut out = format!("{}: {}\n", self.command, self.status.label());
        for l in &self.summary {
            out.push_str("  ");
            out.push_str(l);
            out.push('\n');
        }
        out
    }
}

pub fn input_error_json(e: &InputError) -> String {
    let v = json!({ "schema": REPORT_SCHEMA, "status": "input-error", "exit": 3, "location": e.location, "message": e.message });
    serde_json::to_string_pretty(&v).expect("report serializes")
}

pub fn anchored_json(a: &AnchoredWindow) -> Value {
    json!({ "window": complex_json(&a.window), "kernel": matrix_json(&a.kernel.mat), "kernel_source": module_json(&a.kernel.source) })
}

pub fn certificate_json(c: &GPCertificate) -> Value {
    let mut v = json!({ "verdict": c.label(), "module": module_json(&c.module) });
    match &c.verdict {
        Verdict::CertifiedGP { period, resolution, periodicity } => {
            v["period"] = json!(period);
            v["resolution"] = anchored_json(resolution);
            if let Some(p) = periodicity {
                v["periodicity"] = json!({
                    "degree": p.degree,
                    "period": p.period,
                    "theta0": matrix_json(&p.theta0),
                    "theta1": matrix_json(&p.theta1),
                });
            }
        }
        Verdict::CertifiedNotGP { witness, evidence } => {
            v["witness"] = match witness {
                Witness::NonVanishingExt(i) => json!({ "kind": "non_vanishing_ext", "degree": i }),
                Witness::NonInjectiveApproximation(d) => json!({ "kind": "non_injective_approximation", "degree": d }),
            };
            if let Some(e) = evidence {
                v["evidence"] = anchored_json(e);
            }
        }
        Verdict::Unknown { bound, reason } => {
            v["bound"] = json!(bound);
            v["reason"] = json!(reason);
        }
    }
    v
}

fn iso_json(t: &IsoTest) -> Value {
    json!({ "holds": t.holds, "source_dim": t.source_dim(), "image_dim": t.image_dim() })
}

/// A comparison map with a nonzero kernel vector, checkable with matrix
/// arithmetic alone.
pub fn iso_witness(clause: Clause, t: &IsoTest) -> Value {
    let k = kernel_basis(&t.map.mat);
    let v = if k.cols() > 0 { k.col(0).entries().iter().map(|s| s.to_json()).collect::<Vec<_>>() } else { Vec::new() };
    json!({
        "kind": "non_injective_map",
        "clause": clause.name(),
        "source": module_json(&t.map.source),
        "target": module_json(&t.map.target),
        "map": matrix_json(&t.map.mat),
        "kernel_vector": v,
    })
}

pub fn criterion_json(r: &CriterionReport) -> Value {
    json!({
        "overall": r.overall.label(),
        "clause": r.overall.clause().map(Clause::name),
        "clauses": {
            "cokernel_f": { "verdict": r.cokernel_f.label(), "dim": r.cokernel_f.module.dim(), "period": period(&r.cokernel_f) },
            "cokernel_g": { "verdict": r.cokernel_g.label(), "dim": r.cokernel_g.module.dim(), "period": period(&r.cokernel_g) },
            "iso_b1": iso_json(&r.iso_b1),
            "iso_b2": iso_json(&r.iso_b2),
            "iso_b3": iso_json(&r.iso_b3),
        },
    })
}

fn period(c: &GPCertificate) -> Option<usize> {
    match &c.verdict {
        Verdict::CertifiedGP { period, .. } => *period,
        _ => None,
    }
}

pub fn criterion_status(r: &CriterionReport) -> Status {
    match r.overall {
        Overall::Pass => Status::Pass,
        Overall::Fail(_) => Status::Fail,
        Overall::Unknown(_) => Status::Unknown,
    }
}

/// Witness for a failing or undecided clause.
pub fn criterion_witness(r: &CriterionReport) -> Option<Value> {
    let c = r.overall.clause()?;
    Some(match c {
        Clause::CokernelF => json!({ "kind": "certificate", "clause": c.name(), "certificate": certificate_json(&r.cokernel_f) }),
        Clause::CokernelG => json!({ "kind": "certificate", "clause": c.name(), "certificate": certificate_json(&r.cokernel_g) }),
        Clause::IsoB1 => iso_witness(c, &r.iso_b1),
        Clause::IsoB2 => iso_witness(c, &r.iso_b2),
        Clause::IsoB3 => iso_witness(c, &r.iso_b3),
    })
}

pub fn criterion_summary(r: &CriterionReport) -> Vec<String> {
    let mut s = vec![
        format!("cokernel_f: {} (dim {})", r.cokernel_f.label(), r.cokernel_f.module.dim()),
        format!("cokernel_g: {} (dim {})", r.cokernel_g.label(), r.cokernel_g.module.dim()),
    ];
    for (c, t) in [(Clause::IsoB1, &r.iso_b1), (Clause::IsoB2, &r.iso_b2), (Clause::IsoB3, &r.iso_b3)] {
        s.push(format!("{c}: {} (source dim {}, image dim {})", if t.holds { "holds" } else { "fails" }, t.source_dim(), t.image_dim()));
    }
    if let Some(c) = r.overall.clause() {
        s.push(format!("{} at clause {c}", r.overall.label()));
    }
    s
}

pub fn quadruple_json(q: &QuadrupleModule) -> Value {
    json!({
        "x": module_json(&q.x),
        "y": module_json(&q.y),
        "f": matrix_json(&q.f.mat),
        "g": matrix_json(&q.g.mat),
    })
}

pub fn total_json(t: &TotalComplex) -> Value {
    json!({
        "lo": t.lo,
        "dims": t.terms.iter().map(|q| [q.x.dim(), q.y.dim()]).collect::<Vec<_>>(),
        "diffs": t.diffs.iter().map(|d| json!({ "alpha": matrix_json(&d.alpha.mat), "beta": matrix_json(&d.beta.mat) })).collect::<Vec<_>>(),
        "kernel": { "alpha": matrix_json(&t.kernel.alpha.mat), "beta": matrix_json(&t.kernel.beta.mat) },
    })
}

pub fn compat_witness_json(w: &CompatWitness) -> Value {
    match w {
        CompatWitness::Tor1 { test, degree, dim } => json!({ "kind": "tor1", "test": test, "degree": degree, "dim": dim }),
        CompatWitness::Ext1 { test, degree, dim } => json!({ "kind": "ext1", "test": test, "degree": degree, "dim": dim }),
        CompatWitness::Homology { test, degree, dim } => json!({ "kind": "homology", "test": test, "degree": degree, "dim": dim }),
    }
}

pub fn compat_json(v: &CompatVerdict) -> Value {
    match v {
        CompatVerdict::WeaklyCompatible { reason } => {
            let r = match reason {
                CompatReason::FiniteInjDim(l, r) => json!({ "kind": "finite_injective_dimension", "left": l, "right": r }),
                CompatReason::Composition => json!({ "kind": "composition" }),
                CompatReason::Exhausted(n) => json!({ "kind": "exhausted", "tests": n }),
            };
            json!({ "verdict": v.label(), "proof": reason.is_proof(), "reason": r })
        }
        CompatVerdict::NotCompatible { witness } => json!({ "verdict": v.label(), "witness": compat_witness_json(witness) }),
        CompatVerdict::SemiWeak { c1, c3, tests, witness } => json!({
            "verdict": v.label(),
            "c1": c1,
            "c3": c3,
            "tests": tests,
            "witness": witness.as_ref().map(compat_witness_json),
        }),
        CompatVerdict::Undetermined { reason } => json!({ "verdict": v.label(), "reason": reason }),
    }
}

/// Proofs pass, witnesses fail, sampled agreement stays unknown.
pub fn compat_status(v: &CompatVerdict) -> Status {
    if v.is_proven() {
        Status::Pass
    } else if v.is_failure() {
        Status::Fail
    } else {
        Status::Unknown
    }
}

pub fn audit_json(a: &AuditReport) -> Value {
    let hyp = a.hypotheses.as_ref().map(|h| {
        json!({
            "n": compat_json(&h.n),
            "m": compat_json(&h.m),
            "i": compat_json(&h.i),
            "semi_weak": h.semi_weak.iter().map(|(s, v)| json!({ "side": s.name(), "verdict": compat_json(v) })).collect::<Vec<_>>(),
            "weak_proven": h.weak_proven(),
            "all_hold": h.all_hold(),
        })
    });
    let rows: Vec<Value> = a
        .rows
        .iter()
        .map(|r| {
            let mut v = json!({
                "index": r.index,
                "criterion": r.criterion,
                "failing_clause": r.failing_clause,
                "certificate": r.certificate,
                "class": r.class.label(),
            });
            match &r.class {
                AuditClass::ExpectedDivergence { hypothesis, witness } => {
                    v["hypothesis"] = json!(hypothesis);
                    v["witness"] = compat_json(witness);
                }
                AuditClass::Inconclusive { reason } => v["reason"] = json!(reason),
                _ => {}
            }
            v
        })
        .collect();
    json!({
        "hypotheses": hyp,
        "rows": rows,
        "counts": {
            "agree": a.count("agree"),
            "expected-divergence": a.count("expected-divergence"),
            "inconsistent": a.count("inconsistent"),
            "inconclusive": a.count("inconclusive"),
        },
    })
}
