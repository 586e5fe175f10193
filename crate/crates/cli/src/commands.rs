//! One function per subcommand, each mapping to a single engine operation.

use std::sync::Arc;

use morita_gp::algebra::{validate_algebra, FDModule};
use morita_gp::complex::{certify_gorenstein_projective, ComplexWindow, SearchBounds};
use morita_gp::gen::random_quadruple;
use morita_gp::gp::{
    audit_equivalence, check_compat, check_conditions, check_semi_weak_quadruple, resolve_and_build, CriterionReport,
    SemiWeakSide, TotalComplex,
};
use morita_gp::io::{matrix_json, InputError, Problem};
use morita_gp::linalg::{rank, Mat};
use morita_gp::morita::{classify_injectives, classify_projectives, zero_ideal_extension, Classified, Corner, MoritaContext, QuadrupleModule, TrivialExtension};
use morita_gp::nc::{build_exact_context, build_nc_tensor, check_nc_criterion, iso_with_morita};
use morita_gp::Error;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::report::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NcAction {
    Build,
    Iso,
    Check,
}

impl NcAction {
    pub fn name(self) -> &'static str {
        match self {
            NcAction::Build => "build",
            NcAction::Iso => "iso",
            NcAction::Check => "check",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Validate,
    BuildRing,
    Classify,
    CheckGp,
    CertifyGp,
    BuildResolution,
    CheckCompat,
    NcTensor(NcAction),
    Audit,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::BuildRing => "build-ring",
            Command::Classify => "classify",
            Command::CheckGp => "check-gp",
            Command::CertifyGp => "certify-gp",
            Command::BuildResolution => "build-resolution",
            Command::CheckCompat => "check-compat",
            Command::NcTensor(_) => "nc-tensor",
            Command::Audit => "audit",
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Flags {
    pub bounds: SearchBounds,
    pub seed: u64,
}

impl Flags {
    pub fn to_json(&self) -> Value {
        json!({
            "window": self.bounds.window,
            "period_bound": self.bounds.period_bound,
            "budget": self.bounds.budget,
            "seed": self.seed,
        })
    }
}

/// Everything but a located input error is a report.
fn engine(e: Error, location: &str) -> InputError {
    InputError { location: location.to_string(), message: e.to_string() }
}

struct Out {
    status: Status,
    result: Value,
    witness: Option<Value>,
    summary: Vec<String>,
}

impl Out {
    fn ok(result: Value, summary: Vec<String>) -> Out {
        Out { status: Status::Ok, result, witness: None, summary }
    }
}

pub fn run(cmd: Command, p: &mut Problem, flags: &Flags, invocation: Value) -> Result<Report, InputError> {
    let out = match cmd {
        Command::Validate => validate(p),
        Command::BuildRing => build_ring(p),
        Command::Classify => classify(p),
        Command::CheckGp => check_gp(p, flags),
        Command::CertifyGp => certify_gp(p, flags),
        Command::BuildResolution => build_resolution(p, flags),
        Command::CheckCompat => check_compat_cmd(p, flags),
        Command::NcTensor(a) => nc_tensor(p, a, flags),
        Command::Audit => audit(p, flags),
    };
    // Budget exhaustion is an answer, not an input error.
    let out = match out {
        Err(Failure::Undetermined(reason)) => Out {
            status: Status::Unknown,
            result: json!({ "reason": reason }),
            witness: None,
            summary: vec![reason],
        },
        Err(Failure::Input(e)) => return Err(e),
        Ok(o) => o,
    };
    Ok(Report { command: cmd.name().into(), invocation, status: out.status, result: out.result, witness: out.witness, summary: out.summary })
}

enum Failure {
    Input(InputError),
    Undetermined(String),
}

impl From<InputError> for Failure {
    fn from(e: InputError) -> Self {
        Failure::Input(e)
    }
}

type Res = Result<Out, Failure>;

trait Located<T> {
    fn at(self, location: &str) -> Result<T, Failure>;
}

impl<T> Located<T> for morita_gp::Result<T> {
    fn at(self, location: &str) -> Result<T, Failure> {
        self.map_err(|e| match e {
            Error::Undetermined(r) => Failure::Undetermined(r),
            e => Failure::Input(engine(e, location)),
        })
    }
}

fn validate(p: &mut Problem) -> Res {
    let mut algebras = serde_json::Map::new();
    for (name, a) in &p.algebras {
        algebras.insert(name.clone(), json!({ "dim": a.dim(), "valid": validate_algebra(a).is_ok() }));
    }
    let mut contexts = serde_json::Map::new();
    for (name, c) in &p.contexts {
        let ring = c.ring().at(&format!("contexts.{name}"))?;
        contexts.insert(
            name.clone(),
            json!({
                "dims": ring.dims,
                "phi_zero": c.phi_is_zero(),
                "psi_zero": c.psi_is_zero(),
                "ring_valid": validate_algebra(&ring.ring).is_ok(),
            }),
        );
    }
    let bimodules: serde_json::Map<_, _> = p.bimodules.iter().map(|(n, b)| (n.clone(), json!({ "dim": b.dim() }))).collect();
    let extensions: serde_json::Map<_, _> = p
        .extensions
        .iter()
        .map(|(n, e)| (n.clone(), json!({ "lambda": e.dim_lambda(), "ideal": e.dim_ideal() })))
        .collect();
    let modules: serde_json::Map<_, _> = p.modules.iter().map(|(n, m)| (n.clone(), json!({ "dim": m.dim() }))).collect();
    let quadruples: serde_json::Map<_, _> =
        p.quadruples.iter().map(|(n, q)| (n.clone(), json!({ "x": q.x.dim(), "y": q.y.dim() }))).collect();
    let complexes: serde_json::Map<_, _> = p
        .complexes
        .iter()
        .map(|(n, c)| (n.clone(), json!({ "lo": c.lo, "dims": c.dims(), "exact": c.is_exact_interior() })))
        .collect();
    let all_valid = algebras.values().all(|v| v["valid"] == true) && contexts.values().all(|v| v["ring_valid"] == true);
    let summary = vec![format!(
        "{} algebras, {} bimodules, {} contexts, {} modules, {} quadruples, {} complexes",
        algebras.len(),
        bimodules.len(),
        contexts.len(),
        modules.len(),
        quadruples.len(),
        complexes.len()
    )];
    let mut out = Out::ok(
        json!({
            "field": p.field().to_string(),
            "algebras": algebras,
            "bimodules": bimodules,
            "extensions": extensions,
            "contexts": contexts,
            "modules": modules,
            "quadruples": quadruples,
            "complexes": complexes,
        }),
        summary,
    );
    if !all_valid {
        out.status = Status::Fail;
    }
    Ok(out)
}

fn build_ring(p: &mut Problem) -> Res {
    let ctx = p.context(None)?;
    let ring = ctx.ring().at("command.context")?;
    let a = &ring.ring;
    let d = a.dim();
    let mut constants = Vec::new();
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                let c = a.constant(i, j, k);
                if !c.is_zero() {
                    constants.push(json!([i, j, k, c.to_json()]));
                }
            }
        }
    }
    let check = validate_algebra(a);
    let result = json!({
        "dims": ring.dims,
        "dim": d,
        "unit": matrix_json(a.unit()),
        "constants": constants,
        "valid": check.is_ok(),
    });
    let summary = vec![format!("dim {d}, blocks (A, N, M, B) = {:?}", ring.dims)];
    Ok(match check {
        Ok(()) => Out::ok(result, summary),
        Err(v) => Out { status: Status::Fail, result, witness: Some(json!({ "kind": "violation", "message": v.to_string() })), summary },
    })
}

fn classified_json(c: &Classified) -> Value {
    json!({
        "corner": match c.corner { Corner::A => "A", Corner::B => "B" },
        "class": c.class,
        "multiplicity": c.multiplicity,
        "quadruple": quadruple_json(&c.quadruple),
    })
}

fn classify(p: &mut Problem) -> Res {
    let ctx = p.context(None)?;
    let proj = classify_projectives(&ctx).at("command.context")?;
    let inj = classify_injectives(&ctx).at("command.context")?;
    let line = |kind: &str, c: &Classified| {
        format!("{kind} corner {:?} class {} x{}: (dim X, dim Y) = ({}, {})", c.corner, c.class, c.multiplicity, c.quadruple.x.dim(), c.quadruple.y.dim())
    };
    let mut summary: Vec<String> = proj.iter().map(|c| line("projective", c)).collect();
    summary.extend(inj.iter().map(|c| line("injective", c)));
    Ok(Out::ok(
        json!({
            "projectives": proj.iter().map(classified_json).collect::<Vec<_>>(),
            "injectives": inj.iter().map(classified_json).collect::<Vec<_>>(),
        }),
        summary,
    ))
}

/// The named extension, or `A ⋉ 0` when `ψ = 0`.
fn extension_for(p: &Problem, ctx: &Arc<MoritaContext>) -> Result<TrivialExtension, Failure> {
    match &p.command.extension {
        Some(_) => Ok(p.named(&p.extensions, &p.command.extension, "extension")?.clone()),
        None if ctx.psi_is_zero() => Ok(zero_ideal_extension(&ctx.a)),
        None => Err(Failure::Input(InputError {
            location: "command.extension".into(),
            message: "psi is nonzero, so the context needs its trivial extension".into(),
        })),
    }
}

fn criterion(p: &Problem, flags: &Flags) -> Result<(TrivialExtension, QuadrupleModule, CriterionReport), Failure> {
    let q = p.named(&p.quadruples, &p.command.quadruple, "quadruple")?.clone();
    let ctx = q.ctx().clone();
    let ext = extension_for(p, &ctx)?;
    let r = check_conditions(&ext, &ctx, &q, flags.bounds).at("command.quadruple")?;
    Ok((ext, q, r))
}

fn criterion_out(r: &CriterionReport) -> Out {
    Out { status: criterion_status(r), result: criterion_json(r), witness: criterion_witness(r), summary: criterion_summary(r) }
}

fn check_gp(p: &mut Problem, flags: &Flags) -> Res {
    let (_, _, r) = criterion(p, flags)?;
    Ok(criterion_out(&r))
}

fn certify_gp(p: &mut Problem, flags: &Flags) -> Res {
    let m = p.named(&p.modules, &p.command.module, "module")?;
    let c = certify_gorenstein_projective(m, flags.bounds).at("command.module")?;
    let status = Status::of_option(c.is_gp());
    let result = certificate_json(&c);
    let mut summary = vec![format!("{} (module dim {})", c.label(), m.dim())];
    if let Some(per) = result.get("period").and_then(Value::as_u64) {
        summary.push(format!("period {per}"));
    }
    let witness = (status == Status::Fail).then(|| json!({ "kind": "certificate", "certificate": result.clone() }));
    Ok(Out { status, result, witness, summary })
}

/// Block-diagonal `X ⊕ Y` matrix of each differential, checked with ranks.
fn total_checks(t: &TotalComplex) -> Value {
    let mats: Vec<Mat> = t.diffs.iter().map(|d| Mat::block_diag(&[&d.alpha.mat, &d.beta.mat])).collect();
    let d_squared = mats.windows(2).all(|w| w[1].matmul(&w[0]).is_zero());
    let dims: Vec<usize> = t.terms.iter().map(|q| q.x.dim() + q.y.dim()).collect();
    let exact = (1..mats.len()).all(|k| dims[k] == rank(&mats[k]) + rank(&mats[k - 1]));
    let k = Mat::block_diag(&[&t.kernel.alpha.mat, &t.kernel.beta.mat]);
    let kernel_exact = mats.get((-t.lo) as usize).map_or(false, |d0| {
        d0.matmul(&k).is_zero() && rank(&k) == k.cols() && rank(&k) + rank(d0) == d0.cols()
    });
    json!({ "d_squared_zero": d_squared, "exact_interior": exact, "kernel_is_ker_d0": kernel_exact })
}

fn build_resolution(p: &mut Problem, flags: &Flags) -> Res {
    let (ext, q, r) = criterion(p, flags)?;
    if r.overall.clause().is_some() {
        let mut out = criterion_out(&r);
        out.result = json!({ "criterion": out.result });
        return Ok(out);
    }
    let (_, asm) = resolve_and_build(&ext, q.ctx(), &q, flags.bounds).at("command.quadruple")?;
    let checks = total_checks(&asm.t);
    let ok = checks.as_object().is_some_and(|m| m.values().all(|v| *v == true));
    let summary = vec![
        format!("T in degrees {}..={}", asm.t.lo, asm.t.hi()),
        format!("dims (X, Y): {:?}", asm.t.terms.iter().map(|q| (q.x.dim(), q.y.dim())).collect::<Vec<_>>()),
    ];
    let result = json!({ "criterion": criterion_json(&r), "total": total_json(&asm.t), "checks": checks });
    let status = if ok { Status::Ok } else { Status::Fail };
    let witness = (!ok).then(|| json!({ "kind": "checks", "checks": result["checks"].clone() }));
    Ok(Out { status, result, witness, summary })
}

fn tests(p: &Problem) -> Result<Vec<ComplexWindow>, InputError> {
    p.command
        .tests
        .iter()
        .map(|t| p.named(&p.complexes, &Some(t.clone()), "complex").cloned())
        .collect()
}

pub fn parse_side(s: &str) -> Option<SemiWeakSide> {
    match s {
        "left-n" => Some(SemiWeakSide::LeftN),
        "left-i" => Some(SemiWeakSide::LeftI),
        "right-m" => Some(SemiWeakSide::RightM),
        "right-i" => Some(SemiWeakSide::RightI),
        _ => None,
    }
}

fn check_compat_cmd(p: &mut Problem, flags: &Flags) -> Res {
    let ts = tests(p)?;
    let v = match &p.command.side {
        Some(s) => {
            let side = parse_side(s).ok_or_else(|| InputError {
                location: "command.side".into(),
                message: format!("unknown side `{s}`; expected left-n, left-i, right-m or right-i"),
            })?;
            let ctx = p.context(None)?;
            check_semi_weak_quadruple(&ctx, side, &ts).at("command.tests")?
        }
        None => {
            let b = p.named(&p.bimodules, &p.command.bimodule, "bimodule")?;
            let bound = flags.bounds.window.max(flags.bounds.period_bound);
            check_compat(b, &ts, bound).at("command.tests")?
        }
    };
    let status = compat_status(&v);
    let result = compat_json(&v);
    let witness = (status == Status::Fail).then(|| result.clone());
    Ok(Out { status, result, witness, summary: vec![format!("{} on {} test complexes", v.label(), ts.len())] })
}

fn nc_tensor(p: &mut Problem, action: NcAction, flags: &Flags) -> Res {
    let ctx = p.context(None)?;
    match action {
        NcAction::Build => {
            let nc = match build_nc_tensor(&ctx) {
                Ok(nc) => nc,
                Err(Error::Verification(msg)) => {
                    return Ok(Out {
                        status: Status::Fail,
                        result: json!({ "valid": false }),
                        witness: Some(json!({ "kind": "violation", "message": msg })),
                        summary: vec![msg],
                    })
                }
                Err(e) => return Err(Failure::Input(engine(e, "command.context"))),
            };
            let ex = build_exact_context(&ctx).at("command.context")?;
            let checks: serde_json::Map<_, _> = ex.checks.iter().map(|(n, b)| (n.clone(), json!(b))).collect();
            let result = json!({
                "dims": nc.dims,
                "dim": nc.dim(),
                "valid": validate_algebra(&nc.ring).is_ok(),
                "exact_context": { "dims": ex.dims(), "euler": ex.euler(), "checks": checks },
            });
            let status = if ex.ok() { Status::Ok } else { Status::Fail };
            Ok(Out {
                status,
                result,
                witness: None,
                summary: vec![format!("dim {}, blocks (A, N, M, Γ, J) = {:?}", nc.dim(), nc.dims), format!("exact context dims {:?}", ex.dims())],
            })
        }
        NcAction::Iso => {
            let iso = iso_with_morita(&ctx).at("command.context")?;
            let ring = iso.morita.ring().at("command.context")?;
            Ok(Out::ok(
                json!({
                    "nc_dims": iso.nc.dims,
                    "morita_dims": ring.dims,
                    "map": matrix_json(&iso.map),
                    "multiplicative": true,
                }),
                vec![format!("C ≅ Λ_(φ,0) of dim {}, blocks {:?}", ring.ring.dim(), ring.dims)],
            ))
        }
        NcAction::Check => {
            let iso = iso_with_morita(&ctx).at("command.context")?;
            let m = p.named(&p.modules, &p.command.module, "module")?;
            if m.algebra().dim() != iso.nc.dim() {
                return Err(Failure::Input(InputError {
                    location: "command.module".into(),
                    message: "module must be over the noncommutative tensor ring (`nc:CONTEXT`)".into(),
                }));
            }
            let over_c = FDModule::new(iso.nc.ring.clone(), m.actions().to_vec()).at("command.module")?;
            let v = iso.to_morita_module(&over_c).at("command.module")?;
            let (q, _) = QuadrupleModule::from_module(&iso.morita, &v).at("command.module")?;
            let rep = check_nc_criterion(&iso, &q, flags.bounds).at("command.module")?;
            let mut out = criterion_out(&rep.report);
            let verdicts: serde_json::Map<_, _> = rep.verdicts.iter().map(|(n, v)| (n.clone(), compat_json(v))).collect();
            out.result = json!({
                "criterion": out.result,
                "hypotheses": verdicts,
                "total": rep.assembly.as_ref().map(|a| total_json(&a.t)),
            });
            Ok(out)
        }
    }
}

fn audit(p: &mut Problem, flags: &Flags) -> Res {
    let ctx = p.context(None)?;
    let ext = extension_for(p, &ctx)?;
    let mut family = Vec::new();
    for name in &p.command.family {
        let q = p.named(&p.quadruples, &Some(name.clone()), "quadruple")?;
        if !Arc::ptr_eq(q.ctx(), &ctx) {
            return Err(Failure::Input(InputError {
                location: "command.family".into(),
                message: format!("quadruple `{name}` is over another context"),
            }));
        }
        family.push(q.clone());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(flags.seed);
    for _ in 0..p.command.random_family.unwrap_or(0) {
        family.push(random_quadruple(&mut rng, &ctx, 2));
    }
    let a = audit_equivalence(&ext, &ctx, &family, flags.bounds).at("command.family")?;
    let result = audit_json(&a);
    let status = if !a.consistent() {
        Status::Fail
    } else if !a.rows.is_empty() && a.count("inconclusive") == a.rows.len() {
        Status::Unknown
    } else {
        Status::Ok
    };
    let witness = (status == Status::Fail).then(|| {
        let bad: Vec<Value> = result["rows"].as_array().into_iter().flatten().filter(|r| r["class"] == "inconsistent").cloned().collect();
        json!({ "kind": "inconsistent_rows", "rows": bad })
    });
    let c = &result["counts"];
    let summary = vec![format!(
        "{} modules: {} agree, {} expected divergence, {} inconsistent, {} inconclusive",
        a.rows.len(),
        c["agree"],
        c["expected-divergence"],
        c["inconsistent"],
        c["inconclusive"]
    )];
    Ok(Out { status, result, witness, summary })
}
