use std::sync::Arc;

use crate::complex::{certify_gorenstein_projective, ComplexWindow, GPCertificate, SearchBounds, Verdict};
use crate::error::Result;
use crate::morita::{MoritaContext, QuadrupleModule, TrivialExtension};
use crate::par;

use super::compat::{check_compat, check_semi_weak_quadruple, CompatVerdict, SemiWeakSide};
use super::criterion::{check_conditions, check_inputs, CriterionReport, Overall};

#[derive(Clone, Debug)]
pub enum AuditClass {
    Agree,
    /// Criterion and certificate disagree, and this hypothesis fails.
    ExpectedDivergence { hypothesis: String, witness: CompatVerdict },
    /// Disagreement although the hypotheses needed for that direction hold.
    Inconsistent,
    Inconclusive { reason: String },
}

impl AuditClass {
    pub fn label(&self) -> &'static str {
        match self {
            AuditClass::Agree => "agree",
            AuditClass::ExpectedDivergence { .. } => "expected-divergence",
            AuditClass::Inconsistent => "inconsistent",
            AuditClass::Inconclusive { .. } => "inconclusive",
        }
    }
}

#[derive(Clone, Debug)]
pub struct AuditRow {
    pub index: usize,
    /// `Some(true)` if the criterion passes, `None` if it is undetermined.
    pub criterion: Option<bool>,
    pub failing_clause: Option<String>,
    /// Direct certification of the module over `Λ_ψ`.
    pub certificate: Option<bool>,
    pub class: AuditClass,
}

/// Compatibility of `N`, `M` and `I` and the semi-weak conditions.
#[derive(Clone, Debug)]
pub struct Hypotheses {
    pub n: CompatVerdict,
    pub m: CompatVerdict,
    pub i: CompatVerdict,
    pub semi_weak: Vec<(SemiWeakSide, CompatVerdict)>,
}

impl Hypotheses {
    /// Weak compatibility of all three bimodules, proved.
    pub fn weak_proven(&self) -> bool {
        self.n.is_proven() && self.m.is_proven() && self.i.is_proven()
    }

    /// Weak compatibility proved and every semi-weak side passed its samples.
    pub fn all_hold(&self) -> bool {
        self.weak_proven()
            && self.semi_weak.iter().all(|(_, v)| matches!(v, CompatVerdict::SemiWeak { .. }) && !v.is_failure())
    }

    /// First failing hypothesis, by name.
    pub fn first_failure(&self) -> Option<(String, CompatVerdict)> {
        let named = [("N", &self.n), ("M", &self.m), ("I", &self.i)];
        if let Some((s, v)) = named.into_iter().find(|(_, v)| v.is_failure()) {
            return Some((format!("{s} weakly compatible"), v.clone()));
        }
        self.semi_weak.iter().find(|(_, v)| v.is_failure()).map(|(s, v)| (format!("{} semi-weak", s.name()), v.clone()))
    }
}

#[derive(Clone, Debug, Default)]
pub struct AuditReport {
    pub hypotheses: Option<Hypotheses>,
    pub rows: Vec<AuditRow>,
}

impl AuditReport {
    pub fn count(&self, label: &str) -> usize {
        self.rows.iter().filter(|r| r.class.label() == label).count()
    }

    /// No row is classified inconsistent.
    pub fn consistent(&self) -> bool {
        self.count("inconsistent") == 0
    }
}

struct Sample {
    criterion: Result<CriterionReport>,
    cert: Result<GPCertificate>,
}

fn window_of(c: &GPCertificate) -> Option<ComplexWindow> {
    match &c.verdict {
        Verdict::CertifiedGP { resolution, .. } => Some(resolution.window.clone()),
        _ => None,
    }
}

/// Compare the criterion with direct certification over `Λ_ψ` on each
/// module of `family`. Test complexes for the compatibility checks are the
/// complete resolutions found along the way.
pub fn audit_equivalence(
    ext: &TrivialExtension,
    ctx: &Arc<MoritaContext>,
    family: &[QuadrupleModule],
    bounds: SearchBounds,
) -> Result<AuditReport> {
    if family.is_empty() {
        return Ok(AuditReport::default());
    }
    for q in family {
        check_inputs(ext, ctx, q)?;
    }
    let samples: Vec<Sample> = par::map(family, |q| Sample {
        criterion: check_conditions(ext, ctx, q, bounds),
        cert: q.to_module().and_then(|m| certify_gorenstein_projective(&m, bounds)),
    });

    let (mut lambda_tests, mut b_tests, mut ring_tests) = (Vec::new(), Vec::new(), Vec::new());
    for s in &samples {
        if let Ok(r) = &s.criterion {
            b_tests.extend(window_of(&r.cokernel_f));
            lambda_tests.extend(window_of(&r.cokernel_g));
        }
        if let Ok(c) = &s.cert {
            ring_tests.extend(window_of(c));
        }
    }
    let both = |x: &[ComplexWindow], y: &[ComplexWindow]| -> Vec<ComplexWindow> { x.iter().chain(y).cloned().collect() };
    let bound = bounds.window.max(bounds.period_bound);
    let n = check_compat(&ext.restrict_left(&ctx.n), &both(&lambda_tests, &b_tests), bound)?;
    let m = check_compat(&ext.restrict_right(&ctx.m), &both(&b_tests, &lambda_tests), bound)?;
    let i = check_compat(&ext.ideal, &lambda_tests, bound)?;
    let semi_weak = SemiWeakSide::ALL
        .iter()
        .map(|&s| Ok((s, check_semi_weak_quadruple(ctx, s, &ring_tests)?)))
        .collect::<Result<Vec<_>>>()?;
    let hyp = Hypotheses { n, m, i, semi_weak };

    let rows = samples.iter().enumerate().map(|(index, s)| classify(index, s, &hyp)).collect();
    Ok(AuditReport { hypotheses: Some(hyp), rows })
}

fn classify(index: usize, s: &Sample, hyp: &Hypotheses) -> AuditRow {
    let (criterion, failing_clause) = match &s.criterion {
        Ok(r) => match r.overall {
            Overall::Pass => (Some(true), None),
            Overall::Fail(c) => (Some(false), Some(c.name().to_string())),
            Overall::Unknown(c) => (None, Some(c.name().to_string())),
        },
        Err(_) => (None, None),
    };
    let certificate = s.cert.as_ref().ok().and_then(|c| c.is_gp());
    let class = match (criterion, certificate) {
        (Some(a), Some(b)) if a == b => AuditClass::Agree,
        (Some(a), Some(_)) => {
            // Sufficiency needs weak compatibility only; necessity needs
            // the semi-weak conditions as well.
            let needed = if a { hyp.weak_proven() } else { hyp.all_hold() };
            match hyp.first_failure() {
                Some((hypothesis, witness)) => AuditClass::ExpectedDivergence { hypothesis, witness },
                None if needed => AuditClass::Inconsistent,
                None => AuditClass::Inconclusive { reason: "hypotheses not established".into() },
            }
        }
        _ => {
            let reason = match (&s.criterion, &s.cert) {
                (Err(e), _) | (_, Err(e)) => e.to_string(),
                _ => "undetermined within the search bounds".into(),
            };
            AuditClass::Inconclusive { reason }
        }
    };
    AuditRow { index, criterion, failing_clause, certificate, class }
}
