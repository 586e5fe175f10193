//! JSON problem files and the matrix/module encodings shared by reports.
//!
//! A problem file names its objects in sections that are resolved in a
//! fixed order: algebras, bimodules, extensions, contexts, modules,
//! quadruples, complexes. Algebra references are names from `algebras`,
//! or `ext:NAME` (a trivial extension), `ring:CTX` (a Morita context ring)
//! and `nc:CTX` (a noncommutative tensor product).

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::Deserialize;
use serde_json::{json, Value};

use crate::algebra::{indecomposable_projective, simple_modules, Algebra, FDModule};
use crate::bimodule::Bimodule;
use crate::complex::{complete_resolution, ComplexWindow, SearchBounds};
use crate::fixtures;
use crate::linalg::{Field, Mat, Scalar};
use crate::morita::{t_lambda, trivial_extension, MoritaContext, QuadrupleModule, TrivialExtension};
use crate::nc::build_nc_tensor;

pub const PROBLEM_SCHEMA: &str = "morita-gp/problem/v1";
pub const REPORT_SCHEMA: &str = "morita-gp/report/v1";

/// A problem-file error with the path of the offending entry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InputError {
    pub location: String,
    pub message: String,
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.location, self.message)
    }
}

impl std::error::Error for InputError {}

fn err<T>(location: impl Into<String>, message: impl fmt::Display) -> Result<T, InputError> {
    Err(InputError { location: location.into(), message: message.to_string() })
}

trait At<T> {
    fn at(self, location: &str) -> Result<T, InputError>;
}

impl<T, E: fmt::Display> At<T> for Result<T, E> {
    fn at(self, location: &str) -> Result<T, InputError> {
        self.map_err(|e| InputError { location: location.to_string(), message: e.to_string() })
    }
}

/// `{"rows": r, "cols": c, "entries": [...]}`, entries row-major, each an
/// integer or a string `"a/b"`.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixSpec {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Value>,
}

impl MatrixSpec {
    pub fn to_mat(&self, field: Field, location: &str) -> Result<Mat, InputError> {
        if self.entries.len() != self.rows * self.cols {
            return err(location, format!("{}x{} matrix needs {} entries, got {}", self.rows, self.cols, self.rows * self.cols, self.entries.len()));
        }
        let s: Vec<Scalar> = self
            .entries
            .iter()
            .enumerate()
            .map(|(i, v)| Scalar::from_json(field, v).at(&format!("{location}.entries[{i}]")))
            .collect::<Result<_, _>>()?;
        Mat::from_scalars(field, self.rows, self.cols, &s).at(location)
    }
}

pub fn matrix_json(m: &Mat) -> Value {
    json!({
        "rows": m.rows(),
        "cols": m.cols(),
        "entries": m.entries().iter().map(Scalar::to_json).collect::<Vec<_>>(),
    })
}

pub fn parse_matrix(field: Field, v: &Value, location: &str) -> Result<Mat, InputError> {
    let spec: MatrixSpec = serde_json::from_value(v.clone()).at(location)?;
    spec.to_mat(field, location)
}

pub fn module_json(x: &FDModule) -> Value {
    json!({ "dim": x.dim(), "action": x.actions().iter().map(matrix_json).collect::<Vec<_>>() })
}

/// A module over `alg` from `module_json` output.
pub fn parse_module(alg: &Arc<Algebra>, v: &Value, location: &str) -> Result<FDModule, InputError> {
    let action = v.get("action").and_then(Value::as_array).ok_or_else(|| InputError {
        location: location.into(),
        message: "missing `action` array".into(),
    })?;
    let mats = action
        .iter()
        .enumerate()
        .map(|(i, a)| parse_matrix(alg.field(), a, &format!("{location}.action[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    FDModule::new(alg.clone(), mats).at(location)
}

pub fn complex_json(c: &ComplexWindow) -> Value {
    json!({
        "lo": c.lo,
        "terms": c.terms.iter().map(module_json).collect::<Vec<_>>(),
        "diffs": c.diffs.iter().map(|d| matrix_json(&d.mat)).collect::<Vec<_>>(),
    })
}

pub fn parse_complex(alg: &Arc<Algebra>, v: &Value, location: &str) -> Result<ComplexWindow, InputError> {
    let lo = v.get("lo").and_then(Value::as_i64).ok_or_else(|| InputError {
        location: location.into(),
        message: "missing integer `lo`".into(),
    })?;
    let arr = |k: &str| {
        v.get(k).and_then(Value::as_array).cloned().ok_or_else(|| InputError {
            location: location.into(),
            message: format!("missing `{k}` array"),
        })
    };
    let terms = arr("terms")?
        .iter()
        .enumerate()
        .map(|(i, t)| parse_module(alg, t, &format!("{location}.terms[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    let diffs = arr("diffs")?
        .iter()
        .enumerate()
        .map(|(i, d)| parse_matrix(alg.field(), d, &format!("{location}.diffs[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    window_from(lo, terms, diffs, location)
}

fn window_from(lo: i64, terms: Vec<FDModule>, diffs: Vec<Mat>, location: &str) -> Result<ComplexWindow, InputError> {
    if terms.len() != diffs.len() + 1 {
        return err(location, "a window needs one more term than differentials");
    }
    let homs = diffs
        .into_iter()
        .enumerate()
        .map(|(i, d)| crate::algebra::ModuleHom::new(terms[i].clone(), terms[i + 1].clone(), d).at(&format!("{location}.diffs[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    ComplexWindow::new(lo, terms, homs).at(location)
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum AlgebraSpec {
    /// `ground`, `k_times_k`, `dual_numbers`, `path_a2`, `truncated_poly`,
    /// `matrix`, `upper_triangular`, `group`.
    Builtin {
        name: String,
        #[serde(default)]
        n: Option<usize>,
        #[serde(default)]
        orders: Vec<usize>,
    },
    /// Structure constants `[i, j, k, c]`: `b_i b_j` has `c` at `b_k`.
    Table { dim: usize, unit: Vec<Value>, constants: Vec<(usize, usize, usize, Value)> },
    /// Left multiplication matrices of the basis.
    Left { left: Vec<MatrixSpec>, unit: Vec<Value> },
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum BimoduleSpec {
    Actions { left_alg: String, right_alg: String, left: Vec<MatrixSpec>, right: Vec<MatrixSpec> },
    Regular { algebra: String },
    Zero { left_alg: String, right_alg: String },
    /// One-dimensional, basis elements acting by the given scalars.
    Scalar { left_alg: String, right_alg: String, left: Vec<i64>, right: Vec<i64> },
}

/// `Λ ⋉ I`; the algebra is then available as `ext:NAME`.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtensionSpec {
    pub lambda: String,
    pub ideal: String,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ContextSpec {
    /// `(A, B, M, N, φ, ψ)`; absent maps are zero. `φ` is
    /// `dim B x (dim M * dim N)` and `ψ` is `dim A x (dim N * dim M)`.
    Maps { a: String, b: String, m: String, n: String, phi: Option<MatrixSpec>, psi: Option<MatrixSpec> },
    /// `(Λ ⋉ I, B, M, N, 0, ψ)` from `Λ`-level bimodules, `ψ` valued in `I`.
    Psi { extension: String, b: String, m: String, n: String, psi: MatrixSpec },
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModuleSpec {
    Actions { algebra: String, action: Vec<MatrixSpec> },
    Regular { algebra: String },
    Zero { algebra: String },
    Simple { algebra: String, index: usize },
    Projective { algebra: String, index: usize },
    /// The module over `Λ_(φ,ψ)` of a declared quadruple.
    Quadruple { quadruple: String },
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum QuadrupleSpec {
    /// `f : M ⊗_k X -> Y` and `g : N ⊗_k Y -> X` on `k`-tensor spaces,
    /// pairs ordered lexicographically; absent maps are zero.
    Maps { context: String, x: String, y: String, f: Option<MatrixSpec>, g: Option<MatrixSpec> },
    /// A module over the context ring, read as a quadruple.
    FromModule { context: String, module: String },
    TLambda { extension: String, context: String, module: String },
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ComplexSpec {
    Explicit { algebra: String, lo: i64, terms: Vec<String>, diffs: Vec<MatrixSpec> },
    /// The complete resolution found by the certifier.
    CompleteResolution { module: String },
}

/// Names the command operates on; each command reads the fields it needs.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CommandSpec {
    pub context: Option<String>,
    pub extension: Option<String>,
    pub quadruple: Option<String>,
    pub module: Option<String>,
    pub bimodule: Option<String>,
    pub side: Option<String>,
    #[serde(default)]
    pub tests: Vec<String>,
    #[serde(default)]
    pub family: Vec<String>,
    /// Number of random quadruples added to an audit family.
    pub random_family: Option<usize>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub schema: String,
    pub field: Field,
    #[serde(default)]
    pub algebras: BTreeMap<String, AlgebraSpec>,
    #[serde(default)]
    pub bimodules: BTreeMap<String, BimoduleSpec>,
    #[serde(default)]
    pub extensions: BTreeMap<String, ExtensionSpec>,
    #[serde(default)]
    pub contexts: BTreeMap<String, ContextSpec>,
    #[serde(default)]
    pub modules: BTreeMap<String, ModuleSpec>,
    #[serde(default)]
    pub quadruples: BTreeMap<String, QuadrupleSpec>,
    #[serde(default)]
    pub complexes: BTreeMap<String, ComplexSpec>,
    #[serde(default)]
    pub command: CommandSpec,
}

/// A problem file with every name resolved and validated.
#[derive(Debug, Default)]
pub struct Problem {
    pub field: Option<Field>,
    pub algebras: BTreeMap<String, Arc<Algebra>>,
    pub bimodules: BTreeMap<String, Bimodule>,
    pub extensions: BTreeMap<String, TrivialExtension>,
    pub contexts: BTreeMap<String, Arc<MoritaContext>>,
    pub modules: BTreeMap<String, FDModule>,
    pub quadruples: BTreeMap<String, QuadrupleModule>,
    pub complexes: BTreeMap<String, ComplexWindow>,
    pub command: CommandSpec,
    nc_rings: BTreeMap<String, Arc<Algebra>>,
}

fn scalars(field: Field, v: &[Value], location: &str) -> Result<Vec<Scalar>, InputError> {
    v.iter().enumerate().map(|(i, s)| Scalar::from_json(field, s).at(&format!("{location}[{i}]"))).collect()
}

fn mats(field: Field, v: &[MatrixSpec], location: &str) -> Result<Vec<Mat>, InputError> {
    v.iter().enumerate().map(|(i, m)| m.to_mat(field, &format!("{location}[{i}]"))).collect()
}

fn lookup<'a, T>(map: &'a BTreeMap<String, T>, name: &str, kind: &str, location: &str) -> Result<&'a T, InputError> {
    map.get(name).ok_or_else(|| InputError { location: location.into(), message: format!("unknown {kind} `{name}`") })
}

impl Problem {
    pub fn parse(text: &str, bounds: SearchBounds) -> Result<Problem, InputError> {
        let file: ProblemFile = serde_json::from_str(text).at("problem")?;
        Problem::resolve(&file, bounds)
    }

    pub fn field(&self) -> Field {
        self.field.unwrap_or(Field::Q)
    }

    pub fn algebra(&mut self, name: &str, location: &str) -> Result<Arc<Algebra>, InputError> {
        if let Some(e) = name.strip_prefix("ext:") {
            return Ok(lookup(&self.extensions, e, "extension", location)?.algebra.clone());
        }
        if let Some(c) = name.strip_prefix("ring:") {
            let ctx = lookup(&self.contexts, c, "context", location)?;
            return Ok(ctx.ring().at(location)?.ring.clone());
        }
        if let Some(c) = name.strip_prefix("nc:") {
            if let Some(r) = self.nc_rings.get(c) {
                return Ok(r.clone());
            }
            let ctx = lookup(&self.contexts, c, "context", location)?.clone();
            let r = build_nc_tensor(&ctx).at(location)?.ring;
            self.nc_rings.insert(c.to_string(), r.clone());
            return Ok(r);
        }
        Ok(lookup(&self.algebras, name, "algebra", location)?.clone())
    }

    pub fn resolve(file: &ProblemFile, bounds: SearchBounds) -> Result<Problem, InputError> {
        if file.schema != PROBLEM_SCHEMA {
            return err("schema", format!("expected `{PROBLEM_SCHEMA}`, got `{}`", file.schema));
        }
        let f = file.field;
        let mut p = Problem { field: Some(f), command: file.command.clone(), ..Problem::default() };
        for (name, spec) in &file.algebras {
            let loc = format!("algebras.{name}");
            let a = build_algebra(f, spec, &loc)?;
            p.algebras.insert(name.clone(), a);
        }
        for (name, spec) in &file.bimodules {
            let loc = format!("bimodules.{name}");
            let b = p.build_bimodule(spec, &loc)?;
            b.validate().at(&loc)?;
            p.bimodules.insert(name.clone(), b);
        }
        for (name, spec) in &file.extensions {
            let loc = format!("extensions.{name}");
            let lam = p.algebra(&spec.lambda, &format!("{loc}.lambda"))?;
            let ideal = lookup(&p.bimodules, &spec.ideal, "bimodule", &format!("{loc}.ideal"))?;
            p.extensions.insert(name.clone(), trivial_extension(&lam, ideal).at(&loc)?);
        }
        for (name, spec) in &file.contexts {
            let loc = format!("contexts.{name}");
            let c = p.build_context(spec, &loc)?;
            p.contexts.insert(name.clone(), c);
        }
        // Modules may be read off quadruples and quadruples built from
        // modules; resolve in dependency order, quadruples of plain maps first.
        let mut pending_modules: Vec<(&String, &ModuleSpec)> = Vec::new();
        for (name, spec) in &file.modules {
            if matches!(spec, ModuleSpec::Quadruple { .. }) {
                pending_modules.push((name, spec));
                continue;
            }
            let loc = format!("modules.{name}");
            let m = p.build_module(spec, &loc)?;
            p.modules.insert(name.clone(), m);
        }
        for (name, spec) in &file.quadruples {
            let loc = format!("quadruples.{name}");
            let q = p.build_quadruple(spec, &loc)?;
            p.quadruples.insert(name.clone(), q);
        }
        for (name, spec) in pending_modules {
            let loc = format!("modules.{name}");
            let m = p.build_module(spec, &loc)?;
            p.modules.insert(name.clone(), m);
        }
        for (name, spec) in &file.complexes {
            let loc = format!("complexes.{name}");
            let c = p.build_complex(spec, bounds, &loc)?;
            p.complexes.insert(name.clone(), c);
        }
        Ok(p)
    }

    fn build_bimodule(&mut self, spec: &BimoduleSpec, loc: &str) -> Result<Bimodule, InputError> {
        let f = self.field();
        Ok(match spec {
            BimoduleSpec::Actions { left_alg, right_alg, left, right } => {
                let (a, b) = (self.algebra(left_alg, loc)?, self.algebra(right_alg, loc)?);
                let (l, r) = (mats(f, left, &format!("{loc}.left"))?, mats(f, right, &format!("{loc}.right"))?);
                Bimodule::new(a, b, l, r).at(loc)?
            }
            BimoduleSpec::Regular { algebra } => Bimodule::regular(&self.algebra(algebra, loc)?),
            BimoduleSpec::Zero { left_alg, right_alg } => Bimodule::zero(&self.algebra(left_alg, loc)?, &self.algebra(right_alg, loc)?),
            BimoduleSpec::Scalar { left_alg, right_alg, left, right } => {
                let (a, b) = (self.algebra(left_alg, loc)?, self.algebra(right_alg, loc)?);
                if left.len() != a.dim() || right.len() != b.dim() {
                    return err(loc, "one scalar per basis element of each algebra");
                }
                let l = left.iter().map(|&s| Mat::from_i64(f, 1, 1, &[s])).collect();
                let r = right.iter().map(|&s| Mat::from_i64(f, 1, 1, &[s])).collect();
                Bimodule::new(a, b, l, r).at(loc)?
            }
        })
    }

    fn build_context(&mut self, spec: &ContextSpec, loc: &str) -> Result<Arc<MoritaContext>, InputError> {
        let f = self.field();
        match spec {
            ContextSpec::Maps { a, b, m, n, phi, psi } => {
                let (a, b) = (self.algebra(a, loc)?, self.algebra(b, loc)?);
                let m = lookup(&self.bimodules, m, "bimodule", &format!("{loc}.m"))?.clone();
                let n = lookup(&self.bimodules, n, "bimodule", &format!("{loc}.n"))?.clone();
                let (dm, dn) = (m.dim(), n.dim());
                let phi = match phi {
                    Some(s) => s.to_mat(f, &format!("{loc}.phi"))?,
                    None => Mat::zero(f, b.dim(), dm * dn),
                };
                let psi = match psi {
                    Some(s) => s.to_mat(f, &format!("{loc}.psi"))?,
                    None => Mat::zero(f, a.dim(), dn * dm),
                };
                MoritaContext::new(a, b, m, n, phi, psi).at(loc)
            }
            ContextSpec::Psi { extension, b, m, n, psi } => {
                let ext = lookup(&self.extensions, extension, "extension", &format!("{loc}.extension"))?.clone();
                let b = self.algebra(b, loc)?;
                let m = lookup(&self.bimodules, m, "bimodule", &format!("{loc}.m"))?.clone();
                let n = lookup(&self.bimodules, n, "bimodule", &format!("{loc}.n"))?.clone();
                let psi = psi.to_mat(f, &format!("{loc}.psi"))?;
                ext.psi_context(&b, &m, &n, &psi).at(loc)
            }
        }
    }

    fn build_module(&mut self, spec: &ModuleSpec, loc: &str) -> Result<FDModule, InputError> {
        let f = self.field();
        Ok(match spec {
            ModuleSpec::Actions { algebra, action } => {
                let a = self.algebra(algebra, loc)?;
                FDModule::new(a, mats(f, action, &format!("{loc}.action"))?).at(loc)?
            }
            ModuleSpec::Regular { algebra } => FDModule::regular(&self.algebra(algebra, loc)?),
            ModuleSpec::Zero { algebra } => FDModule::zero(&self.algebra(algebra, loc)?),
            ModuleSpec::Simple { algebra, index } => {
                let s = simple_modules(&self.algebra(algebra, loc)?).at(loc)?;
                match s.get(*index) {
                    Some(m) => m.clone(),
                    None => return err(loc, format!("only {} simple modules", s.len())),
                }
            }
            ModuleSpec::Projective { algebra, index } => {
                let a = self.algebra(algebra, loc)?;
                let count = simple_modules(&a).at(loc)?.len();
                if *index >= count {
                    return err(loc, format!("only {count} indecomposable projectives"));
                }
                indecomposable_projective(&a, *index).at(loc)?
            }
            ModuleSpec::Quadruple { quadruple } => {
                lookup(&self.quadruples, quadruple, "quadruple", loc)?.to_module().at(loc)?
            }
        })
    }

    fn build_quadruple(&mut self, spec: &QuadrupleSpec, loc: &str) -> Result<QuadrupleModule, InputError> {
        let f = self.field();
        match spec {
            QuadrupleSpec::Maps { context, x, y, f: fm, g: gm } => {
                let ctx = lookup(&self.contexts, context, "context", &format!("{loc}.context"))?.clone();
                let x = lookup(&self.modules, x, "module", &format!("{loc}.x"))?.clone();
                let y = lookup(&self.modules, y, "module", &format!("{loc}.y"))?.clone();
                let (mx, ny) = (ctx.m.dim() * x.dim(), ctx.n.dim() * y.dim());
                let fk = match fm {
                    Some(s) => s.to_mat(f, &format!("{loc}.f"))?,
                    None => Mat::zero(f, y.dim(), mx),
                };
                let gk = match gm {
                    Some(s) => s.to_mat(f, &format!("{loc}.g"))?,
                    None => Mat::zero(f, x.dim(), ny),
                };
                if fk.rows() != y.dim() || fk.cols() != mx || gk.rows() != x.dim() || gk.cols() != ny {
                    return err(loc, format!("f must be {}x{} and g {}x{}", y.dim(), mx, x.dim(), ny));
                }
                QuadrupleModule::from_k_maps(&ctx, x, y, &fk, &gk).at(loc)
            }
            QuadrupleSpec::FromModule { context, module } => {
                let ctx = lookup(&self.contexts, context, "context", &format!("{loc}.context"))?.clone();
                let v = lookup(&self.modules, module, "module", &format!("{loc}.module"))?;
                Ok(QuadrupleModule::from_module(&ctx, v).at(loc)?.0)
            }
            QuadrupleSpec::TLambda { extension, context, module } => {
                let ext = lookup(&self.extensions, extension, "extension", &format!("{loc}.extension"))?;
                let ctx = lookup(&self.contexts, context, "context", &format!("{loc}.context"))?;
                let v = lookup(&self.modules, module, "module", &format!("{loc}.module"))?;
                t_lambda(ext, ctx, v).at(loc)
            }
        }
    }

    fn build_complex(&mut self, spec: &ComplexSpec, bounds: SearchBounds, loc: &str) -> Result<ComplexWindow, InputError> {
        match spec {
            ComplexSpec::Explicit { algebra, lo, terms, diffs } => {
                let _ = self.algebra(algebra, loc)?;
                let ts = terms
                    .iter()
                    .enumerate()
                    .map(|(i, t)| lookup(&self.modules, t, "module", &format!("{loc}.terms[{i}]")).cloned())
                    .collect::<Result<Vec<_>, _>>()?;
                window_from(*lo, ts, mats(self.field(), diffs, &format!("{loc}.diffs"))?, loc)
            }
            ComplexSpec::CompleteResolution { module } => {
                let m = lookup(&self.modules, module, "module", &format!("{loc}.module"))?;
                Ok(complete_resolution(m, bounds).at(loc)?.window)
            }
        }
    }

    pub fn context(&self, name: Option<&str>) -> Result<Arc<MoritaContext>, InputError> {
        let name = name.or(self.command.context.as_deref()).ok_or_else(|| InputError {
            location: "command.context".into(),
            message: "no context named".into(),
        })?;
        lookup(&self.contexts, name, "context", "command.context").cloned()
    }

    pub fn named<'a, T>(&'a self, map: &'a BTreeMap<String, T>, name: &Option<String>, kind: &str) -> Result<&'a T, InputError> {
        let loc = format!("command.{kind}");
        let n = name.as_deref().ok_or_else(|| InputError { location: loc.clone(), message: format!("no {kind} named") })?;
        lookup(map, n, kind, &loc)
    }
}

fn build_algebra(f: Field, spec: &AlgebraSpec, loc: &str) -> Result<Arc<Algebra>, InputError> {
    match spec {
        AlgebraSpec::Builtin { name, n, orders } => {
            let need = || n.ok_or_else(|| InputError { location: loc.into(), message: format!("builtin `{name}` needs `n`") });
            Ok(match name.as_str() {
                "ground" => fixtures::ground(f),
                "k_times_k" => fixtures::k_times_k(f),
                "dual_numbers" => fixtures::dual_numbers(f),
                "path_a2" => fixtures::path_a2(f),
                "truncated_poly" => fixtures::truncated_poly(f, need()?),
                "matrix" => fixtures::matrix_algebra(f, need()?),
                "upper_triangular" => fixtures::upper_triangular(f, need()?),
                "group" => fixtures::abelian_group_algebra(f, orders),
                other => return err(loc, format!("unknown builtin algebra `{other}`")),
            })
        }
        AlgebraSpec::Table { dim, unit, constants } => {
            let d = *dim;
            let mut c = vec![f.zero(); d * d * d];
            for (t, (i, j, k, v)) in constants.iter().enumerate() {
                let l = format!("{loc}.constants[{t}]");
                if *i >= d || *j >= d || *k >= d {
                    return err(l, "index out of range");
                }
                c[(i * d + j) * d + k] = Scalar::from_json(f, v).at(&l)?;
            }
            let u = scalars(f, unit, &format!("{loc}.unit"))?;
            Ok(Arc::new(Algebra::new(f, d, &c, &u).at(loc)?))
        }
        AlgebraSpec::Left { left, unit } => {
            let l = mats(f, left, &format!("{loc}.left"))?;
            let u = scalars(f, unit, &format!("{loc}.unit"))?;
            Ok(Arc::new(Algebra::from_left(f, l, Mat::column(f, &u)).at(loc)?))
        }
    }
}
