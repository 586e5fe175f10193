//! `verify-report`: re-check embedded witnesses with matrix arithmetic
//! only, then re-run the recorded invocation and compare bytes.

use morita_gp::io::{parse_matrix, InputError, REPORT_SCHEMA};
use morita_gp::linalg::{rank, Field, Mat, Scalar};
use serde_json::{json, Value};

type Checks = Vec<(String, bool)>;

fn mats(field: Field, v: &Value, loc: &str) -> Result<Vec<Mat>, InputError> {
    v.as_array()
        .map(|a| a.iter().enumerate().map(|(i, m)| parse_matrix(field, m, &format!("{loc}[{i}]"))).collect())
        .unwrap_or_else(|| Err(InputError { location: loc.into(), message: "expected an array of matrices".into() }))
}

/// Action matrices of a `module_json` object.
fn actions(field: Field, v: &Value, loc: &str) -> Result<Vec<Mat>, InputError> {
    mats(field, &v["action"], &format!("{loc}.action"))
}

fn is_hom(map: &Mat, src: &[Mat], tgt: &[Mat]) -> bool {
    src.len() == tgt.len() && src.iter().zip(tgt).all(|(s, t)| map.matmul(s) == t.matmul(map))
}

fn check_non_injective(field: Field, w: &Value, out: &mut Checks) -> Result<(), InputError> {
    let map = parse_matrix(field, &w["map"], "witness.map")?;
    let src = actions(field, &w["source"], "witness.source")?;
    let tgt = actions(field, &w["target"], "witness.target")?;
    let v: Vec<Scalar> = w["kernel_vector"]
        .as_array()
        .map(|a| a.iter().map(|s| Scalar::from_json(field, s)).collect::<Result<_, _>>())
        .transpose()
        .map_err(|e| InputError { location: "witness.kernel_vector".into(), message: e.to_string() })?
        .unwrap_or_default();
    out.push(("witness map is a module homomorphism".into(), is_hom(&map, &src, &tgt)));
    let nonzero = v.len() == map.cols() && v.iter().any(|s| !s.is_zero());
    out.push(("kernel vector is nonzero".into(), nonzero));
    out.push(("kernel vector is killed by the map".into(), nonzero && map.matmul(&Mat::column(field, &v)).is_zero()));
    Ok(())
}

/// Differentials are homomorphisms, compose to zero and are exact inside
/// the window; the anchor is an injection onto `Ker d^0`.
fn check_anchored(field: Field, a: &Value, loc: &str, out: &mut Checks) -> Result<(), InputError> {
    let w = &a["window"];
    let lo = w["lo"].as_i64().unwrap_or(0);
    let terms: Vec<Vec<Mat>> = w["terms"]
        .as_array()
        .into_iter()
        .flatten()
        .enumerate()
        .map(|(i, t)| actions(field, t, &format!("{loc}.terms[{i}]")))
        .collect::<Result<_, _>>()?;
    let dims: Vec<usize> = w["terms"].as_array().into_iter().flatten().map(|t| t["dim"].as_u64().unwrap_or(0) as usize).collect();
    let diffs = mats(field, &w["diffs"], &format!("{loc}.diffs"))?;
    let homs = diffs.len() + 1 == terms.len() && diffs.iter().enumerate().all(|(i, d)| is_hom(d, &terms[i], &terms[i + 1]));
    out.push((format!("{loc}: differentials are homomorphisms"), homs));
    out.push((format!("{loc}: d^2 = 0"), diffs.windows(2).all(|p| p[1].matmul(&p[0]).is_zero())));
    let exact = (1..diffs.len()).all(|k| dims[k] == rank(&diffs[k]) + rank(&diffs[k - 1]));
    out.push((format!("{loc}: exact inside the window"), exact));
    let kernel = parse_matrix(field, &a["kernel"], &format!("{loc}.kernel"))?;
    let anchored = usize::try_from(-lo).ok().and_then(|i| diffs.get(i)).is_some_and(|d0| {
        let r = rank(&kernel);
        d0.matmul(&kernel).is_zero() && r == kernel.cols() && r + rank(d0) == d0.cols()
    });
    out.push((format!("{loc}: anchor is onto Ker d^0"), anchored));
    Ok(())
}

fn check_certificate(field: Field, c: &Value, loc: &str, out: &mut Checks) -> Result<(), InputError> {
    if let Some(r) = c.get("resolution") {
        check_anchored(field, r, &format!("{loc}.resolution"), out)?;
    }
    if let Some(e) = c.get("evidence") {
        check_anchored(field, e, &format!("{loc}.evidence"), out)?;
    }
    if let (Some(p), Some(r)) = (c.get("periodicity"), c.get("resolution")) {
        let t0 = parse_matrix(field, &p["theta0"], &format!("{loc}.periodicity.theta0"))?;
        let t1 = parse_matrix(field, &p["theta1"], &format!("{loc}.periodicity.theta1"))?;
        let diffs = mats(field, &r["window"]["diffs"], &format!("{loc}.resolution.window.diffs"))?;
        let lo = r["window"]["lo"].as_i64().unwrap_or(0);
        let j = p["degree"].as_i64().unwrap_or(0) - lo;
        let per = p["period"].as_i64().unwrap_or(0);
        let ok = usize::try_from(j).ok().zip(usize::try_from(j + per).ok()).is_some_and(|(j, jp)| match (diffs.get(j), diffs.get(jp)) {
            (Some(dj), Some(djp)) => t0.is_square() && t1.is_square() && rank(&t0) == t0.rows() && rank(&t1) == t1.rows() && t1.matmul(dj) == djp.matmul(&t0),
            _ => false,
        });
        out.push((format!("{loc}: periodicity isomorphisms commute"), ok));
    }
    Ok(())
}

fn check_total(field: Field, t: &Value, out: &mut Checks) -> Result<(), InputError> {
    let diffs: Vec<Mat> = t["diffs"]
        .as_array()
        .into_iter()
        .flatten()
        .enumerate()
        .map(|(i, d)| {
            let a = parse_matrix(field, &d["alpha"], &format!("total.diffs[{i}].alpha"))?;
            let b = parse_matrix(field, &d["beta"], &format!("total.diffs[{i}].beta"))?;
            Ok(Mat::block_diag(&[&a, &b]))
        })
        .collect::<Result<_, InputError>>()?;
    let dims: Vec<usize> = t["dims"]
        .as_array()
        .into_iter()
        .flatten()
        .map(|d| d[0].as_u64().unwrap_or(0) as usize + d[1].as_u64().unwrap_or(0) as usize)
        .collect();
    out.push(("total complex: d^2 = 0".into(), diffs.windows(2).all(|p| p[1].matmul(&p[0]).is_zero())));
    let exact = dims.len() == diffs.len() + 1 && (1..diffs.len()).all(|k| dims[k] == rank(&diffs[k]) + rank(&diffs[k - 1]));
    out.push(("total complex: exact inside the window".into(), exact));
    Ok(())
}

/// Independent checks of everything the report embeds.
pub fn check_report(field: Field, report: &Value) -> Result<Checks, InputError> {
    let mut out = Vec::new();
    out.push(("schema".into(), report["schema"] == REPORT_SCHEMA));
    if let Some(w) = report.get("witness") {
        match w["kind"].as_str() {
            Some("non_injective_map") => check_non_injective(field, w, &mut out)?,
            Some("certificate") => check_certificate(field, &w["certificate"], "witness.certificate", &mut out)?,
            _ => {}
        }
    }
    let result = &report["result"];
    if report["command"] == "certify-gp" {
        check_certificate(field, result, "result", &mut out)?;
    }
    if let Some(t) = result.get("total").filter(|t| !t.is_null()) {
        check_total(field, t, &mut out)?;
    }
    Ok(out)
}

pub fn checks_json(checks: &Checks) -> Value {
    Value::Array(checks.iter().map(|(n, ok)| json!({ "check": n, "ok": ok })).collect())
}
