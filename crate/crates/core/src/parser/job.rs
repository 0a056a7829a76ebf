//! JSON job files.
//!
//! ```json
//! {
//!   "psi": "cf" | "bc-left" | "bc-right"
//!        | {"special": {"alpha": [c,c,c,c], "lambda": c, "mu": c, "theta": c,
//!                       "vartheta": c, "nu": c, "eta": c}}
//!        | {"explicit": [biquaternion x4]},
//!   "f": {"basis": "cartan" | "standard", "components": [string x4]},
//!   "side": "left" | "right",                                  (optional)
//!   "options": {"samples": n, "seed": n, "tolerance": x}       (optional)
//! }
//! ```
//!
//! A complex number `c` is `[re, im]` or a bare real number.

use std::path::Path;

use num_complex::Complex64;
use serde_json::{json, Map, Value};

use super::{parse_expr, print_expr};
use crate::algebra::{BasisTag, Biquaternion};
use crate::constructors::{bc_psi, special_psi, SpecialPsiParams};
use crate::error::{Error, Result};
use crate::holoexpr::HoloExpr;
use crate::operators::{BqFunction, PsiWeights, Side};

#[derive(Debug, Clone, PartialEq)]
pub enum PsiSpec {
    /// The Cauchy-Fueter operator `d/dt0 + I d/dt1 + J d/dt2 + K d/dt3`.
    CauchyFueter,
    BcLeft,
    BcRight,
    Special(SpecialPsiParams),
    Explicit(PsiWeights),
}

impl PsiSpec {
    /// Weights of a Dirac operator; `None` for the Cauchy-Fueter operator,
    /// which acts in standard variables.
    pub fn weights(&self) -> Result<Option<PsiWeights>> {
        Ok(match self {
            PsiSpec::CauchyFueter => None,
            PsiSpec::BcLeft => Some(bc_psi(Side::Left)),
            PsiSpec::BcRight => Some(bc_psi(Side::Right)),
            PsiSpec::Special(p) => Some(special_psi(p)?),
            PsiSpec::Explicit(w) => Some(*w),
        })
    }

    pub fn default_side(&self) -> Side {
        match self {
            PsiSpec::BcRight => Side::Right,
            _ => Side::Left,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct JobOptions {
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub tolerance: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Job {
    pub psi: PsiSpec,
    pub side: Side,
    pub f: BqFunction,
    pub options: JobOptions,
}

pub fn load_job(path: impl AsRef<Path>) -> Result<Job> {
    let path = path.as_ref();
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_job(&text)
}

pub fn parse_job(text: &str) -> Result<Job> {
    let root: Value =
        serde_json::from_str(text).map_err(|e| Error::Schema(format!("invalid JSON: {e}")))?;
    let obj = as_object(&root)?;
    check_keys(obj, &["psi", "f", "side", "options"])?;

    let psi = parse_psi(field(obj, "psi")?).map_err(|e| e.at("psi"))?;
    let f = function_from_json(field(obj, "f")?).map_err(|e| e.at("f"))?;
    let side = match obj.get("side") {
        None => psi.default_side(),
        Some(v) => as_str(v)?.parse().map_err(|e: Error| e.at("side"))?,
    };
    if psi == PsiSpec::CauchyFueter && side == Side::Right {
        return Err(Error::Schema("the Cauchy-Fueter operator is left-sided".into()).at("side"));
    }
    let options = match obj.get("options") {
        None => JobOptions::default(),
        Some(v) => parse_options(v).map_err(|e| e.at("options"))?,
    };
    Ok(Job {
        psi,
        side,
        f,
        options,
    })
}

fn parse_psi(v: &Value) -> Result<PsiSpec> {
    if let Value::String(s) = v {
        return match s.as_str() {
            "cf" => Ok(PsiSpec::CauchyFueter),
            "bc-left" => Ok(PsiSpec::BcLeft),
            "bc-right" => Ok(PsiSpec::BcRight),
            other => Err(Error::Schema(format!(
                "unknown psi `{other}` (expected \"cf\", \"bc-left\", \"bc-right\", or an object)"
            ))),
        };
    }
    let obj = as_object(v)?;
    if obj.len() != 1 {
        return Err(Error::Schema(
            "psi object must have exactly one key, \"special\" or \"explicit\"".into(),
        ));
    }
    if let Some(p) = obj.get("special") {
        let params = parse_special_params(p).map_err(|e| e.at("special"))?;
        params.validate().map_err(|e| e.at("special"))?;
        return Ok(PsiSpec::Special(params));
    }
    if let Some(list) = obj.get("explicit") {
        let items = as_array(list, 4).map_err(|e| e.at("explicit"))?;
        let mut psi = [Biquaternion::zero(BasisTag::Cartan); 4];
        for (j, item) in items.iter().enumerate() {
            psi[j] = serde_json::from_value(item.clone())
                .map_err(|e| Error::Schema(e.to_string()).at(format!("explicit[{j}]")))?;
        }
        return Ok(PsiSpec::Explicit(PsiWeights::new(psi)));
    }
    Err(Error::Schema(
        "psi object must have key \"special\" or \"explicit\"".into(),
    ))
}

pub fn parse_special_params(v: &Value) -> Result<SpecialPsiParams> {
    let obj = as_object(v)?;
    check_keys(
        obj,
        &["alpha", "lambda", "mu", "theta", "vartheta", "nu", "eta"],
    )?;
    let alpha_items = as_array(field(obj, "alpha")?, 4).map_err(|e| e.at("alpha"))?;
    let mut alpha = [Complex64::default(); 4];
    for (s, item) in alpha_items.iter().enumerate() {
        alpha[s] = parse_complex(item).map_err(|e| e.at(format!("alpha[{s}]")))?;
    }
    let get = |name: &str| -> Result<Complex64> {
        parse_complex(field(obj, name)?).map_err(|e| e.at(name))
    };
    Ok(SpecialPsiParams {
        alpha,
        lambda: get("lambda")?,
        mu: get("mu")?,
        theta: get("theta")?,
        vartheta: get("vartheta")?,
        nu: get("nu")?,
        eta: get("eta")?,
    })
}

/// Parses `{"basis": ..., "components": [4 strings]}`; component variables
/// must match the basis (`z1..z4` for cartan, `t0..t3` for standard).
pub fn function_from_json(v: &Value) -> Result<BqFunction> {
    let obj = as_object(v)?;
    check_keys(obj, &["basis", "components"])?;
    let basis: BasisTag = as_str(field(obj, "basis")?)
        .and_then(str::parse)
        .map_err(|e| e.at("basis"))?;
    let items = as_array(field(obj, "components")?, 4).map_err(|e| e.at("components"))?;
    let mut f: [HoloExpr; 4] = std::array::from_fn(|_| HoloExpr::zero());
    for (s, item) in items.iter().enumerate() {
        let path = format!("components[{s}]");
        let src = as_str(item).map_err(|e| e.at(path.as_str()))?;
        f[s] = parse_expr(src, basis).map_err(|e| e.at(path.as_str()))?;
    }
    Ok(BqFunction::new(basis, f))
}

/// Canonical JSON form, components printed after normalization.
pub fn function_to_json(f: &BqFunction) -> Value {
    let components: Vec<String> = f.f.iter().map(|e| print_expr(e, f.basis)).collect();
    json!({ "basis": f.basis.name(), "components": components })
}

fn parse_options(v: &Value) -> Result<JobOptions> {
    let obj = as_object(v)?;
    check_keys(obj, &["samples", "seed", "tolerance"])?;
    let samples = match obj.get("samples") {
        None => None,
        Some(v) => {
            let n = v
                .as_u64()
                .filter(|&n| n >= 1)
                .ok_or_else(|| Error::Schema("expected an integer >= 1".into()).at("samples"))?;
            Some(n as usize)
        }
    };
    let seed = match obj.get("seed") {
        None => None,
        Some(v) => Some(
            v.as_u64()
                .ok_or_else(|| Error::Schema("expected a nonnegative integer".into()).at("seed"))?,
        ),
    };
    let tolerance = match obj.get("tolerance") {
        None => None,
        Some(v) => Some(v.as_f64().filter(|x| *x >= 0.0).ok_or_else(|| {
            Error::Schema("expected a nonnegative number".into()).at("tolerance")
        })?),
    };
    Ok(JobOptions {
        samples,
        seed,
        tolerance,
    })
}

pub(crate) fn parse_complex(v: &Value) -> Result<Complex64> {
    if let Some(x) = v.as_f64() {
        return Ok(Complex64::new(x, 0.0));
    }
    let items = as_array(v, 2)?;
    match (items[0].as_f64(), items[1].as_f64()) {
        (Some(re), Some(im)) => Ok(Complex64::new(re, im)),
        _ => Err(Error::Schema(
            "expected [re, im] with numeric entries".into(),
        )),
    }
}

fn as_object(v: &Value) -> Result<&Map<String, Value>> {
    v.as_object()
        .ok_or_else(|| Error::Schema(format!("expected an object, found {}", kind(v))))
}

fn as_array(v: &Value, len: usize) -> Result<&Vec<Value>> {
    match v.as_array() {
        Some(a) if a.len() == len => Ok(a),
        Some(a) => Err(Error::Schema(format!(
            "expected an array of length {len}, found length {}",
            a.len()
        ))),
        None => Err(Error::Schema(format!(
            "expected an array, found {}",
            kind(v)
        ))),
    }
}

fn as_str(v: &Value) -> Result<&str> {
    v.as_str()
        .ok_or_else(|| Error::Schema(format!("expected a string, found {}", kind(v))))
}

fn field<'a>(obj: &'a Map<String, Value>, name: &str) -> Result<&'a Value> {
    obj.get(name)
        .ok_or_else(|| Error::Schema("missing field".into()).at(name))
}

fn check_keys(obj: &Map<String, Value>, allowed: &[&str]) -> Result<()> {
    match obj.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => Err(Error::Schema("unknown field".into()).at(k.as_str())),
        None => Ok(()),
    }
}

fn kind(v: &Value) -> &'static str {
    match v {
        Value::Null => "null",
        Value::Bool(_) => "a boolean",
        Value::Number(_) => "a number",
        Value::String(_) => "a string",
        Value::Array(_) => "an array",
        Value::Object(_) => "an object",
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const CF_CONSTANT: &str = r#"{
        "psi": "cf",
        "f": {"basis": "standard", "components": ["1", "2i", "0", "(3-1i)"]}
    }"#;

    #[test]
    fn loads_cf_job() {
        let job = parse_job(CF_CONSTANT).unwrap();
        assert_eq!(job.psi, PsiSpec::CauchyFueter);
        assert_eq!(job.side, Side::Left);
        assert_eq!(job.f.basis, BasisTag::Standard);
        assert_eq!(job.options, JobOptions::default());
    }

    #[test]
    fn degenerate_special_rejected_at_load() {
        let text = r#"{
            "psi": {"special": {"alpha": [1, 1, 1, 1], "lambda": 0, "mu": 0,
                                "theta": 0, "vartheta": 0, "nu": 0, "eta": 0}},
            "f": {"basis": "cartan", "components": ["0", "0", "0", "0"]}
        }"#;
        let err = parse_job(text).unwrap_err();
        assert!(
            matches!(err.root(), Error::DegenerateParams { .. }),
            "{err}"
        );
        assert_eq!(err.to_string().split(':').next().unwrap(), "psi.special");
    }

    #[test]
    fn malformed_component_names_its_index() {
        let text = r#"{"psi": "bc-left", "f": {"basis": "cartan", "components": ["z1", "z2 +", "0", "0"]}}"#;
        let err = parse_job(text).unwrap_err();
        match &err {
            Error::AtPath { path, source } => {
                assert_eq!(path, "f.components[1]");
                assert!(matches!(**source, Error::Syntax { .. }));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn coordinate_mismatch_is_reported() {
        let text =
            r#"{"psi": "bc-left", "f": {"basis": "cartan", "components": ["t0", "0", "0", "0"]}}"#;
        let err = parse_job(text).unwrap_err();
        assert!(matches!(err.root(), Error::WrongCoordinateSystem { .. }));
        assert!(err.to_string().starts_with("f.components[0]"));
    }

    #[test]
    fn schema_errors_have_paths() {
        let missing = parse_job(r#"{"psi": "cf"}"#).unwrap_err();
        assert_eq!(missing.to_string(), "f: schema error: missing field");
        let bad_psi = parse_job(
            r#"{"psi": "xx", "f": {"basis": "cartan", "components": ["0","0","0","0"]}}"#,
        )
        .unwrap_err();
        assert!(bad_psi.to_string().starts_with("psi: "));
        let short = parse_job(r#"{"psi": "cf", "f": {"basis": "standard", "components": ["0"]}}"#)
            .unwrap_err();
        assert!(short.to_string().starts_with("f.components: "));
        let extra = parse_job(
            r#"{"psi": "cf", "g": 1, "f": {"basis": "standard", "components": ["0","0","0","0"]}}"#,
        )
        .unwrap_err();
        assert!(extra.to_string().starts_with("g: "));
        let bad_basis =
            parse_job(r#"{"psi": "cf", "f": {"basis": "polar", "components": ["0","0","0","0"]}}"#)
                .unwrap_err();
        assert!(bad_basis.to_string().starts_with("f.basis: "));
    }

    #[test]
    fn explicit_weights_and_options() {
        let text = r#"{
            "psi": {"explicit": [
                {"basis": "standard", "c": [[1,0],[0,0],[0,0],[0,0]]},
                {"basis": "standard", "c": [[0,0],[1,0],[0,0],[0,0]]},
                {"basis": "standard", "c": [[0,0],[0,0],[1,0],[0,0]]},
                {"basis": "standard", "c": [[0,0],[0,0],[0,0],[1,0]]}
            ]},
            "side": "right",
            "f": {"basis": "cartan", "components": ["z2", "0", "0", "0"]},
            "options": {"samples": 5, "seed": 7, "tolerance": 1e-6}
        }"#;
        let job = parse_job(text).unwrap();
        assert_eq!(job.psi, PsiSpec::Explicit(PsiWeights::quaternion_units()));
        assert_eq!(job.side, Side::Right);
        assert_eq!(
            job.options,
            JobOptions {
                samples: Some(5),
                seed: Some(7),
                tolerance: Some(1e-6)
            }
        );
    }

    #[test]
    fn bc_right_defaults_to_right_side() {
        let text =
            r#"{"psi": "bc-right", "f": {"basis": "cartan", "components": ["0","0","0","0"]}}"#;
        assert_eq!(parse_job(text).unwrap().side, Side::Right);
    }

    #[test]
    fn function_json_round_trip() {
        let v = json!({"basis": "cartan", "components": ["z2*z3", "z1", "z3", "z1*z2 + z3*z4"]});
        let f = function_from_json(&v).unwrap();
        assert_eq!(function_to_json(&f), v);
    }
}
