//! Model files: a commutative grid model (`"space"`) or a truncated
//! operator model (`"dim"`), both with `"schema": 1`.

use std::collections::BTreeMap;

use serde::Deserialize;
use serde_json::Value;

use crate::base::CompactGrid;
use crate::error::{Error, Result};
use crate::extended::ExtendedValue;
use crate::operator::{OperatorElement, TruncatedDomain};
use crate::quasi::{AlgebraKind, QuasiElement, QuasiModel, SeminormFamily, SeminormSpec};
use crate::representation::FormSpec;

pub const SCHEMA_VERSION: u64 = 1;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CommutativeFile {
    #[allow(dead_code)]
    schema: u64,
    space: SpaceSpec,
    #[serde(default)]
    topology: Option<TopologySpec>,
    #[serde(default)]
    algebra: Option<AlgebraSpec>,
    #[serde(default)]
    elements: BTreeMap<String, ElementSpec>,
    #[serde(default)]
    forms: BTreeMap<String, FormSpec>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpaceSpec {
    interval: [f64; 2],
    points: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct TopologySpec {
    specs: Vec<SeminormEntry>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SeminormEntry {
    p: f64,
    #[serde(default)]
    weight: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum AlgebraSpec {
    Linf,
    Lipschitz { max_slope: f64 },
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum ElementSpec {
    Expr { expr: String },
    Values { values: Vec<ExtendedValue> },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct OperatorFile {
    #[allow(dead_code)]
    schema: u64,
    dim: usize,
    #[serde(rename = "S")]
    weights: Vec<f64>,
    #[serde(default)]
    elements: BTreeMap<String, MatrixSpec>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixSpec {
    matrix: OperatorElement,
}

/// A loaded grid model with its named elements and forms.
#[derive(Debug, Clone)]
pub struct CommutativeModel {
    pub model: QuasiModel,
    pub elements: BTreeMap<String, QuasiElement>,
    pub forms: BTreeMap<String, FormSpec>,
}

impl CommutativeModel {
    pub fn element(&self, name: &str) -> Result<&QuasiElement> {
        self.elements.get(name).ok_or_else(|| Error::InvalidInput(format!("unknown element `{name}`")))
    }
}

/// A loaded operator model with its named elements.
#[derive(Debug, Clone)]
pub struct OperatorModel {
    pub domain: TruncatedDomain,
    pub elements: BTreeMap<String, OperatorElement>,
}

impl OperatorModel {
    pub fn element(&self, name: &str) -> Result<&OperatorElement> {
        self.elements.get(name).ok_or_else(|| Error::InvalidInput(format!("unknown element `{name}`")))
    }
}

#[derive(Debug, Clone)]
pub enum ModelFile {
    Commutative(CommutativeModel),
    Operator(OperatorModel),
}

fn located(e: serde_json::Error) -> Error {
    Error::Parse(format!("line {}, column {}: {e}", e.line(), e.column()))
}

/// Compiles a closed-form expression in `t`.
pub fn compile_expr(expr: &str) -> Result<impl Fn(f64) -> f64> {
    let parsed: meval::Expr = expr.parse().map_err(|e| Error::Parse(format!("expression `{expr}`: {e}")))?;
    parsed.bind("t").map_err(|e| Error::Parse(format!("expression `{expr}`: {e}")))
}

pub fn parse_model(text: &str) -> Result<ModelFile> {
    let value: Value = serde_json::from_str(text).map_err(located)?;
    let obj = value.as_object().ok_or_else(|| Error::Parse("line 1, column 1: model must be a JSON object".into()))?;
    match obj.get("schema").and_then(Value::as_u64) {
        Some(SCHEMA_VERSION) => {}
        Some(v) => return Err(Error::Parse(format!("unsupported schema version {v}"))),
        None => return Err(Error::Parse("missing `\"schema\": 1`".into())),
    }
    if obj.contains_key("space") {
        let file: CommutativeFile = serde_json::from_str(text).map_err(located)?;
        load_commutative(file).map(ModelFile::Commutative)
    } else if obj.contains_key("dim") {
        let file: OperatorFile = serde_json::from_str(text).map_err(located)?;
        load_operator(file).map(ModelFile::Operator)
    } else {
        Err(Error::Parse("model needs either `space` (grid model) or `dim` (operator model)".into()))
    }
}

fn context(what: String) -> impl FnOnce(Error) -> Error {
    move |e| Error::Parse(format!("{what}: {e}"))
}

fn load_commutative(file: CommutativeFile) -> Result<CommutativeModel> {
    let [a, b] = file.space.interval;
    let grid = CompactGrid::uniform(a, b, file.space.points).map_err(context("space".into()))?;
    let entries = file.topology.map_or_else(|| vec![SeminormEntry { p: 1.0, weight: None }], |t| t.specs);
    let mut specs = Vec::with_capacity(entries.len());
    for (i, e) in entries.into_iter().enumerate() {
        let weight = match e.weight {
            None => vec![1.0; grid.len()],
            Some(expr) => {
                let f = compile_expr(&expr).map_err(context(format!("topology.specs[{i}].weight")))?;
                grid.points().iter().map(|&t| f(t)).collect()
            }
        };
        specs.push(SeminormSpec { p: e.p, weight });
    }
    let family = SeminormFamily::new(&grid, specs).map_err(context("topology".into()))?;
    let algebra = match file.algebra {
        None | Some(AlgebraSpec::Linf) => AlgebraKind::Linf,
        Some(AlgebraSpec::Lipschitz { max_slope }) => AlgebraKind::Lipschitz { max_slope },
    };
    let model = QuasiModel::new(grid, family, algebra);
    let mut elements = BTreeMap::new();
    for (name, spec) in file.elements {
        let element = match spec {
            ElementSpec::Expr { expr } => {
                let f = compile_expr(&expr).map_err(context(format!("elements.{name}")))?;
                model.element_from_fn(f)
            }
            ElementSpec::Values { values } => model.element(values),
        }
        .map_err(context(format!("elements.{name}")))?;
        elements.insert(name, element);
    }
    for (name, form) in &file.forms {
        let len = match form {
            FormSpec::Diagonal { weights } => weights.len(),
            FormSpec::Kernel { matrix } => matrix.dim(),
        };
        if len != model.grid().len() {
            return Err(Error::Parse(format!("forms.{name}: size {len} does not match {} grid points", model.grid().len())));
        }
    }
    Ok(CommutativeModel { model, elements, forms: file.forms })
}

fn load_operator(file: OperatorFile) -> Result<OperatorModel> {
    if file.weights.len() != file.dim {
        return Err(Error::Parse(format!("S has {} entries, dim is {}", file.weights.len(), file.dim)));
    }
    let domain = TruncatedDomain::new(file.weights).map_err(context("S".into()))?;
    let mut elements = BTreeMap::new();
    for (name, spec) in file.elements {
        if spec.matrix.dim() != file.dim {
            return Err(Error::Parse(format!("elements.{name}: matrix is {0}x{0}, dim is {1}", spec.matrix.dim(), file.dim)));
        }
        elements.insert(name, spec.matrix);
    }
    Ok(OperatorModel { domain, elements })
}
