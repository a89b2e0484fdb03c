use std::fs;
use std::path::Path;

use log::{debug, info};
use qcstar_core::calculus::{self, ProductSchedule};
use qcstar_core::gelfand::{self, MixedElement};
use qcstar_core::io::{CommutativeModel, OperatorModel};
use qcstar_core::operator::{self, BoundedSetFamily, CommutativeBridge};
use qcstar_core::quasi::{verify_axioms, AxiomConfig};
use qcstar_core::representation::{self, ContinuityProbe, FormSpec, SesquilinearForm};
use qcstar_core::sampling::{self, SuiteRng};
use qcstar_core::{BoundedFunction, Character, Check, Error, ModelFile, OperatorElement, QuasiElement, ScalarFunction, Table, Verdict};
use serde_json::{json, Value};

use crate::args::{Cli, Command, Suite};
use crate::render::Outcome;

/// Failures that abort a run before any report is written.
#[derive(Debug)]
pub enum Failure {
    /// Bad model, arguments or configuration (exit 2).
    Input(String),
    /// Filesystem failure (exit 3).
    Io(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Input(_) => 2,
            Failure::Io(_) => 3,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Input(m) | Failure::Io(m) => f.write_str(m),
        }
    }
}

type Run<T> = std::result::Result<T, Failure>;

fn input(e: Error) -> Failure {
    Failure::Input(e.to_string())
}

const PRECONDITION: &str = "precondition";

/// Errors that make the computed quantity undefined rather than the input
/// malformed; they become a failing check.
fn undefined(e: &Error) -> bool {
    matches!(
        e,
        Error::NotMultipliable(_)
            | Error::NotQuasiPositive { .. }
            | Error::NotInClass { .. }
            | Error::FClassViolation(_)
            | Error::DomainError { .. }
            | Error::NotPositive { .. }
            | Error::NotInvariant { .. }
            | Error::NotContinuous { .. }
            | Error::UnboundedOnSupport { .. }
            | Error::InvariantViolation(_)
            | Error::NonHermitian { .. }
    )
}

fn precondition_failed(cli: &Cli, command: &str, e: Error) -> Run<Outcome> {
    if !undefined(&e) {
        return Err(input(e));
    }
    let check = Check::new(command, PRECONDITION, Verdict::Fail, f64::INFINITY).with_witness(json!({"error": e.to_string()}));
    Ok(Outcome::new(command, cli.seed, vec![check], None))
}

fn validate(cli: &Cli) -> Run<()> {
    for (name, v) in [("--tol", cli.tol), ("--cauchy-tol", cli.cauchy_tol)] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Failure::Input(format!("{name} must be positive, got {v}")));
        }
    }
    if !(cli.schedule_base > 1.0 && cli.schedule_base.is_finite()) {
        return Err(Failure::Input(format!("--schedule-base must exceed 1, got {}", cli.schedule_base)));
    }
    if cli.samples == 0 {
        return Err(Failure::Input("--samples must be at least 1".into()));
    }
    Ok(())
}

fn load(cli: &Cli) -> Run<ModelFile> {
    let path = cli.model.as_ref().ok_or_else(|| Failure::Input("--model is required".into()))?;
    let text = fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    qcstar_core::parse_model(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn grid_model(cli: &Cli) -> Run<CommutativeModel> {
    match load(cli)? {
        ModelFile::Commutative(m) => Ok(m),
        ModelFile::Operator(_) => Err(Failure::Input("this command needs a grid model (`space`)".into())),
    }
}

fn element_name<'a>(name: Option<&'a str>) -> Run<&'a str> {
    name.ok_or_else(|| Failure::Input("an element name is required".into()))
}

fn parse_function(spec: &str, base: Option<&Path>) -> Run<ScalarFunction> {
    if let Some(path) = spec.strip_prefix("table:") {
        let path = match base {
            Some(dir) if Path::new(path).is_relative() && !Path::new(path).exists() => dir.join(path),
            _ => Path::new(path).to_path_buf(),
        };
        let text = fs::read_to_string(&path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
        let table: Table = serde_json::from_str(&text)
            .map_err(|e| Failure::Input(format!("{}: line {}, column {}: {e}", path.display(), e.line(), e.column())))?;
        return Ok(ScalarFunction::Table(table));
    }
    ScalarFunction::parse(spec).map_err(input)
}

fn max_exponent(m: &CommutativeModel) -> f64 {
    let f = m.model.family();
    (0..f.len()).map(|i| f.exponent(i)).fold(1.0, f64::max)
}

fn quasi_samples(m: &CommutativeModel, rng: &mut SuiteRng, count: usize) -> Vec<QuasiElement> {
    let alpha = 0.45 / max_exponent(m);
    (0..count).map(|_| sampling::quasi_positive(rng, &m.model, alpha)).collect()
}

fn bounded_samples(m: &CommutativeModel, rng: &mut SuiteRng, count: usize) -> Vec<BoundedFunction> {
    (0..count).map(|_| sampling::bounded(rng, m.model.grid(), 1.0)).collect()
}

pub fn dispatch(cli: &Cli) -> Run<Outcome> {
    validate(cli)?;
    match &cli.command {
        Command::Axioms => axioms(cli),
        Command::Spectrum { element } => spectrum(cli, element_name(element.name())?),
        Command::Calculus { function, element } => calculus_cmd(cli, function, element_name(element.name())?),
        Command::Root { element } => root(cli, element_name(element.name())?),
        Command::Product { a, b } => product(cli, a, b),
        Command::Gelfand { a, x, y } => gelfand_cmd(cli, a, x, y),
        Command::Gns { forms } => gns(cli, forms),
        Command::Opmodel { suite } => opmodel(cli, *suite),
    }
}

fn axioms(cli: &Cli) -> Run<Outcome> {
    let m = grid_model(cli)?;
    let config = AxiomConfig { samples: cli.samples, seed: cli.seed, tol: cli.tol };
    info!("axiom suite: {} samples on {} points", cli.samples, m.model.grid().len());
    let report = verify_axioms(&m.model, &config);
    let cq_star = report.cq_star;
    let mut checks = report.checks;

    let mut rng = sampling::seeded(cli.seed);
    let quasi = quasi_samples(&m, &mut rng, cli.samples);
    let bounded = bounded_samples(&m, &mut rng, cli.samples);
    let mixed: Vec<MixedElement> = quasi
        .iter()
        .zip(bounded.iter().zip(bounded.iter().rev()))
        .map(|(a, (x, y))| MixedElement::new(a.clone(), x.clone(), y.clone()).map_err(input))
        .collect::<Run<_>>()?;
    let n = m.model.grid().len();
    let step = (n / 64).max(1);
    let mut chars: Vec<Character> = (0..n).step_by(step).map(Character::from_index).collect();
    for a in &quasi {
        chars.extend(a.infinity_set().into_iter().map(Character::from_index));
    }
    chars.sort_by_key(Character::index);
    chars.dedup_by_key(|c| c.index());
    debug!("gelfand laws on {} characters", chars.len());
    checks.extend(gelfand::functional_laws_check(&mixed, &chars, cli.tol).checks);
    checks.extend(gelfand::wedge_iso_check(&quasi, &bounded, cli.tol).checks);
    Ok(Outcome::new("axioms", cli.seed, checks, Some(json!({"cq_star": cq_star}))))
}

fn bridge(m: &OperatorModel, name: &str) -> Run<std::result::Result<CommutativeBridge, Error>> {
    let a = m.element(name).map_err(input)?;
    Ok(operator::maximal_commutative(a))
}

fn matrix_json(x: &OperatorElement) -> Value {
    serde_json::to_value(x).expect("matrices serialise")
}

fn spectrum(cli: &Cli, name: &str) -> Run<Outcome> {
    match load(cli)? {
        ModelFile::Commutative(m) => {
            let a = m.element(name).map_err(input)?;
            match calculus::spectrum(a) {
                Ok(s) => {
                    let check = Check::new("spectrum", "quasi_positive", Verdict::Pass, 0.0);
                    Ok(Outcome::new("spectrum", cli.seed, vec![check], Some(json!({"element": name, "spectrum": s}))))
                }
                Err(e) => precondition_failed(cli, "spectrum", e),
            }
        }
        ModelFile::Operator(m) => match bridge(&m, name)? {
            Ok(b) => {
                let check = Check::new("spectrum", "quasi_positive", Verdict::Pass, 0.0);
                let mut values = b.eigenvalues().to_vec();
                values.sort_by(f64::total_cmp);
                Ok(Outcome::new("spectrum", cli.seed, vec![check], Some(json!({"element": name, "eigenvalues": values}))))
            }
            Err(e) => precondition_failed(cli, "spectrum", e),
        },
    }
}

fn calculus_cmd(cli: &Cli, function: &str, name: &str) -> Run<Outcome> {
    let base = cli.model.as_deref().and_then(Path::parent);
    let f = parse_function(function, base)?;
    match load(cli)? {
        ModelFile::Commutative(m) => {
            let a = m.element(name).map_err(input)?;
            let class = match calculus::class_index(&f, a, cli.n) {
                Ok(Some(k)) => k,
                Ok(None) => return precondition_failed(cli, "calculus", Error::NotInClass { n: cli.n }),
                Err(e) => return precondition_failed(cli, "calculus", e),
            };
            match calculus::apply_function(&m.model, &f, a, cli.n) {
                Ok(fa) => {
                    let check = Check::new("calculus", "in_class", Verdict::Pass, 0.0);
                    let result = json!({"function": f.to_string(), "element": name, "class": class, "values": fa});
                    Ok(Outcome::new("calculus", cli.seed, vec![check], Some(result)))
                }
                Err(e) => precondition_failed(cli, "calculus", e),
            }
        }
        ModelFile::Operator(m) => match bridge(&m, name)?.and_then(|b| b.apply_function(&f, cli.n)) {
            Ok(fa) => {
                let check = Check::new("calculus", "in_class", Verdict::Pass, 0.0);
                let result = json!({"function": f.to_string(), "element": name, "matrix": matrix_json(&fa)});
                Ok(Outcome::new("calculus", cli.seed, vec![check], Some(result)))
            }
            Err(e) => precondition_failed(cli, "calculus", e),
        },
    }
}

fn root(cli: &Cli, name: &str) -> Run<Outcome> {
    let n = cli.n;
    match load(cli)? {
        ModelFile::Commutative(m) => {
            let a = m.element(name).map_err(input)?;
            let b = match calculus::nth_root(a, n) {
                Ok(b) => b,
                Err(e) => return precondition_failed(cli, "root", e),
            };
            let residual = match calculus::root_residual(&m.model, a, &b, n) {
                Ok(r) => r,
                Err(e) => return precondition_failed(cli, "root", e),
            };
            let check = Check::new("root", "root_residual", Verdict::from_bool(residual <= cli.tol), residual);
            Ok(Outcome::new("root", cli.seed, vec![check], Some(json!({"element": name, "n": n, "values": b}))))
        }
        ModelFile::Operator(m) => {
            let a = m.element(name).map_err(input)?.clone();
            match bridge(&m, name)?.and_then(|br| br.nth_root(n)) {
                Ok(b) => {
                    let power = (1..n).fold(b.clone(), |acc, _| acc.mul(&b));
                    let residual = operator::spectral_norm(&(power.matrix() - a.matrix())) / a.norm().max(1.0);
                    let check = Check::new("root", "root_residual", Verdict::from_bool(residual <= cli.tol), residual);
                    Ok(Outcome::new("root", cli.seed, vec![check], Some(json!({"element": name, "n": n, "matrix": matrix_json(&b)}))))
                }
                Err(e) => precondition_failed(cli, "root", e),
            }
        }
    }
}

fn product(cli: &Cli, a_name: &str, b_name: &str) -> Run<Outcome> {
    match load(cli)? {
        ModelFile::Commutative(m) => {
            let a = m.element(a_name).map_err(input)?;
            let b = m.element(b_name).map_err(input)?;
            let schedule = ProductSchedule { base: cli.schedule_base, tol: cli.cauchy_tol, ..ProductSchedule::default() };
            match calculus::partial_product_with(&m.model, a, b, &schedule) {
                Ok(p) => {
                    let check = Check::new("product", "multipliable", Verdict::Pass, p.distances.last().copied().unwrap_or(0.0));
                    let result = json!({"a": a_name, "b": b_name, "steps": p.distances.len(), "values": p.product});
                    Ok(Outcome::new("product", cli.seed, vec![check], Some(result)))
                }
                Err(e) => precondition_failed(cli, "product", e),
            }
        }
        ModelFile::Operator(m) => {
            let b = m.element(b_name).map_err(input)?.clone();
            match bridge(&m, a_name)? {
                Ok(br) => match br.partial_product(&b) {
                    Ok(p) => {
                        let check = Check::new("product", "multipliable", Verdict::Pass, 0.0);
                        Ok(Outcome::new("product", cli.seed, vec![check], Some(json!({"a": a_name, "b": b_name, "matrix": matrix_json(&p)}))))
                    }
                    Err(Error::InvalidInput(msg)) => precondition_failed(cli, "product", Error::NotMultipliable(msg)),
                    Err(e) => precondition_failed(cli, "product", e),
                },
                Err(e) => precondition_failed(cli, "product", e),
            }
        }
    }
}

fn gelfand_cmd(cli: &Cli, a: &str, x: &str, y: &str) -> Run<Outcome> {
    let m = grid_model(cli)?;
    let bounded = |name: &str| -> Run<BoundedFunction> {
        m.element(name)
            .map_err(input)?
            .to_bounded()
            .ok_or_else(|| Failure::Input(format!("element `{name}` must be bounded")))
    };
    let (xb, yb) = (bounded(x)?, bounded(y)?);
    let mixed = match MixedElement::new(m.element(a).map_err(input)?.clone(), xb, yb) {
        Ok(mixed) => mixed,
        Err(e) => return precondition_failed(cli, "gelfand", e),
    };
    match gelfand::transform(&mixed) {
        Ok(f) => {
            let indeterminate = f.indeterminate_set();
            let verdict = if indeterminate.is_empty() { Verdict::Pass } else { Verdict::Indeterminate };
            let check = Check::new("gelfand", "transform_defined", verdict, 0.0);
            let result = json!({"a": a, "x": x, "y": y, "infinity_set": f.infinity_set(), "indeterminate_set": indeterminate, "values": f});
            Ok(Outcome::new("gelfand", cli.seed, vec![check], Some(result)))
        }
        Err(e) => precondition_failed(cli, "gelfand", e),
    }
}

/// Forms listed individually in the `gns` result.
const SUMMARY_FORMS: usize = 64;

fn gns(cli: &Cli, names: &[String]) -> Run<Outcome> {
    let m = grid_model(cli)?;
    let n = m.model.grid().len();
    let specs: Vec<(String, FormSpec)> = if m.forms.is_empty() {
        if !names.is_empty() {
            return Err(Failure::Input("the model declares no forms".into()));
        }
        info!("no forms declared; using point masses at all {n} grid points");
        (0..n)
            .map(|i| {
                let mut w = vec![0.0; n];
                w[i] = 1.0;
                (format!("point{i}"), FormSpec::Diagonal { weights: w })
            })
            .collect()
    } else if names.is_empty() {
        m.forms.iter().map(|(k, v)| (k.clone(), v.clone())).collect()
    } else {
        names
            .iter()
            .map(|k| m.forms.get(k).map(|v| (k.clone(), v.clone())).ok_or_else(|| Failure::Input(format!("unknown form `{k}`"))))
            .collect::<Run<_>>()?
    };

    let mut rng = sampling::seeded(cli.seed);
    let probe = ContinuityProbe::new(&m.model, &mut rng);
    let mut forms: Vec<SesquilinearForm> = Vec::with_capacity(specs.len());
    for (name, spec) in &specs {
        match probe.make_form(spec) {
            Ok(f) => forms.push(f),
            Err(e) if undefined(&e) => {
                let check = Check::new("gns", PRECONDITION, Verdict::Fail, f64::INFINITY)
                    .with_witness(json!({"form": name, "error": e.to_string()}));
                return Ok(Outcome::new("gns", cli.seed, vec![check], None));
            }
            Err(e) => return Err(Failure::Input(format!("form `{name}`: {e}"))),
        }
    }
    let quasi = quasi_samples(&m, &mut rng, cli.samples);
    let bounded = bounded_samples(&m, &mut rng, cli.samples.max(3));
    let mut checks = Vec::new();
    // Per-form suites are expensive for point-mass families; run them on
    // the first few forms and the sufficiency suite on all.
    let detailed = forms.len().min(8);
    let mut summary = Vec::new();
    for (form, (name, _)) in forms.iter().zip(&specs).take(SUMMARY_FORMS) {
        let g = representation::gns(form);
        summary.push(json!({"form": name, "dim": g.dim(), "continuity": form.continuity()}));
    }
    for form in &forms[..detailed] {
        let g = representation::gns(form);
        checks.extend(representation::gns_invariants_check(form, &g, &bounded, cli.tol).checks);
        checks.extend(representation::extension_check(&m.model, form, &quasi, &bounded[..bounded.len().min(10)], cli.tol).checks);
        checks.extend(representation::bounded_continuity_check(&m.model, form, &quasi, &[1.0, 2.0, 4.0], &mut rng, cli.tol).checks);
    }
    let mut population: Vec<QuasiElement> = m.elements.values().cloned().collect();
    population.extend(quasi);
    checks.extend(representation::sufficiency_and_faithfulness(&forms, &population, cli.tol).checks);
    Ok(Outcome::new("gns", cli.seed, checks, Some(json!({"form_count": forms.len(), "forms": summary}))))
}

fn opmodel(cli: &Cli, suite: Suite) -> Run<Outcome> {
    let m = match load(cli)? {
        ModelFile::Operator(m) => m,
        ModelFile::Commutative(_) => return Err(Failure::Input("opmodel needs an operator model (`dim`)".into())),
    };
    let dim = m.domain.dim();
    let mut rng = sampling::seeded(cli.seed);
    let commutant = operator::cs_algebra(&m.domain);
    let mut checks = Vec::new();
    let mut result = serde_json::Map::new();
    let run = |s: Suite| suite == Suite::All || suite == s;

    if run(Suite::Commutant) {
        let mut worst: f64 = 0.0;
        for _ in 0..cli.samples {
            let p = commutant.project(&sampling::complex_matrix(&mut rng, dim, 1.0));
            worst = worst.max(commutant.residual(&p)).max(commutant.project(&p).entry_distance(&p));
        }
        checks.push(Check::new("opmodel", "commutant_projection", Verdict::from_bool(worst <= cli.tol), worst));
        let members: serde_json::Map<String, Value> =
            m.elements.iter().map(|(k, x)| (k.clone(), json!(commutant.contains(x, cli.tol)))).collect();
        result.insert("commutant".into(), json!({"dim": commutant.dim(), "blocks": commutant.blocks(), "members": members}));
    }
    if run(Suite::Lattice) {
        let mut pool: Vec<operator::Vector> = (0..dim).map(|i| m.domain.basis_vector(i)).collect();
        pool.extend((0..4).map(|_| sampling::complex_vector(&mut rng, dim)));
        let family = BoundedSetFamily::finite_sets(&pool);
        let mut samples: Vec<OperatorElement> = m.elements.values().cloned().collect();
        samples.extend((0..cli.samples).map(|_| sampling::complex_matrix(&mut rng, dim, 2.0)));
        let commuting: Vec<_> = (0..cli.samples).map(|_| sampling::commuting_pair(&mut rng, dim)).collect();
        checks.extend(operator::topology_order_check(&samples, &commuting, &family, cli.tol).checks);
        let sequences: Vec<Vec<OperatorElement>> = (0..cli.samples.min(20))
            .map(|_| {
                let p = sampling::unit_ball_positive(&mut rng, &commutant, dim);
                let q = sampling::unit_ball_positive(&mut rng, &commutant, dim);
                (1..40)
                    .map(|k| {
                        let t = 0.5f64.powi(k);
                        p.scale((1.0 - t).into()).add(&q.scale(t.into()))
                    })
                    .collect()
            })
            .collect();
        checks.push(operator::weak_limit_check(&commutant, &sequences, 1e-12));
    }
    if run(Suite::Chain) {
        let samples: Vec<OperatorElement> = (0..cli.samples).map(|_| sampling::psd_matrix(&mut rng, dim)).collect();
        checks.extend(operator::prop43_batch(&samples).checks);
        let mut stages = serde_json::Map::new();
        for (k, x) in &m.elements {
            let r = operator::prop43_check(x);
            for c in r.checks.iter().filter(|c| c.check == "chain" || c.check == "converse") {
                let mut c = c.clone();
                c.check = format!("{}:{k}", c.check);
                checks.push(c);
            }
            let verdicts: serde_json::Map<String, Value> =
                r.checks.iter().map(|c| (c.check.clone(), json!(c.verdict))).collect();
            stages.insert(k.clone(), Value::Object(verdicts));
        }
        result.insert("chain".into(), Value::Object(stages));
    }
    if run(Suite::Physical) {
        let pairs: Vec<_> = (0..cli.samples)
            .map(|_| {
                (
                    commutant.project(&sampling::complex_matrix(&mut rng, dim, 1.0)),
                    commutant.project(&sampling::complex_matrix(&mut rng, dim, 1.0)),
                )
            })
            .collect();
        let identity = |x: &OperatorElement| x.clone();
        match operator::physical_product_check(&m.domain, &ScalarFunction::ExpNeg, 8, &pairs, &identity, cli.tol) {
            Ok(c) => checks.push(c),
            Err(e) => return precondition_failed(cli, "opmodel", e),
        }
        let mut norms = serde_json::Map::new();
        for (k, x) in &m.elements {
            let v = operator::physical_seminorm(&m.domain, x, &ScalarFunction::ResolventPow(1), 0, &identity).map_err(input)?;
            norms.insert(k.clone(), json!(v));
        }
        result.insert("physical_seminorms".into(), Value::Object(norms));
    }
    Ok(Outcome::new("opmodel", cli.seed, checks, Some(Value::Object(result))))
}
