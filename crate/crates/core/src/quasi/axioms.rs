//! Empirical verification of the topology conditions and the cone
//! properties of the quasi-positive elements.

use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use super::{AlgebraKind, QuasiElement, QuasiModel};
use crate::base::BoundedFunction;
use crate::extended::ExtendedValue;
use crate::report::{Check, Report, Tally, Verdict};
use crate::sampling::{self, SuiteRng};
use crate::quasi::topology::SHELL_DECAY;

pub const SUITE: &str = "axioms";

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AxiomConfig {
    pub samples: usize,
    pub seed: u64,
    /// Relative slack allowed in the inequalities.
    pub tol: f64,
}

impl Default for AxiomConfig {
    fn default() -> Self {
        Self { samples: 500, seed: 0, tol: 1e-10 }
    }
}

/// `‖a‖_op` against `‖a‖₀` over the sampled bounded elements.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormComparison {
    pub samples: usize,
    pub max_relative_gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxiomReport {
    pub checks: Vec<Check>,
    pub cq_star: NormComparison,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn verdict(&self, axiom: &str) -> Option<Verdict> {
        self.checks.iter().find(|c| c.check == axiom).map(|c| c.verdict)
    }

    pub fn get(&self, axiom: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.check == axiom)
    }

    pub fn into_report(self) -> Report {
        Report { checks: self.checks }
    }

    /// CSV with columns `axiom,verdict,witness_ref,max_residual`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("axiom,verdict,witness_ref,max_residual\n");
        for (i, c) in self.checks.iter().enumerate() {
            let wref = if c.witness.is_some() { format!("w{i}") } else { String::new() };
            out.push_str(&format!("{},{},{},{:e}\n", c.check, c.verdict.as_str(), wref, c.residual));
        }
        out
    }
}

/// Relative excess of `lhs` over `rhs`; zero when the inequality holds.
fn excess(lhs: f64, rhs: f64) -> f64 {
    ((lhs - rhs) / rhs.abs().max(1e-300)).max(0.0)
}

pub fn verify_axioms(model: &QuasiModel, config: &AxiomConfig) -> AxiomReport {
    let mut rng = sampling::seeded(config.seed);
    let grid = model.grid();
    let kind = model.algebra();
    let samples: Vec<(BoundedFunction, BoundedFunction)> = (0..config.samples)
        .map(|_| {
            let scale = 10f64.powf(sampling_exponent(&mut rng));
            let x = match kind {
                AlgebraKind::Linf => sampling::bounded(&mut rng, grid, scale),
                _ => sampling::algebra_real(&mut rng, grid, kind, scale),
            };
            let y = match kind {
                AlgebraKind::Linf => sampling::bounded(&mut rng, grid, 1.0),
                _ => sampling::algebra_real(&mut rng, grid, kind, 1.0),
            };
            (x, y)
        })
        .collect();

    let mut checks = vec![
        check_t1(model, &samples, config.tol),
        check_t2(model, &samples, config.tol),
        check_t3(model, &samples, config.tol),
        check_t4_closed(model, &mut rng, config),
        check_t4_cone(model, &mut rng, config),
    ];
    let (cq, cmp) = check_cq_star(model, &samples, config.tol);
    checks.push(cq);
    checks.push(check_pointed(model, &mut rng, config));
    checks.push(check_dominated(model, &mut rng, config));
    AxiomReport { checks, cq_star: cmp }
}

fn sampling_exponent(rng: &mut SuiteRng) -> f64 {
    use rand::Rng;
    rng.gen_range(-3.0..3.0)
}

/// Separate continuity of the product and continuity of the involution,
/// with the bound `p(xy) ≤ ‖x‖₀ p(y)` as explicit constant.
fn check_t1(model: &QuasiModel, samples: &[(BoundedFunction, BoundedFunction)], tol: f64) -> Check {
    let f = model.family();
    let mut tally = Tally::new();
    for (s, (x, y)) in samples.iter().enumerate() {
        let xy = x.mul(y);
        let yx = y.mul(x);
        for l in 0..f.len() {
            let (px, py) = (f.eval_bounded(l, x), f.eval_bounded(l, y));
            let left = excess(f.eval_bounded(l, &xy), (1.0 + tol) * x.sup_norm() * py);
            let right = excess(f.eval_bounded(l, &yx), (1.0 + tol) * x.sup_norm() * py);
            let inv = (f.eval_bounded(l, &x.adjoint()) - px).abs() / px.max(1e-300);
            let tri = excess(f.eval_bounded(l, &x.add(y)), (1.0 + tol) * (px + py));
            let r = left.max(right).max(tri).max((inv - tol).max(0.0));
            tally.record(r == 0.0, r, || json!({"sample": s, "spec": l, "left": left, "right": right, "involution": inv, "triangle": tri}));
        }
    }
    tally.into_check(SUITE, "T1")
}

/// `p_λ(x) ≤ C_λ ‖x‖₀`.
fn check_t2(model: &QuasiModel, samples: &[(BoundedFunction, BoundedFunction)], tol: f64) -> Check {
    let f = model.family();
    let mut tally = Tally::new();
    for (s, (x, _)) in samples.iter().enumerate() {
        for l in 0..f.len() {
            let lhs = f.eval_bounded(l, x);
            let rhs = f.domination_constant(l) * x.sup_norm();
            let r = excess(lhs, (1.0 + tol) * rhs);
            tally.record(r == 0.0, r, || json!({"sample": s, "spec": l, "seminorm": lhs, "bound": rhs}));
        }
    }
    tally.into_check(SUITE, "T2")
}

/// For every `λ` some `λ'` with `p_λ(xy) ≤ ‖x‖₀ p_{λ'}(y)` on all commuting
/// sampled pairs. Every pair commutes in this model.
fn check_t3(model: &QuasiModel, samples: &[(BoundedFunction, BoundedFunction)], tol: f64) -> Check {
    let f = model.family();
    let mut worst: f64 = 0.0;
    let mut chosen = Vec::new();
    let mut witness = None;
    for l in 0..f.len() {
        let mut best: Option<(usize, f64)> = None;
        for lp in 0..f.len() {
            let r = samples
                .iter()
                .filter(|(x, y)| x.mul(y) == y.mul(x))
                .map(|(x, y)| {
                    excess(f.eval_bounded(l, &x.mul(y)), (1.0 + tol) * x.sup_norm() * f.eval_bounded(lp, y))
                })
                .fold(0.0, f64::max);
            if best.map_or(true, |(_, b)| r < b) {
                best = Some((lp, r));
            }
        }
        let (lp, r) = best.expect("non-empty family");
        worst = worst.max(r);
        chosen.push(lp);
        if r > 0.0 && witness.is_none() {
            witness = Some(json!({"spec": l, "best_partner": lp, "excess": r}));
        }
    }
    let mut c = Check::new(SUITE, "T3", Verdict::from_bool(witness.is_none()), worst);
    c.witness = witness.or_else(|| Some(json!({"partners": chosen})));
    if c.verdict == Verdict::Pass {
        c.witness = None;
    }
    c
}

/// Geometric convergence of distances: the last five ratios are at most
/// `SHELL_DECAY`, or the final distance is already below `tol`.
fn converges(distances: &[f64], tol: f64) -> bool {
    if distances.last().map_or(false, |&d| d <= tol) {
        return true;
    }
    if distances.len() < 6 {
        return false;
    }
    distances[distances.len() - 6..].windows(2).all(|w| w[1] <= SHELL_DECAY * w[0])
}

fn in_unit_positive(model: &QuasiModel, x: &BoundedFunction) -> bool {
    model.algebra().contains(model.grid(), x) && x.is_positive() && x.sup_norm() <= 1.0 + 1e-12
}

/// τ-closedness of `𝒰(A₀)₊`: sequences in `𝒰(A₀)₊` whose τ-limit is a grid
/// function must have that limit in `𝒰(A₀)₊`. Two families are probed:
/// convex paths between random members, and ramps sharpening to a step.
fn check_t4_closed(model: &QuasiModel, rng: &mut SuiteRng, config: &AxiomConfig) -> Check {
    let grid = model.grid();
    let kind = model.algebra();
    let mut tally = Tally::new();
    let paths = (config.samples / 10).max(5);
    for s in 0..paths {
        let u = sampling::unit_positive(rng, grid, kind);
        let v = sampling::unit_positive(rng, grid, kind);
        let seq: Vec<BoundedFunction> = (1..=20)
            .map(|k| {
                let w = (-(k as f64)).exp2();
                u.scale(Complex64::new(1.0 - w, 0.0)).add(&v.scale(Complex64::new(w, 0.0)))
            })
            .collect();
        record_sequence(model, &mut tally, &seq, &u, json!({"family": "convex", "sample": s}));
    }
    let n = grid.len();
    for &center in &[n / 2 - 1, n / 3, (2 * n) / 3] {
        let c = 0.5 * (grid.points()[center] + grid.points()[center + 1]);
        let step = BoundedFunction::from_real_fn(grid, |t| if t > c { 1.0 } else { 0.0 }).expect("finite");
        let mut seq = Vec::new();
        for k in 1..64 {
            let width = grid.measure() * (-(k as f64)).exp2();
            let ramp = BoundedFunction::from_real_fn(grid, |t| ((t - c) / width + 0.5).clamp(0.0, 1.0))
                .expect("finite");
            if !kind.contains(grid, &ramp) {
                break;
            }
            let done = ramp == step;
            seq.push(ramp);
            if done {
                break;
            }
        }
        if seq.len() < 6 {
            continue;
        }
        record_sequence(model, &mut tally, &seq, &step, json!({"family": "ramp", "center": c}));
    }
    tally.into_check(SUITE, "T4a")
}

fn record_sequence(model: &QuasiModel, tally: &mut Tally, seq: &[BoundedFunction], limit: &BoundedFunction, tag: Value) {
    let members_ok = seq.iter().all(|x| in_unit_positive(model, x));
    let target = model.embed(limit);
    let distances: Vec<f64> = seq.iter().map(|x| model.distance_bounded(&target, x)).collect();
    let converged = converges(&distances, 1e-8);
    if !(members_ok && converged) {
        // Not a τ-convergent sequence in 𝒰(A₀)₊; nothing to test.
        return;
    }
    let limit_ok = in_unit_positive(model, limit);
    let residual = if limit_ok { 0.0 } else { 1.0 };
    tally.record(limit_ok, residual, || {
        let mut w = tag.clone();
        w["distances"] = json!(distances);
        w["limit_in_algebra"] = json!(model.algebra().contains(model.grid(), limit));
        w["limit_slope"] = json!(AlgebraKind::slope(model.grid(), limit));
        w
    });
}

/// `Ã₀[τ]_{q+} ∩ A₀ = (A₀)₊` on sampled real elements, positive or not.
fn check_t4_cone(model: &QuasiModel, rng: &mut SuiteRng, config: &AxiomConfig) -> Check {
    use rand::Rng;
    let grid = model.grid();
    let mut tally = Tally::new();
    for s in 0..config.samples {
        let mut x = sampling::algebra_real(rng, grid, model.algebra(), 1.0);
        if rng.gen_bool(0.5) {
            x = x.map(|z| Complex64::new(z.re.abs(), 0.0));
        }
        let qp = model.is_quasi_positive(&model.embed(&x));
        let pos = x.is_positive();
        let net_ok = !pos || model.positivity_witness(&model.embed(&x), 1e-8).is_some();
        let ok = qp == pos && net_ok;
        tally.record(ok, if ok { 0.0 } else { 1.0 }, || json!({"sample": s, "quasi_positive": qp, "positive": pos}));
    }
    tally.into_check(SUITE, "T4b")
}

/// `‖a‖_op = max(‖L_a‖, ‖R_a‖)` on the weighted L^p grid space, by
/// exhaustive maximisation over basis indicators, against `‖a‖₀`.
fn check_cq_star(model: &QuasiModel, samples: &[(BoundedFunction, BoundedFunction)], tol: f64) -> (Check, NormComparison) {
    let f = model.family();
    let mut tally = Tally::new();
    for (s, (x, _)) in samples.iter().enumerate() {
        let mut op: f64 = 0.0;
        for l in 0..f.len() {
            let p = f.exponent(l);
            let w = f.point_weights(l);
            for (i, z) in x.values().iter().enumerate() {
                let indicator = w[i].powf(1.0 / p);
                let left = (w[i] * z.norm().powf(p)).powf(1.0 / p) / indicator;
                let right = (w[i] * z.norm().powf(p)).powf(1.0 / p) / indicator;
                op = op.max(left).max(right);
            }
        }
        let c0 = x.sup_norm();
        let gap = (op - c0).abs() / c0.max(1e-300);
        tally.record(gap <= tol, gap, || json!({"sample": s, "op_norm": op, "sup_norm": c0}));
    }
    let cmp = NormComparison { samples: tally.trials, max_relative_gap: tally.max_residual };
    (tally.into_check(SUITE, "cq_star_norm"), cmp)
}

/// Pointedness of the quasi-positive wedge: any `a` with `a` and `−a`
/// quasi-positive satisfies the identity
/// `a_ε − (−a)_ε = 2a(1+εa)^{-1}(1−εa)^{-1}`, that element is zero, and
/// therefore `a` is τ-zero.
fn check_pointed(model: &QuasiModel, rng: &mut SuiteRng, config: &AxiomConfig) -> Check {
    use rand::Rng;
    let grid = model.grid();
    let n = grid.len();
    let neg = Complex64::new(-1.0, 0.0);
    let mut candidates: Vec<(String, QuasiElement)> = Vec::new();
    candidates.push(("zero".into(), model.embed(&BoundedFunction::zero(grid))));
    for k in 0..4 {
        let mut v = vec![ExtendedValue::ZERO; n];
        v[rng.gen_range(0..n)] = ExtendedValue::Infinity;
        if k % 2 == 1 {
            v[rng.gen_range(0..n)] = ExtendedValue::Infinity;
        }
        if let Ok(a) = model.element(v) {
            candidates.push((format!("spike{k}"), a));
        }
        let tiny: Vec<ExtendedValue> = (0..n).map(|_| ExtendedValue::real(rng.gen_range(-1e-305..1e-305))).collect();
        candidates.push((format!("subnormal{k}"), QuasiElement::new(tiny).expect("finite")));
    }
    for s in 0..config.samples {
        candidates.push((format!("sample{s}"), sampling::quasi_positive(rng, model, 0.45 / max_p(model))));
    }

    let mut tally = Tally::new();
    for (name, a) in &candidates {
        let minus = a.scale(neg);
        let both = a.is_quasi_positive() && minus.is_quasi_positive();
        if !both {
            continue;
        }
        let mut residual: f64 = 0.0;
        for k in 1..=20 {
            let eps = (-(k as f64)).exp2();
            let lhs = model
                .regularize(a, eps)
                .expect("quasi-positive")
                .sub(&model.regularize(&minus, eps).expect("quasi-positive"));
            let rhs: Vec<Complex64> = a
                .values()
                .iter()
                .map(|v| match v.finite() {
                    Some(z) => 2.0 * z / ((1.0 + eps * z) * (1.0 - eps * z)),
                    None => Complex64::new(0.0, 0.0),
                })
                .collect();
            let rhs = BoundedFunction::new(rhs).expect("finite");
            residual = residual.max(lhs.sub(&rhs).sup_norm()).max(lhs.sup_norm());
        }
        let size = model.seminorms(a).into_iter().fold(0.0, f64::max);
        residual = residual.max(size);
        tally.record(residual <= 1e-12, residual, || json!({"candidate": name, "seminorm": size}));
    }
    tally.into_check(SUITE, "cone_pointed")
}

fn max_p(model: &QuasiModel) -> f64 {
    let f = model.family();
    (0..f.len()).map(|l| f.exponent(l)).fold(1.0, f64::max)
}

/// Dominated positivity: if `a` is quasi-positive, `b ∈ (A₀)₊` and `b − a`
/// is quasi-positive, then `a ∈ (A₀)₊`. The hypothesis is tested through
/// `b − a_ε ∈ (A₀)₊` along `ε = 2^{-k}`.
fn check_dominated(model: &QuasiModel, rng: &mut SuiteRng, config: &AxiomConfig) -> Check {
    use rand::Rng;
    let grid = model.grid();
    let mut tally = Tally::new();
    let mut held = 0usize;
    for s in 0..config.samples {
        let a = sampling::quasi_positive(rng, model, 0.45 / max_p(model));
        let slack = sampling::real(rng, grid, 0.0, 1.0);
        let b = if rng.gen_bool(0.5) {
            // Dominates the finite part pointwise.
            let fin = BoundedFunction::from_real(a.finite_part().iter().map(|z| z.re.max(0.0)).collect())
                .expect("finite");
            fin.add(&slack)
        } else {
            slack.scale(Complex64::new(rng.gen_range(0.0..5.0), 0.0))
        };
        let mut hypothesis = true;
        let mut max_reg: f64 = 0.0;
        for k in 1..=40 {
            let ae = model.regularize(&a, (-(k as f64)).exp2()).expect("quasi-positive");
            max_reg = max_reg.max(ae.sup_norm());
            if !b.sub(&ae).is_positive() {
                hypothesis = false;
                break;
            }
        }
        if !hypothesis {
            continue;
        }
        held += 1;
        let bounded = a.to_bounded();
        let ok = bounded.as_ref().map_or(false, |x| x.is_positive()) && max_reg <= b.sup_norm() * (1.0 + 1e-12);
        tally.record(ok, if ok { 0.0 } else { 1.0 }, || json!({"sample": s, "has_infinity": a.has_infinity()}));
    }
    let mut c = tally.into_check(SUITE, "dominated_positivity");
    if held == 0 {
        c.verdict = Verdict::Indeterminate;
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::CompactGrid;
    use crate::quasi::SeminormFamily;

    #[test]
    fn lp_model_passes() {
        let m = QuasiModel::lp(0.0, 1.0, 512, 1.0).unwrap();
        let r = verify_axioms(&m, &AxiomConfig { samples: 40, seed: 1, tol: 1e-10 });
        for c in &r.checks {
            assert_eq!(c.verdict, Verdict::Pass, "{c:?}");
        }
        assert!(r.cq_star.max_relative_gap <= 1e-10);
    }

    #[test]
    fn lipschitz_model_fails_closedness_with_step_witness() {
        let g = CompactGrid::uniform(0.0, 1.0, 512).unwrap();
        let fam = SeminormFamily::lp(&g, 1.0).unwrap();
        let slope = 0.25 / g.spacing();
        let m = QuasiModel::new(g, fam, AlgebraKind::Lipschitz { max_slope: slope });
        let r = verify_axioms(&m, &AxiomConfig { samples: 20, seed: 2, tol: 1e-10 });
        let t4a = r.get("T4a").unwrap();
        assert_eq!(t4a.verdict, Verdict::Fail);
        let w = t4a.witness.as_ref().unwrap();
        assert_eq!(w["family"], "ramp");
        assert_eq!(w["limit_in_algebra"], false);
        for name in ["T1", "T2", "T3", "T4b", "cq_star_norm"] {
            assert_eq!(r.verdict(name), Some(Verdict::Pass), "{name}");
        }
    }

    #[test]
    fn csv_has_axiom_columns() {
        let m = QuasiModel::lp(0.0, 1.0, 64, 2.0).unwrap();
        let r = verify_axioms(&m, &AxiomConfig { samples: 5, seed: 0, tol: 1e-10 });
        let csv = r.to_csv();
        assert!(csv.starts_with("axiom,verdict,witness_ref,max_residual\n"));
        assert_eq!(csv.lines().count(), r.checks.len() + 1);
    }
}
