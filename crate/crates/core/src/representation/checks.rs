use num_complex::Complex64;
use serde_json::json;

use super::form::SesquilinearForm;
use super::gns::{extend_rep, gns, inner, DirectSum, GnsData};
use crate::base::BoundedFunction;
use crate::error::Error;
use crate::operator::{admissible_check, BoundedSet, BoundedSetFamily, FamilyKind, Matrix, Vector};
use crate::quasi::{QuasiElement, QuasiModel, Side};
use crate::report::{Check, Report, Tally, Verdict};
use crate::sampling::{self, SuiteRng};

const SUITE: &str = "gns";

fn close(a: &[Complex64], b: &[Complex64], tol: f64) -> f64 {
    let scale = a.iter().chain(b).fold(1.0_f64, |m, z| m.max(z.norm()));
    a.iter().zip(b).fold(0.0_f64, |m, (x, y)| m.max((x - y).norm())) / scale / tol.max(f64::MIN_POSITIVE)
}

fn finish(t: Tally, name: &str) -> Check {
    let empty = t.trials == 0;
    let mut c = t.into_check(SUITE, name);
    if empty {
        c.verdict = Verdict::Indeterminate;
    }
    c
}

/// Representation identities on sampled triples `(x, y, z)`:
/// multiplicativity, `π(x*) = π(x)†`, `π(x)λ(y) = λ(xy)` and
/// `(π(x)λ(y) | λ(z)) = φ(xy, z)`.
pub fn gns_invariants_check(form: &SesquilinearForm, g: &GnsData, samples: &[BoundedFunction], tol: f64) -> Report {
    let mut mult = Tally::new();
    let mut adj = Tally::new();
    let mut cyclic = Tally::new();
    let mut ident = Tally::new();
    for (s, w) in samples.windows(3).enumerate() {
        let (x, y, z) = (&w[0], &w[1], &w[2]);
        let xy = x.mul(y);
        let r = close(&g.pi(&xy).diagonal, &g.pi(x).compose(&g.pi(y)).diagonal, tol);
        mult.record(r <= 1.0, r * tol, || json!({"triple": s}));
        let r = close(&g.pi(&x.adjoint()).diagonal, &g.pi(x).adjoint().diagonal, tol);
        adj.record(r <= 1.0, r * tol, || json!({"triple": s}));
        let image = g.pi(x).apply(&g.lambda(y));
        let r = close(&image, &g.lambda(&xy), tol);
        cyclic.record(r <= 1.0, r * tol, || json!({"triple": s}));
        let lhs = inner(&image, &g.lambda(z));
        let rhs = form.eval(&xy, z);
        let r = close(&[lhs], &[rhs], tol);
        ident.record(r <= 1.0, r * tol, || json!({"triple": s, "lhs": [lhs.re, lhs.im], "rhs": [rhs.re, rhs.im]}));
    }
    let mut r = Report::new();
    r.push(finish(mult, "multiplicative"));
    r.push(finish(adj, "adjoint"));
    r.push(finish(cyclic, "cyclic"));
    r.push(finish(ident, "form_identity"));
    r
}

/// Extension to quasi elements: agreement with `π_φ` on `A₀`, the module
/// law `π(ax) = π(a)π(x)`, and `‖π(a)λ(y)‖ ≤ √C p_λ(ay)` with the form's
/// grid constant `C`. Samples that are ∞ on the support are skipped.
pub fn extension_check(
    model: &QuasiModel,
    form: &SesquilinearForm,
    quasi: &[QuasiElement],
    bounded: &[BoundedFunction],
    tol: f64,
) -> Report {
    let g = gns(form);
    let mut embed = Tally::new();
    let mut module = Tally::new();
    let mut cont = Tally::new();
    let idx = form.continuity().seminorm;
    let c = form.continuity().grid_constant.sqrt();
    for (s, x) in bounded.iter().enumerate() {
        let ext = extend_rep(&g, &model.embed(x)).expect("bounded elements are finite");
        let r = close(&ext.diagonal, &g.pi(x).diagonal, tol);
        embed.record(r <= 1.0, r * tol, || json!({"sample": s}));
    }
    for (s, a) in quasi.iter().enumerate() {
        let pa = match extend_rep(&g, a) {
            Ok(p) => p,
            Err(Error::UnboundedOnSupport { .. }) => continue,
            Err(e) => panic!("unexpected extension error: {e}"),
        };
        for (j, x) in bounded.iter().enumerate() {
            let Ok(ax) = model.module_mult(x, a, Side::Right) else { continue };
            let pax = extend_rep(&g, &ax).expect("product stays finite on the support");
            let r = close(&pax.diagonal, &pa.compose(&g.pi(x)).diagonal, tol);
            module.record(r <= 1.0, r * tol, || json!({"quasi": s, "bounded": j}));
            let lhs = pa.apply(&g.lambda(x)).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            let rhs = c * model.seminorm(&ax, idx);
            cont.record(lhs <= rhs * (1.0 + tol), (lhs - rhs).max(0.0), || {
                json!({"quasi": s, "bounded": j, "lhs": lhs, "rhs": rhs})
            });
        }
    }
    let mut r = Report::new();
    r.push(finish(embed, "extends_base"));
    r.push(finish(module, "module_law"));
    r.push(finish(cont, "extension_continuity"));
    r
}

fn is_zero(a: &QuasiElement, tol: f64) -> bool {
    a.values().iter().all(|v| v.finite().is_some_and(|z| z.norm() <= tol))
}

/// Pointwise `a − b`; points where both are ∞ count as agreement.
fn difference(a: &QuasiElement, b: &QuasiElement) -> QuasiElement {
    use crate::extended::ExtendedValue;
    let values: Vec<ExtendedValue> = a
        .values()
        .iter()
        .zip(b.values())
        .map(|(x, y)| match (x.finite(), y.finite()) {
            (Some(p), Some(q)) => ExtendedValue::from_complex(p - q),
            (None, None) => ExtendedValue::ZERO,
            _ => ExtendedValue::Infinity,
        })
        .collect();
    QuasiElement::new(values).expect("∞-set is a subset of the operands' union")
}

/// Sample-relative sufficiency of `forms` and faithfulness of their
/// direct sum.
///
/// `sufficient`: every nonzero sample and every nonzero pairwise difference
/// has `φ̃(a, a) > 0` for some form. `faithful`: the direct sum separates
/// every pair of distinct samples. `equivalence`: the two verdicts on the
/// differences agree.
pub fn sufficiency_and_faithfulness(forms: &[SesquilinearForm], samples: &[QuasiElement], tol: f64) -> Report {
    // Weights are nonnegative, so some form detects `a` iff their sum does.
    let n = samples.first().map_or(0, QuasiElement::len);
    let mut total = vec![0.0; n];
    for f in forms {
        for (t, w) in total.iter_mut().zip(f.weights()) {
            *t += w;
        }
    }
    let detects = |a: &QuasiElement| {
        total.iter().zip(a.values()).fold(0.0, |s, (&w, v)| if w == 0.0 { s } else { s + w * v.norm().powi(2) }) > 0.0
    };
    let mut suff = Tally::new();
    for (s, a) in samples.iter().enumerate() {
        if is_zero(a, tol) {
            continue;
        }
        suff.record(detects(a), 0.0, || json!({"sample": s}));
    }
    let sum = DirectSum::new(forms);
    let mut diff_suff = Tally::new();
    let mut faithful = Tally::new();
    let mut agree = Tally::new();
    for i in 0..samples.len() {
        for j in i + 1..samples.len() {
            let d = difference(&samples[i], &samples[j]);
            if is_zero(&d, tol) {
                continue;
            }
            let detected = detects(&d);
            let separated = sum.separating_point(&samples[i], &samples[j], tol).is_some();
            diff_suff.record(detected, 0.0, || json!({"pair": [i, j]}));
            faithful.record(separated, 0.0, || json!({"pair": [i, j]}));
            agree.record(detected == separated, 0.0, || json!({"pair": [i, j], "detected": detected, "separated": separated}));
        }
    }
    let mut r = Report::new();
    let mut c = finish(suff.merge(diff_suff), "sufficient");
    if samples.iter().all(|a| is_zero(a, tol)) && samples.len() < 2 {
        c.verdict = Verdict::Indeterminate;
    }
    r.push(c);
    r.push(finish(faithful, "faithful"));
    r.push(finish(agree, "equivalence"));
    r
}

/// For sup-norm balls `B_r` of `A₀`: the hypothesis
/// `sup_{y ∈ B_r} p_λ(xy) ≤ c_B p_λ(x)` with `c_B = r`, admissibility of
/// `ℬ_φ = {λ_φ(B_r)}` (polydiscs of radii `r √w`), and the estimate
/// `sup_{y ∈ B_r} ‖π_φ(a)λ_φ(y)‖ ≤ √C c_B p_λ(a)`.
pub fn bounded_continuity_check(
    model: &QuasiModel,
    form: &SesquilinearForm,
    samples: &[QuasiElement],
    radii: &[f64],
    rng: &mut SuiteRng,
    tol: f64,
) -> Report {
    let idx = form.continuity().seminorm;
    let grid = model.grid();
    let mut hyp = Tally::new();
    let mut sharp = Tally::new();
    let mut est = Tally::new();
    let g = gns(form);
    let c = form.continuity().grid_constant.sqrt();
    for &r in radii {
        let mut balls: Vec<BoundedFunction> = (0..8).map(|_| sampling::bounded(rng, grid, r)).collect();
        balls.push(BoundedFunction::constant(grid, Complex64::new(r, 0.0)));
        for (s, a) in samples.iter().enumerate() {
            let pa = model.seminorm(a, idx);
            if !pa.is_finite() {
                continue;
            }
            let mut best: f64 = 0.0;
            for y in &balls {
                let Ok(ay) = model.module_mult(y, a, Side::Right) else { continue };
                let lhs = model.seminorm(&ay, idx);
                best = best.max(lhs);
                hyp.record(lhs <= r * pa * (1.0 + tol), (lhs - r * pa).max(0.0), || json!({"radius": r, "sample": s, "lhs": lhs, "bound": r * pa}));
            }
            // The constant ball element attains the bound, so c_B = r is sharp.
            let gap = (best - r * pa).abs() / (r * pa).max(f64::MIN_POSITIVE);
            sharp.record(pa == 0.0 || gap <= tol, gap, || json!({"radius": r, "sample": s}));
            let Ok(pi_a) = extend_rep(&g, a) else { continue };
            for y in &balls {
                let lhs = pi_a.apply(&g.lambda(y)).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                let bound = c * r * pa;
                est.record(lhs <= bound * (1.0 + tol), (lhs - bound).max(0.0), || json!({"radius": r, "sample": s, "lhs": lhs, "bound": bound}));
            }
        }
    }

    let sqrt_w: Vec<f64> = g.support().iter().map(|&i| form.weights()[i].sqrt()).collect();
    let sets: Vec<BoundedSet> = radii.iter().map(|&r| BoundedSet::Polydisc(sqrt_w.iter().map(|w| r * w).collect())).collect();
    let family = BoundedSetFamily { kind: FamilyKind::Custom, sets };
    let pool: Vec<Vector> = (0..g.dim())
        .map(|j| {
            let mut v = Vector::zeros(g.dim());
            v[j] = Complex64::new(sqrt_w[j], 0.0);
            v
        })
        .collect();
    let generators: Vec<Matrix> = (0..4)
        .map(|_| {
            let x = sampling::bounded(rng, grid, 1.0);
            Matrix::from_diagonal(&Vector::from_vec(g.pi(&x).diagonal))
        })
        .collect();
    let adm = admissible_check(&family, &pool, &generators);
    let mut adm_check = Check::new(SUITE, "family_admissible", Verdict::from_bool(adm.admissible), 0.0);
    if let Some(w) = adm.witness {
        adm_check = adm_check.with_witness(w);
    }

    let mut r = Report::new();
    r.push(finish(hyp, "ball_hypothesis"));
    r.push(finish(sharp, "ball_constant_sharp"));
    r.push(adm_check);
    r.push(finish(est, "uniform_continuity"));
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::representation::{make_form, FormSpec};

    fn setup(n: usize, p: f64) -> QuasiModel {
        QuasiModel::lp(0.0, 1.0, n, p).unwrap()
    }

    fn point_masses(m: &QuasiModel) -> Vec<SesquilinearForm> {
        let n = m.grid().len();
        (0..n)
            .map(|i| {
                let mut w = vec![0.0; n];
                w[i] = 1.0;
                make_form(m, &FormSpec::Diagonal { weights: w }, &mut sampling::seeded(i as u64)).unwrap()
            })
            .collect()
    }

    #[test]
    fn gns_identities_hold() {
        let m = setup(64, 1.0);
        let mut rng = sampling::seeded(1);
        let w: Vec<f64> = sampling::real(&mut rng, m.grid(), 0.0, 2.0).values().iter().map(|z| z.re).collect();
        let f = make_form(&m, &FormSpec::Diagonal { weights: w }, &mut rng).unwrap();
        let g = gns(&f);
        let samples: Vec<_> = (0..30).map(|_| sampling::bounded(&mut rng, m.grid(), 2.0)).collect();
        assert!(gns_invariants_check(&f, &g, &samples, 1e-12).passed());
    }

    #[test]
    fn half_support_dimension_matches_rank() {
        let m = setup(16, 1.0);
        let w: Vec<f64> = (0..16).map(|i| if i % 2 == 0 { 1.0 + i as f64 } else { 0.0 }).collect();
        let f = make_form(&m, &FormSpec::Diagonal { weights: w.clone() }, &mut sampling::seeded(0)).unwrap();
        let kernel = Matrix::from_diagonal(&Vector::from_iterator(16, w.iter().map(|&x| Complex64::new(x, 0.0))));
        let rank = kernel.svd(false, false).rank(1e-12);
        assert_eq!(gns(&f).dim(), rank);
        assert_eq!(rank, 8);
    }

    #[test]
    fn extension_on_and_off_support() {
        let m = setup(32, 1.0);
        let mut w = vec![1.0; 32];
        w[5] = 0.0;
        let f = make_form(&m, &FormSpec::Diagonal { weights: w }, &mut sampling::seeded(0)).unwrap();
        let g = gns(&f);
        let a = m.element_from_fn(|t| (t - m.grid().points()[5]).abs().powf(-0.3)).unwrap();
        assert!(a.get(5).is_infinite());
        let pa = extend_rep(&g, &a).unwrap();
        for (j, &i) in g.support().iter().enumerate() {
            let z = a.get(i).finite().unwrap();
            assert!((pa.diagonal[j] - z).norm() <= 1e-12 * z.norm());
        }
        let full = make_form(&m, &FormSpec::Diagonal { weights: vec![1.0; 32] }, &mut sampling::seeded(0)).unwrap();
        assert_eq!(extend_rep(&gns(&full), &a), Err(Error::UnboundedOnSupport { index: 5 }));

        let mut rng = sampling::seeded(3);
        let quasi: Vec<_> = (0..10).map(|_| sampling::quasi_positive(&mut rng, &m, 0.45)).collect();
        let bounded: Vec<_> = (0..10).map(|_| sampling::bounded(&mut rng, m.grid(), 1.0)).collect();
        let r = extension_check(&m, &f, &quasi, &bounded, 1e-12);
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn point_masses_are_sufficient_and_faithful() {
        let m = setup(32, 1.0);
        let forms = point_masses(&m);
        let mut rng = sampling::seeded(4);
        let samples: Vec<_> = (0..15).map(|_| sampling::quasi_positive(&mut rng, &m, 0.45)).collect();
        let r = sufficiency_and_faithfulness(&forms, &samples, 1e-12);
        assert!(r.checks.iter().all(|c| c.verdict == Verdict::Pass), "{r:?}");
    }

    #[test]
    fn blind_point_breaks_sufficiency() {
        let m = setup(16, 1.0);
        let mut forms = point_masses(&m);
        forms.remove(7);
        let a = QuasiElement::from_real(&[1.0; 16]).unwrap();
        let mut v = vec![1.0; 16];
        v[7] = 2.0;
        let b = QuasiElement::from_real(&v).unwrap();
        let r = sufficiency_and_faithfulness(&forms, &[a.clone(), b], 1e-12);
        assert_eq!(r.find("sufficient").unwrap().verdict, Verdict::Fail);
        assert_eq!(r.find("faithful").unwrap().verdict, Verdict::Fail);
        assert_eq!(r.find("equivalence").unwrap().verdict, Verdict::Pass);
        let r = sufficiency_and_faithfulness(&[], &[a], 1e-12);
        assert_eq!(r.find("sufficient").unwrap().verdict, Verdict::Fail);
    }

    #[test]
    fn adding_forms_keeps_sufficiency() {
        let m = setup(16, 1.0);
        let forms = point_masses(&m);
        let mut rng = sampling::seeded(5);
        let samples: Vec<_> = (0..6).map(|_| sampling::quasi_positive(&mut rng, &m, 0.45)).collect();
        let mut passed = false;
        for k in 1..=forms.len() {
            let ok = sufficiency_and_faithfulness(&forms[..k], &samples, 1e-12).find("sufficient").unwrap().verdict == Verdict::Pass;
            assert!(ok || !passed);
            passed |= ok;
        }
        assert!(passed);
    }

    #[test]
    fn ball_hypothesis_and_admissibility() {
        for p in [1.0, 2.0] {
            let m = setup(128, p);
            let mut rng = sampling::seeded(6);
            let w: Vec<f64> = sampling::real(&mut rng, m.grid(), 0.0, 1.0).values().iter().map(|z| z.re).collect();
            let f = make_form(&m, &FormSpec::Diagonal { weights: w }, &mut rng).unwrap();
            let samples: Vec<_> = (0..10).map(|_| sampling::quasi_positive(&mut rng, &m, 0.45 / p)).collect();
            let r = bounded_continuity_check(&m, &f, &samples, &[1.0, 2.0, 4.0], &mut rng, 1e-12);
            assert!(r.checks.iter().all(|c| c.verdict == Verdict::Pass), "{r:?}");
        }
    }
}
