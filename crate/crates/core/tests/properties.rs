use num_complex::Complex64;
use proptest::prelude::*;
use qcstar_core::calculus;
use qcstar_core::gelfand::{self, MixedElement};
use qcstar_core::operator;
use qcstar_core::representation::{self, FormSpec};
use qcstar_core::sampling;
use qcstar_core::{parse_model, BoundedFunction, Error, ExtendedValue, ModelFile, QuasiModel};

fn l1(n: usize) -> QuasiModel {
    QuasiModel::lp(0.0, 1.0, n, 1.0).unwrap()
}

const MODEL: &str = r#"{
  "schema": 1,
  "space": {"interval": [0, 1], "points": 513},
  "topology": {"specs": [{"p": 1}, {"p": 2, "weight": "1+t"}]},
  "algebra": {"kind": "linf"},
  "elements": {
    "inv_quarter": {"expr": "t^-0.25"},
    "steps": {"values": [1, 2, 3]}
  },
  "forms": {"first": {"kind": "diagonal", "weights": [1, 0, 2]}}
}"#;

#[test]
fn model_file_round_trip_through_the_calculus() {
    let text = MODEL.replace("[1, 2, 3]", &format!("{:?}", vec![1.0; 513])).replace("[1, 0, 2]", &format!("{:?}", vec![0.5; 513]));
    let ModelFile::Commutative(m) = parse_model(&text).unwrap() else { panic!("grid model expected") };
    let a = m.element("inv_quarter").unwrap();
    assert_eq!(a.get(0), ExtendedValue::Infinity);
    let b = calculus::nth_root(a, 2).unwrap();
    assert!(calculus::root_residual(&m.model, a, &b, 2).unwrap() <= 1e-8);
    assert!(m.element("missing").is_err());
    let form = representation::make_form(&m.model, &m.forms["first"], &mut sampling::seeded(1)).unwrap();
    assert_eq!(form.support().len(), 513);
}

#[test]
fn malformed_files_report_positions() {
    let err = parse_model("{\"schema\": 1,\n \"space\": }").unwrap_err();
    assert!(matches!(&err, Error::Parse(msg) if msg.contains("line 2")), "{err:?}");
    let err = parse_model(r#"{"schema": 7, "dim": 2, "S": [1, 1], "elements": {}}"#).unwrap_err();
    assert!(matches!(err, Error::Parse(_)));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn transform_of_bounded_elements_is_pointwise(seed in any::<u64>()) {
        let m = l1(257);
        let mut rng = sampling::seeded(seed);
        let x = sampling::bounded(&mut rng, m.grid(), 3.0);
        let f = gelfand::transform(&MixedElement::bounded(x.clone()).unwrap()).unwrap();
        for (i, z) in x.values().iter().enumerate() {
            prop_assert_eq!(f.get(i), Some(ExtendedValue::Finite(*z)));
        }
    }

    #[test]
    fn partial_products_commute(seed in any::<u64>()) {
        let m = l1(513);
        let mut rng = sampling::seeded(seed);
        let a = sampling::quasi_positive(&mut rng, &m, 0.2);
        let b = sampling::quasi_positive(&mut rng, &m, 0.2);
        let ab = calculus::partial_product(&m, &a, &b).unwrap();
        let ba = calculus::partial_product(&m, &b, &a).unwrap();
        prop_assert_eq!(ab, ba);
    }

    #[test]
    fn gns_vectors_reproduce_the_form(seed in any::<u64>()) {
        let m = l1(129);
        let mut rng = sampling::seeded(seed);
        let weights: Vec<f64> = sampling::real(&mut rng, m.grid(), 0.0, 2.0).values().iter().map(|z| z.re).collect();
        let form = representation::make_form(&m, &FormSpec::Diagonal { weights }, &mut rng).unwrap();
        let g = representation::gns(&form);
        let x = sampling::bounded(&mut rng, m.grid(), 1.0);
        let y = sampling::bounded(&mut rng, m.grid(), 1.0);
        let lhs = representation::inner(&g.lambda(&x), &g.lambda(&y));
        prop_assert!((lhs - form.eval(&x, &y)).norm() <= 1e-12 * lhs.norm().max(1.0));
    }

    #[test]
    fn bridge_roots_square_back(seed in any::<u64>(), n in 2usize..7) {
        let mut rng = sampling::seeded(seed);
        let a = sampling::psd_matrix(&mut rng, n);
        let bridge = operator::maximal_commutative(&a).unwrap();
        let r = bridge.nth_root(2).unwrap();
        let back = r.mul(&r);
        prop_assert!((back.matrix() - a.matrix()).norm() <= 1e-10 * a.norm().max(1.0));
    }

    #[test]
    fn scaling_commutes_with_the_transform(seed in any::<u64>(), lam in 0.1f64..10.0) {
        let m = l1(257);
        let mut rng = sampling::seeded(seed);
        let a = sampling::quasi_positive(&mut rng, &m, 0.45);
        let one = BoundedFunction::one(m.grid());
        let zero = BoundedFunction::zero(m.grid());
        let u = gelfand::transform(&MixedElement::new(a.scale(Complex64::new(lam, 0.0)), one.clone(), zero.clone()).unwrap()).unwrap();
        let v = gelfand::transform(&MixedElement::new(a, one.scale(Complex64::new(lam, 0.0)), zero).unwrap()).unwrap();
        prop_assert!(u.approx_eq(&v, 1e-12));
    }
}
