use proptest::prelude::*;

use qwh::coaction::{comodule_check, MixedAlgebra};
use qwh::diffcalc::WzCalculus;
use qwh::freealg::GenId;
use qwh::linalg::rhat_builtin;
use qwh::presentations::{builtin, Presentation};
use qwh::quantumgroup::{QuantumGroup, Shape, TensorSquare, Which};
use qwh::{NCPoly, Param, Scalar, Word};

fn laurent() -> impl Strategy<Value = Scalar> {
    prop::collection::vec((-4i64..=4, -2i32..=2, 0i32..=2), 0..=3).prop_map(|terms| {
        let mut acc = Scalar::zero();
        for (c, eu, es) in terms {
            let t = &(&Scalar::from_int(c) * &Scalar::upow(eu)) * &Scalar::param_pow(Param::S, es);
            acc = &acc + &t;
        }
        acc
    })
}

fn scalar() -> impl Strategy<Value = Scalar> {
    (laurent(), laurent()).prop_map(|(n, d)| if d.is_zero() { n } else { &n / &d })
}

fn rational(avoid_units: bool) -> impl Strategy<Value = Scalar> {
    (-9i64..=9, 1i64..=6)
        .prop_map(|(n, d)| Scalar::from_ratio(n, d))
        .prop_filter("nonzero, not a unit", move |v| {
            !v.is_zero() && !(avoid_units && (v.is_one() || (-v).is_one()))
        })
}

fn poly(gens: Vec<GenId>, max_len: usize, max_terms: usize) -> impl Strategy<Value = NCPoly> {
    let n = gens.len();
    prop::collection::vec((laurent(), prop::collection::vec(0..n, 0..=max_len)), 0..=max_terms).prop_map(
        move |terms| {
            let mut p = NCPoly::zero();
            for (c, idx) in terms {
                p.add_term(Word(idx.iter().map(|&i| gens[i]).collect()), c);
            }
            p
        },
    )
}

fn xspace() -> Presentation {
    builtin("xspace")
        .unwrap()
        .substitute(&[(Param::Q, Scalar::upow(2))])
        .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn scalar_field_laws(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        if !b.is_zero() {
            prop_assert_eq!(&(&a / &b) * &b, a.clone());
        }
    }

    #[test]
    fn scalar_parse_round_trip(a in scalar()) {
        prop_assert_eq!(Scalar::parse(&a.to_string()).unwrap(), a);
    }

    #[test]
    fn substitution_is_a_ring_map(a in laurent(), b in laurent(), u in rational(false), s in rational(false)) {
        let bind = [(Param::U, u), (Param::S, s)];
        let sub = |x: &Scalar| x.substitute(&bind).unwrap();
        prop_assert_eq!(sub(&(&a * &b)), &sub(&a) * &sub(&b));
        prop_assert_eq!(sub(&(&a + &b)), &sub(&a) + &sub(&b));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn normal_form_idempotent_and_linear(
        p in poly(vec![GenId(0), GenId(1), GenId(2)], 4, 4),
        q in poly(vec![GenId(0), GenId(1), GenId(2)], 4, 4),
        c in laurent(),
    ) {
        let sys = xspace().system().unwrap();
        let np = sys.normal_form(&p);
        prop_assert_eq!(sys.normal_form(&np), np.clone());
        let nq = sys.normal_form(&q);
        let mut combo = p.clone();
        combo.add_scaled(&q, &c);
        let mut want = np.clone();
        want.add_scaled(&nq, &c);
        prop_assert_eq!(sys.normal_form(&combo), want);
        prop_assert_eq!(sys.normal_form(&p.mul(&q)), sys.normal_form(&np.mul(&nq)));
    }

    #[test]
    fn coaction_respects_space_relations(p in poly(vec![GenId(0), GenId(1), GenId(2)], 3, 3)) {
        let x = xspace();
        let tt7 = builtin("TT7").unwrap();
        let xs = x.system().unwrap();
        let mixed = MixedAlgebra::for_presentations(&tt7, &x);
        let sys = mixed.system(Some(&tt7.system().unwrap()), Some(&xs));
        let lhs = mixed.coact(&p, Shape::Seven).unwrap();
        let rhs = mixed.coact(&xs.normal_form(&p), Shape::Seven).unwrap();
        prop_assert!(sys.normal_form(&lhs.sub(&rhs)).is_zero());
    }

    #[test]
    fn coaction_is_multiplicative(
        p in poly(vec![GenId(0), GenId(1), GenId(2)], 2, 3),
        q in poly(vec![GenId(0), GenId(1), GenId(2)], 2, 3),
    ) {
        let x = xspace();
        let tt7 = builtin("TT7").unwrap();
        let mixed = MixedAlgebra::for_presentations(&tt7, &x);
        let sys = mixed.system(Some(&tt7.system().unwrap()), Some(&x.system().unwrap()));
        let whole = mixed.coact(&p.mul(&q), Shape::Seven).unwrap();
        let parts = mixed
            .coact(&p, Shape::Seven)
            .unwrap()
            .mul(&mixed.coact(&q, Shape::Seven).unwrap());
        prop_assert!(sys.normal_form(&whole.sub(&parts)).is_zero());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn coproduct_respects_h8_relations(
        a in prop::collection::vec(0usize..8, 0..=1),
        b in prop::collection::vec(0usize..8, 0..=1),
        k in 0usize..64,
    ) {
        let h8 = QuantumGroup::new(Which::H8).unwrap();
        let ts = TensorSquare::new(&h8.system);
        let rules = h8.system.rules();
        let rule = &rules[k % rules.len()];
        let rel = NCPoly::word(rule.lhs.clone()).sub(&rule.rhs);
        let w = |idx: &[usize]| NCPoly::word(Word(idx.iter().map(|&i| GenId(i as u16)).collect()));
        let p = w(&a).mul(&rel).mul(&w(&b));
        prop_assert!(ts.system.normal_form(&ts.coproduct(&h8, &p)).is_zero());
    }

    #[test]
    fn derivative_is_linear_and_lowers_length(
        i in 1usize..=3,
        pi in prop::collection::vec((laurent(), prop::collection::vec(1usize..=3, 0..=3)), 0..=3),
        qi in prop::collection::vec((laurent(), prop::collection::vec(1usize..=3, 0..=3)), 0..=3),
        c in laurent(),
    ) {
        let calc = WzCalculus::new(&rhat_builtin()).unwrap();
        let build = |terms: &[(Scalar, Vec<usize>)]| {
            let mut p = NCPoly::zero();
            for (k, idx) in terms {
                p.add_term(Word(idx.iter().map(|&j| calc.x(j)).collect()), k.clone());
            }
            calc.system.normal_form(&p)
        };
        let p = build(&pi);
        let q = build(&qi);
        let mut combo = p.clone();
        combo.add_scaled(&q, &c);
        let mut want = calc.apply_derivative(i, &p);
        want.add_scaled(&calc.apply_derivative(i, &q), &c);
        prop_assert_eq!(calc.system.normal_form(&calc.apply_derivative(i, &combo)), calc.system.normal_form(&want));
        let dp = calc.apply_derivative(i, &p);
        prop_assert!(dp.is_zero() || dp.max_len() < p.max_len());
    }

    #[test]
    fn derivative_ignores_representative(
        i in 1usize..=3,
        a in prop::collection::vec(1usize..=3, 0..=2),
        b in prop::collection::vec(1usize..=3, 0..=2),
        k in 0usize..3,
    ) {
        let calc = WzCalculus::new(&rhat_builtin()).unwrap();
        let rels = [
            "x1 x2 - u^2 x2 x1 - s x3 x3",
            "x1 x3 - u x3 x1",
            "x2 x3 - u^(-1) x3 x2",
        ];
        let rel = calc.parse(rels[k]).unwrap();
        let w = |idx: &[usize]| NCPoly::word(Word(idx.iter().map(|&j| calc.x(j)).collect()));
        let p = w(&a).mul(&rel).mul(&w(&b));
        prop_assert!(calc.apply_derivative(i, &p).is_zero());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn comodule_survives_specialization(u in rational(true), s in rational(false)) {
        let bind = [(Param::U, u), (Param::S, s)];
        let x = xspace().substitute(&bind).unwrap();
        let tt7 = builtin("TT7").unwrap().substitute(&bind).unwrap();
        let rep = comodule_check(&x, &tt7.system().unwrap(), Shape::Seven).unwrap();
        prop_assert!(rep.passed());
    }
}
