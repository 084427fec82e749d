use proptest::prelude::*;

use hopfren::hopf::{antipode, coproduct, coproduct_at, counit, to_multi};
use hopfren::rings::{int, rat, LaurentSeries, Monomial, Polynomial, Rational, Symbol};
use hopfren::toymodel::{phi_reg, taylor_truncate, MellinData, Renormalizer, Scheme};
use hopfren::{Forest, HElem, TensorElem, Tree};

fn rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| rat(n, d))
}

fn symbol() -> impl Strategy<Value = Symbol> {
    prop_oneof![
        Just(Symbol::Mellin(-1)),
        Just(Symbol::Mellin(0)),
        Just(Symbol::Mellin(1)),
        Just(Symbol::LogS),
        Just(Symbol::LogRatio),
        Just(Symbol::X),
    ]
}

fn monomial() -> impl Strategy<Value = Monomial> {
    prop::collection::vec((symbol(), 1u32..=3), 0..=2).prop_map(Monomial::from_factors)
}

fn polynomial() -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((monomial(), rational()), 0..=3).prop_map(Polynomial::from_terms)
}

fn x_polynomial() -> impl Strategy<Value = Polynomial> {
    prop::collection::vec(rational().prop_map(Polynomial::constant), 0..=6)
        .prop_map(|cs| Polynomial::from_powers(Symbol::X, &cs))
}

fn exact_series() -> impl Strategy<Value = LaurentSeries> {
    (-3i64..=1, prop::collection::vec(polynomial(), 0..=4))
        .prop_map(|(lo, cs)| LaurentSeries::new(lo, cs, None))
}

fn tree() -> impl Strategy<Value = Tree> {
    Just(Tree::node()).prop_recursive(4, 6, 3, |inner| {
        prop::collection::vec(inner, 0..=3).prop_map(Tree::new)
    })
}

/// Forests with at most `max` nodes.
fn forest(max: usize) -> impl Strategy<Value = Forest> {
    prop::collection::vec(tree(), 0..=3)
        .prop_map(Forest::new)
        .prop_filter("too many nodes", move |f| f.nodes() <= max)
}

fn element(max: usize) -> impl Strategy<Value = HElem> {
    prop::collection::vec((forest(max), rational()), 0..=3).prop_map(HElem::from_terms)
}

fn basis(f: Forest) -> HElem {
    HElem::basis(f)
}

fn m_s_id(t: &TensorElem<Rational>) -> HElem {
    t.terms().fold(HElem::zero(), |acc, (l, r, c)| {
        acc.add(&antipode(&basis(l.clone())).mul(&HElem::term(r.clone(), c.clone())))
    })
}

fn m_id_s(t: &TensorElem<Rational>) -> HElem {
    t.terms().fold(HElem::zero(), |acc, (l, r, c)| {
        acc.add(&HElem::term(l.clone(), c.clone()).mul(&antipode(&basis(r.clone()))))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn polynomial_ring_axioms(a in polynomial(), b in polynomial(), c in polynomial()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &Polynomial::one(), a.clone());
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn series_ring_axioms(a in exact_series(), b in exact_series(), c in exact_series()) {
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.mul(&LaurentSeries::one()), a.clone());
        prop_assert!(a.sub(&a).is_zero());
    }

    #[test]
    fn truncation_is_sound(a in exact_series(), b in exact_series(), s in -2i64..=3, t in -2i64..=3) {
        let (ta, tb) = (a.truncate(s), b.truncate(t));
        prop_assert!(ta.add(&tb).agrees_with(&a.add(&b)));
        prop_assert!(ta.mul(&tb).agrees_with(&a.mul(&b)));
        prop_assert!(ta.mul(&tb).mul(&ta).agrees_with(&a.mul(&b).mul(&a)));
    }

    #[test]
    fn pole_part_is_rota_baxter(a in exact_series(), b in exact_series()) {
        let (ra, rb) = (a.pole_part().unwrap(), b.pole_part().unwrap());
        let lhs = ra.mul(&rb).add(&a.mul(&b).pole_part().unwrap());
        let rhs = ra.mul(&b).add(&a.mul(&rb)).pole_part().unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(ra.pole_part().unwrap(), ra.clone());
    }

    #[test]
    fn indexed_taylor_identity(f in x_polynomial(), g in x_polynomial(), s in 0i64..=4, t in 0i64..=4) {
        let (ts, tt) = (taylor_truncate(s, &f), taylor_truncate(t, &g));
        let inner = &(&(&ts * &g) + &(&f * &tt)) - &(&f * &g);
        prop_assert_eq!(&ts * &tt, taylor_truncate(s + t, &inner));
    }

    #[test]
    fn coproduct_is_coassociative(f in forest(6)) {
        let d = to_multi(&coproduct(&basis(f)));
        prop_assert_eq!(coproduct_at(&d, 0), coproduct_at(&d, 1));
    }

    #[test]
    fn counit_and_antipode_axioms(f in forest(6)) {
        let x = basis(f.clone());
        let d = coproduct(&x);
        let left = d.terms().fold(HElem::zero(), |acc, (l, r, c)| {
            acc.add(&HElem::term(r.clone(), c.clone() * counit(&basis(l.clone()))))
        });
        prop_assert_eq!(left, x.clone());
        let unit = HElem::one().scale(&counit(&x));
        prop_assert_eq!(m_s_id(&d), unit.clone());
        prop_assert_eq!(m_id_s(&d), unit);
        prop_assert_eq!(antipode(&antipode(&x)), x);
    }

    #[test]
    fn coproduct_and_antipode_are_multiplicative(a in element(3), b in element(3)) {
        prop_assert_eq!(coproduct(&a.mul(&b)), coproduct(&a).mul(&coproduct(&b)));
        prop_assert_eq!(antipode(&a.mul(&b)), antipode(&a).mul(&antipode(&b)));
        prop_assert_eq!(coproduct(&a.add(&b)), coproduct(&a).add(&coproduct(&b)));
    }

    #[test]
    fn coproduct_preserves_grading(f in forest(6)) {
        let n = f.nodes();
        for (l, r, _) in coproduct(&basis(f)).terms() {
            prop_assert_eq!(l.nodes() + r.nodes(), n);
        }
    }

    #[test]
    fn factorial_is_multiplicative(a in forest(6), b in forest(6)) {
        prop_assert_eq!(a.mul(&b).factorial(), a.factorial() * b.factorial());
        let t = a.b_plus();
        prop_assert_eq!(t.factorial(), a.factorial() * int(t.size() as i64));
    }

    #[test]
    fn printing_reparses(x in element(5), p in polynomial(), s in exact_series(), f in forest(6)) {
        prop_assert_eq!(HElem::parse(&x.to_string()).unwrap(), x);
        prop_assert_eq!(p.to_string().parse::<Polynomial>().unwrap(), p.clone());
        prop_assert_eq!(Polynomial::from_json(&p.to_json()).unwrap(), p);
        prop_assert_eq!(LaurentSeries::from_json(&s.to_json()).unwrap(), s);
        prop_assert_eq!(f.to_string().parse::<Forest>().unwrap(), f);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn regularized_rules_are_characters(a in forest(3), b in forest(3)) {
        let m = MellinData::Symbolic;
        let ab = a.mul(&b);
        let trunc = 2 + ab.nodes() as i64;
        let lhs = phi_reg(&m, &ab, trunc).unwrap();
        let rhs = phi_reg(&m, &a, trunc).unwrap().mul(&phi_reg(&m, &b, trunc).unwrap());
        prop_assert!(lhs.agrees_with(&rhs));
    }

    #[test]
    fn birkhoff_factors_are_characters(a in forest(2), b in forest(2), ms in any::<bool>()) {
        let scheme = if ms { Scheme::Ms } else { Scheme::Mom };
        let r = Renormalizer::new(MellinData::Symbolic, scheme);
        let ab = a.mul(&b);
        for (pa, pb, pab) in [
            (r.counterterm(&a).unwrap(), r.counterterm(&b).unwrap(), r.counterterm(&ab).unwrap()),
            (r.renormalized(&a).unwrap(), r.renormalized(&b).unwrap(), r.renormalized(&ab).unwrap()),
        ] {
            prop_assert!(pa.mul(&pb).agrees_with(&pab));
        }
        if ms && !ab.is_one() {
            prop_assert!(r.counterterm(&ab).unwrap().regular_part().is_zero_to_order());
        }
    }

    #[test]
    fn renormalized_values_are_finite(t in tree().prop_filter("size", |t| t.size() <= 4), ms in any::<bool>()) {
        let scheme = if ms { Scheme::Ms } else { Scheme::Mom };
        let r = Renormalizer::new(MellinData::Symbolic, scheme);
        prop_assert_eq!(r.renormalized(&t.to_forest()).unwrap().pole_order(), 0);
    }
}
