use proptest::prelude::*;

use ri_core::functions::{level_function, maximal_fn, step_from_csv, step_to_csv};
use ri_core::harness::REARRANGEMENT_TOL;
use ri_core::operators::{apply_si, apply_si_eval, apply_ti};
use ri_core::{NormFunctional, Profile, StepFunction};

fn step() -> impl Strategy<Value = StepFunction> {
    (0usize..10)
        .prop_flat_map(|n| {
            (
                prop::collection::vec(0.001f64..0.999, n),
                prop::collection::vec(prop_oneof![Just(0.0), 0.0f64..100.0], n + 1),
            )
        })
        .prop_map(|(mut b, v)| {
            b.sort_by(f64::total_cmp);
            b.dedup();
            let v = v[..b.len() + 1].to_vec();
            StepFunction::new(b, v).unwrap()
        })
}

fn alpha() -> impl Strategy<Value = f64> {
    prop_oneof![Just(1.0), 0.1f64..1.0]
}

fn leq(a: f64, b: f64) -> bool {
    a <= b + REARRANGEMENT_TOL * b.abs().max(1.0)
}

fn near(a: f64, b: f64) -> bool {
    leq(a, b) && leq(b, a)
}

proptest! {
    #[test]
    fn rearrangement_is_equimeasurable(f in step(), lam in 0.0f64..100.0) {
        let r = f.rearrange();
        prop_assert!(r.is_nonincreasing());
        prop_assert!(near(r.total(), f.total()));
        prop_assert!(near(r.distribution(lam).unwrap(), f.distribution(lam).unwrap()));
        for &v in f.values() {
            prop_assert!(near(r.distribution(v).unwrap(), f.distribution(v).unwrap()));
        }
        prop_assert_eq!(&*r.rearrange(), &*r);
    }

    #[test]
    fn hardy_littlewood(f in step(), g in step()) {
        prop_assert!(leq(f.inner(&g), f.rearrange().inner(&g.rearrange())));
    }

    #[test]
    fn maximal_function_is_subadditive(f in step(), g in step(), t in 0.001f64..0.999) {
        let lhs = maximal_fn(&f.add(&g)).eval(t).unwrap();
        let rhs = maximal_fn(&f).eval(t).unwrap() + maximal_fn(&g).eval(t).unwrap();
        prop_assert!(leq(lhs, rhs));
        prop_assert!(leq(f.rearrange().eval(t), maximal_fn(&f).eval(t).unwrap()));
    }

    #[test]
    fn level_function_sandwich(f in step(), t in 0.0f64..=1.0) {
        let l = level_function(&f);
        prop_assert!(l.is_nonincreasing());
        prop_assert!(near(l.total(), f.total()));
        prop_assert!(leq(f.primitive(t), l.primitive(t)));
        prop_assert!(leq(l.primitive(t), f.rearrange().primitive(t)));
    }

    #[test]
    fn supremum_operators_dominate(f in step(), a in alpha(), t in 0.001f64..0.999) {
        let i = Profile::power(a).unwrap();
        let star = f.rearrange().eval(t);
        let s = apply_si(&i, &f);
        prop_assert!(leq(star, s.eval(t).unwrap()));
        prop_assert!(leq(star, apply_ti(&i, &f).unwrap().eval(t).unwrap()));
        let ss = apply_si_eval(&i, &s);
        prop_assert!(near(ss.eval(t).unwrap(), s.eval(t).unwrap()));
    }

    #[test]
    fn norms_are_homogeneous_and_subadditive(f in step(), g in step(), c in 0.0f64..50.0, a in 0.1f64..1.0, p in 1.0f64..8.0) {
        let i = Profile::power(a).unwrap();
        let norms = [
            NormFunctional::Lp(p),
            NormFunctional::Lp(f64::INFINITY),
            NormFunctional::LambdaI(i.clone()),
            NormFunctional::SmallM(i.clone()),
            NormFunctional::BigM(i),
        ];
        for n in &norms {
            let nf = n.value(&f).unwrap();
            prop_assert!(near(n.value(&f.scale(c)).unwrap(), c * nf), "{} homogeneity", n);
            // m_I is a quasinorm; for powers its constant is at most 2^α.
            let k = if matches!(n, NormFunctional::SmallM(_)) { 2.0 } else { 1.0 };
            prop_assert!(leq(n.value(&f.add(&g)).unwrap(), k * (nf + n.value(&g).unwrap())), "{} triangle", n);
        }
    }

    #[test]
    fn decomposition_and_csv(f in step(), t in 0.001f64..0.999) {
        let (f0, f1) = f.optimal_decomposition(t).unwrap();
        let sum = f0.add(&f1);
        for s in [0.0005, 0.1, 0.5, 0.9995] {
            prop_assert!(near(sum.eval(s), f.eval(s)));
        }
        prop_assert_eq!(step_from_csv(&step_to_csv(&f)).unwrap(), f);
    }
}
