use ri_core::harness::{
    compare_functionals, gen_corpus, k_brute, k_formula, run_suite, Kind, SuiteConfig, ALL_KINDS, SUITES,
};
use ri_core::{HarnessError, NormFunctional, Profile, StepFunction};

#[test]
fn corpus_examples() {
    let one = gen_corpus(42, 1, &[Kind::Indicator]).unwrap();
    assert_eq!(one.len(), 1);
    let f = &one.members[0];
    assert_eq!(f.values(), &[1.0, 0.0]);

    let a = gen_corpus(7, 200, &ALL_KINDS).unwrap();
    let b = gen_corpus(7, 200, &ALL_KINDS).unwrap();
    assert_eq!(a.members, b.members);
    assert_eq!(a.len(), 200);
    for f in &a.members {
        assert!(f.values().windows(2).all(|w| w[0] != w[1]), "adjacent equal values");
        assert!(f.breakpoints().windows(2).all(|w| w[0] < w[1]));
        assert!(f.values().iter().all(|v| v.is_finite() && *v >= 0.0));
    }
    for k in ALL_KINDS {
        assert_eq!(k.to_string().parse::<Kind>().unwrap(), k);
    }
    assert!(gen_corpus(7, 0, &ALL_KINDS).is_err());
}

#[test]
fn comparison_of_scaled_functionals() {
    let corpus = gen_corpus(3, 60, &ALL_KINDS).unwrap();
    let l2 = NormFunctional::Lp(2.0);
    let same = compare_functionals("a", |f| l2.value(f).unwrap(), "b", |f| l2.value(f).unwrap(), &corpus.members);
    assert_eq!((same.min, same.max), (1.0, 1.0));
    let twice = compare_functionals("a", |f| 2.0 * l2.value(f).unwrap(), "b", |f| l2.value(f).unwrap(), &corpus.members);
    assert!((twice.min - 2.0).abs() < 1e-15 && (twice.max - 2.0).abs() < 1e-15);
    assert!(twice.equivalent());
}

#[test]
fn big_and_small_m_are_equivalent() {
    let alpha = 0.5;
    let i = Profile::power(alpha).unwrap();
    let corpus = gen_corpus(11, 200, &ALL_KINDS).unwrap();
    let (big, small) = (NormFunctional::BigM(i.clone()), NormFunctional::SmallM(i));
    let r = compare_functionals("MI", |f| big.value(f).unwrap(), "mI", |f| small.value(f).unwrap(), &corpus.members);
    assert!(r.min >= 1.0 - 1e-12, "{}", r.min);
    assert!(r.max <= 1.0 / (1.0 - alpha) + 1e-12, "{}", r.max);
}

#[test]
fn k_functional_limits() {
    let i = Profile::power(0.5).unwrap();
    let f = StepFunction::new(vec![0.1, 0.6], vec![4.0, 1.0, 0.5]).unwrap();
    let m = NormFunctional::SmallM(i.clone()).value(&f).unwrap();
    assert!((k_formula(&i, &f, 1.0) - m).abs() < 1e-12);
    let c = StepFunction::constant(2.0).unwrap();
    for t in [0.1, 0.5, 0.9] {
        assert!((k_formula(&i, &c, t) - 2.0 * t).abs() < 1e-12);
        assert!((k_brute(&i, &c, t) - 2.0 * t).abs() < 1e-12);
    }
}

#[test]
fn fast_suites_pass() {
    let cfg = SuiteConfig::default();
    for name in ["core-identities", "classQ-polynomials", "endpoint-bounds", "level-function"] {
        let r = run_suite(name, &cfg).unwrap();
        let failed: Vec<_> = r.failures().map(|a| a.id.clone()).collect();
        assert!(failed.is_empty(), "{name}: {failed:?}");
        assert!(r.runtime_ms.is_none());
    }
}

#[test]
fn unknown_suite_lists_registry() {
    match run_suite("nope", &SuiteConfig::default()) {
        Err(HarnessError::UnknownSuite { name, registered }) => {
            assert_eq!(name, "nope");
            for s in SUITES {
                assert!(registered.iter().any(|r| r == s));
            }
            assert!(registered.iter().any(|r| r == "all"));
        }
        other => panic!("unexpected {other:?}"),
    }
}
