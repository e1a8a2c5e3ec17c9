use ri_core::operators::{apply_gi, apply_h_aux, apply_hi, apply_r_prime, apply_ri, apply_si, apply_ti};
use ri_core::{EvalFunction, Profile, StepFunction};

fn at(g: &EvalFunction, t: f64) -> f64 {
    g.eval(t).expect("t in (0, 1)")
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(1.0)
}

/// 3 on (0,0.2), 2 on (0.2,0.7), 1 on (0.7,1).
fn star_staircase() -> StepFunction {
    StepFunction::new(vec![0.2, 0.7], vec![3.0, 2.0, 1.0]).unwrap()
}

const TS: [f64; 7] = [0.01, 0.1, 0.2, 0.3, 0.5, 0.8, 0.99];

#[test]
fn si_on_indicator_and_constant() {
    for &alpha in &[0.5, 2.0 / 3.0, 0.9] {
        let i = Profile::power(alpha).unwrap();
        let r = 0.3;
        let s = apply_si(&i, &StepFunction::indicator(r, 1.0).unwrap());
        for t in TS {
            let want = if t <= r { 1.0 } else { (r / t).powf(alpha) };
            assert!(close(at(&s, t), want, 1e-12), "alpha {alpha} t {t}");
        }
        let c = apply_si(&i, &StepFunction::constant(2.5).unwrap());
        assert!(close(at(&c, 0.37), 2.5, 1e-12));
    }
}

#[test]
fn si_staircase_value() {
    let i = Profile::power(0.5).unwrap();
    let want = 2.0 * 0.7f64.sqrt() / 0.9f64.sqrt();
    let got = at(&apply_si(&i, &star_staircase()), 0.9);
    assert!(close(got, want, 1e-12));
    assert!((got - 1.7638).abs() < 1e-4);
}

#[test]
fn ti_examples() {
    let alpha = 2.0 / 3.0;
    let i = Profile::power(alpha).unwrap();
    let r = 0.4;
    let g = apply_ti(&i, &StepFunction::indicator(r, 1.0).unwrap()).unwrap();
    for t in TS {
        let want = if t < r { t.powf(alpha - 1.0) * r.powf(1.0 - alpha) } else { 0.0 };
        assert!(close(at(&g, t), want, 1e-12), "t {t}");
    }
    for c in [1.0, 3.5] {
        let g = apply_ti(&i, &StepFunction::constant(c).unwrap()).unwrap();
        for t in TS {
            assert!(close(at(&g, t), c * i.eval(t) / t, 1e-12));
        }
    }
}

#[test]
fn ti_rejects_non_quasiconcave() {
    let square = Profile::monomial(2.0);
    assert!(apply_ti(&square, &StepFunction::constant(1.0).unwrap()).is_err());
}

#[test]
fn hi_examples() {
    let alpha = 0.75;
    let i = Profile::power(alpha).unwrap();
    let r = 0.5;
    let g = apply_hi(&i, &StepFunction::indicator(r, 1.0).unwrap(), 1).unwrap();
    for t in TS {
        let want = if t < r { (r.powf(1.0 - alpha) - t.powf(1.0 - alpha)) / (1.0 - alpha) } else { 0.0 };
        assert!(close(at(&g, t), want, 1e-10), "t {t}");
    }
    let half = Profile::power(0.5).unwrap();
    let one = apply_hi(&half, &StepFunction::constant(1.0).unwrap(), 1).unwrap();
    assert!(close(at(&one, 0.25), 1.0, 1e-10));
    let zero = apply_hi(&half, &StepFunction::constant(0.0).unwrap(), 1).unwrap();
    assert_eq!(at(&zero, 0.3), 0.0);
}

#[test]
fn hi_second_order_matches_closed_form() {
    // H²1(t) with I = t^{1/2}: ∫_t^1 2(1 - √s)/√s ds = 4(1 - √t) - 2(1 - t).
    let i = Profile::power(0.5).unwrap();
    let g = apply_hi(&i, &StepFunction::constant(1.0).unwrap(), 2).unwrap();
    for t in [0.01f64, 0.2, 0.6, 0.95] {
        let want = 4.0 * (1.0 - t.sqrt()) - 2.0 * (1.0 - t);
        assert!(close(at(&g, t), want, 1e-7), "t {t}: {} vs {want}", at(&g, t));
    }
}

#[test]
fn ri_examples() {
    let alpha = 0.6;
    let i = Profile::power(alpha).unwrap();
    let g = apply_ri(&i, &StepFunction::constant(1.0).unwrap());
    for t in TS {
        assert!(close(at(&g, t), t.powf(1.0 - alpha), 1e-12));
    }
    let r = 0.25;
    let g = apply_ri(&i, &StepFunction::indicator(r, 1.0).unwrap());
    for t in [0.25, 0.5, 0.9] {
        assert!(close(at(&g, t), r / i.eval(t), 1e-12));
    }
    let half = Profile::power(0.5).unwrap();
    let got = at(&apply_ri(&half, &star_staircase()), 0.5);
    assert!(close(got, 1.2 / 0.5f64.sqrt(), 1e-12));
    assert!((got - 1.6971).abs() < 1e-4);
}

#[test]
fn gi_examples() {
    let alpha = 0.5;
    let i = Profile::power(alpha).unwrap();
    let g = apply_gi(&i, &StepFunction::constant(1.0).unwrap());
    for t in TS {
        assert!(close(at(&g, t), 1.0, 1e-9));
    }
    let r = 0.3;
    let g = apply_gi(&i, &StepFunction::indicator(r, 1.0).unwrap());
    for t in TS {
        let want = if t <= r { r.powf(1.0 - alpha) } else { r * t.powf(-alpha) };
        assert!(close(at(&g, t), want, 1e-9), "t {t}");
    }
    let z = apply_gi(&i, &StepFunction::constant(0.0).unwrap());
    assert_eq!(at(&z, 0.5), 0.0);
}

#[test]
fn h_aux_examples() {
    let i = Profile::power(0.5).unwrap();
    let h = apply_h_aux(&i, &StepFunction::constant(1.0).unwrap());
    for s in TS {
        assert!(close(at(&h, s), 2.0 * (1.0 - s.sqrt()), 1e-9), "s {s}");
    }
    assert!(at(&h, 1.0 - 1e-12) < 1e-9);
    let z = apply_h_aux(&i, &StepFunction::constant(0.0).unwrap());
    assert_eq!(at(&z, 0.4), 0.0);
}

#[test]
fn r_prime_examples() {
    let half = Profile::power(0.5).unwrap();
    let c = apply_r_prime(&half, &StepFunction::constant(4.0).unwrap());
    assert!(close(at(&c, 0.3), 4.0, 1e-12));

    let r = 0.1;
    let g = apply_r_prime(&half, &StepFunction::indicator(r, 1.0).unwrap());
    assert!(close(at(&g, 4.0 * r), 0.125, 1e-12));

    let linear = Profile::power(1.0).unwrap();
    let f = StepFunction::new(vec![0.3, 0.6], vec![1.0, 0.0, 5.0]).unwrap();
    let g = apply_r_prime(&linear, &f);
    let fss = ri_core::functions::maximal_fn(&f);
    for t in TS {
        assert!(close(at(&g, t), at(&fss, t), 1e-12), "t {t}");
    }
}
