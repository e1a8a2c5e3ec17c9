use ri_core::functions::{level_function, maximal_fn, oscillation, step_from_csv, step_to_csv};
use ri_core::StepFunction;

fn staircase() -> StepFunction {
    StepFunction::new(vec![0.2, 0.5], vec![3.0, 1.0, 2.0]).unwrap()
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() < 1e-12 * a.abs().max(1.0)
}

#[test]
fn rearrangement_sorts_by_length() {
    let r = staircase().rearrange();
    assert_eq!(r.values(), &[3.0, 2.0, 1.0]);
    assert!(close(r.breakpoints()[0], 0.2) && close(r.breakpoints()[1], 0.7));

    let shifted = StepFunction::new(vec![0.5, 0.75], vec![0.0, 1.0, 0.0]).unwrap().rearrange();
    assert_eq!(*shifted, StepFunction::indicator(0.25, 1.0).unwrap());

    let f = StepFunction::new(vec![0.3], vec![2.0, 1.0]).unwrap();
    assert_eq!(*f.rearrange(), f);
}

#[test]
fn distribution_is_strict() {
    let chi = StepFunction::indicator(0.25, 1.0).unwrap();
    assert_eq!(chi.distribution(0.5).unwrap(), 0.25);
    assert_eq!(chi.distribution(1.0).unwrap(), 0.0);
    assert!(close(staircase().distribution(1.5).unwrap(), 0.7));
}

#[test]
fn maximal_function_and_oscillation() {
    let chi = StepFunction::indicator(0.5, 1.0).unwrap();
    let m = maximal_fn(&chi);
    assert!(close(m.eval(0.3).unwrap(), 1.0));
    assert!(close(m.eval(0.8).unwrap(), 0.5 / 0.8));
    assert!(close(maximal_fn(&StepFunction::constant(1.0).unwrap()).eval(0.4).unwrap(), 1.0));
    assert!(close(maximal_fn(&staircase()).eval(0.5).unwrap(), 2.4));

    assert!(close(oscillation(&chi).eval(0.75).unwrap(), 2.0 / 3.0));
    assert_eq!(oscillation(&StepFunction::constant(4.0).unwrap()).eval(0.3).unwrap(), 0.0);
    assert_eq!(oscillation(&staircase()).eval(1e-9).unwrap(), 0.0);
}

#[test]
fn dilation() {
    let chi = StepFunction::indicator(0.5, 1.0).unwrap();
    assert_eq!(chi.dilate(2.0).unwrap(), StepFunction::constant(1.0).unwrap());
    assert_eq!(chi.dilate(0.5).unwrap(), StepFunction::indicator(0.25, 1.0).unwrap());
    assert_eq!(staircase().dilate(1.0).unwrap(), staircase());
}

#[test]
fn optimal_decomposition_examples() {
    let chi = StepFunction::indicator(0.5, 1.0).unwrap();
    let (f0, f1) = chi.optimal_decomposition(0.7).unwrap();
    assert!(f0.is_zero());
    assert_eq!(f1, chi);

    let f = StepFunction::new(vec![0.3, 0.6], vec![2.0, 1.0, 0.0]).unwrap();
    let (f0, f1) = f.optimal_decomposition(0.5).unwrap();
    assert_eq!(f0, StepFunction::indicator(0.6, 1.0).unwrap());
    assert_eq!(f1, StepFunction::indicator(0.3, 1.0).unwrap());
    assert_eq!(f0.add(&f1), f);

    let c = StepFunction::constant(2.5).unwrap();
    let (f0, f1) = c.optimal_decomposition(0.4).unwrap();
    assert_eq!(f0, c);
    assert!(f1.is_zero());
}

#[test]
fn level_function_examples() {
    let f = StepFunction::new(vec![0.5], vec![0.0, 1.0]).unwrap();
    assert_eq!(level_function(&f), StepFunction::constant(0.5).unwrap());

    let g = StepFunction::new(vec![0.3], vec![2.0, 1.0]).unwrap();
    assert_eq!(level_function(&g), g);

    let h = StepFunction::new(vec![0.25, 0.5], vec![1.0, 3.0, 0.0]).unwrap();
    assert_eq!(level_function(&h), StepFunction::indicator(0.5, 2.0).unwrap());
}

#[test]
fn integrals() {
    let chi = StepFunction::indicator(0.5, 1.0).unwrap();
    assert_eq!(chi.integrate(0.0, 1.0).unwrap(), 0.5);
    // 3·0.2 + 1·0.3 + 2·0.5, and the same total for f*.
    assert!(close(staircase().integrate(0.0, 1.0).unwrap(), 1.9));
    assert!(close(staircase().rearrange().integrate(0.0, 1.0).unwrap(), 1.9));
    assert_eq!(staircase().integrate(0.3, 0.3).unwrap(), 0.0);
    assert!(staircase().integrate(0.6, 0.3).is_err());
}

#[test]
fn csv_round_trip_is_exact() {
    let f = StepFunction::new(vec![0.1, 1.0 / 3.0, 0.7], vec![1.0 / 7.0, 2.0, 0.0, 5.5]).unwrap();
    assert_eq!(step_from_csv(&step_to_csv(&f)).unwrap(), f);
}

#[test]
fn invalid_input_is_rejected() {
    assert!(StepFunction::new(vec![0.5, 0.4], vec![1.0, 2.0, 3.0]).is_err());
    assert!(StepFunction::new(vec![0.5], vec![1.0, -2.0]).is_err());
    assert!(StepFunction::new(vec![0.5], vec![1.0]).is_err());
    assert!(step_from_csv("t,v\n0.5,1\n").is_err());
}
