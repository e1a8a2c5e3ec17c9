use ri_core::optimal::{sobolev_preset, EmbeddingPreset};
use ri_core::profiles::{
    check_average, check_cond1, check_cond4, check_delta2, check_quasiconcave, class_q_constants, Weight,
};
use ri_core::parse::parse_profile;
use ri_core::Profile;

const GRID: usize = 2000;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn power_values_and_presets() {
    assert_eq!(Profile::power(0.5).unwrap().eval(0.25), 0.5);
    let lin = Profile::power(1.0).unwrap();
    for t in [0.01, 0.3, 0.77] {
        assert_eq!(lin.eval(t), t);
    }
    let john = sobolev_preset(&EmbeddingPreset::John { n: 3, m: 1 }).unwrap();
    assert!(rel(john.eval(0.125), 0.25) < 1e-14);
    assert_eq!(sobolev_preset(&EmbeddingPreset::John { n: 2, m: 1 }).unwrap().power_exponent(), Some(0.5));
    assert_eq!(sobolev_preset(&EmbeddingPreset::Mazya { alpha: 0.75, m: 2 }).unwrap().power_exponent(), Some(0.5));
    assert!(sobolev_preset(&EmbeddingPreset::John { n: 2, m: 2 }).is_err());
    assert!(sobolev_preset(&EmbeddingPreset::Mazya { alpha: 0.5, m: 2 }).is_err());
    assert!(Profile::power(0.0).is_err() && Profile::power(1.5).is_err());
}

#[test]
fn integrals_have_closed_forms() {
    let alpha = 0.4;
    let p = Profile::power(alpha).unwrap();
    for t in [1e-6, 0.01, 0.5] {
        let got = p.integral_from_zero(Weight::IOverS, t).value;
        assert!(rel(got, t.powf(alpha) / alpha) < 1e-10, "t {t}");
        let recip = p.integral_from_zero(Weight::RecipI, t).value;
        assert!(rel(recip, t.powf(1.0 - alpha) / (1.0 - alpha)) < 1e-10);
    }
    let tail = p.integral(Weight::IOverS2, 0.2, 1.0);
    assert!(rel(tail, (0.2f64.powf(alpha - 1.0) - 1.0) / (1.0 - alpha)) < 1e-10);
}

#[test]
fn inverse_round_trips() {
    for p in [Profile::power(0.3).unwrap(), Profile::gaussian(), Profile::log_ratio()] {
        for t in [1e-5, 0.1, 0.45, 0.8] {
            let y = p.eval(t);
            assert!(rel(p.inverse(y).unwrap(), t) < 1e-9, "{} at {t}", p.name());
        }
        assert!(p.inverse(0.0).is_err());
    }
}

#[test]
fn gaussian_is_normalised_and_continuous() {
    let g = Profile::gaussian();
    assert!((g.eval(1.0) - 1.0).abs() < 1e-12);
    let (l, r) = (g.eval(0.5 - 1e-9), g.eval(0.5 + 1e-9));
    assert!((l - r).abs() < 1e-6);
    assert!(g.is_quasiconcave());
}

#[test]
fn power_condition_ratios() {
    for &alpha in &[0.5, 2.0 / 3.0, 0.9] {
        let p = Profile::power(alpha).unwrap();
        let d2 = check_delta2(&p, GRID);
        assert!(rel(d2.sup_ratio, 2f64.powf(alpha)) < 1e-12 && d2.passed);
        let c1 = check_cond1(&p, GRID);
        assert!(rel(c1.sup_ratio, 1.0 / alpha) < 1e-6 && c1.passed, "{alpha}: {}", c1.sup_ratio);
        let av = check_average(&p, GRID);
        assert!(rel(av.sup_ratio, 1.0 / (1.0 - alpha)) < 1e-6 && av.passed);
        assert!(check_cond4(&p, GRID).passed);
        assert!(check_quasiconcave(&p, GRID).passed);
    }
}

#[test]
fn failing_profiles() {
    let lin = Profile::power(1.0).unwrap();
    let av = check_average(&lin, GRID);
    assert!(!av.passed && av.divergent);
    assert!(!check_cond4(&lin, GRID).passed);

    let ll = Profile::log_ratio();
    let c1 = check_cond1(&ll, GRID);
    assert!(!c1.passed);

    let g = Profile::gaussian();
    assert!(!check_average(&g, GRID).passed);
    assert!(!check_average(&Profile::t_log(0.5), GRID).passed);

    let sq = Profile::monomial(2.0);
    let qc = check_quasiconcave(&sq, GRID);
    assert!(!qc.passed && qc.witness > 0.0 && qc.witness < 1.0);
    assert!(!sq.is_quasiconcave());
    assert!(class_q_constants(&sq, GRID).is_err());
}

#[test]
fn gaussian_passes_cond1_and_delta2() {
    let g = Profile::gaussian();
    let c1 = check_cond1(&g, GRID);
    assert!(c1.passed && c1.stable);
    let d2 = check_delta2(&g, GRID);
    assert!(d2.passed && d2.sup_ratio.is_finite());
    assert!(check_quasiconcave(&g, GRID).passed);
}

#[test]
fn class_q_power_constants() {
    for &alpha in &[0.5, 2.0 / 3.0, 0.75, 0.9] {
        let q = class_q_constants(&Profile::power(alpha).unwrap(), GRID).unwrap();
        let (c, d) = (1.0 / (2.0 - alpha), 1.0 / (1.0 - alpha));
        assert!(rel(q.c, c) < 1e-6, "{alpha}: c {} vs {c}", q.c);
        assert!(rel(q.d, d) < 1e-6, "{alpha}: d {} vs {d}", q.d);
        assert!(((1.0 - q.c) * q.d - q.c).abs() < 1e-6);
        assert!(q.member_q && q.stable && q.c_in_range);
    }
}

#[test]
fn tabulated_matches_power() {
    let rows: Vec<(f64, f64)> = (0..=400).map(|k| 10f64.powf(-8.0 * (1.0 - k as f64 / 400.0))).map(|t| (t, t.sqrt())).collect();
    let tab = Profile::tabulated(&rows).unwrap();
    let pow = Profile::power(0.5).unwrap();
    for t in [1e-7, 1e-3, 0.2, 0.9] {
        assert!(rel(tab.eval(t), pow.eval(t)) < 1e-6);
    }
    assert!(rel(check_delta2(&tab, GRID).sup_ratio, check_delta2(&pow, GRID).sup_ratio) < 1e-6);
    assert!(Profile::tabulated(&[(0.5, 1.0), (0.4, 2.0)]).is_err());
    assert!(Profile::tabulated_from_csv("t,I\n0.5,1\n1,x\n").is_err());
}

#[test]
fn tilde_of_power() {
    let t = Profile::power(0.3).unwrap().tilde();
    assert_eq!(t.power_exponent(), Some(0.7));
    let g = Profile::gaussian();
    let gt = g.tilde();
    assert!(rel(gt.eval(0.2), 0.2 / g.eval(0.2)) < 1e-14);
    assert!(rel(gt.tilde().eval(0.2), g.eval(0.2)) < 1e-14);
}

#[test]
fn parser() {
    assert_eq!(parse_profile("power(0.5)").unwrap().power_exponent(), Some(0.5));
    assert_eq!(parse_profile("john(3,1)").unwrap().power_exponent().map(|a| (a * 3.0).round()), Some(2.0));
    assert_eq!(parse_profile("gauss").unwrap().name(), "gauss");
    let e = parse_profile("power(0.5").unwrap_err();
    assert_eq!(e.position, 9);
    assert!(parse_profile("nonsense").is_err());
}
