//! Adaptive Gauss-Kronrod quadrature, integrals from the origin with
//! divergence detection, and a bracketing maximiser.

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689,
    0.973_906_528_517_171_720_077_964_012_084,
    0.930_157_491_355_708_226_001_207_180_060,
    0.865_063_366_688_984_510_732_096_688_423,
    0.780_817_726_586_416_897_063_717_578_345,
    0.679_409_568_299_024_406_234_327_365_115,
    0.562_757_134_668_604_683_339_000_099_273,
    0.433_395_394_129_247_190_799_265_943_166,
    0.294_392_862_701_460_198_131_126_603_104,
    0.148_874_338_981_631_210_884_826_001_130,
    0.0,
];
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062,
    0.032_558_162_307_964_727_478_818_972_459,
    0.054_755_896_574_351_996_031_381_300_245,
    0.075_039_674_810_919_952_767_043_140_916,
    0.093_125_454_583_697_605_535_065_465_083,
    0.109_387_158_802_297_641_899_210_590_326,
    0.123_491_976_262_065_851_077_208_479_213,
    0.134_709_217_311_473_325_928_054_001_772,
    0.142_775_938_577_060_080_797_094_273_139,
    0.147_739_104_901_338_491_374_841_515_972,
    0.149_445_554_002_916_905_664_936_468_390,
];
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893,
    0.149_451_349_150_580_593_145_776_339_658,
    0.219_086_362_515_982_043_995_534_934_228,
    0.269_266_719_309_996_355_091_226_921_569,
    0.295_524_224_714_752_870_173_892_994_651,
];

/// Default relative tolerance for profile and norm integrals.
pub const REL_TOL: f64 = 1e-10;

const MAX_INTERVALS: usize = 400;

/// Single 21-point Kronrod rule with its embedded 10-point Gauss estimate.
pub fn gk21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[10] * fc;
    let mut g = 0.0;
    for j in 0..10 {
        let x = h * XGK[j];
        let s = f(c - x) + f(c + x);
        k += WGK[j] * s;
        if j % 2 == 1 {
            g += WG[j / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quad {
    pub value: f64,
    pub error: f64,
}

/// Adaptive bisection on the interval with the largest error estimate.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64) -> Quad {
    if !(b > a) {
        return Quad { value: 0.0, error: 0.0 };
    }
    let (v, e) = gk21(&f, a, b);
    let mut parts = vec![(a, b, v, e)];
    let mut total = v;
    let mut err = e;
    while err > rel_tol * total.abs() && err > 1e-300 && parts.len() < MAX_INTERVALS {
        let (idx, _) = parts
            .iter()
            .enumerate()
            .fold((0, -1.0), |best, (i, p)| if p.3 > best.1 { (i, p.3) } else { best });
        let (lo, hi, pv, pe) = parts.swap_remove(idx);
        let mid = 0.5 * (lo + hi);
        if !(mid > lo && mid < hi) {
            parts.push((lo, hi, pv, 0.0));
            err -= pe;
            continue;
        }
        let (v1, e1) = gk21(&f, lo, mid);
        let (v2, e2) = gk21(&f, mid, hi);
        total += v1 + v2 - pv;
        err += e1 + e2 - pe;
        parts.push((lo, mid, v1, e1));
        parts.push((mid, hi, v2, e2));
    }
    // Re-sum in a fixed order so results do not depend on refinement history.
    parts.sort_by(|x, y| x.0.total_cmp(&y.0));
    Quad {
        value: parts.iter().map(|p| p.2).sum(),
        error: parts.iter().map(|p| p.3).sum(),
    }
}

/// Integrates over `[a, b]`, `0 < a`, in the variable `u = ln t`; suited to
/// power-like integrands spread over many decades.
pub fn integrate_log<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64) -> Quad {
    if !(b > a) {
        return Quad { value: 0.0, error: 0.0 };
    }
    if b <= 4.0 * a {
        return integrate(f, a, b, rel_tol);
    }
    integrate(
        |u: f64| {
            let t = u.exp();
            f(t) * t
        },
        a.ln(),
        b.ln(),
        rel_tol,
    )
}

/// Outcome of an integral whose lower limit is the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub divergent: bool,
}

impl Integral {
    pub fn finite(value: f64) -> Self {
        Integral { value, divergent: false }
    }

    pub fn infinite() -> Self {
        Integral { value: f64::INFINITY, divergent: true }
    }
}

const SHELL_FLOOR: f64 = -690.0;

/// `∫_0^b f` for a nonnegative integrand, summed over unit shells in `ln t`.
///
/// Geometric shell decay is extrapolated; shells whose ratio keeps drifting
/// towards one (harmonic or slower decay) are reported divergent.
pub fn integrate_from_zero<F: Fn(f64) -> f64>(f: F, b: f64, rel_tol: f64) -> Integral {
    if !(b > 0.0) {
        return Integral::finite(0.0);
    }
    let g = |u: f64| {
        let t = u.exp();
        f(t) * t
    };
    let top = b.ln();
    let mut total = 0.0;
    let mut shells: Vec<f64> = Vec::new();
    let mut k = 0usize;
    loop {
        let hi = top - k as f64;
        let lo = hi - 1.0;
        if lo < SHELL_FLOOR {
            break;
        }
        let s = integrate(g, lo, hi, rel_tol * 0.1).value;
        if !s.is_finite() {
            return Integral::infinite();
        }
        total += s;
        shells.push(s);
        k += 1;
        if s == 0.0 && k > 2 {
            return Integral::finite(total);
        }
        if s <= 1e-17 * total {
            return Integral::finite(total);
        }
        if let Some(tail) = geometric_tail(&shells, 1e-9) {
            if tail <= rel_tol * total {
                return Integral::finite(total + tail);
            }
        }
    }
    match geometric_tail(&shells, 1e-4) {
        Some(tail) => Integral::finite(total + tail),
        None => Integral::infinite(),
    }
}

/// Tail of a shell sequence once successive ratios have settled below one.
fn geometric_tail(shells: &[f64], drift_tol: f64) -> Option<f64> {
    let n = shells.len();
    if n < 4 {
        return None;
    }
    let r1 = shells[n - 1] / shells[n - 2];
    let r0 = shells[n - 2] / shells[n - 3];
    if !(r1 < 0.9999) || !r1.is_finite() || !r0.is_finite() {
        return None;
    }
    if (r1 - r0).abs() > drift_tol * (1.0 - r1) {
        return None;
    }
    Some(shells[n - 1] * r1 / (1.0 - r1))
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section maximisation of `h` on `[a, b]`.
pub fn golden_max<F: Fn(f64) -> f64>(h: &F, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = h(c);
    let mut fd = h(d);
    for _ in 0..200 {
        if (b - a).abs() <= tol * (a.abs() + b.abs()).max(1e-300) {
            break;
        }
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = h(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = h(d);
        }
    }
    if fc >= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Supremum of `h` over `[a, b]`: endpoint values, `samples` log-spaced
/// interior probes, then golden-section refinement around the best probe.
pub fn sup_on<F: Fn(f64) -> f64>(h: &F, a: f64, b: f64, samples: usize) -> (f64, f64) {
    let mut best = (a, h(a));
    let hb = h(b);
    if hb > best.1 || best.1.is_nan() {
        best = (b, hb);
    }
    if !(b > a) || samples == 0 {
        return best;
    }
    let use_log = a > 0.0 && b > 4.0 * a;
    let point = |i: usize| {
        let s = i as f64 / (samples + 1) as f64;
        if use_log {
            (a.ln() + s * (b / a).ln()).exp()
        } else {
            a + s * (b - a)
        }
    };
    let mut best_i = 0;
    let mut best_inner = f64::NEG_INFINITY;
    for i in 1..=samples {
        let v = h(point(i));
        if v > best_inner {
            best_inner = v;
            best_i = i;
        }
    }
    let lo = point(best_i - 1).max(a);
    let hi = if best_i == samples { b } else { point(best_i + 1) };
    let (x, v) = golden_max(h, lo, hi, 1e-12);
    let v = v.max(best_inner);
    if v > best.1 {
        best = (x, v);
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exact() {
        let q = integrate(|x| x * x * x - 2.0 * x + 1.0, 0.0, 2.0, 1e-12);
        assert!((q.value - 2.0).abs() < 1e-13);
    }

    #[test]
    fn singular_power_from_zero() {
        let r = integrate_from_zero(|t: f64| t.powf(-0.7), 0.5, 1e-12);
        let exact = 0.5f64.powf(0.3) / 0.3;
        assert!(!r.divergent);
        assert!((r.value - exact).abs() < 1e-10 * exact);
    }

    #[test]
    fn slow_power_from_zero() {
        let r = integrate_from_zero(|t: f64| t.powf(-0.98), 1.0, 1e-12);
        assert!(!r.divergent);
        assert!((r.value - 50.0).abs() < 1e-8);
    }

    #[test]
    fn harmonic_diverges() {
        assert!(integrate_from_zero(|t: f64| 1.0 / t, 1.0, 1e-10).divergent);
        let loglike = |t: f64| 1.0 / (t * (2.0 / t).ln());
        assert!(integrate_from_zero(loglike, 0.5, 1e-10).divergent);
        let sqrt_log = |t: f64| 1.0 / (t * (2.0 / t).ln().sqrt());
        assert!(integrate_from_zero(sqrt_log, 0.5, 1e-10).divergent);
    }

    #[test]
    fn log_variable_matches() {
        let q = integrate_log(|t: f64| t.powf(-0.5), 1e-8, 1.0, 1e-12);
        let exact = 2.0 * (1.0 - 1e-4);
        assert!((q.value - exact).abs() < 1e-11);
    }

    #[test]
    fn sup_finds_interior_peak() {
        let h = |t: f64| -(t - 0.3).powi(2);
        let (x, v) = sup_on(&h, 0.0, 1.0, 16);
        assert!((x - 0.3).abs() < 1e-6);
        assert!(v.abs() < 1e-12);
    }
}
