use rayon::prelude::*;
use serde::Serialize;

use super::{Profile, Weight};
use crate::error::ProfileError;

/// Default number of grid points for condition checks.
pub const DEFAULT_GRID: usize = 10_000;

/// Relative change under one refinement below which a ratio counts as stable.
pub const STABILITY_TOL: f64 = 0.05;

const BASE_DEPTH: f64 = 1e-100;
const TOP_GAP: f64 = 1e-15;

/// Grid clustered geometrically at both ends of `(0, 1)`.
///
/// Refinement halves the spacing in `ln t` and `ln(1 - t)` and doubles the
/// logarithmic depth at the origin, so every refined grid contains the
/// coarser one.
#[derive(Debug, Clone)]
pub struct ProfileGrid {
    points: Vec<f64>,
}

impl ProfileGrid {
    pub fn new(n: usize, level: u32) -> Self {
        let half = (n / 2).max(4);
        let depth = (0.5 / BASE_DEPTH).ln();
        let h = depth / (half - 1) as f64;
        let hu = (0.5 / TOP_GAP).ln() / (half - 1) as f64;
        let scale = (1u64 << level) as f64;
        let (hl, hul) = (h / scale, hu / scale);
        let jl = (half - 1) * (1usize << (2 * level));
        let ju = (half - 1) * (1usize << level);
        let top = 0.5f64.ln();
        let mut points: Vec<f64> = (0..=jl).map(|j| (top - j as f64 * hl).exp()).collect();
        points.extend((1..=ju).map(|j| 1.0 - 0.5 * (-(j as f64) * hul).exp()));
        points.sort_by(f64::total_cmp);
        points.dedup();
        ProfileGrid { points }
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Condition {
    Delta2,
    Quasiconcave,
    Cond1,
    Average,
    Cond4,
}

/// Outcome of a sup-ratio condition check.
#[derive(Debug, Clone, Serialize)]
pub struct ConditionReport {
    pub condition: Condition,
    /// Supremum of the ratio on the base grid; `null` in JSON when infinite.
    pub sup_ratio: f64,
    /// Supremum after one dyadic refinement.
    pub refined_sup_ratio: f64,
    pub grid_size: usize,
    pub stable: bool,
    pub divergent: bool,
    pub witness: f64,
    pub passed: bool,
}

struct Sup {
    value: f64,
    witness: f64,
    divergent: bool,
}

impl Sup {
    fn new() -> Self {
        Sup { value: f64::NEG_INFINITY, witness: f64::NAN, divergent: false }
    }

    fn offer(&mut self, v: f64, t: f64) {
        if v > self.value || (v.is_nan() && !self.value.is_nan()) {
            self.value = if v.is_nan() { f64::INFINITY } else { v };
            self.witness = t;
        }
    }

    fn diverged(t: f64) -> Self {
        Sup { value: f64::INFINITY, witness: t, divergent: true }
    }
}

fn cells(p: &Profile, w: Weight, pts: &[f64]) -> Vec<f64> {
    pts.par_windows(2).map(|c| p.integral(w, c[0], c[1])).collect()
}

/// `∫_0^t w` at every grid point, or the divergence point.
fn from_zero(p: &Profile, w: Weight, pts: &[f64]) -> Result<Vec<f64>, f64> {
    let head = p.integral_from_zero(w, pts[0]);
    if head.divergent || !head.value.is_finite() {
        return Err(pts[0]);
    }
    let mut acc = head.value;
    let mut out = Vec::with_capacity(pts.len());
    out.push(acc);
    for c in cells(p, w, pts) {
        acc += c;
        out.push(acc);
    }
    Ok(out)
}

/// `∫_t^1 w` at every grid point.
fn to_one(p: &Profile, w: Weight, pts: &[f64]) -> Vec<f64> {
    let cs = cells(p, w, pts);
    let mut acc = p.integral(w, *pts.last().unwrap(), 1.0);
    let mut out = vec![0.0; pts.len()];
    out[pts.len() - 1] = acc;
    for k in (0..pts.len() - 1).rev() {
        acc += cs[k];
        out[k] = acc;
    }
    out
}

fn sup_ratio(p: &Profile, cond: Condition, pts: &[f64]) -> Sup {
    let mut s = Sup::new();
    match cond {
        Condition::Delta2 => {
            for &t in pts.iter().filter(|&&t| t < 0.5) {
                s.offer(p.eval(2.0 * t) / p.eval(t), t);
            }
        }
        Condition::Quasiconcave => {
            for w in pts.windows(2) {
                let (a, b) = (w[0], w[1]);
                let (ia, ib) = (p.eval(a), p.eval(b));
                s.offer((ia / ib).max((ib / b) / (ia / a)), a);
            }
        }
        Condition::Cond1 => match from_zero(p, Weight::IOverS, pts) {
            Ok(p1) => pts.iter().zip(&p1).for_each(|(&t, &v)| s.offer(v / p.eval(t), t)),
            Err(t) => return Sup::diverged(t),
        },
        Condition::Average => match from_zero(p, Weight::RecipI, pts) {
            Ok(pr) => pts.iter().zip(&pr).for_each(|(&t, &v)| s.offer(v * p.eval(t) / t, t)),
            Err(t) => return Sup::diverged(t),
        },
        Condition::Cond4 => match from_zero(p, Weight::IOverS, pts) {
            Ok(p1) => {
                let q2 = to_one(p, Weight::IOverS2, pts);
                for k in 0..pts.len() {
                    s.offer(pts[k] * q2[k] / p1[k], pts[k]);
                }
            }
            Err(t) => return Sup::diverged(t),
        },
    }
    s
}

fn relative_change(base: f64, refined: f64) -> f64 {
    if base == refined {
        0.0
    } else {
        (refined - base).abs() / base.abs()
    }
}

fn check(p: &Profile, cond: Condition, n: usize) -> ConditionReport {
    let base = ProfileGrid::new(n, 0);
    let fine = ProfileGrid::new(n, 1);
    let a = sup_ratio(p, cond, base.points());
    let b = sup_ratio(p, cond, fine.points());
    let finite = a.value.is_finite() && b.value.is_finite();
    let stable = finite && relative_change(a.value, b.value) < STABILITY_TOL;
    let passed = match cond {
        Condition::Quasiconcave => a.value <= 1.0 + 1e-12 && b.value <= 1.0 + 1e-12,
        _ => stable && !a.divergent && !b.divergent,
    };
    let witness = if b.value > a.value { b.witness } else { a.witness };
    ConditionReport {
        condition: cond,
        sup_ratio: a.value,
        refined_sup_ratio: b.value,
        grid_size: base.len(),
        stable,
        divergent: a.divergent || b.divergent,
        witness,
        passed,
    }
}

/// `sup_{t<1/2} I(2t)/I(t)`.
pub fn check_delta2(p: &Profile, n: usize) -> ConditionReport {
    check(p, Condition::Delta2, n)
}

/// `I` nondecreasing and `I(t)/t` nonincreasing; the ratio is the largest
/// one-step violation factor and passes at `<= 1`.
pub fn check_quasiconcave(p: &Profile, n: usize) -> ConditionReport {
    check(p, Condition::Quasiconcave, n)
}

/// `sup_t (1/I(t)) ∫_0^t I(s)/s ds`.
pub fn check_cond1(p: &Profile, n: usize) -> ConditionReport {
    check(p, Condition::Cond1, n)
}

/// `sup_t (I(t)/t) ∫_0^t ds/I(s)`.
pub fn check_average(p: &Profile, n: usize) -> ConditionReport {
    check(p, Condition::Average, n)
}

/// `sup_t ∫_t^1 I(s)/s² ds / ((1/t) ∫_0^t I(s)/s ds)`.
pub fn check_cond4(p: &Profile, n: usize) -> ConditionReport {
    check(p, Condition::Cond4, n)
}

/// Constants of the polynomial-decay class together with the condition
/// reports that membership depends on.
#[derive(Debug, Clone, Serialize)]
pub struct ClassQ {
    pub c: f64,
    pub d: f64,
    pub c_witness: f64,
    pub d_witness: f64,
    pub c_in_range: bool,
    pub stable: bool,
    pub member_q: bool,
    pub grid_size: usize,
    pub cond1: ConditionReport,
    pub average: ConditionReport,
    pub cond4: ConditionReport,
}

fn c_and_d(p: &Profile, pts: &[f64]) -> (Sup, Sup) {
    let n = pts.len();
    let tail3: Vec<f64> = if p.power_exponent().is_some() {
        pts.iter().map(|&t| p.tail3_scaled(t)).collect()
    } else {
        let cs: Vec<f64> = pts.par_windows(2).map(|c| p.cell_tail3_scaled(c[0], c[1])).collect();
        let mut out = vec![0.0; n];
        out[n - 1] = p.cell_tail3_scaled(pts[n - 1], 1.0);
        for k in (0..n - 1).rev() {
            let r = pts[k] / pts[k + 1];
            out[k] = r * r * out[k + 1] + cs[k];
        }
        out
    };
    let q2 = to_one(p, Weight::IOverS2, pts);
    let mut inf_c = Sup::new();
    let mut sup_d = Sup::new();
    for k in 0..n {
        let t = pts[k];
        let i = p.eval(t);
        let excess = p.excess_over_square(t);
        if excess > 1e-8 * i {
            // infimum tracked as a supremum of the negated ratio
            inf_c.offer(-(tail3[k] / excess), t);
        }
        sup_d.offer(t * q2[k] / i, t);
    }
    inf_c.value = -inf_c.value;
    (inf_c, sup_d)
}

/// `c = inf [∫_t^1 I/s³] / [I/t² - 1]` and `d = sup (t/I) ∫_t^1 I/s²`,
/// computed on the refined grid.
pub fn class_q_constants(p: &Profile, n: usize) -> Result<ClassQ, ProfileError> {
    p.require_quasiconcave()?;
    let base = ProfileGrid::new(n, 0);
    let fine = ProfileGrid::new(n, 1);
    let (c0, d0) = c_and_d(p, base.points());
    let (c1, d1) = c_and_d(p, fine.points());
    let stable = relative_change(c0.value, c1.value) < STABILITY_TOL && relative_change(d0.value, d1.value) < STABILITY_TOL;
    let cond1 = check_cond1(p, n);
    let average = check_average(p, n);
    let cond4 = check_cond4(p, n);
    let (c, d) = (c1.value, d1.value);
    let member_q = cond1.passed && average.passed && cond4.passed && (1.0 - c) * d <= c + 1e-9;
    Ok(ClassQ {
        c,
        d,
        c_witness: c1.witness,
        d_witness: d1.witness,
        c_in_range: (0.5..1.0).contains(&c),
        stable,
        member_q,
        grid_size: base.len(),
        cond1,
        average,
        cond4,
    })
}
