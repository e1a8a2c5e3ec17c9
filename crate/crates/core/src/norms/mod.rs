//! Rearrangement-invariant (quasi)norms: `L^p`, Lorentz-Zygmund, `Λ_I`,
//! `m_I`, `M_I`, the `Z`-norm `‖S_I f‖_X`, weak `L¹`, and down-dual norms.
//!
//! Every norm is evaluated on a step function exactly or with closed-form
//! piece integrals, and on an [`EvalFunction`] through its rearrangement.

mod lz;

use std::fmt;

use serde::Serialize;

pub use lz::{l1, l2, Admissibility, Lz};

use crate::error::NormError;
use crate::functions::{level_function, log_grid, merge_points, star_pieces, Distribution, EvalFunction, Monotonicity, StepFunction};
use crate::operators::{apply_si, apply_si_eval};
use crate::profiles::{check_cond1, check_delta2, Profile, Weight};
use crate::quad;

/// Lower end of the explicit quadrature range; the part below is taken
/// from the weight primitive times the limit at the origin.
const HEAD: f64 = 1e-200;
const NORM_TOL: f64 = 1e-10;
const SUP_SAMPLES: usize = 24;

#[derive(Clone, Debug)]
pub enum NormFunctional {
    Lp(f64),
    LorentzZygmund(Lz),
    /// `∫ (I(s)/s) f*(s) ds`
    LambdaI(Profile),
    /// `sup I(s) f*(s)`
    SmallM(Profile),
    /// `sup I(t) f**(t)`
    BigM(Profile),
    /// `‖S_I f‖_X`
    Z(Box<NormFunctional>, Profile),
    /// `sup t f*(t)`
    WeakL1,
    /// `‖f°‖_{X'}`, the down-dual of `X`; not rearrangement invariant.
    DownDual(Box<NormFunctional>),
}

/// A norm value together with whether the functional is a genuine norm
/// for its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormValue {
    pub value: f64,
    pub admissible: bool,
}

impl fmt::Display for NormFunctional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormFunctional::Lp(p) => write!(f, "Lp:{p}"),
            NormFunctional::LorentzZygmund(z) => write!(f, "LZ:{},{},{},{}", z.p, z.q, z.beta, z.gamma),
            NormFunctional::LambdaI(i) => write!(f, "Lambda:{i}"),
            NormFunctional::SmallM(i) => write!(f, "mI:{i}"),
            NormFunctional::BigM(i) => write!(f, "MI:{i}"),
            NormFunctional::Z(x, i) => write!(f, "Z:{x}@{i}"),
            NormFunctional::WeakL1 => f.write_str("WeakL1"),
            NormFunctional::DownDual(x) => write!(f, "DownDual:{x}"),
        }
    }
}

fn conjugate(p: f64) -> f64 {
    if p == 1.0 {
        f64::INFINITY
    } else if p.is_infinite() {
        1.0
    } else {
        p / (p - 1.0)
    }
}

fn satisfies_cond1(i: &Profile) -> bool {
    i.power_exponent().is_some() || check_cond1(i, 2000).passed
}

impl NormFunctional {
    pub fn lz(p: f64, q: f64, beta: f64, gamma: f64) -> Self {
        NormFunctional::LorentzZygmund(Lz::new(p, q, beta, gamma))
    }

    /// False when the parameters only give a quasinorm (or less).
    pub fn admissible(&self) -> bool {
        match self {
            NormFunctional::Lp(p) => *p >= 1.0,
            NormFunctional::LorentzZygmund(z) => z.admissibility() == Admissibility::Norm,
            NormFunctional::LambdaI(_) | NormFunctional::BigM(_) => true,
            NormFunctional::SmallM(i) => i.power_exponent().is_some() || check_delta2(i, 1000).passed,
            NormFunctional::Z(x, _) | NormFunctional::DownDual(x) => x.admissible(),
            NormFunctional::WeakL1 => false,
        }
    }

    pub fn is_rearrangement_invariant(&self) -> bool {
        !matches!(self, NormFunctional::DownDual(_))
    }

    /// Value with admissibility flag.
    pub fn eval(&self, f: &StepFunction) -> Result<NormValue, NormError> {
        Ok(NormValue { value: self.value(f)?, admissible: self.admissible() })
    }

    /// `φ_X(t) = ‖χ_(0,t)‖_X`.
    pub fn fundamental(&self, t: f64) -> Result<f64, NormError> {
        let chi = StepFunction::indicator(t, 1.0).map_err(|e| NormError::Invalid(e.to_string()))?;
        self.value(&chi)
    }

    /// Closed-form associate norm; anything outside the table is reported
    /// as unsupported.
    pub fn associate(&self) -> Result<NormFunctional, NormError> {
        let unsupported = || NormError::UnsupportedAssociate(self.to_string());
        match self {
            NormFunctional::Lp(p) if *p >= 1.0 => Ok(NormFunctional::Lp(conjugate(*p))),
            NormFunctional::LambdaI(i) if satisfies_cond1(i) => Ok(NormFunctional::SmallM(i.tilde())),
            NormFunctional::SmallM(j) => {
                let i = j.tilde();
                if satisfies_cond1(&i) {
                    Ok(NormFunctional::LambdaI(i))
                } else {
                    Err(unsupported())
                }
            }
            _ => Err(unsupported()),
        }
    }

    /// Norm of a step function. `+∞` is a legal value.
    pub fn value(&self, f: &StepFunction) -> Result<f64, NormError> {
        if let NormFunctional::DownDual(x) = self {
            return x.associate()?.value(&level_function(f));
        }
        let r = f.rearrange();
        let pieces: Vec<(f64, f64, f64)> = r.pieces().filter(|p| p.2 > 0.0).collect();
        if pieces.is_empty() {
            return Ok(0.0);
        }
        let v = match self {
            NormFunctional::Lp(p) if p.is_infinite() => pieces[0].2,
            NormFunctional::Lp(p) => {
                let s: f64 = pieces.iter().map(|&(a, b, v)| v.powf(*p) * (b - a)).sum();
                s.powf(1.0 / p)
            }
            NormFunctional::LorentzZygmund(z) if z.q.is_infinite() => pieces
                .iter()
                .map(|&(a, b, v)| {
                    let (lo, hi) = if a == 0.0 { (b * 1e-300, b) } else { (a, b) };
                    let mut s = quad::sup_on(&|t| z.sup_weight(t), lo, hi, SUP_SAMPLES).1;
                    if a == 0.0 {
                        s = s.max(z.sup_weight_at_zero());
                    }
                    v * s
                })
                .fold(0.0, f64::max),
            NormFunctional::LorentzZygmund(z) => {
                let s: f64 = pieces
                    .iter()
                    .map(|&(a, b, v)| v.powf(z.q) * if a == 0.0 { z.primitive(b) } else { z.cell(a, b) })
                    .sum();
                s.powf(1.0 / z.q)
            }
            NormFunctional::LambdaI(i) => pieces
                .iter()
                .map(|&(a, b, v)| {
                    v * if a == 0.0 { i.integral_from_zero(Weight::IOverS, b).value } else { i.integral(Weight::IOverS, a, b) }
                })
                .sum(),
            NormFunctional::SmallM(i) => pieces.iter().map(|&(_, b, v)| v * i.eval(b)).fold(0.0, f64::max),
            NormFunctional::WeakL1 => pieces.iter().map(|&(_, b, v)| v * b).fold(0.0, f64::max),
            NormFunctional::BigM(i) => star_pieces(&r)
                .iter()
                .map(|s| {
                    let d = s.oscillation_mass();
                    if d == 0.0 {
                        s.value * i.eval(s.end)
                    } else {
                        let h = |t: f64| i.eval(t) * (s.value + d / t);
                        quad::sup_on(&h, s.start, s.end, SUP_SAMPLES).1
                    }
                })
                .fold(0.0, f64::max),
            NormFunctional::Z(x, i) => x.value_eval(&apply_si(i, &r))?,
            NormFunctional::DownDual(_) => unreachable!(),
        };
        Ok(v)
    }

    /// Norm of a nonnegative evaluable function via its rearrangement.
    pub fn value_eval(&self, g: &EvalFunction) -> Result<f64, NormError> {
        match Star::of(g) {
            Star::Sampled(s) => self.value(&s),
            Star::Mono(h) => self.value_noninc(&h),
            Star::Dist(d) if !d.top().is_finite() || !self.has_level_form() => self.value_noninc(&d.into_star()),
            Star::Dist(d) => Ok(self.value_dist(&d)),
        }
    }

    /// Norm of a nonincreasing function.
    fn value_noninc(&self, h: &EvalFunction) -> Result<f64, NormError> {
        let v = match self {
            NormFunctional::Lp(p) if p.is_infinite() => h.limit_at_zero(),
            NormFunctional::Lp(p) => integral_noninc(h, &|_| 1.0, &|u| u, *p).powf(1.0 / p),
            NormFunctional::LorentzZygmund(z) if z.q.is_infinite() => {
                sup_noninc(h, &|t| z.sup_weight(t), z.sup_weight_at_zero())
            }
            NormFunctional::LorentzZygmund(z) => {
                integral_noninc(h, &|t| z.density(t), &|u| z.primitive(u), z.q).powf(1.0 / z.q)
            }
            NormFunctional::LambdaI(i) => integral_noninc(
                h,
                &|t| i.weight(Weight::IOverS, t),
                &|u| i.integral_from_zero(Weight::IOverS, u).value,
                1.0,
            ),
            NormFunctional::SmallM(i) => sup_noninc(h, &|t| i.eval(t), 0.0),
            NormFunctional::WeakL1 => sup_noninc(h, &|t| t, 0.0),
            NormFunctional::BigM(i) => big_m_noninc(i, h),
            NormFunctional::Z(x, i) => x.value_eval(&apply_si_eval(i, h))?,
            NormFunctional::DownDual(_) => {
                return Err(NormError::Invalid("down-dual norms are evaluated on step functions only".into()))
            }
        };
        Ok(v)
    }

    /// Norms computable from the distribution function alone.
    fn has_level_form(&self) -> bool {
        !matches!(self, NormFunctional::BigM(_) | NormFunctional::Z(..) | NormFunctional::DownDual(_))
    }

    fn value_dist(&self, d: &Distribution) -> f64 {
        match self {
            NormFunctional::Lp(p) if p.is_infinite() => d.top(),
            NormFunctional::Lp(p) => d.layer_cake(&|u| u, *p).powf(1.0 / p),
            NormFunctional::LorentzZygmund(z) if z.q.is_infinite() => sup_dist(d, &|t| z.sup_weight(t)),
            NormFunctional::LorentzZygmund(z) => {
                if !z.primitive(1.0).is_finite() {
                    return if d.top() > 0.0 { f64::INFINITY } else { 0.0 };
                }
                d.layer_cake(&|u| z.primitive_fast(u), z.q).powf(1.0 / z.q)
            }
            NormFunctional::LambdaI(i) => d.layer_cake(&|u| i.integral_from_zero(Weight::IOverS, u).value, 1.0),
            NormFunctional::SmallM(i) => sup_dist(d, &|t| i.eval(t)),
            NormFunctional::WeakL1 => sup_dist(d, &|t| t),
            _ => unreachable!("no level form"),
        }
    }
}

/// `‖f‖_{X_d'} = ‖f°‖_{X'}`.
pub fn down_dual_norm(x: &NormFunctional, f: &StepFunction) -> Result<f64, NormError> {
    NormFunctional::DownDual(Box::new(x.clone())).value(f)
}

enum Star {
    Mono(EvalFunction),
    Dist(Distribution),
    Sampled(StepFunction),
}

const SAMPLE_CELLS: usize = 20_000;

impl Star {
    fn of(g: &EvalFunction) -> Self {
        if g.monotonicity() == Monotonicity::Nonincreasing {
            return Star::Mono(g.clone());
        }
        if let Some(d) = Distribution::new(g) {
            return Star::Dist(d);
        }
        Star::Sampled(discretize(g))
    }
}

/// Step approximation on a geometric grid refined at the knots, each
/// cell carrying the value at its geometric midpoint.
fn discretize(g: &EvalFunction) -> StepFunction {
    let lo = g.floor().max(1e-12);
    let grid = merge_points(&log_grid(lo, 1.0, SAMPLE_CELLS), &g.knots());
    let grid: Vec<f64> = grid.into_iter().filter(|&t| t >= lo).collect();
    let clean = |v: f64| if v.is_finite() && v > 0.0 { v } else { 0.0 };
    let head = g.limit_at_zero();
    let mut values = vec![clean(if head.is_finite() { head } else { g.eval_unchecked(lo) })];
    for w in grid.windows(2) {
        values.push(clean(g.eval_unchecked((w[0] * w[1]).sqrt())));
    }
    let breaks = grid[..grid.len() - 1].to_vec();
    StepFunction::new(breaks, values).expect("sampled grid is increasing")
}

/// `∫_0^1 w(t) h(t)^q dt` for nonincreasing `h`; `primitive` is `∫_0^u w`.
fn integral_noninc(h: &EvalFunction, w: &dyn Fn(f64) -> f64, primitive: &dyn Fn(f64) -> f64, q: f64) -> f64 {
    let h0 = h.limit_at_zero();
    let integrand = |t: f64| {
        let v = h.eval_unchecked(t);
        if v == 0.0 {
            0.0
        } else {
            w(t) * v.powf(q)
        }
    };
    let mut edges = vec![HEAD];
    edges.extend(h.knots().into_iter().filter(|&k| k > HEAD));
    edges.push(1.0);
    let mut total = 0.0;
    for e in edges.windows(2) {
        total += quad::integrate_log(integrand, e[0], e[1], NORM_TOL).value;
    }
    let head = if h0 == 0.0 {
        0.0
    } else if h0.is_finite() {
        h0.powf(q) * primitive(HEAD)
    } else {
        quad::integrate_from_zero(integrand, HEAD, NORM_TOL).value
    };
    total + head
}

/// `sup_t ω(t) h(t)` for nonincreasing `h`, piece by piece, including the
/// left limits at the knots; `omega0 = ω(0+)`.
fn sup_noninc(h: &EvalFunction, omega: &dyn Fn(f64) -> f64, omega0: f64) -> f64 {
    let h0 = h.limit_at_zero();
    let mut best = if h0 > 0.0 && omega0 > 0.0 { h0 * omega0 } else { 0.0 };
    for p in h.pieces() {
        let lo = if p.start == 0.0 { (p.end * 1e-300).max(f64::MIN_POSITIVE) } else { p.start };
        let f = |t: f64| {
            let v = p.at(t);
            if v == 0.0 {
                0.0
            } else {
                omega(t) * v
            }
        };
        best = best.max(quad::sup_on(&f, lo, p.end, SUP_SAMPLES).1);
    }
    best
}

/// `sup_s ω(s) g*(s) = sup_λ λ ω(μ(λ))` for nondecreasing `ω`.
fn sup_dist(d: &Distribution, omega: &dyn Fn(f64) -> f64) -> f64 {
    let mut edges = vec![0.0];
    edges.extend(d.levels().iter().copied().filter(|&l| l > 0.0 && l < d.top()));
    edges.push(d.top());
    let f = |lam: f64| {
        let m = d.mu(lam);
        if m <= 0.0 {
            0.0
        } else {
            lam * omega(m)
        }
    };
    let mut best = 0.0f64;
    for e in edges.windows(2) {
        if e[1] > e[0] {
            best = best.max(quad::sup_on(&f, e[0], e[1], SUP_SAMPLES).1);
            // Just below a level where μ jumps.
            let below = e[1] - 1e-12 * e[1];
            best = best.max(f(below));
        }
    }
    best
}

/// `sup_t I(t) h**(t)` on a geometric grid with exact cell integrals.
fn big_m_noninc(i: &Profile, h: &EvalFunction) -> f64 {
    let grid = merge_points(&log_grid(1e-12, 1.0, 2000), &h.knots());
    let h0 = h.limit_at_zero();
    let mut acc = if h0.is_finite() {
        h0 * grid[0]
    } else {
        quad::integrate_from_zero(|t| h.eval_unchecked(t), grid[0], NORM_TOL).value
    };
    let mut best = i.eval(grid[0]) * acc / grid[0];
    for w in grid.windows(2) {
        acc += quad::integrate(|t| h.eval_unchecked(t), w[0], w[1], NORM_TOL).value;
        best = best.max(i.eval(w[1]) * acc / w[1]);
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chi(r: f64) -> StepFunction {
        StepFunction::indicator(r, 1.0).unwrap()
    }

    #[test]
    fn lp_of_indicator() {
        assert!((NormFunctional::Lp(2.0).value(&chi(0.25)).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(NormFunctional::Lp(f64::INFINITY).value(&chi(0.25)).unwrap(), 1.0);
    }

    #[test]
    fn small_m_of_indicator() {
        let r: f64 = 0.3;
        let m = NormFunctional::SmallM(Profile::power(0.5).unwrap());
        assert!((m.value(&chi(r)).unwrap() - r.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn lorentz_six_two() {
        let r: f64 = 0.2;
        let v = NormFunctional::lz(6.0, 2.0, 0.0, 0.0).value(&chi(r)).unwrap();
        assert!((v - (3.0 * r.powf(1.0 / 3.0)).sqrt()).abs() < 1e-14);
    }

    #[test]
    fn associates() {
        assert_eq!(NormFunctional::Lp(4.0).associate().unwrap().to_string(), "Lp:1.3333333333333333");
        assert_eq!(NormFunctional::Lp(1.0).associate().unwrap().to_string(), "Lp:inf");
        let a = NormFunctional::LambdaI(Profile::power(0.25).unwrap()).associate().unwrap();
        assert_eq!(a.to_string(), "mI:power(0.75)");
        assert!(matches!(
            NormFunctional::lz(2.0, 2.0, 1.0, 0.0).associate(),
            Err(NormError::UnsupportedAssociate(_))
        ));
    }

    #[test]
    fn down_dual_examples() {
        let f = StepFunction::new(vec![0.5], vec![0.0, 1.0]).unwrap();
        let v = down_dual_norm(&NormFunctional::Lp(f64::INFINITY), &f).unwrap();
        assert!((v - 0.5).abs() < 1e-15);
        assert_eq!(down_dual_norm(&NormFunctional::Lp(2.0), &StepFunction::zero()).unwrap(), 0.0);
    }

    #[test]
    fn eval_function_paths_agree_with_step() {
        let f = StepFunction::new(vec![0.2, 0.5], vec![1.0, 3.0, 2.0]).unwrap();
        let g = EvalFunction::from_step(&f);
        for n in [
            NormFunctional::Lp(2.0),
            NormFunctional::lz(3.0, 2.0, 0.0, 0.0),
            NormFunctional::LambdaI(Profile::power(0.5).unwrap()),
            NormFunctional::SmallM(Profile::power(0.5).unwrap()),
            NormFunctional::WeakL1,
        ] {
            let a = n.value(&f).unwrap();
            let b = n.value_eval(&g).unwrap();
            assert!((a - b).abs() < 1e-6 * a, "{n}: {a} {b}");
        }
    }

    #[test]
    fn inadmissible_lz_is_flagged() {
        let v = NormFunctional::lz(1.0, 2.0, 0.0, 0.0).eval(&chi(0.5)).unwrap();
        assert!(!v.admissible);
        assert!(v.value.is_finite());
    }
}
