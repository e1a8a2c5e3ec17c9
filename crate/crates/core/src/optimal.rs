//! Optimal target and domain norms for the reduced Sobolev embedding
//! operator `H_I`, the `Z`-norm, Sobolev presets, and the four-branch
//! Lorentz-Zygmund target selection.

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{NormError, OptimalError};
use crate::functions::{star_pieces, EvalFunction, Monotonicity, Piece, StepFunction};
use crate::norms::NormFunctional;
use crate::operators::{apply_hi, apply_ri, apply_si};
use crate::profiles::{check_cond1, class_q_constants, Profile};

/// A value with validity warnings attached.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Flagged {
    pub value: f64,
    pub warnings: Vec<String>,
}

/// `t ↦ (I(t)/t)(f**(t) - f*(t))`, equal to `I(t) D / t²` on each piece of `f*`.
pub fn weighted_oscillation(i: &Profile, f: &StepFunction) -> EvalFunction {
    let shape = if i.is_quasiconcave() { Monotonicity::Nonincreasing } else { Monotonicity::Unknown };
    let pieces = star_pieces(f)
        .iter()
        .map(|s| {
            let (d, ic) = (s.oscillation_mass(), i.clone());
            Piece::new(s.start, s.end, shape, Arc::new(move |t| if d == 0.0 { 0.0 } else { ic.eval(t) * d / (t * t) }))
        })
        .collect();
    EvalFunction::new(pieces, Monotonicity::Unknown, "weighted oscillation").with_limit_at_zero(0.0)
}

/// `‖(I(t)/t)(f** - f*)‖_X + ‖f‖₁`.
pub fn target_norm(x: &NormFunctional, i: &Profile, f: &StepFunction) -> Result<f64, OptimalError> {
    let osc = x.value_eval(&weighted_oscillation(i, f))?;
    Ok(osc + f.total())
}

/// Conditions under which [`target_norm`] describes the optimal target.
pub fn target_warnings(x: &NormFunctional, i: &Profile) -> Vec<String> {
    let mut w = Vec::new();
    match class_q_constants(i, 2000) {
        Ok(q) if q.member_q => {}
        Ok(_) => w.push(format!("profile {i} is not in class Q; the formula is only an estimate")),
        Err(e) => w.push(format!("profile {i}: {e}")),
    }
    if !x.admissible() {
        w.push(format!("{x} is not an admissible r.i. norm"));
    }
    w
}

pub fn target_norm_checked(x: &NormFunctional, i: &Profile, f: &StepFunction) -> Result<Flagged, OptimalError> {
    Ok(Flagged { value: target_norm(x, i, f)?, warnings: target_warnings(x, i) })
}

/// `‖R_I f*‖_{X'}`, the associate norm of the optimal target.
pub fn target_assoc_norm(x: &NormFunctional, i: &Profile, f: &StepFunction) -> Result<f64, OptimalError> {
    let xa = x.associate()?;
    let r = f.rearrange().into_inner();
    Ok(xa.value_eval(&apply_ri(i, &r))?)
}

/// `‖H_I f*‖_Y`; fails when `H_I 1` is not in `Y`, since then no r.i.
/// domain exists.
pub fn domain_norm(y: &NormFunctional, i: &Profile, f: &StepFunction) -> Result<f64, OptimalError> {
    let one = StepFunction::constant(1.0).expect("valid");
    let h1 = y.value_eval(&apply_hi(i, &one, 1)?)?;
    if !h1.is_finite() {
        return Err(OptimalError::NoDomain);
    }
    let r = f.rearrange().into_inner();
    Ok(y.value_eval(&apply_hi(i, &r, 1)?)?)
}

/// `‖f‖_Z = ‖S_I f‖_X`.
pub fn znorm(x: &NormFunctional, i: &Profile) -> NormFunctional {
    NormFunctional::Z(Box::new(x.clone()), i.clone())
}

/// Corpus members `g` with `‖S_I g‖_{X'}`, the normalisers of the
/// unit-ball lower bound in [`theorem11_norm`].
#[derive(Debug, Clone)]
pub struct UnitBall {
    members: Vec<(StepFunction, f64)>,
}

impl UnitBall {
    pub fn new(x: &NormFunctional, i: &Profile, corpus: &[StepFunction]) -> Result<Self, OptimalError> {
        let xa = x.associate()?;
        let norms: Vec<Result<f64, NormError>> = corpus.par_iter().map(|g| xa.value_eval(&apply_si(i, g))).collect();
        let mut members = Vec::with_capacity(corpus.len());
        for (g, n) in corpus.iter().zip(norms) {
            let n = n?;
            if n > 0.0 && n.is_finite() {
                members.push((g.rearrange().into_inner(), n));
            }
        }
        Ok(UnitBall { members })
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// `sup_g (-∫ I g* df*) / ‖S_I g‖_{X'} + ‖f‖₁`; for a step function the
    /// integral is the finite sum over the jumps of `f*`.
    pub fn lower_bound(&self, i: &Profile, f: &StepFunction) -> f64 {
        let sp = star_pieces(f);
        let jumps: Vec<(f64, f64)> = sp.windows(2).map(|w| (i.eval(w[0].end) * (w[0].value - w[1].value), w[0].end)).collect();
        let best = self
            .members
            .iter()
            .map(|(gs, norm)| jumps.iter().map(|&(w, t)| w * gs.eval(t)).sum::<f64>() / norm)
            .fold(0.0f64, f64::max);
        best + f.total()
    }
}

/// Lower bound for the optimal target norm as a supremum over the unit ball
/// of `‖S_I g‖_{X'}`, taken over the given corpus only.
pub fn theorem11_norm(
    x: &NormFunctional,
    i: &Profile,
    f: &StepFunction,
    corpus: &[StepFunction],
) -> Result<Flagged, OptimalError> {
    let ball = UnitBall::new(x, i, corpus)?;
    Ok(Flagged { value: ball.lower_bound(i, f), warnings: vec!["corpus lower bound".into()] })
}

/// Sobolev embedding settings with power-type isoperimetric behaviour.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum EmbeddingPreset {
    /// John domain in `ℝⁿ`, order `m < n`: `J(t) = t^{1 - m/n}`.
    John { n: u32, m: u32 },
    /// Maz'ya class with profile `t^α`, `α ∈ [1/n', 1)`: `J(t) = t^{1 - m(1-α)}`.
    Mazya { alpha: f64, m: u32 },
}

pub fn sobolev_preset(kind: &EmbeddingPreset) -> Result<Profile, OptimalError> {
    let exponent = match *kind {
        EmbeddingPreset::John { n, m } => {
            if n < 2 || m < 1 || m >= n {
                return Err(OptimalError::Invalid(format!("John preset needs n >= 2 and 1 <= m < n, got n = {n}, m = {m}")));
            }
            1.0 - m as f64 / n as f64
        }
        EmbeddingPreset::Mazya { alpha, m } => {
            if !(alpha > 0.0 && alpha < 1.0) || m < 1 {
                return Err(OptimalError::Invalid(format!("Maz'ya preset needs alpha in (0, 1) and m >= 1, got {alpha}, {m}")));
            }
            let e = 1.0 - m as f64 * (1.0 - alpha);
            if !(e > 0.0) {
                return Err(OptimalError::Invalid(format!("1 - m(1 - alpha) = {e} must be positive")));
            }
            e
        }
    };
    Profile::power(exponent).map_err(|e| OptimalError::Invalid(e.to_string()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GlzBranch {
    /// `p < 1/(m(1-α))`
    Subcritical,
    /// critical `p`, `β < 1 - 1/q`
    CriticalLog,
    /// critical `p`, `β = 1 - 1/q`
    CriticalLogLog,
    /// critical `p` with `β > 1 - 1/q`, or supercritical `p`
    Bounded,
}

/// Equivalent norm for the optimal target of `L^{p,q,β}` under `J(t) = t^{1-m(1-α)}`.
#[derive(Debug, Clone)]
pub struct GlzCase {
    pub p: f64,
    pub q: f64,
    pub beta: f64,
    pub alpha: f64,
    pub m: u32,
    pub branch: GlzBranch,
    pub norm: NormFunctional,
}

const BRANCH_TOL: f64 = 1e-12;

fn near(a: f64, b: f64) -> bool {
    (a - b).abs() <= BRANCH_TOL * a.abs().max(b.abs()).max(1.0)
}

pub fn glz_equivalent(p: f64, q: f64, beta: f64, alpha: f64, m: u32) -> Result<GlzCase, OptimalError> {
    if !NormFunctional::lz(p, q, beta, 0.0).admissible() {
        return Err(OptimalError::Invalid(format!("L^({p},{q},{beta}) is not an admissible r.i. norm")));
    }
    let k = m as f64 * (1.0 - alpha);
    if !(alpha > 0.0 && alpha <= 1.0) || m < 1 || !(1.0 - k > 0.0) {
        return Err(OptimalError::Invalid(format!("need 0 < alpha <= 1, m >= 1 and 1 - m(1 - alpha) > 0; got alpha = {alpha}, m = {m}")));
    }
    let critical = if k == 0.0 { f64::INFINITY } else { 1.0 / k };
    let edge = 1.0 - 1.0 / q;
    let (branch, norm) = if p < critical && !near(p, critical) {
        let big_p = 1.0 / (1.0 / p - k);
        (GlzBranch::Subcritical, NormFunctional::lz(big_p, q, beta, 0.0))
    } else if near(p, critical) && beta < edge && !near(beta, edge) {
        (GlzBranch::CriticalLog, NormFunctional::lz(f64::INFINITY, q, beta - 1.0, 0.0))
    } else if near(p, critical) && near(beta, edge) {
        (GlzBranch::CriticalLogLog, NormFunctional::lz(f64::INFINITY, q, -1.0 / q, -1.0))
    } else {
        (GlzBranch::Bounded, NormFunctional::Lp(f64::INFINITY))
    };
    Ok(GlzCase { p, q, beta, alpha, m, branch, norm })
}

/// Whether `Λ_I`'s associate is available for `I`, i.e. `I` satisfies condition (1).
pub fn associate_available(i: &Profile) -> bool {
    i.power_exponent().is_some() || check_cond1(i, 2000).passed
}

impl From<NormError> for Flagged {
    fn from(e: NormError) -> Self {
        Flagged { value: f64::NAN, warnings: vec![e.to_string()] }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn target_of_constant_and_zero() {
        let i = Profile::power(2.0 / 3.0).unwrap();
        let x = NormFunctional::Lp(2.0);
        assert_eq!(target_norm(&x, &i, &StepFunction::constant(3.0).unwrap()).unwrap(), 3.0);
        assert_eq!(target_norm(&x, &i, &StepFunction::zero()).unwrap(), 0.0);
    }

    #[test]
    fn target_of_indicator_closed_form() {
        let i = Profile::power(2.0 / 3.0).unwrap();
        let r: f64 = 0.1;
        let f = StepFunction::indicator(r, 1.0).unwrap();
        let v = target_norm(&NormFunctional::Lp(2.0), &i, &f).unwrap();
        // r² ∫_r^1 t^{-8/3} dt = r² (r^{-5/3} - 1) · 3/5
        let exact = (r * r * 0.6 * (r.powf(-5.0 / 3.0) - 1.0)).sqrt() + r;
        assert!((v - exact).abs() < 1e-8 * exact, "{v} {exact}");
    }

    #[test]
    fn assoc_target_with_l1() {
        let r: f64 = 0.3;
        let i = Profile::power(0.25).unwrap();
        let f = StepFunction::indicator(r, 1.0).unwrap();
        let v = target_assoc_norm(&NormFunctional::Lp(1.0), &i, &f).unwrap();
        assert!((v - r.powf(0.75)).abs() < 1e-12);
    }

    #[test]
    fn domain_examples() {
        let one = StepFunction::constant(1.0).unwrap();
        let linf = NormFunctional::Lp(f64::INFINITY);
        assert!(matches!(domain_norm(&linf, &Profile::power(1.0).unwrap(), &one), Err(OptimalError::NoDomain)));
        let v = domain_norm(&linf, &Profile::power(0.5).unwrap(), &one).unwrap();
        assert!((v - 2.0).abs() < 1e-12);
    }

    #[test]
    fn presets() {
        let p = sobolev_preset(&EmbeddingPreset::John { n: 3, m: 1 }).unwrap();
        assert!((p.power_exponent().unwrap() - 2.0 / 3.0).abs() < 1e-15);
        let p = sobolev_preset(&EmbeddingPreset::Mazya { alpha: 0.75, m: 2 }).unwrap();
        assert_eq!(p.power_exponent(), Some(0.5));
        assert!(sobolev_preset(&EmbeddingPreset::John { n: 2, m: 2 }).is_err());
    }

    #[test]
    fn glz_branches() {
        let c = glz_equivalent(2.0, 2.0, 0.0, 2.0 / 3.0, 1).unwrap();
        assert_eq!(c.branch, GlzBranch::Subcritical);
        match &c.norm {
            NormFunctional::LorentzZygmund(z) => assert!((z.p - 6.0).abs() < 1e-12 && z.q == 2.0),
            n => panic!("{n}"),
        }
        assert_eq!(glz_equivalent(3.0, 2.0, 0.0, 2.0 / 3.0, 1).unwrap().branch, GlzBranch::CriticalLog);
        assert_eq!(glz_equivalent(3.0, 2.0, 0.5, 2.0 / 3.0, 1).unwrap().branch, GlzBranch::CriticalLogLog);
        assert_eq!(glz_equivalent(3.0, 2.0, 0.75, 2.0 / 3.0, 1).unwrap().branch, GlzBranch::Bounded);
        assert_eq!(glz_equivalent(4.0, 2.0, 0.0, 2.0 / 3.0, 1).unwrap().branch, GlzBranch::Bounded);
        assert!(glz_equivalent(1.0, 2.0, 0.0, 0.5, 1).is_err());
    }
}
