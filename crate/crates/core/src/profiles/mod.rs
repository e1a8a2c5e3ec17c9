//! Isoperimetric-type profiles `I : (0, 1) -> (0, 1)`, their singular-weight
//! integrals, and condition checks.

mod conditions;
mod phi;

use std::fmt;
use std::path::Path;
use std::sync::{Arc, OnceLock};

pub use conditions::{
    check_average, check_cond1, check_cond4, check_delta2, check_quasiconcave, class_q_constants, ClassQ,
    Condition, ConditionReport, ProfileGrid, DEFAULT_GRID,
};
pub use phi::PhiSpec;

use crate::error::ProfileError;
use crate::functions::read_pairs;
use crate::quad::{self, Integral, REL_TOL};

type F = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Weights appearing in the profile integrals.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Weight {
    /// `I(s)/s`
    IOverS,
    /// `1/I(s)`
    RecipI,
    /// `I(s)/s²`
    IOverS2,
    /// `I(s)/s³`
    IOverS3,
    /// `s/I(s)`
    SOverI,
}

impl Weight {
    fn power_exponent(self, alpha: f64) -> f64 {
        match self {
            Weight::IOverS => alpha - 1.0,
            Weight::RecipI => -alpha,
            Weight::IOverS2 => alpha - 2.0,
            Weight::IOverS3 => alpha - 3.0,
            Weight::SOverI => 1.0 - alpha,
        }
    }
}

#[derive(Clone)]
enum Kind {
    Power { alpha: f64 },
    Product { phi: PhiSpec, scale: f64, join: f64 },
    Tabulated { logt: Vec<f64>, logi: Vec<f64> },
    Custom { f: F, scale: f64 },
    Tilde(Profile),
}

struct Inner {
    kind: Kind,
    name: String,
    knots: Vec<f64>,
    quasiconcave: OnceLock<Option<f64>>,
}

/// Nondecreasing profile with `I(1-) = 1`; cheap to clone.
#[derive(Clone)]
pub struct Profile(Arc<Inner>);

impl fmt::Debug for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Profile({})", self.0.name)
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.name)
    }
}

/// `∫_a^b s^{k-1} ds` without cancellation for nearby endpoints.
fn power_integral(k: f64, a: f64, b: f64) -> f64 {
    if a <= 0.0 {
        return if k > 0.0 { b.powf(k) / k } else { f64::INFINITY };
    }
    let l = (b / a).ln();
    if k == 0.0 {
        l
    } else {
        a.powf(k) * (k * l).exp_m1() / k
    }
}

impl Profile {
    fn build(kind: Kind, name: String, knots: Vec<f64>) -> Self {
        Profile(Arc::new(Inner { kind, name, knots, quasiconcave: OnceLock::new() }))
    }

    /// `I(t) = t^α`, `0 < α <= 1`.
    pub fn power(alpha: f64) -> Result<Self, ProfileError> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(ProfileError::BadExponent(alpha));
        }
        Ok(Self::build(Kind::Power { alpha }, format!("power({alpha})"), vec![]))
    }

    /// Product-measure profile `t Φ'(Φ⁻¹(log(2/t)))` on `(0, 1/2]`, extended
    /// to `(1/2, 1)` by the tangent line at `1/2` through `(1, 1)`, with one
    /// scale factor fixing `I(1-) = 1`.
    ///
    /// The symmetric reflection `I(t) = I(1 - t)` vanishes at `1-`, so it
    /// cannot be normalised to a nondecreasing bijection; the tangent
    /// extension keeps `I` continuous, nondecreasing and quasiconcave.
    pub fn product(phi: PhiSpec) -> Result<Self, ProfileError> {
        let raw = {
            let phi = phi.clone();
            move |t: f64| t * phi.derivative(phi.inverse((2.0 / t).ln()))
        };
        let r = raw(0.5);
        let h = 1e-6;
        let dr = (raw(0.5 + h) - raw(0.5 - h)) / (2.0 * h);
        let mut scale = 2.0 / (dr + 2.0 * r);
        if !(scale * r >= 0.5) {
            scale = 0.5 / r;
        }
        if scale * r > 1.0 {
            scale = 1.0 / r;
        }
        if !(scale.is_finite() && scale > 0.0) {
            return Err(ProfileError::Normalisation);
        }
        let name = match phi.name() {
            "t^2" => "gauss".to_string(),
            n => format!("product({})", n.strip_prefix("t^").unwrap_or(n)),
        };
        Ok(Self::build(Kind::Product { phi, scale, join: scale * r }, name, vec![0.5]))
    }

    /// Gaussian profile, `Φ(t) = t²`.
    pub fn gaussian() -> Self {
        Self::product(PhiSpec::power(2.0).expect("valid")).expect("valid")
    }

    /// Log-log linear interpolation of `(t, I)` samples, rescaled so `I(1-) = 1`.
    pub fn tabulated(samples: &[(f64, f64)]) -> Result<Self, ProfileError> {
        if samples.len() < 2 {
            return Err(ProfileError::Table("need at least two rows".into()));
        }
        for (i, w) in samples.windows(2).enumerate() {
            if !(w[1].0 > w[0].0) {
                return Err(ProfileError::Table(format!("t not increasing at row {}", i + 2)));
            }
        }
        for (i, &(t, v)) in samples.iter().enumerate() {
            if !(t > 0.0 && t <= 1.0 && v > 0.0 && v.is_finite()) {
                return Err(ProfileError::Table(format!("row {} outside t in (0,1], I > 0", i + 1)));
            }
        }
        let logt: Vec<f64> = samples.iter().map(|s| s.0.ln()).collect();
        let mut logi: Vec<f64> = samples.iter().map(|s| s.1.ln()).collect();
        let at_one = interp_loglog(&logt, &logi, 0.0);
        for v in &mut logi {
            *v -= at_one;
        }
        let knots = samples.iter().map(|s| s.0).filter(|&t| t < 1.0).collect();
        Ok(Self::build(Kind::Tabulated { logt, logi }, "tabulated".into(), knots))
    }

    pub fn tabulated_from_csv(text: &str) -> Result<Self, ProfileError> {
        let rows = read_pairs(text, "t", "I").map_err(|e| ProfileError::Table(e.to_string()))?;
        Self::tabulated(&rows)
    }

    pub fn tabulated_from_path(path: &Path) -> Result<Self, ProfileError> {
        let text = std::fs::read_to_string(path).map_err(|e| ProfileError::Table(e.to_string()))?;
        let p = Self::tabulated_from_csv(&text)?;
        let mut inner = Arc::try_unwrap(p.0).ok().expect("fresh profile");
        inner.name = format!("tab:{}", path.display());
        Ok(Profile(Arc::new(inner)))
    }

    /// Arbitrary positive function, rescaled so `I(1) = 1`.
    pub fn custom(name: impl Into<String>, f: F, knots: Vec<f64>) -> Result<Self, ProfileError> {
        let v1 = f(1.0);
        if !(v1.is_finite() && v1 > 0.0) {
            return Err(ProfileError::Normalisation);
        }
        Ok(Self::build(Kind::Custom { f, scale: 1.0 / v1 }, name.into(), knots))
    }

    /// `log 2 / log(2/t)`.
    pub fn log_ratio() -> Self {
        Self::custom("loglog", Arc::new(|t: f64| 2f64.ln() / (2.0 / t).ln()), vec![]).expect("valid")
    }

    /// `t log^a(2/t)`, normalised.
    pub fn t_log(a: f64) -> Self {
        Self::custom(format!("tlog({a})"), Arc::new(move |t: f64| t * (2.0 / t).ln().powf(a)), vec![])
            .expect("valid")
    }

    /// `t^p` for any `p > 0`, without the range check of [`Profile::power`].
    pub fn monomial(p: f64) -> Self {
        Self::custom(format!("monomial({p})"), Arc::new(move |t: f64| t.powf(p)), vec![]).expect("valid")
    }

    /// `Ĩ(t) = t / I(t)`.
    pub fn tilde(&self) -> Self {
        if let Kind::Power { alpha } = self.0.kind {
            if alpha < 1.0 {
                return Self::power(1.0 - alpha).expect("in range");
            }
        }
        if let Kind::Tilde(p) = &self.0.kind {
            return p.clone();
        }
        Self::build(Kind::Tilde(self.clone()), format!("tilde({})", self.0.name), self.0.knots.clone())
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }

    /// Exponent when this is a power profile.
    pub fn power_exponent(&self) -> Option<f64> {
        match self.0.kind {
            Kind::Power { alpha } => Some(alpha),
            _ => None,
        }
    }

    /// Points where the closed form changes.
    pub fn knots(&self) -> &[f64] {
        &self.0.knots
    }

    /// `I(t)`; `t = 1` gives `I(1-) = 1`.
    pub fn eval(&self, t: f64) -> f64 {
        match &self.0.kind {
            Kind::Power { alpha } => t.powf(*alpha),
            Kind::Product { phi, scale, join } => {
                if t <= 0.5 {
                    scale * t * phi.derivative(phi.inverse((2.0 / t).ln()))
                } else {
                    join + (1.0 - join) * (t - 0.5) * 2.0
                }
            }
            Kind::Tabulated { logt, logi } => interp_loglog(logt, logi, t.ln()).exp(),
            Kind::Custom { f, scale } => scale * f(t),
            Kind::Tilde(p) => t / p.eval(t),
        }
    }

    /// `I⁻¹(y)`: closed form for powers, otherwise bisection in `ln t` to 1e-12.
    pub fn inverse(&self, y: f64) -> Result<f64, ProfileError> {
        if !(y > 0.0 && y <= 1.0) {
            return Err(ProfileError::OutOfRange(y));
        }
        if let Kind::Power { alpha } = self.0.kind {
            return Ok(y.powf(1.0 / alpha));
        }
        if y >= self.eval(1.0) {
            return Ok(1.0);
        }
        let (mut lo, mut hi) = ((1e-300f64).ln(), 0.0f64);
        if self.eval(lo.exp()) >= y {
            return Ok(lo.exp());
        }
        while hi - lo > 1e-13 * lo.abs().max(1.0) {
            let mid = 0.5 * (lo + hi);
            if self.eval(mid.exp()) < y {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(hi.exp())
    }

    pub fn weight(&self, w: Weight, s: f64) -> f64 {
        let i = self.eval(s);
        match w {
            Weight::IOverS => i / s,
            Weight::RecipI => 1.0 / i,
            Weight::IOverS2 => i / s / s,
            Weight::IOverS3 => i / s / s / s,
            Weight::SOverI => s / i,
        }
    }

    /// `∫_a^b w(s) ds` for `0 < a <= b <= 1`.
    pub fn integral(&self, w: Weight, a: f64, b: f64) -> f64 {
        if !(b > a) {
            return 0.0;
        }
        if let Kind::Power { alpha } = self.0.kind {
            return power_integral(w.power_exponent(alpha) + 1.0, a, b);
        }
        let mut total = 0.0;
        let mut lo = a;
        for &k in self.0.knots.iter().filter(|&&k| k > a && k < b).chain(std::iter::once(&b)) {
            total += quad::integrate_log(|s| self.weight(w, s), lo, k, REL_TOL).value;
            lo = k;
        }
        total
    }

    /// `∫_0^t w(s) ds`, flagged divergent when infinite.
    pub fn integral_from_zero(&self, w: Weight, t: f64) -> Integral {
        if !(t > 0.0) {
            return Integral::finite(0.0);
        }
        if let Kind::Power { alpha } = self.0.kind {
            let k = w.power_exponent(alpha) + 1.0;
            return if k > 0.0 { Integral::finite(t.powf(k) / k) } else { Integral::infinite() };
        }
        let first = self.0.knots.first().copied().unwrap_or(1.0).min(t);
        let head = quad::integrate_from_zero(|s| self.weight(w, s), first, REL_TOL);
        if head.divergent {
            return head;
        }
        Integral::finite(head.value + self.integral(w, first, t))
    }

    /// `t² ∫_t^1 I(s)/s³ ds`, finite even where the unscaled tail overflows.
    pub fn tail3_scaled(&self, t: f64) -> f64 {
        if let Kind::Power { alpha } = self.0.kind {
            return power_excess(alpha, t) / (2.0 - alpha);
        }
        self.cell_tail3_scaled(t, 1.0)
    }

    /// `a² ∫_a^b I(s)/s³ ds`.
    pub fn cell_tail3_scaled(&self, a: f64, b: f64) -> f64 {
        if !(b > a) {
            return 0.0;
        }
        if let Kind::Power { alpha } = self.0.kind {
            let k = alpha - 2.0;
            // a^α · expm1(k ln(b/a)) / k
            return a.powf(alpha) * (k * (b / a).ln()).exp_m1() / k;
        }
        let mut total = 0.0;
        let mut lo = a;
        for &k in self.0.knots.iter().filter(|&&k| k > a && k < b).chain(std::iter::once(&b)) {
            total += quad::integrate_log(
                |s| {
                    let r = a / s;
                    self.eval(s) * r * r / s
                },
                lo,
                k,
                REL_TOL,
            )
            .value;
            lo = k;
        }
        total
    }

    /// `I(t) - t²` without cancellation for power profiles.
    pub fn excess_over_square(&self, t: f64) -> f64 {
        if let Kind::Power { alpha } = self.0.kind {
            return power_excess(alpha, t);
        }
        self.eval(t) - t * t
    }

    /// `lim_{t→0+} I(t)/t`, possibly infinite.
    pub fn slope_at_zero(&self) -> f64 {
        if let Kind::Power { alpha } = self.0.kind {
            return if alpha < 1.0 { f64::INFINITY } else { 1.0 };
        }
        let r1 = self.eval(1e-150) / 1e-150;
        let r2 = self.eval(1e-300) / 1e-300;
        if r2 > 1.01 * r1 {
            f64::INFINITY
        } else {
            r2
        }
    }

    /// Cached quasiconcavity verdict on the default grid.
    pub fn is_quasiconcave(&self) -> bool {
        self.quasiconcave_witness().is_none()
    }

    /// A point where quasiconcavity fails, if any.
    pub fn quasiconcave_witness(&self) -> Option<f64> {
        if let Kind::Power { .. } = self.0.kind {
            return None;
        }
        *self.0.quasiconcave.get_or_init(|| {
            let r = check_quasiconcave(self, 2000);
            (!r.passed).then_some(r.witness)
        })
    }

    pub fn require_quasiconcave(&self) -> Result<(), ProfileError> {
        match self.quasiconcave_witness() {
            None => Ok(()),
            Some(witness) => Err(ProfileError::NotQuasiconcave { witness }),
        }
    }
}

/// `t^α - t²`, accurate near `t = 1` and free of overflow near 0.
fn power_excess(alpha: f64, t: f64) -> f64 {
    if t > 0.5 {
        t * t * ((alpha - 2.0) * t.ln()).exp_m1()
    } else {
        t.powf(alpha) - t * t
    }
}

fn interp_loglog(logt: &[f64], logi: &[f64], x: f64) -> f64 {
    let n = logt.len();
    let k = logt.partition_point(|&p| p <= x).clamp(1, n - 1) - 1;
    let s = (x - logt[k]) / (logt[k + 1] - logt[k]);
    logi[k] + s * (logi[k + 1] - logi[k])
}
