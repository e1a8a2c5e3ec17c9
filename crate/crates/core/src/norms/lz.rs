use std::sync::{Arc, OnceLock};

use serde::Serialize;

use crate::functions::GridFunction;
use crate::quad;

/// Whether a Lorentz-Zygmund parameter set defines an r.i. norm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Admissibility {
    Norm,
    /// Outside the known admissible ranges; the value is a quasinorm at best.
    Inadmissible,
}

/// `‖t^{1/p-1/q} ℓ1^β ℓ2^γ f*(t)‖_{L^q(dt/t)}` data, `ℓ1 = 1 + |log t|`,
/// `ℓ2 = 1 + log ℓ1`.
#[derive(Clone, Debug)]
pub struct Lz {
    pub p: f64,
    pub q: f64,
    pub beta: f64,
    pub gamma: f64,
    table: Arc<OnceLock<Option<GridFunction>>>,
}

pub fn l1(t: f64) -> f64 {
    1.0 - t.ln()
}

pub fn l2(t: f64) -> f64 {
    1.0 + l1(t).ln()
}

impl Lz {
    pub fn new(p: f64, q: f64, beta: f64, gamma: f64) -> Self {
        Lz { p, q, beta, gamma, table: Arc::new(OnceLock::new()) }
    }

    /// `p = q = 1, β >= 0`; `1 < p < ∞`; `p = ∞, q < ∞` with `β + 1/q < 0`;
    /// `p = q = ∞, β <= 0`. For `γ ≠ 0` the borderline `β` cases are decided by `γ`.
    pub fn admissibility(&self) -> Admissibility {
        let (p, q, b, g) = (self.p, self.q, self.beta, self.gamma);
        let ok = if !(p >= 1.0 && q >= 1.0) {
            false
        } else if p == 1.0 {
            q == 1.0 && (b > 0.0 || (b == 0.0 && g >= 0.0))
        } else if p.is_finite() {
            true
        } else if q.is_finite() {
            b + 1.0 / q < 0.0 || (b + 1.0 / q == 0.0 && g + 1.0 / q < 0.0)
        } else {
            b < 0.0 || (b == 0.0 && g <= 0.0)
        };
        if ok {
            Admissibility::Norm
        } else {
            Admissibility::Inadmissible
        }
    }

    /// `φ(t) = t^{q/p-1} ℓ1^{βq} ℓ2^{γq}` for `q < ∞`.
    pub fn density(&self, t: f64) -> f64 {
        let q = self.q;
        let mut w = t.powf(q / self.p - 1.0);
        if self.beta != 0.0 {
            w *= l1(t).powf(self.beta * q);
        }
        if self.gamma != 0.0 {
            w *= l2(t).powf(self.gamma * q);
        }
        w
    }

    /// `ω(t) = t^{1/p} ℓ1^β ℓ2^γ` for `q = ∞`.
    pub fn sup_weight(&self, t: f64) -> f64 {
        let mut w = if self.p.is_finite() { t.powf(1.0 / self.p) } else { 1.0 };
        if self.beta != 0.0 {
            w *= l1(t).powf(self.beta);
        }
        if self.gamma != 0.0 {
            w *= l2(t).powf(self.gamma);
        }
        w
    }

    /// `lim_{t→0+} ω(t)`.
    pub fn sup_weight_at_zero(&self) -> f64 {
        if self.p.is_finite() || self.beta < 0.0 || (self.beta == 0.0 && self.gamma < 0.0) {
            0.0
        } else if self.beta == 0.0 && self.gamma == 0.0 {
            1.0
        } else {
            f64::INFINITY
        }
    }

    /// `W(u) = ∫_0^u φ`, infinite when `φ` is not integrable at the origin.
    pub fn primitive(&self, u: f64) -> f64 {
        if !(u > 0.0) {
            return 0.0;
        }
        let (p, q, bq, gq) = (self.p, self.q, self.beta * self.q, self.gamma * self.q);
        if p.is_finite() {
            if bq == 0.0 && gq == 0.0 {
                return p / q * u.powf(q / p);
            }
            return quad::integrate_from_zero(|t| self.density(t), u, 1e-12).value;
        }
        // In v = ℓ1(t): ∫_{ℓ1(u)}^∞ v^{βq} (1 + ln v)^{γq} dv.
        if bq > -1.0 || (bq == -1.0 && gq >= -1.0) {
            return f64::INFINITY;
        }
        if gq == 0.0 {
            return l1(u).powf(bq + 1.0) / (-bq - 1.0);
        }
        if bq == -1.0 {
            return l2(u).powf(gq + 1.0) / (-gq - 1.0);
        }
        // v = ℓ1(u)/x makes the tail a power of x, which the shell sum handles.
        let v0 = l1(u);
        let r = quad::integrate_from_zero(
            |x: f64| {
                let v = v0 / x;
                v.powf(bq + 1.0) * (1.0 + v.ln()).powf(gq) / x
            },
            1.0,
            1e-12,
        );
        r.value
    }

    /// `∫_a^b φ` for `0 < a < b <= 1`.
    pub fn cell(&self, a: f64, b: f64) -> f64 {
        if !(b > a) {
            return 0.0;
        }
        if self.p.is_finite() && self.beta == 0.0 && self.gamma == 0.0 {
            let k = self.q / self.p;
            return a.powf(k) * (k * (b / a).ln()).exp_m1() / k;
        }
        quad::integrate_log(|t| self.density(t), a, b, 1e-12).value
    }

    /// Tabulated `W`, interpolated as `ln W` against `x = ln ℓ1(u)` with
    /// exact slopes; the variable `x` resolves both the power and the
    /// logarithmic regimes.
    pub fn primitive_fast(&self, u: f64) -> f64 {
        let table = self.table.get_or_init(|| self.build_table());
        match table {
            None => f64::INFINITY,
            Some(g) => {
                if u <= 0.0 {
                    0.0
                } else if u < TABLE_MIN {
                    self.primitive(u)
                } else {
                    g.interpolate(l1(u).ln()).exp()
                }
            }
        }
    }

    fn build_table(&self) -> Option<GridFunction> {
        let x_max = l1(TABLE_MIN).ln();
        let xs: Vec<f64> = (0..TABLE_POINTS).map(|k| x_max * k as f64 / (TABLE_POINTS - 1) as f64).collect();
        // Ascending x is descending u; accumulate W from the smallest u.
        let us: Vec<f64> = xs.iter().map(|&x| if x == 0.0 { 1.0 } else { (1.0 - x.exp()).exp() }).collect();
        let n = us.len();
        let w_min = self.primitive(us[n - 1]);
        if !w_min.is_finite() {
            return None;
        }
        let mut w = vec![0.0; n];
        w[n - 1] = w_min;
        for k in (0..n - 1).rev() {
            w[k] = w[k + 1] + self.cell(us[k + 1], us[k]);
        }
        let ys: Vec<f64> = w.iter().map(|v| v.ln()).collect();
        let ds: Vec<f64> = us.iter().zip(&w).map(|(&u, &v)| -u * self.density(u) / v * l1(u)).collect();
        Some(GridFunction::new(xs, ys, Some(ds)))
    }
}

const TABLE_MIN: f64 = 1e-290;
const TABLE_POINTS: usize = 3000;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn admissibility_table() {
        assert_eq!(Lz::new(1.0, 1.0, 0.0, 0.0).admissibility(), Admissibility::Norm);
        assert_eq!(Lz::new(1.0, 2.0, 0.0, 0.0).admissibility(), Admissibility::Inadmissible);
        assert_eq!(Lz::new(2.0, 7.0, -3.0, 0.0).admissibility(), Admissibility::Norm);
        assert_eq!(Lz::new(f64::INFINITY, 2.0, -1.0, 0.0).admissibility(), Admissibility::Norm);
        assert_eq!(Lz::new(f64::INFINITY, 2.0, 0.0, 0.0).admissibility(), Admissibility::Inadmissible);
        assert_eq!(Lz::new(f64::INFINITY, 2.0, -0.5, -1.0).admissibility(), Admissibility::Norm);
        assert_eq!(Lz::new(f64::INFINITY, f64::INFINITY, 0.0, 0.0).admissibility(), Admissibility::Norm);
        assert_eq!(Lz::new(f64::INFINITY, f64::INFINITY, 0.5, 0.0).admissibility(), Admissibility::Inadmissible);
    }

    #[test]
    fn primitive_closed_forms_match_quadrature() {
        let lz = Lz::new(f64::INFINITY, 2.0, -1.0, 0.0);
        let u = 0.3;
        let exact = l1(u).powf(-1.0);
        assert!((lz.primitive(u) - exact).abs() < 1e-14);
        let lz = Lz::new(f64::INFINITY, 2.0, -0.5, -1.0);
        assert!((lz.primitive(u) - 1.0 / l2(u)).abs() < 1e-14);
        let lz = Lz::new(f64::INFINITY, 2.0, -1.0, 0.5);
        let num = lz.primitive(u);
        // ∫_{ℓ1}^∞ v^{-2} (1 + ln v) dv = (2 + ln ℓ1)/ℓ1
        let exact = (2.0 + l1(u).ln()) / l1(u);
        assert!((num - exact).abs() < 1e-9 * exact, "{num} {exact}");
        let lz = Lz::new(3.0, 2.0, 0.5, 0.0);
        let direct = quad::integrate_log(|t| lz.density(t), 1e-200, u, 1e-13).value;
        assert!((lz.primitive(u) - direct).abs() < 1e-9 * direct);
    }

    #[test]
    fn table_matches_primitive() {
        let lz = Lz::new(f64::INFINITY, 2.0, -1.0, 0.5);
        for &u in &[1e-100, 1e-7, 0.013, 0.5, 0.999] {
            let a = lz.primitive_fast(u);
            let b = lz.primitive(u);
            assert!((a - b).abs() < 1e-10 * b, "{u}: {a} {b}");
        }
    }
}
