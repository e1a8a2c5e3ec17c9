use rayon::prelude::*;
use serde::Serialize;

use crate::functions::{step_to_csv, StepFunction};
use crate::profiles::Profile;

/// `sup_{0<s<=I⁻¹(t)} I(s) f*(s)`.
pub fn k_formula(i: &Profile, f: &StepFunction, t: f64) -> f64 {
    let s = i.inverse(t).unwrap_or(1.0);
    let r = f.rearrange();
    r.pieces().filter(|&(a, _, _)| a < s).map(|(_, b, v)| v * i.eval(b.min(s))).fold(0.0, f64::max)
}

fn m_norm_excess(i: &Profile, f: &StepFunction, lambda: f64) -> f64 {
    f.rearrange().pieces().map(|(_, b, v)| i.eval(b) * (v - lambda).max(0.0)).fold(0.0, f64::max)
}

/// `‖f₁‖_{m_I} + t ‖f₀‖_∞` for the optimal decomposition at `I⁻¹(t)`.
pub fn k_upper(i: &Profile, f: &StepFunction, t: f64) -> f64 {
    let s = i.inverse(t).unwrap_or(1.0);
    let level = f.rearrange().eval(s);
    m_norm_excess(i, f, level) + t * level.min(f.sup())
}

/// Minimum of `‖(f - λ)₊‖_{m_I} + t min(λ, ‖f‖_∞)` over threshold splits.
///
/// The objective is convex and piecewise linear in `λ`, so the minimum is
/// attained at a value of `f*` or where two of the lines `I(b_j)(v_j - λ)`
/// cross; a uniform sweep is added as a safeguard.
pub fn k_brute(i: &Profile, f: &StepFunction, t: f64) -> f64 {
    let r = f.rearrange();
    let lines: Vec<(f64, f64)> = r.pieces().map(|(_, b, v)| (i.eval(b), v)).collect();
    let top = f.sup();
    let mut cands: Vec<f64> = vec![0.0, top];
    cands.extend(lines.iter().map(|l| l.1));
    for (j, &(ij, vj)) in lines.iter().enumerate() {
        for &(ik, vk) in &lines[j + 1..] {
            if ij != ik {
                cands.push((ij * vj - ik * vk) / (ij - ik));
            }
        }
    }
    cands.extend((0..=64).map(|k| top * k as f64 / 64.0));
    let cost = |lam: f64| lines.iter().map(|&(il, v)| il * (v - lam).max(0.0)).fold(0.0, f64::max) + t * lam.min(top);
    cands.into_iter().filter(|l| l.is_finite() && *l >= 0.0 && *l <= top).map(cost).fold(f64::INFINITY, f64::min)
}

#[derive(Debug, Clone, Serialize)]
pub struct KReport {
    pub pairs: usize,
    /// `max K_upper / formula`; at most 2.
    pub upper_ratio: f64,
    /// `max formula / K_brute`: how far threshold splits fall below the formula.
    pub brute_constant: f64,
    pub witness: Option<String>,
    pub witness_t: f64,
}

/// Upper and brute-force checks of `K(f, t; m_I, L∞) ≈ sup_{s<=I⁻¹(t)} I(s) f*(s)`.
pub fn kfunctional_check(i: &Profile, members: &[StepFunction], ts: &[f64]) -> KReport {
    let rows: Vec<(usize, f64, f64, f64)> = members
        .par_iter()
        .enumerate()
        .flat_map_iter(|(k, f)| {
            ts.iter().map(move |&t| {
                let formula = k_formula(i, f, t);
                (k, t, formula, if formula > 0.0 { k_upper(i, f, t) / formula } else { 1.0 })
            })
        })
        .map(|(k, t, formula, up)| {
            let brute = k_brute(i, &members[k], t);
            let c = if formula == 0.0 { 1.0 } else { formula / brute };
            (k, t, up, c)
        })
        .collect();
    let mut report = KReport { pairs: rows.len(), upper_ratio: 0.0, brute_constant: 0.0, witness: None, witness_t: f64::NAN };
    for &(k, t, up, c) in &rows {
        if up > report.upper_ratio {
            report.upper_ratio = up;
            report.witness = Some(step_to_csv(&members[k]));
            report.witness_t = t;
        }
        report.brute_constant = report.brute_constant.max(c);
    }
    report
}
