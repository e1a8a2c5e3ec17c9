use rayon::prelude::*;
use serde::Serialize;

use crate::functions::{step_to_csv, StepFunction};

/// Relative change of a bracket end allowed when the corpus is doubled.
pub const STABILITY_TOL: f64 = 0.05;

/// Two-sided comparison of functionals `A` and `B` over a corpus.
///
/// Members where both vanish (or both are infinite) are excluded; members
/// where exactly one side is zero or infinite are equivalence failures.
#[derive(Debug, Clone, Serialize)]
pub struct EquivalenceReport {
    pub a: String,
    pub b: String,
    pub ratios: Vec<Option<f64>>,
    pub min: f64,
    pub max: f64,
    pub argmin: Option<usize>,
    pub argmax: Option<usize>,
    pub half_min: f64,
    pub half_max: f64,
    pub excluded: usize,
    pub mismatches: Vec<usize>,
    pub stable: bool,
    /// CSV of the worst member: the first mismatch, else the arg-max.
    pub witness: Option<String>,
}

impl EquivalenceReport {
    pub fn equivalent(&self) -> bool {
        self.mismatches.is_empty() && self.min > 0.0 && self.max.is_finite() && self.stable
    }

    /// Largest of `max` and `1/min`.
    pub fn spread(&self) -> f64 {
        self.max.max(1.0 / self.min)
    }
}

fn bracket(ratios: &[Option<f64>]) -> (f64, f64, Option<usize>, Option<usize>) {
    let (mut min, mut max, mut argmin, mut argmax) = (f64::INFINITY, 0.0f64, None, None);
    for (k, r) in ratios.iter().enumerate() {
        if let Some(r) = *r {
            if r < min {
                min = r;
                argmin = Some(k);
            }
            if r > max {
                max = r;
                argmax = Some(k);
            }
        }
    }
    (min, max, argmin, argmax)
}

fn rel_change(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

/// Compares on `members`, and for stability against its first half.
pub fn compare_functionals<A, B>(a_name: &str, a: A, b_name: &str, b: B, members: &[StepFunction]) -> EquivalenceReport
where
    A: Fn(&StepFunction) -> f64 + Sync,
    B: Fn(&StepFunction) -> f64 + Sync,
{
    let values: Vec<(f64, f64)> = members.par_iter().map(|f| (a(f), b(f))).collect();
    let mut ratios = Vec::with_capacity(values.len());
    let mut excluded = 0;
    let mut mismatches = Vec::new();
    for (k, &(x, y)) in values.iter().enumerate() {
        if (x == 0.0 && y == 0.0) || (x.is_infinite() && y.is_infinite()) {
            excluded += 1;
            ratios.push(None);
        } else if x.is_nan() || y.is_nan() || !(x.is_finite() && y.is_finite()) || x == 0.0 || y == 0.0 {
            mismatches.push(k);
            ratios.push(None);
        } else {
            ratios.push(Some(x / y));
        }
    }
    let (min, max, argmin, argmax) = bracket(&ratios);
    let (half_min, half_max, _, _) = bracket(&ratios[..ratios.len().div_ceil(2)]);
    let stable = rel_change(min, half_min) < STABILITY_TOL && rel_change(max, half_max) < STABILITY_TOL;
    let worst = mismatches.first().copied().or(argmax);
    EquivalenceReport {
        a: a_name.to_string(),
        b: b_name.to_string(),
        ratios,
        min,
        max,
        argmin,
        argmax,
        half_min,
        half_max,
        excluded,
        mismatches,
        stable,
        witness: worst.map(|k| step_to_csv(&members[k])),
    }
}
