//! Supremum operators `S_I`, `T_I`, Hardy-type operators `H_I`, `R_I`, `R'`,
//! the auxiliary operator `H`, and `G_I = sup_{s>=t} R_I f*(s)`.
//!
//! Outputs are [`EvalFunction`]s with closed forms on the pieces of the
//! input (or of its rearrangement) and an evaluation floor of
//! [`OPERATOR_FLOOR`].

use std::sync::Arc;

use rayon::prelude::*;

use crate::error::OperatorError;
use crate::functions::{
    log_grid, merge_points, refine_dyadic, star_pieces, EvalFunction, GridFunction, Monotonicity, Piece,
    StepFunction, GRID_REL_TOL, OPERATOR_FLOOR,
};
use crate::profiles::{Profile, Weight};
use crate::quad;

const NONINC: Monotonicity = Monotonicity::Nonincreasing;

/// `S_I f(t) = (1/I(t)) sup_{s<=t} I(s) f*(s)`.
pub fn apply_si(p: &Profile, f: &StepFunction) -> EvalFunction {
    let sp = star_pieces(f);
    let mut running = 0.0f64;
    let mut pieces = Vec::with_capacity(sp.len());
    for s in &sp {
        let (m, v) = (running, s.value);
        let pc = p.clone();
        pieces.push(Piece::new(s.start, s.end, NONINC, Arc::new(move |t| (m / pc.eval(t)).max(v))));
        running = running.max(v * p_eval_end(p, s.end));
    }
    EvalFunction::new(pieces, NONINC, "S_I").with_floor(OPERATOR_FLOOR).with_limit_at_zero(sp[0].value)
}

fn p_eval_end(p: &Profile, b: f64) -> f64 {
    if b >= 1.0 {
        1.0
    } else {
        p.eval(b)
    }
}

/// `T_I f(t) = (I(t)/t) sup_{s>=t} (s/I(s)) f*(s)`; requires a quasiconcave profile.
pub fn apply_ti(p: &Profile, f: &StepFunction) -> Result<EvalFunction, OperatorError> {
    p.require_quasiconcave()?;
    let sp = star_pieces(f);
    let mut suffix = vec![0.0f64; sp.len() + 1];
    for i in (0..sp.len()).rev() {
        let b = sp[i].end;
        suffix[i] = suffix[i + 1].max(sp[i].value * b / p_eval_end(p, b));
    }
    let pieces = sp
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let (m, p) = (suffix[i], p.clone());
            Piece::new(s.start, s.end, NONINC, Arc::new(move |t| p.eval(t) / t * m))
        })
        .collect();
    let at_zero = if suffix[0] == 0.0 { 0.0 } else { suffix[0] * p.slope_at_zero() };
    Ok(EvalFunction::new(pieces, NONINC, "T_I").with_floor(OPERATOR_FLOOR).with_limit_at_zero(at_zero))
}

/// `H_I f(t) = ∫_t^1 f(s)/I(s) ds`, iterated `m` times.
///
/// The first application is exact on the pieces of `f`; further ones are
/// composed on a dyadically refined grid with cubic Hermite interpolation.
pub fn apply_hi(p: &Profile, f: &StepFunction, m: u32) -> Result<EvalFunction, OperatorError> {
    if m == 0 {
        return Err(OperatorError::ZeroIterations);
    }
    let mut g = hardy_once(p, f);
    for _ in 1..m {
        g = hardy_eval(p, &g, f.breakpoints());
    }
    Ok(g)
}

fn hardy_once(p: &Profile, f: &StepFunction) -> EvalFunction {
    let n = f.num_pieces();
    let mut suffix = vec![0.0f64; n + 1];
    for i in (0..n).rev() {
        let v = f.values()[i];
        let part = if v == 0.0 || i == 0 { 0.0 } else { v * p.integral(Weight::RecipI, f.start(i), f.end(i)) };
        suffix[i] = suffix[i + 1] + part;
    }
    let pieces = f
        .pieces()
        .enumerate()
        .map(|(i, (_, b, v))| {
            let (tail, p) = (suffix[i + 1], p.clone());
            Piece::new(f.start(i), b, NONINC, Arc::new(move |t| if v == 0.0 { tail } else { v * p.integral(Weight::RecipI, t, b) + tail }))
        })
        .collect();
    let v0 = f.values()[0];
    let head = if v0 == 0.0 { 0.0 } else { v0 * p.integral_from_zero(Weight::RecipI, f.end(0)).value };
    EvalFunction::new(pieces, NONINC, "H_I").with_floor(OPERATOR_FLOOR).with_limit_at_zero(head + suffix[1])
}

fn hardy_eval(p: &Profile, g: &EvalFunction, knots: &[f64]) -> EvalFunction {
    let build = |grid: &[f64]| {
        let cells: Vec<f64> = grid
            .par_windows(2)
            .map(|c| quad::integrate_log(|s| g.eval_unchecked(s) / p.eval(s), c[0], c[1], 1e-12).value)
            .collect();
        let n = grid.len();
        let mut v = vec![0.0; n];
        for k in (0..n - 1).rev() {
            v[k] = v[k + 1] + cells[k];
        }
        let d = grid.iter().map(|&t| -g.eval_unchecked(t) / p.eval(t)).collect();
        GridFunction::new(grid.to_vec(), v, Some(d))
    };
    let mut grid = merge_points(&log_grid(OPERATOR_FLOOR, 1.0, 512), knots);
    let mut cur = build(&grid);
    for _ in 0..6 {
        let finer = refine_dyadic(&grid);
        let next = build(&finer);
        let change = grid
            .iter()
            .map(|&t| {
                let (a, b) = (cur.interpolate(t), next.interpolate(t));
                if a == b { 0.0 } else { (a - b).abs() / b.abs().max(1e-300) }
            })
            .fold(0.0, f64::max);
        grid = finer;
        cur = next;
        if change < GRID_REL_TOL {
            break;
        }
    }
    let at_zero = cur.values()[0]
        + quad::integrate_from_zero(|s| g.eval_unchecked(s) / p.eval(s), OPERATOR_FLOOR, 1e-10).value;
    let cur = Arc::new(cur);
    EvalFunction::from_fn(Arc::new(move |t| cur.interpolate(t)), knots, NONINC, "H_I^m")
        .with_floor(OPERATOR_FLOOR)
        .with_limit_at_zero(at_zero)
}

/// `R_I f(t) = (1/I(t)) ∫_0^t f`.
pub fn apply_ri(p: &Profile, f: &StepFunction) -> EvalFunction {
    let cum = f.cumulative();
    let alpha = p.power_exponent();
    let mut pieces = Vec::new();
    for (i, (a, b, v)) in f.pieces().enumerate() {
        let base = cum[i];
        let pc = p.clone();
        let formula: crate::functions::Formula = Arc::new(move |t| (base + v * (t - a)) / pc.eval(t));
        // For t^α the quotient (A + v t)/t^α decreases up to αA/((1-α)v), then increases.
        match alpha {
            Some(al) => {
                let big_a = base - v * a;
                let turn = if v > 0.0 && al < 1.0 { al * big_a / ((1.0 - al) * v) } else if big_a >= 0.0 { f64::INFINITY } else { 0.0 };
                if turn > a && turn < b {
                    pieces.push(Piece::new(a, turn, NONINC, formula.clone()));
                    pieces.push(Piece::new(turn, b, Monotonicity::Nondecreasing, formula));
                } else if turn >= b {
                    pieces.push(Piece::new(a, b, NONINC, formula));
                } else {
                    pieces.push(Piece::new(a, b, Monotonicity::Nondecreasing, formula));
                }
            }
            None => pieces.push(Piece::new(a, b, Monotonicity::Unknown, formula)),
        }
    }
    let at_zero = f.values()[0] / p.slope_at_zero();
    EvalFunction::new(pieces, Monotonicity::Unknown, "R_I").with_floor(OPERATOR_FLOOR).with_limit_at_zero(at_zero)
}

/// `G_I f(t) = sup_{s>=t} R_I f*(s)`, maximised per piece of `f*` by
/// golden-section search.
pub fn apply_gi(p: &Profile, f: &StepFunction) -> EvalFunction {
    let sp = star_pieces(f);
    let peaks: Vec<(f64, f64)> = sp
        .iter()
        .map(|s| {
            let s = *s;
            let pc = p.clone();
            let h = move |x: f64| s.primitive(x) / pc.eval(x);
            let lo = if s.start > 0.0 { s.start } else { s.end * 1e-12 };
            quad::sup_on(&h, lo, s.end, 16)
        })
        .collect();
    let mut suffix = vec![0.0f64; sp.len() + 1];
    for i in (0..sp.len()).rev() {
        suffix[i] = suffix[i + 1].max(peaks[i].1);
    }
    let pieces = sp
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let s = *s;
            let (peak, later, pc) = (peaks[i], suffix[i + 1], p.clone());
            let hb = s.primitive(s.end) / p_eval_end(p, s.end);
            Piece::new(
                s.start,
                s.end,
                NONINC,
                Arc::new(move |t| {
                    let mut v = (s.primitive(t) / pc.eval(t)).max(hb).max(later);
                    if peak.0 >= t {
                        v = v.max(peak.1);
                    }
                    v
                }),
            )
        })
        .collect();
    EvalFunction::new(pieces, NONINC, "G_I").with_floor(OPERATOR_FLOOR).with_limit_at_zero(suffix[0])
}

/// `H g(s) = (s/I(s)) ∫_s^1 (I(t)/t²) g(t) dt`.
pub fn apply_h_aux(p: &Profile, g: &StepFunction) -> EvalFunction {
    let n = g.num_pieces();
    let mut suffix = vec![0.0f64; n + 1];
    for i in (1..n).rev() {
        suffix[i] = suffix[i + 1] + g.values()[i] * p.integral(Weight::IOverS2, g.start(i), g.end(i));
    }
    let pieces = g
        .pieces()
        .enumerate()
        .map(|(i, (a, b, v))| {
            let (tail, pc) = (suffix[i + 1], p.clone());
            Piece::new(a, b, Monotonicity::Unknown, Arc::new(move |s| s / pc.eval(s) * (v * pc.integral(Weight::IOverS2, s, b) + tail)))
        })
        .collect();
    EvalFunction::new(pieces, Monotonicity::Unknown, "H").with_floor(OPERATOR_FLOOR)
}

/// `R' f(t) = ∫_0^t (s/I(s)) f*(s) ds / ∫_0^t s/I(s) ds`.
pub fn apply_r_prime(p: &Profile, f: &StepFunction) -> EvalFunction {
    let sp = star_pieces(f);
    let mut before = Vec::with_capacity(sp.len());
    let mut acc = 0.0;
    for s in &sp {
        before.push(acc);
        let w = if s.start == 0.0 { p.integral_from_zero(Weight::SOverI, s.end).value } else { p.integral(Weight::SOverI, s.start, s.end) };
        acc += s.value * w;
    }
    let pieces = sp
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let (num0, v, a, pc) = (before[i], s.value, s.start, p.clone());
            Piece::new(
                s.start,
                s.end,
                NONINC,
                Arc::new(move |t| {
                    if a == 0.0 {
                        v
                    } else {
                        (num0 + v * pc.integral(Weight::SOverI, a, t)) / pc.integral_from_zero(Weight::SOverI, t).value
                    }
                }),
            )
        })
        .collect();
    EvalFunction::new(pieces, NONINC, "R'").with_floor(OPERATOR_FLOOR).with_limit_at_zero(sp[0].value)
}

/// `S_I` applied to a nonincreasing evaluable function, via a running
/// maximum of `I g` over a grid that includes the knots and their left limits.
pub fn apply_si_eval(p: &Profile, g: &EvalFunction) -> EvalFunction {
    let lo = g.floor().max(OPERATOR_FLOOR);
    let grid = merge_points(&log_grid(lo, 1.0, 4096), &g.knots());
    let mut running = Vec::with_capacity(grid.len());
    let mut m = 0.0f64;
    let pieces = g.pieces();
    for &t in &grid {
        m = m.max(p.eval(t) * g.eval_unchecked(t));
        if let Some(prev) = pieces.iter().find(|q| q.end == t) {
            m = m.max(p.eval(t) * prev.at(t));
        }
        running.push(m);
    }
    let (grid, running, pc, gc) = (Arc::new(grid), Arc::new(running), p.clone(), g.clone());
    let formula = Arc::new(move |t: f64| {
        let k = grid.partition_point(|&x| x <= t);
        let before = if k == 0 { 0.0 } else { running[k - 1] };
        let it = pc.eval(t);
        before.max(it * gc.eval_unchecked(t)) / it
    });
    EvalFunction::from_fn(formula, &g.knots(), NONINC, "S_I")
        .with_floor(lo)
        .with_limit_at_zero(g.limit_at_zero())
}
