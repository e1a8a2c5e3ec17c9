use std::sync::Arc;

use crate::functions::{EvalFunction, Monotonicity, Piece, StepFunction};

/// Piece of `f*` with the primitive of `f*` at its left end.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StarPiece {
    pub start: f64,
    pub end: f64,
    pub value: f64,
    pub mass_before: f64,
}

impl StarPiece {
    /// `∫_0^t f*` for `t` in this piece.
    pub fn primitive(&self, t: f64) -> f64 {
        self.mass_before + self.value * (t - self.start)
    }

    /// `D` in `f**(t) - f*(t) = D / t` on this piece; never negative.
    pub fn oscillation_mass(&self) -> f64 {
        (self.mass_before - self.value * self.start).max(0.0)
    }
}

pub fn star_pieces(f: &StepFunction) -> Vec<StarPiece> {
    let r = f.rearrange();
    let cum = r.cumulative();
    r.pieces()
        .enumerate()
        .map(|(i, (a, b, v))| StarPiece { start: a, end: b, value: v, mass_before: cum[i] })
        .collect()
}

/// `f**(t) = (1/t) ∫_0^t f*`, exactly `v + D/t` on each piece of `f*`.
pub fn maximal_fn(f: &StepFunction) -> EvalFunction {
    let sp = star_pieces(f);
    let top = sp[0].value;
    let pieces = sp
        .iter()
        .map(|p| {
            let (v, d) = (p.value, p.oscillation_mass());
            Piece::new(p.start, p.end, Monotonicity::Nonincreasing, Arc::new(move |t| v + d / t))
        })
        .collect();
    EvalFunction::new(pieces, Monotonicity::Nonincreasing, "maximal").with_limit_at_zero(top)
}

/// `f** - f*`, exactly `D/t` on each piece of `f*`.
pub fn oscillation(f: &StepFunction) -> EvalFunction {
    let sp = star_pieces(f);
    let pieces = sp
        .iter()
        .map(|p| {
            let d = p.oscillation_mass();
            Piece::new(p.start, p.end, Monotonicity::Nonincreasing, Arc::new(move |t| d / t))
        })
        .collect();
    EvalFunction::new(pieces, Monotonicity::Unknown, "oscillation").with_limit_at_zero(0.0)
}
