use std::borrow::Cow;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::functions::StepFunction;

pub type Formula = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Monotonicity of a whole function or of one of its pieces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Monotonicity {
    Nonincreasing,
    Nondecreasing,
    Unknown,
}

/// One closed-form piece on `[start, end)`.
#[derive(Clone)]
pub struct Piece {
    pub start: f64,
    pub end: f64,
    pub shape: Monotonicity,
    formula: Formula,
}

impl Piece {
    pub fn new(start: f64, end: f64, shape: Monotonicity, formula: Formula) -> Self {
        Piece { start, end, shape, formula }
    }

    pub fn at(&self, t: f64) -> f64 {
        (self.formula)(t)
    }
}

impl fmt::Debug for Piece {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Piece[{}, {}) {:?}", self.start, self.end, self.shape)
    }
}

/// Function on `(0, 1)` given piecewise by closed forms.
///
/// Values are only reported for `t >= floor`; below it `eval` returns `None`.
/// Evaluation at `t = 1` returns the left limit.
#[derive(Clone, Debug)]
pub struct EvalFunction {
    pieces: Arc<[Piece]>,
    monotonicity: Monotonicity,
    provenance: Cow<'static, str>,
    floor: f64,
    at_zero: f64,
}

/// Smallest argument at which operator outputs are reported.
pub const OPERATOR_FLOOR: f64 = 1e-9;

impl EvalFunction {
    pub fn new(
        pieces: Vec<Piece>,
        monotonicity: Monotonicity,
        provenance: impl Into<Cow<'static, str>>,
    ) -> Self {
        assert!(!pieces.is_empty());
        assert_eq!(pieces[0].start, 0.0);
        assert_eq!(pieces[pieces.len() - 1].end, 1.0);
        let first = &pieces[0];
        let probe = (first.end * 1e-3).min(1e-300_f64.max(first.end * 1e-12));
        let at_zero = first.at(probe);
        EvalFunction { pieces: pieces.into(), monotonicity, provenance: provenance.into(), floor: 0.0, at_zero }
    }

    /// One formula on all of `(0, 1)` with the given knots for quadrature splitting.
    pub fn from_fn(
        formula: Formula,
        knots: &[f64],
        monotonicity: Monotonicity,
        provenance: impl Into<Cow<'static, str>>,
    ) -> Self {
        let mut edges = vec![0.0];
        edges.extend(knots.iter().copied().filter(|&k| k > 0.0 && k < 1.0));
        edges.push(1.0);
        let pieces = edges
            .windows(2)
            .map(|w| Piece::new(w[0], w[1], monotonicity, formula.clone()))
            .collect();
        Self::new(pieces, monotonicity, provenance)
    }

    pub fn from_step(f: &StepFunction) -> Self {
        let mono = if f.is_nonincreasing() { Monotonicity::Nonincreasing } else { Monotonicity::Unknown };
        let pieces = f
            .pieces()
            .map(|(a, b, v)| Piece::new(a, b, Monotonicity::Nonincreasing, Arc::new(move |_| v)))
            .collect();
        Self::new(pieces, mono, "step")
    }

    pub fn with_floor(mut self, floor: f64) -> Self {
        self.floor = floor;
        self
    }

    /// Overrides the limit at `0+` (may be infinite).
    pub fn with_limit_at_zero(mut self, v: f64) -> Self {
        self.at_zero = v;
        self
    }

    pub fn eval(&self, t: f64) -> Option<f64> {
        if !(t > 0.0 && t <= 1.0) || t < self.floor {
            return None;
        }
        Some(self.eval_unchecked(t))
    }

    pub fn eval_unchecked(&self, t: f64) -> f64 {
        let i = self.pieces.partition_point(|p| p.end <= t).min(self.pieces.len() - 1);
        self.pieces[i].at(t)
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn knots(&self) -> Vec<f64> {
        self.pieces[1..].iter().map(|p| p.start).collect()
    }

    pub fn monotonicity(&self) -> Monotonicity {
        self.monotonicity
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn floor(&self) -> f64 {
        self.floor
    }

    pub fn limit_at_zero(&self) -> f64 {
        self.at_zero
    }

    /// True when every piece has a known direction of monotonicity.
    pub fn piecewise_monotone(&self) -> bool {
        self.pieces.iter().all(|p| p.shape != Monotonicity::Unknown)
    }

    /// `c · self` for `c >= 0`.
    pub fn scaled(&self, c: f64) -> Self {
        let pieces = self
            .pieces
            .iter()
            .map(|p| {
                let q = p.clone();
                Piece::new(p.start, p.end, p.shape, Arc::new(move |t| c * q.at(t)))
            })
            .collect();
        let mut out = Self::new(pieces, self.monotonicity, self.provenance.clone());
        out.floor = self.floor;
        out.at_zero = c * self.at_zero;
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floor_hides_small_arguments() {
        let g = EvalFunction::from_fn(Arc::new(|t| 1.0 / t), &[], Monotonicity::Nonincreasing, "x")
            .with_floor(1e-9);
        assert!(g.eval(1e-10).is_none());
        assert_eq!(g.eval(0.5), Some(2.0));
        assert!(g.eval(0.0).is_none());
        assert!(g.eval(1.5).is_none());
    }

    #[test]
    fn step_pieces_are_right_continuous() {
        let f = StepFunction::new(vec![0.5], vec![2.0, 1.0]).unwrap();
        let g = EvalFunction::from_step(&f);
        assert_eq!(g.eval(0.5), Some(1.0));
        assert_eq!(g.eval(1.0), Some(1.0));
        assert_eq!(g.limit_at_zero(), 2.0);
    }
}
