use std::sync::Arc;

use crate::functions::{EvalFunction, Monotonicity, Piece};
use crate::quad;

/// Distribution function and rearrangement of a piecewise-monotone
/// [`EvalFunction`], computed by inverting each piece.
pub struct Distribution {
    pieces: Vec<LevelPiece>,
    levels: Vec<f64>,
    top: f64,
}

struct LevelPiece {
    piece: Piece,
    hi: f64,
    lo: f64,
}

impl Distribution {
    /// `None` if some piece has unknown monotonicity.
    pub fn new(g: &EvalFunction) -> Option<Self> {
        if !g.piecewise_monotone() {
            return None;
        }
        let mut pieces = Vec::with_capacity(g.pieces().len());
        for (i, p) in g.pieces().iter().enumerate() {
            let left = if i == 0 { g.limit_at_zero() } else { p.at(p.start) };
            let right = p.at(p.end);
            let (hi, lo) = match p.shape {
                Monotonicity::Nonincreasing => (left, right),
                _ => (right, left),
            };
            pieces.push(LevelPiece { piece: p.clone(), hi: hi.max(0.0), lo: lo.max(0.0) });
        }
        let mut levels: Vec<f64> = pieces.iter().flat_map(|p| [p.hi, p.lo]).filter(|v| v.is_finite()).collect();
        levels.sort_by(f64::total_cmp);
        levels.dedup();
        let top = pieces.iter().map(|p| p.hi).fold(0.0, f64::max);
        Some(Distribution { pieces, levels, top })
    }

    /// Supremum of the function.
    pub fn top(&self) -> f64 {
        self.top
    }

    /// Finite values taken at piece ends, ascending.
    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    /// Measure of `{g > λ}`.
    pub fn mu(&self, lambda: f64) -> f64 {
        self.pieces.iter().map(|p| p.measure_above(lambda)).sum()
    }

    /// `g*(s) = inf { λ : μ(λ) <= s }`.
    pub fn star(&self, s: f64) -> f64 {
        if s >= 1.0 {
            return self.star(1.0 - 1e-16);
        }
        let (mut lo, mut hi) = (0.0, self.top);
        if self.mu(0.0) <= s {
            return 0.0;
        }
        if !hi.is_finite() {
            hi = self.levels.last().copied().unwrap_or(1.0).max(1.0);
            while self.mu(hi) > s {
                lo = hi;
                hi *= 2.0;
            }
        }
        for _ in 0..BISECTION_STEPS {
            let mid = 0.5 * (lo + hi);
            if !(mid > lo && mid < hi) {
                break;
            }
            if self.mu(mid) <= s {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    }

    /// `g*` as a nonincreasing [`EvalFunction`] with knots where level
    /// values are crossed.
    pub fn into_star(self) -> EvalFunction {
        let mut knots: Vec<f64> = self.levels.iter().map(|&l| self.mu(l)).filter(|&s| s > 0.0 && s < 1.0).collect();
        knots.sort_by(f64::total_cmp);
        knots.dedup();
        let top = self.top;
        let this = Arc::new(self);
        EvalFunction::from_fn(Arc::new(move |s| this.star(s)), &knots, Monotonicity::Nonincreasing, "rearranged")
            .with_limit_at_zero(top)
    }

    /// `∫_0^1 φ(s) g*(s)^q ds = ∫_0^∞ W(μ(λ)) q λ^{q-1} dλ` with `W' = φ`.
    ///
    /// Requires a bounded function.
    pub fn layer_cake(&self, w: &dyn Fn(f64) -> f64, q: f64) -> f64 {
        let mut edges = vec![0.0];
        edges.extend(self.levels.iter().copied().filter(|&l| l > 0.0 && l < self.top));
        edges.push(self.top);
        let mut total = 0.0;
        for e in edges.windows(2) {
            if e[1] > e[0] {
                total += quad::integrate(
                    |lam: f64| {
                        let m = self.mu(lam);
                        if m <= 0.0 {
                            0.0
                        } else {
                            w(m) * q * lam.powf(q - 1.0)
                        }
                    },
                    e[0],
                    e[1],
                    1e-11,
                )
                .value;
            }
        }
        total
    }
}

impl LevelPiece {
    fn measure_above(&self, lambda: f64) -> f64 {
        let (a, b) = (self.piece.start, self.piece.end);
        if lambda >= self.hi {
            return 0.0;
        }
        if lambda < self.lo {
            return b - a;
        }
        let above = |t: f64| self.piece.at(t) > lambda;
        let decreasing = self.piece.shape == Monotonicity::Nonincreasing;
        // Bisect in ln s for the length s of the part above λ, measured from
        // the end where the piece is largest, so tiny sets keep full relative
        // precision.
        let width = b - a;
        let to_t = |s: f64| if decreasing { a + s } else { b - s };
        let (mut x, mut y) = ((width * 1e-300).max(f64::MIN_POSITIVE).ln(), width.ln());
        for _ in 0..BISECTION_STEPS {
            let mid = 0.5 * (x + y);
            if !(mid > x && mid < y) {
                break;
            }
            if above(to_t(mid.exp())) {
                x = mid;
            } else {
                y = mid;
            }
        }
        (0.5 * (x + y)).exp().min(width)
    }
}

/// Enough halvings to resolve any bracket of finite doubles.
const BISECTION_STEPS: usize = 2200;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decreasing_then_increasing() {
        let pieces = vec![
            Piece::new(0.0, 0.5, Monotonicity::Nonincreasing, Arc::new(|t| 1.0 - t)),
            Piece::new(0.5, 1.0, Monotonicity::Nondecreasing, Arc::new(|t| t)),
        ];
        let g = EvalFunction::new(pieces, Monotonicity::Unknown, "v").with_limit_at_zero(1.0);
        let d = Distribution::new(&g).unwrap();
        assert!((d.mu(0.75) - 0.5).abs() < 1e-14);
        assert!((d.star(0.5) - 0.75).abs() < 1e-12);
        let l2 = d.layer_cake(&|u| u, 2.0);
        let exact = 2.0 * (1.0 - 0.125) / 3.0;
        assert!((l2 - exact).abs() < 1e-10, "{l2} {exact}");
    }
}
