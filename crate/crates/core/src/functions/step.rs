use std::ops::Deref;

use crate::error::StepError;

/// Nonnegative piecewise-constant function on `(0, 1)`.
///
/// `breaks` holds the interior breakpoints, strictly increasing in `(0, 1)`;
/// piece `i` is `[breaks[i-1], breaks[i])` with implicit endpoints 0 and 1.
/// Adjacent pieces never share a value.
#[derive(Debug, Clone, PartialEq)]
pub struct StepFunction {
    breaks: Vec<f64>,
    values: Vec<f64>,
}

impl StepFunction {
    pub fn new(breaks: Vec<f64>, values: Vec<f64>) -> Result<Self, StepError> {
        if values.len() != breaks.len() + 1 {
            return Err(StepError::LengthMismatch { breaks: breaks.len(), values: values.len() });
        }
        let mut prev = 0.0;
        for (i, &b) in breaks.iter().enumerate() {
            if !(b > 0.0 && b < 1.0) {
                return Err(StepError::BreakpointOutOfRange { index: i, value: b });
            }
            if !(b > prev) {
                return Err(StepError::BreakpointsNotIncreasing { index: i });
            }
            prev = b;
        }
        for (i, &v) in values.iter().enumerate() {
            if !v.is_finite() {
                return Err(StepError::NonFiniteValue { index: i });
            }
            if v < 0.0 {
                return Err(StepError::NegativeValue { index: i, value: v });
            }
        }
        Ok(Self::canonical(breaks, values))
    }

    /// Builds from `(right endpoint, value)` rows; the last endpoint must be 1.
    pub fn from_right_ends(rows: &[(f64, f64)]) -> Result<Self, StepError> {
        let Some(&(last, _)) = rows.last() else {
            return Err(StepError::Empty);
        };
        if last != 1.0 {
            return Err(StepError::LastBreakpointNotOne { value: last });
        }
        let breaks = rows[..rows.len() - 1].iter().map(|r| r.0).collect();
        let values = rows.iter().map(|r| r.1).collect();
        Self::new(breaks, values)
    }

    fn canonical(breaks: Vec<f64>, values: Vec<f64>) -> Self {
        let mut b = Vec::with_capacity(breaks.len());
        let mut v = Vec::with_capacity(values.len());
        v.push(values[0] + 0.0);
        for (i, &x) in breaks.iter().enumerate() {
            let next = values[i + 1] + 0.0;
            if next != *v.last().unwrap() {
                b.push(x);
                v.push(next);
            }
        }
        StepFunction { breaks: b, values: v }
    }

    pub fn constant(c: f64) -> Result<Self, StepError> {
        Self::new(vec![], vec![c])
    }

    pub fn zero() -> Self {
        StepFunction { breaks: vec![], values: vec![0.0] }
    }

    /// `c · χ_(0, r)`.
    pub fn indicator(r: f64, c: f64) -> Result<Self, StepError> {
        if r >= 1.0 {
            return Self::constant(c);
        }
        Self::new(vec![r], vec![c, 0.0])
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breaks
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn num_pieces(&self) -> usize {
        self.values.len()
    }

    pub fn start(&self, i: usize) -> f64 {
        if i == 0 {
            0.0
        } else {
            self.breaks[i - 1]
        }
    }

    pub fn end(&self, i: usize) -> f64 {
        if i == self.breaks.len() {
            1.0
        } else {
            self.breaks[i]
        }
    }

    /// `(start, end, value)` for every piece.
    pub fn pieces(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        (0..self.values.len()).map(move |i| (self.start(i), self.end(i), self.values[i]))
    }

    /// Index of the piece containing `t`, right-continuous at breakpoints.
    pub fn piece_index(&self, t: f64) -> usize {
        self.breaks.partition_point(|&b| b <= t)
    }

    /// Right-continuous evaluation; `t = 1` gives the left limit.
    pub fn eval(&self, t: f64) -> f64 {
        self.values[self.piece_index(t).min(self.values.len() - 1)]
    }

    pub fn sup(&self) -> f64 {
        self.values.iter().cloned().fold(0.0, f64::max)
    }

    pub fn is_nonincreasing(&self) -> bool {
        self.values.windows(2).all(|w| w[0] >= w[1])
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }

    /// `∫_a^b f`, exact up to rounding.
    pub fn integrate(&self, a: f64, b: f64) -> Result<f64, StepError> {
        if !(a <= b) || a < 0.0 || b > 1.0 {
            return Err(StepError::BadInterval { a, b });
        }
        Ok(self.primitive(b) - self.primitive(a))
    }

    /// `∫_0^t f`.
    pub fn primitive(&self, t: f64) -> f64 {
        let t = t.clamp(0.0, 1.0);
        let mut acc = 0.0;
        for (a, b, v) in self.pieces() {
            if t <= a {
                break;
            }
            acc += v * (b.min(t) - a);
        }
        acc
    }

    pub fn total(&self) -> f64 {
        self.pieces().map(|(a, b, v)| v * (b - a)).sum()
    }

    /// Primitive at the left end of every piece, plus the total.
    pub fn cumulative(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.values.len() + 1);
        let mut acc = 0.0;
        out.push(0.0);
        for (a, b, v) in self.pieces() {
            acc += v * (b - a);
            out.push(acc);
        }
        out
    }

    /// Measure of `{f > λ}`.
    pub fn distribution(&self, lambda: f64) -> Result<f64, StepError> {
        if lambda < 0.0 || lambda.is_nan() {
            return Err(StepError::NegativeLevel { value: lambda });
        }
        Ok(self.pieces().filter(|p| p.2 > lambda).map(|(a, b, _)| b - a).sum())
    }

    /// Nonincreasing right-continuous rearrangement.
    pub fn rearrange(&self) -> Rearranged {
        if self.is_nonincreasing() {
            return Rearranged(self.clone());
        }
        let mut order: Vec<usize> = (0..self.values.len()).collect();
        order.sort_by(|&i, &j| self.values[j].total_cmp(&self.values[i]).then(i.cmp(&j)));
        let mut levels: Vec<(f64, f64)> = Vec::new();
        for i in order {
            let len = self.end(i) - self.start(i);
            match levels.last_mut() {
                Some(last) if last.0 == self.values[i] => last.1 += len,
                _ => levels.push((self.values[i], len)),
            }
        }
        let mut breaks = Vec::with_capacity(levels.len());
        let mut values = Vec::with_capacity(levels.len());
        let mut acc = 0.0;
        for (k, &(v, len)) in levels.iter().enumerate() {
            if k + 1 == levels.len() {
                values.push(v);
                break;
            }
            let next = acc + len;
            if next > acc && next < 1.0 {
                breaks.push(next);
                values.push(v);
                acc = next;
            } else if values.is_empty() && next >= 1.0 {
                values.push(v);
                break;
            }
        }
        Rearranged(StepFunction::canonical(breaks, values))
    }

    /// `E_s f(t) = f(t / s)` on `(0, min(s, 1))`, zero beyond.
    pub fn dilate(&self, s: f64) -> Result<Self, StepError> {
        if !(s > 0.0) || !s.is_finite() {
            return Err(StepError::BadDilation { value: s });
        }
        let mut breaks = Vec::new();
        let mut values = Vec::new();
        for (_, b, v) in self.pieces() {
            let e = b * s;
            values.push(v);
            if e >= 1.0 {
                break;
            }
            breaks.push(e);
        }
        if breaks.len() == values.len() {
            values.push(0.0);
        }
        Self::new(breaks, values)
    }

    /// `(min(f, f*(t)), f - min(f, f*(t)))`.
    pub fn optimal_decomposition(&self, t: f64) -> Result<(Self, Self), StepError> {
        if !(t > 0.0 && t < 1.0) {
            return Err(StepError::BadInterval { a: 0.0, b: t });
        }
        let level = self.rearrange().eval(t);
        Ok((self.min_const(level), self.excess_over(level)))
    }

    pub fn min_const(&self, c: f64) -> Self {
        Self::canonical(self.breaks.clone(), self.values.iter().map(|&v| v.min(c)).collect())
    }

    /// `(f - c)_+`.
    pub fn excess_over(&self, c: f64) -> Self {
        Self::canonical(self.breaks.clone(), self.values.iter().map(|&v| (v - c).max(0.0)).collect())
    }

    pub fn scale(&self, c: f64) -> Self {
        assert!(c >= 0.0 && c.is_finite());
        Self::canonical(self.breaks.clone(), self.values.iter().map(|&v| v * c).collect())
    }

    /// Pointwise combination on the common refinement.
    pub fn zip_with(&self, other: &Self, op: impl Fn(f64, f64) -> f64) -> Self {
        let mut breaks = Vec::with_capacity(self.breaks.len() + other.breaks.len());
        let (mut i, mut j) = (0, 0);
        while i < self.breaks.len() || j < other.breaks.len() {
            let x = self.breaks.get(i).copied().unwrap_or(f64::INFINITY);
            let y = other.breaks.get(j).copied().unwrap_or(f64::INFINITY);
            if x < y {
                breaks.push(x);
                i += 1;
            } else if y < x {
                breaks.push(y);
                j += 1;
            } else {
                breaks.push(x);
                i += 1;
                j += 1;
            }
        }
        let mut values = Vec::with_capacity(breaks.len() + 1);
        for k in 0..=breaks.len() {
            let a = if k == 0 { 0.0 } else { breaks[k - 1] };
            values.push(op(self.eval(a), other.eval(a)));
        }
        Self::canonical(breaks, values)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a + b)
    }

    /// `∫_0^1 f g`.
    pub fn inner(&self, other: &Self) -> f64 {
        self.zip_with(other, |a, b| a * b).total()
    }
}

/// Output of [`StepFunction::rearrange`]: a nonincreasing step function.
#[derive(Debug, Clone, PartialEq)]
pub struct Rearranged(StepFunction);

impl Rearranged {
    pub fn into_inner(self) -> StepFunction {
        self.0
    }

    /// Wraps a function already known to be nonincreasing.
    pub fn from_nonincreasing(f: StepFunction) -> Option<Self> {
        f.is_nonincreasing().then_some(Rearranged(f))
    }
}

impl Deref for Rearranged {
    type Target = StepFunction;
    fn deref(&self) -> &StepFunction {
        &self.0
    }
}
