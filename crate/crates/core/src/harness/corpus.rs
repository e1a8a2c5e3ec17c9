use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::HarnessError;
use crate::functions::StepFunction;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Kind {
    /// `χ_(0,r)` with `r` log-uniform in `[2^-12, 1)`.
    Indicator,
    /// Nonincreasing staircase with 2 to 8 steps.
    Staircase,
    /// `t^-γ` truncated at a small `t` and sampled on geometric cells.
    PowerLike,
    /// Tall narrow spike over a baseline.
    LogSpike,
    /// Arbitrary pieces, some of them zero.
    RandomPiecewise,
}

pub const ALL_KINDS: [Kind; 5] = [Kind::Indicator, Kind::Staircase, Kind::PowerLike, Kind::LogSpike, Kind::RandomPiecewise];

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Indicator => "indicator",
            Kind::Staircase => "staircase",
            Kind::PowerLike => "power-like",
            Kind::LogSpike => "log-spike",
            Kind::RandomPiecewise => "random-piecewise",
        })
    }
}

impl FromStr for Kind {
    type Err = HarnessError;
    fn from_str(s: &str) -> Result<Self, HarnessError> {
        ALL_KINDS
            .iter()
            .copied()
            .find(|k| k.to_string() == s)
            .ok_or_else(|| HarnessError::UnknownKind(s.to_string()))
    }
}

/// Seeded family of step functions. Member `i` depends only on the seed,
/// `i` and its kind, so a larger corpus extends a smaller one.
#[derive(Debug, Clone)]
pub struct Corpus {
    pub seed: u64,
    pub kinds: Vec<Kind>,
    pub members: Vec<StepFunction>,
}

impl Corpus {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// The first `n` members.
    pub fn prefix(&self, n: usize) -> &[StepFunction] {
        &self.members[..n.min(self.members.len())]
    }
}

pub fn gen_corpus(seed: u64, size: usize, kinds: &[Kind]) -> Result<Corpus, HarnessError> {
    if kinds.is_empty() {
        return Err(HarnessError::EmptyKinds);
    }
    if size == 0 {
        return Err(HarnessError::EmptyCorpus);
    }
    let members = (0..size).map(|i| member(seed, i as u64, kinds[i % kinds.len()])).collect();
    Ok(Corpus { seed, kinds: kinds.to_vec(), members })
}

fn member(seed: u64, i: u64, kind: Kind) -> StepFunction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(i);
    match kind {
        Kind::Indicator => {
            let r = 2f64.powf(-12.0 * rng.gen::<f64>());
            StepFunction::indicator(r.min(0.999), 1.0).expect("r in (0, 1)")
        }
        Kind::Staircase => {
            let k = rng.gen_range(2..=8);
            let breaks = sorted_breaks(&mut rng, k - 1);
            let mut values: Vec<f64> = (0..breaks.len() + 1).map(|_| rng.gen_range(0.0..10.0)).collect();
            values.sort_by(|a, b| b.total_cmp(a));
            StepFunction::new(breaks, values).expect("valid staircase")
        }
        Kind::PowerLike => {
            let gamma = rng.gen_range(0.05..0.9);
            let cut = 2f64.powf(-rng.gen_range(6.0..16.0));
            let n = rng.gen_range(6..=16);
            let breaks: Vec<f64> = (0..n).map(|j| cut.powf(1.0 - j as f64 / n as f64)).collect();
            let mut values = vec![cut.powf(-gamma)];
            values.extend(breaks.iter().skip(1).chain(std::iter::once(&1.0)).map(|&b| b.powf(-gamma)));
            StepFunction::new(breaks, values).expect("valid power-like")
        }
        Kind::LogSpike => {
            let width = 2f64.powf(-rng.gen_range(2.0..14.0));
            let start = rng.gen_range(0.0..1.0 - width);
            let base = rng.gen_range(0.0..1.0);
            let height = base + 10f64.powf(rng.gen_range(0.0..2.0));
            let mut breaks = Vec::new();
            let mut values = Vec::new();
            if start > 0.0 {
                breaks.push(start);
                values.push(base);
            }
            values.push(height);
            breaks.push(start + width);
            values.push(base);
            StepFunction::new(breaks, values).expect("valid spike")
        }
        Kind::RandomPiecewise => {
            let k = rng.gen_range(1..=12);
            let breaks = sorted_breaks(&mut rng, k - 1);
            let values =
                (0..breaks.len() + 1).map(|_| if rng.gen_bool(0.2) { 0.0 } else { rng.gen_range(0.0..10.0) }).collect();
            StepFunction::new(breaks, values).expect("valid pieces")
        }
    }
}

fn sorted_breaks(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let mut b: Vec<f64> = (0..n).map(|_| rng.gen_range(0.001..0.999)).collect();
    b.sort_by(f64::total_cmp);
    b.dedup();
    b
}
