use std::error::Error;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use super::compare::{compare_functionals, EquivalenceReport, STABILITY_TOL};
use super::corpus::{gen_corpus, Corpus, ALL_KINDS};
use super::kfunctional::{k_formula, k_upper, kfunctional_check};
use crate::error::{HarnessError, OptimalError};
use crate::functions::{level_function, log_grid, merge_points, step_to_csv, StepFunction};
use crate::norms::{down_dual_norm, NormFunctional};
use crate::operators::{apply_gi, apply_hi, apply_ri, apply_si, apply_si_eval, apply_ti};
use crate::optimal::{
    domain_norm, glz_equivalent, sobolev_preset, target_norm, target_warnings, EmbeddingPreset, GlzBranch, UnitBall,
};
use crate::profiles::{
    check_average, check_cond1, check_cond4, check_delta2, check_quasiconcave, class_q_constants, ConditionReport,
    Profile, Weight,
};
use crate::quad;

/// Registered suite names, in execution order for `all`.
pub const SUITES: [&str; 12] = [
    "core-identities",
    "endpoint-bounds",
    "conditions",
    "classQ-polynomials",
    "gaussian-profile",
    "TI-L1",
    "theorem-1-1",
    "theorem-1-2-target",
    "theorem-1-2-domain",
    "glz-cases",
    "kfunctional",
    "level-function",
];

/// Tolerance for identities that hold exactly in real arithmetic.
pub const EXACT_TOL: f64 = 1e-9;
/// Tolerance for rearrangement and level-function inequalities, relative to `max(1, |value|)`.
pub const REARRANGEMENT_TOL: f64 = 1e-12;
/// Tolerance for comparisons that go through quadrature.
pub const QUAD_TOL: f64 = 1e-6;
/// Bracket bound `C` for the Sobolev and Lorentz-Zygmund target equivalences.
pub const BRACKET_BOUND: f64 = 10.0;
/// Grid size for profile condition checks.
pub const CONDITION_GRID: usize = 10_000;
/// Minimum number of function pairs in the rearrangement suites.
pub const MIN_PAIRS: usize = 500;
/// Number of evaluation points for operator identities.
pub const EVAL_POINTS: usize = 1000;

#[derive(Debug, Clone, Serialize)]
pub struct Assertion {
    pub id: String,
    pub pass: bool,
    #[serde(serialize_with = "number_or_string")]
    pub measured: f64,
    #[serde(serialize_with = "number_or_string")]
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

/// JSON has no infinities; they are written as `"inf"`, `"-inf"`, `"NaN"`.
fn number_or_string<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
    if v.is_finite() {
        s.serialize_f64(*v)
    } else {
        s.serialize_str(&v.to_string())
    }
}

impl Assertion {
    fn new(id: impl Into<String>, pass: bool, measured: f64, tolerance: f64) -> Self {
        Assertion { id: id.into(), pass, measured, tolerance, witness: None }
    }

    /// Passes when `measured <= bound`; NaN fails.
    fn at_most(id: impl Into<String>, measured: f64, bound: f64) -> Self {
        Self::new(id, measured <= bound, measured, bound)
    }

    fn at_least(id: impl Into<String>, measured: f64, bound: f64) -> Self {
        Self::new(id, measured >= bound, measured, bound)
    }

    fn flag(id: impl Into<String>, pass: bool) -> Self {
        Self::new(id, pass, if pass { 1.0 } else { 0.0 }, 0.0)
    }

    fn witness(mut self, w: Option<String>) -> Self {
        if !self.pass {
            self.witness = w;
        }
        self
    }

    fn failed(id: impl Into<String>, err: impl std::fmt::Display) -> Self {
        Assertion { id: id.into(), pass: false, measured: f64::NAN, tolerance: f64::NAN, witness: Some(err.to_string()) }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteResult {
    pub suite: String,
    pub seed: u64,
    pub size: usize,
    pub assertions: Vec<Assertion>,
    /// Wall time; `null` unless timing was requested, so reports stay reproducible.
    pub runtime_ms: Option<u64>,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.assertions.iter().all(|a| a.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Assertion> {
        self.assertions.iter().filter(|a| !a.pass)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SuiteConfig {
    pub seed: u64,
    pub size: usize,
    pub timing: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { seed: 42, size: 200, timing: false }
    }
}

type Res<T> = Result<T, Box<dyn Error + Send + Sync>>;

pub fn run_suite(name: &str, cfg: &SuiteConfig) -> Result<SuiteResult, HarnessError> {
    if cfg.size == 0 {
        return Err(HarnessError::EmptyCorpus);
    }
    let start = Instant::now();
    let assertions = if name == "all" {
        let mut all = Vec::new();
        for s in SUITES {
            for mut a in run_named(s, cfg)? {
                a.id = format!("{s}/{}", a.id);
                all.push(a);
            }
        }
        all
    } else {
        run_named(name, cfg)?
    };
    let runtime_ms = cfg.timing.then(|| start.elapsed().as_millis() as u64);
    Ok(SuiteResult { suite: name.to_string(), seed: cfg.seed, size: cfg.size, assertions, runtime_ms })
}

fn run_named(name: &str, cfg: &SuiteConfig) -> Result<Vec<Assertion>, HarnessError> {
    let body: fn(&SuiteConfig) -> Res<Vec<Assertion>> = match name {
        "core-identities" => core_identities,
        "endpoint-bounds" => endpoint_bounds,
        "conditions" => conditions,
        "classQ-polynomials" => class_q_polynomials,
        "gaussian-profile" => gaussian_profile,
        "TI-L1" => ti_l1,
        "theorem-1-1" => theorem_1_1,
        "theorem-1-2-target" => theorem_1_2_target,
        "theorem-1-2-domain" => theorem_1_2_domain,
        "glz-cases" => glz_cases,
        "kfunctional" => kfunctional,
        "level-function" => level_suite,
        _ => {
            let mut registered: Vec<String> = SUITES.iter().map(|s| s.to_string()).collect();
            registered.push("all".into());
            return Err(HarnessError::UnknownSuite { name: name.to_string(), registered });
        }
    };
    Ok(body(cfg).unwrap_or_else(|e| vec![Assertion::failed("setup", e)]))
}

fn worst(a: f64, b: f64) -> f64 {
    if a.is_nan() || b.is_nan() {
        f64::NAN
    } else {
        a.max(b)
    }
}

fn rel_dev(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs()).max(1.0)
    }
}

/// `(a - b)₊ / max(1, |b|)`: how far `a <= b` is violated.
fn excess(a: f64, b: f64) -> f64 {
    if a <= b {
        0.0
    } else {
        (a - b) / b.abs().max(1.0)
    }
}

/// Largest value of `measure` over `items`, with the offending member as witness.
fn worst_over<T: Sync>(items: &[T], measure: impl Fn(&T) -> f64 + Sync) -> (f64, Option<usize>) {
    let vals: Vec<f64> = items.par_iter().map(&measure).collect();
    let mut best = (0.0, None);
    for (k, v) in vals.into_iter().enumerate() {
        if v.is_nan() {
            return (f64::NAN, Some(k));
        }
        if v > best.0 {
            best = (v, Some(k));
        }
    }
    best
}

fn pairs_corpus(cfg: &SuiteConfig) -> Res<Corpus> {
    Ok(gen_corpus(cfg.seed, 2 * cfg.size.max(MIN_PAIRS), &ALL_KINDS)?)
}

/// `2 · size` members; equivalence brackets are checked for stability
/// between the first `size` members and all of them.
fn doubled_corpus(cfg: &SuiteConfig) -> Res<Corpus> {
    Ok(gen_corpus(cfg.seed, 2 * cfg.size, &ALL_KINDS)?)
}

fn pairs(c: &Corpus) -> Vec<(&StepFunction, &StepFunction)> {
    c.members.chunks_exact(2).map(|w| (&w[0], &w[1])).collect()
}

fn pair_csv(f: &StepFunction, g: &StepFunction) -> String {
    format!("{}---\n{}", step_to_csv(f), step_to_csv(g))
}

/// Bracket and stability assertions for an equivalence report.
fn bracket(id: &str, rep: &EquivalenceReport, bound: f64) -> Vec<Assertion> {
    let stability = rel_change(rep.min, rep.half_min).max(rel_change(rep.max, rep.half_max));
    let finite = rep.mismatches.is_empty() && rep.min > 0.0;
    vec![
        Assertion::at_most(format!("{id}/bracket"), if finite { rep.spread() } else { f64::INFINITY }, bound)
            .witness(rep.witness.clone()),
        Assertion::at_most(format!("{id}/stable"), stability, STABILITY_TOL).witness(rep.witness.clone()),
    ]
}

fn rel_change(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

fn unit_pair_grid(f: &StepFunction, g: &StepFunction) -> Vec<f64> {
    let mut pts = merge_points(f.breakpoints(), g.breakpoints());
    pts = merge_points(&pts, &log_grid(1e-6, 1.0, 50));
    pts
}

fn core_identities(cfg: &SuiteConfig) -> Res<Vec<Assertion>> {
    let c = pairs_corpus(cfg)?;
    let ps = pairs(&c);
    let mut out = Vec::new();

    let (dev, w) = worst_over(&c.members, |f| {
        let r = f.rearrange();
        let mut levels = f.values().to_vec();
        levels.push(0.0);
        levels.iter().fold(0.0, |m, &l| match (f.distribution(l), r.distribution(l)) {
            (Ok(a), Ok(b)) => worst(m, rel_dev(a, b)),
            _ => f64::NAN,
        })
    });
    out.push(Assertion::at_most("equimeasurable", dev, REARRANGEMENT_TOL).witness(w.map(|k| step_to_csv(&c.members[k]))));

    let bad = c.members.iter().position(|f| !f.rearrange().is_nonincreasing());
    out.push(Assertion::flag("rearrangement-nonincreasing", bad.is_none()).witness(bad.map(|k| step_to_csv(&c.members[k]))));

    let (dev, w) = worst_over(&ps, |(f, g)| excess(f.inner(g), f.rearrange().inner(&g.rearrange())));
    out.push(Assertion::at_most("hardy-littlewood", dev, REARRANGEMENT_TOL).witness(w.map(|k| pair_csv(ps[k].0, ps[k].1))));

    let (dev, w) = worst_over(&ps, |(f, g)| {
        let (fs, gs, hs) = (f.rearrange(), g.rearrange(), f.add(g).rearrange());
        unit_pair_grid(f, g).iter().fold(0.0, |m, &t| {
            worst(m, excess(hs.primitive(t) / t, fs.primitive(t) / t + gs.primitive(t) / t))
        })
    });
    out.push(Assertion::at_most("maximal-subadditive", dev, REARRANGEMENT_TOL).witness(w.map(|k| pair_csv(ps[k].0, ps[k].1))));

    let half = Profile::power(0.5)?;
    let norms = [
        NormFunctional::Lp(1.0),
        NormFunctional::Lp(2.0),
        NormFunctional::Lp(f64::INFINITY),
        NormFunctional::lz(6.0, 2.0, 0.0, 0.0),
        NormFunctional::LambdaI(half.clone()),
        NormFunctional::SmallM(half.clone()),
        NormFunctional::BigM(half.clone()),
    ];
    let sample = &ps[..cfg.size.min(ps.len())];
    for n in &norms {
        let v = |f: &StepFunction| n.value(f).unwrap_or(f64::NAN);
        let (dev, w) = worst_over(sample, |(f, _)| rel_dev(v(f), v(&f.rearrange())));
        out.push(Assertion::at_most(format!("{n}/rearrangement-invariant"), dev, EXACT_TOL).witness(w.map(|k| step_to_csv(sample[k].0))));
        let (dev, w) = worst_over(sample, |(f, _)| rel_dev(v(&f.scale(2.5)), 2.5 * v(f)));
        out.push(Assertion::at_most(format!("{n}/homogeneous"), dev, EXACT_TOL).witness(w.map(|k| step_to_csv(sample[k].0))));
        let (dev, w) = worst_over(sample, |(f, g)| excess(v(&f.add(g)), v(f) + v(g)));
        out.push(Assertion::at_most(format!("{n}/triangle"), dev, EXACT_TOL).witness(w.map(|k| pair_csv(sample[k].0, sample[k].1))));
    }

    let mut dev = 0.0f64;
    for p in [1.0, 1.5, 2.0, 4.0, f64::INFINITY] {
        for t in log_grid(1e-3, 0.999, 20) {
            dev = worst(dev, rel_dev(NormFunctional::Lp(p).fundamental(t)?, t.powf(1.0 / p)));
        }
    }
    out.push(Assertion::at_most("lp-fundamental", dev, EXACT_TOL));

    let (big, small) = (NormFunctional::BigM(half.clone()), NormFunctional::SmallM(half));
    let rep = compare_functionals(
        "MI",
        |f| big.value(f).unwrap_or(f64::NAN),
        "mI",
        |f| small.value(f).unwrap_or(f64::NAN),
        c.prefix(cfg.size),
    );
    out.push(Assertion::at_least("big-m-over-small-m/min", rep.min, 1.0 - EXACT_TOL));
    out.push(Assertion::at_most("big-m-over-small-m/max", rep.max, 2.0 + EXACT_TOL).witness(rep.witness.clone()));
    Ok(out)
}

fn endpoint_bounds(cfg: &SuiteConfig) -> Res<Vec<Assertion>> {
    let c = gen_corpus(cfg.seed, cfg.size, &ALL_KINDS)?;
    let pts = log_grid(1e-6, 0.999, EVAL_POINTS);
    let mut out = Vec::new();
    for (label, alpha) in [("power(1/2)", 0.5), ("power(2/3)", 2.0 / 3.0)] {
        let i = Profile::power(alpha)?;
        let it = i.tilde();
        let csv = |w: Option<usize>| w.map(|k| step_to_csv(&c.members[k]));

        let (dev, w) = worst_over(&c.members, |f| {
            let s = apply_si(&i, f);
            let ss = apply_si_eval(&i, &s);
            pts.iter().fold(0.0, |m, &t| worst(m, (ss.eval_unchecked(t) - s.eval_unchecked(t)).abs()))
        });
        out.push(Assertion::at_most(format!("{label}/si-idempotent"), dev, EXACT_TOL).witness(csv(w)));

        let (dev, w) = worst_over(&c.members, |f| {
            let g = apply_gi(&i, f);
            let sg = apply_si_eval(&i, &g);
            pts.iter().fold(0.0, |m, &t| worst(m, (sg.eval_unchecked(t) - g.eval_unchecked(t)).abs()))
        });
        out.push(Assertion::at_most(format!("{label}/si-fixes-gi"), dev, EXACT_TOL).witness(csv(w)));

        let (dev, w) = worst_over(&c.members, |f| {
            let s = apply_si(&i, f);
            let top = pts.iter().fold(s.limit_at_zero(), |m, &t| worst(m, s.eval_unchecked(t)));
            excess(top, f.sup())
        });
        out.push(Assertion::at_most(format!("{label}/si-linf"), dev, EXACT_TOL).witness(csv(w)));

        let m = NormFunctional::SmallM(i.clone());
        let (dev, w) = worst_over(&c.members, |f| match (m.value_eval(&apply_si(&i, f)), m.value(f)) {
            (Ok(a), Ok(b)) => (a - b).abs(),
            _ => f64::NAN,
        });
        out.push(Assertion::at_most(format!("{label}/si-preserves-mI"), dev, EXACT_TOL).witness(csv(w)));

        let mt = NormFunctional::SmallM(it);
        let (dev, w) = worst_over(&c.members, |f| match (apply_ti(&i, f), mt.value(f)) {
            (Ok(tf), Ok(b)) => mt.value_eval(&tf).map(|a| (a - b).abs()).unwrap_or(f64::NAN),
            _ => f64::NAN,
        });
        out.push(Assertion::at_most(format!("{label}/ti-preserves-m-tilde"), dev, EXACT_TOL).witness(csv(w)));

        let (dev, w) = worst_over(&c.members, |f| {
            let (r, gi) = (apply_ri(&i, &f.rearrange()), apply_gi(&i, f));
            pts.iter().fold(0.0, |m, &t| worst(m, excess(r.eval_unchecked(t), gi.eval_unchecked(t))))
        });
        out.push(Assertion::at_most(format!("{label}/gi-dominates-ri"), dev, EXACT_TOL).witness(csv(w)));
    }
    Ok(out)
}

fn condition_family() -> Res<Vec<(Profile, [bool; 3])>> {
    // expected outcomes of (cond1, average, cond4)
    Ok(vec![
        (Profile::power(0.5)?, [true, true, true]),
        (Profile::power(2.0 / 3.0)?, [true, true, true]),
        (Profile::power(0.9)?, [true, true, true]),
        (Profile::power(1.0)?, [true, false, false]),
        (Profile::gaussian(), [true, false, false]),
    ])
}

fn report_assertions(label: &str, name: &str, r: &ConditionReport, expect: bool) -> Vec<Assertion> {
    vec![
        Assertion::new(format!("{label}/{name}"), r.passed == expect, r.sup_ratio, if expect { 1.0 } else { 0.0 }),
        Assertion::at_least(
            format!("{label}/{name}-refinement-monotone"),
            if r.refined_sup_ratio == r.sup_ratio { 0.0 } else { r.refined_sup_ratio - r.sup_ratio * (1.0 - EXACT_TOL) },
            0.0,
        ),
    ]
}

fn conditions(_cfg: &SuiteConfig) -> Res<Vec<Assertion>> {
    let mut out = Vec::new();
    let family = condition_family()?;
    let reports: Vec<_> = family
        .par_iter()
        .map(|(p, _)| {
            (
                check_quasiconcave(p, CONDITION_GRID),
                check_delta2(p, CONDITION_GRID),
                check_cond1(p, CONDITION_GRID),
                check_average(p, CONDITION_GRID),
                check_cond4(p, CONDITION_GRID),
            )
        })
        .collect();
    for ((p, expect), (qc, d2, c1, av, c4)) in family.iter().zip(&reports) {
        let label = p.name();
        out.push(Assertion::at_most(format!("{label}/normalised"), (p.eval(1.0 - 1e-13) - 1.0).abs(), EXACT_TOL));
        out.extend(report_assertions(label, "quasiconcave", qc, true));
        out.extend(report_assertions(label, "delta2", d2, true));
        out.extend(report_assertions(label, "cond1", c1, expect[0]));
        out.extend(report_assertions(label, "average", av, expect[1]));
        out.extend(report_assertions(label, "cond4", c4, expect[2]));
    }
    for (p, _) in family.iter().filter(|(p, _)| p.power_exponent() != Some(1.0)) {
        let q = class_q_constants(p, CONDITION_GRID)?;
        out.push(Assertion::new(format!("{}/c-in-half-open-unit", p.name()), q.c_in_range, q.c, 0.5));
    }
    let ll = Profile::log_ratio();
    let c1 = check_cond1(&ll, CONDITION_GRID);
    out.push(Assertion::new("loglog/cond1", !c1.passed, c1.sup_ratio, 0.0));
    Ok(out)
}

fn class_q_polynomials(_cfg: &SuiteConfig) -> Res<Vec<Assertion>> {
    let cases = [("alpha=1/2", 0.5), ("alpha=2/3", 2.0 / 3.0), ("alpha=3/4", 0.75), ("alpha=9/10", 0.9)];
    let results: Vec<_> = cases.par_iter().map(|&(_, a)| Profile::power(a).map(|p| class_q_constants(&p, CONDITION_GRID))).collect();
    let mut out = Vec::new();
    for (&(label, a), r) in cases.iter().zip(results) {
        let q = r??;
        out.push(Assertion::at_most(format!("{label}/c"), (q.c - 1.0 / (2.0 - a)).abs(), 1e-3));
        out.push(Assertion::at_most(format!("{label}/d"), (q.d - 1.0 / (1.0 - a)).abs(), 1e-3));
        out.push(Assertion::flag(format!("{label}/member-q"), q.member_q));
        out.push(Assertion::at_most(format!("{label}/constant-inequality"), (1.0 - q.c) * q.d - q.c, EXACT_TOL));
        out.push(Assertion::flag(format!("{label}/stable"), q.stable));
    }
    Ok(out)
}

fn gaussian_profile(_cfg: &SuiteConfig) -> Res<Vec<Assertion>> {
    let g = Profile::gaussian();
    let c1 = check_cond1(&g, CONDITION_GRID);
    let av = check_average(&g, CONDITION_GRID);
    let qc = check_quasiconcave(&g, CONDITION_GRID);
    Ok(vec![
        Assertion::new("cond1", c1.passed, c1.sup_ratio, 1.0),
        Assertion::new("cond1-stable", c1.stable, c1.refined_sup_ratio, STABILITY_TOL),
        Assertion::new("average-fails", !av.passed, av.sup_ratio, 0.0),
        Assertion::new("quasiconcave", qc.passed, qc.sup_ratio, 1.0),
        Assertion::flag("target-warns-outside-class-q", !target_warnings(&NormFunctional::Lp(2.0), &g).is_empty()),
    ])
}

/// `∫_0^1 T_I f`, summed exactly over the pieces of `f*`.
pub fn ti_integral(i: &Profile, f: &StepFunction) -> f64 {
    let r = f.rearrange();
    let pieces: Vec<(f64, f64, f64)> = r.pieces().collect();
    let mut suffix = 0.0f64;
    let mut total = 0.0;
    for &(a, b, v) in pieces.iter().rev() {
        suffix = suffix.max(v * b / if b >= 1.0 { 1.0 } else { i.eval(b) });
        if suffix == 0.0 {
            continue;
        }
        let mass = if a == 0.0 { i.integral_from_zero(Weight::IOverS, b).value } else { i.integral(Weight::IOverS, a, b) };
        total += suffix * mass;
    }
    total
}

fn ti_l1(cfg: &SuiteConfig) -> Res<Vec<Assertion>> {
    let c = doubled_corpus(cfg)?;
    let mut out = Vec::new();
    for (label, alpha) in [("power(1/2)", 0.5), ("power(2/3)", 2.0 / 3.0)] {
        let i = Profile::power(alpha)?;
        let rep = compare_functionals("int TI f", |f| ti_integral(&i, f), "int f*", |f| f.total(), &c.members);
        out.push(Assertion::at_least(format!("{label}/ratio-min"), rep.min, 1.0 - EXACT_TOL));
        out.push(Assertion::at_most(format!("{label}/ratio-max"), rep.max, 1.0 / alpha + EXACT_TOL).witness(rep.witness.clone()));
        out.extend(bracket(label, &rep, 1.0 / alpha + EXACT_TOL));

        let r = 0.01;
        let chi = StepFunction::indicator(r, 1.0)?;
        out.push(Assertion::at_most(format!("{label}/indicator"), rel_dev(ti_integral(&i, &chi), r / alpha), EXACT_TOL));

        let sample = c.prefix(20);
        let (dev, w) = worst_over(sample, |f| match apply_ti(&i, f) {
            Ok(tf) => NormFunctional::Lp(1.0).value_eval(&tf).map(|q| rel_dev(q, ti_integral(&i, f))).unwrap_or(f64::NAN),
            Err(_) => f64::NAN,
        });
        out.push(Assertion::at_most(format!("{label}/quadrature-agrees"), dev, QUAD_TOL).witness(w.map(|k| step_to_csv(&sample[k]))));
    }

    // The ratio on χ_(0,r) for r = 2^-2 ... 2^-32. For this profile
    // ∫_0^r I(t)/t dt diverges, so every ratio is +∞.
    let ll = Profile::log_ratio();
    let ratios: Vec<f64> = (2..=32).map(|k| {
        let r = 2f64.powi(-k);
        let head = ll.integral_from_zero(Weight::IOverS, r);
        if head.divergent {
            f64::INFINITY
        } else {
            (r / ll.eval(r)) * head.value / r
        }
    }).collect();
    let grows = ratios.windows(2).all(|w| w[1] >= w[0]) && ratios[ratios.len() - 1] >= 10.0 * ratios[0];
    let divergent = ratios.iter().all(|r| r.is_infinite());
    out.push(Assertion::new("loglog/unbounded", divergent || grows, ratios[ratios.len() - 1], 10.0));
    Ok(out)
}

fn theorem_1_1(cfg: &SuiteConfig) -> Res<Vec<Assertion>> {
    let c = doubled_corpus(cfg)?;
    let i = sobolev_preset(&EmbeddingPreset::John { n: 3, m: 1 })?;
    let mut ball_fns = c.members.clone();
    for k in 1..=60 {
        ball_fns.push(StepFunction::indicator(2f64.powf(-0.5 * k as f64), 1.0)?);
    }
    let mut out = Vec::new();
    for x in [NormFunctional::Lp(2.0), NormFunctional::Lp(1.5), NormFunctional::lz(2.0, 2.0, 1.0, 0.0)] {
        match UnitBall::new(&x, &i, &ball_fns) {
            Ok(ball) => {
                let rep = compare_functionals(
                    "target",
                    |f| target_norm(&x, &i, f).unwrap_or(f64::NAN),
                    "corpus lower bound",
                    |f| ball.lower_bound(&i, f),
                    &c.members,
                );
                // The corpus bound sits below the optimal norm, which
                // target_norm matches up to constants: bracket [1, C].
                out.push(Assertion::at_least(format!("{x}/ratio-min"), rep.min, 1.0 - EXACT_TOL).witness(rep.argmin.map(|k| step_to_csv(&c.members[k]))));
                out.push(Assertion::at_most(format!("{x}/ratio-max"), rep.max, f64::INFINITY));
                out.push(Assertion::at_most(format!("{x}/ratio-max-stable"), rel_change(rep.max, rep.half_max), STABILITY_TOL).witness(rep.witness.clone()));
            }
            Err(OptimalError::Norm(e)) => {
                // No closed-form associate: the marker is the expected outcome.
                let mut a = Assertion::flag(format!("{x}/unsupported-associate"), true);
                a.witness = Some(e.to_string());
                out.push(a);
            }
            Err(e) => out.push(Assertion::failed(x.to_string(), e)),
        }
    }
    Ok(out)
}

fn theorem_1_2_target(cfg: &SuiteConfig) -> Res<Vec<Assertion>> {
    let c = doubled_corpus(cfg)?;
    let x = NormFunctional::Lp(2.0);
    let mut out = Vec::new();
    for (label, preset, y) in [
        ("john(3,1)", EmbeddingPreset::John { n: 3, m: 1 }, NormFunctional::lz(6.0, 2.0, 0.0, 0.0)),
        ("mazya(3/4,1)", EmbeddingPreset::Mazya { alpha: 0.75, m: 1 }, NormFunctional::lz(4.0, 2.0, 0.0, 0.0)),
    ] {
        let j = sobolev_preset(&preset)?;
        let rep = compare_functionals(
            "target",
            |f| target_norm(&x, &j, f).unwrap_or(f64::NAN),
            &y.to_string(),
            |f| y.value(f).unwrap_or(f64::NAN),
            &c.members,
        );
        out.extend(bracket(label, &rep, BRACKET_BOUND));
        let sample = c.prefix(20);
        let (dev, w) = worst_over(sample, |f| match (target_norm(&x, &j, &f.scale(2.5)), target_norm(&x, &j, f)) {
            (Ok(a), Ok(b)) => rel_dev(a, 2.5 * b),
            _ => f64::NAN,
        });
        out.push(Assertion::at_most(format!("{label}/homogeneous"), dev, QUAD_TOL).witness(w.map(|k| step_to_csv(&sample[k]))));
    }
    out.push(Assertion::flag("gauss/warns-outside-class-q", !target_warnings(&x, &Profile::gaussian()).is_empty()));
    Ok(out)
}

/// `∫_0^1 g · E` for a step `g` and an evaluable `E`.
fn pair_integral(g: &StepFunction, e: &dyn Fn(f64) -> f64) -> f64 {
    g.pieces().filter(|p| p.2 != 0.0).map(|(a, b, v)| v * quad::integrate(e, a, b, 1e-12).value).sum()
}

fn theorem_1_2_domain(cfg: &SuiteConfig) -> Res<Vec<Assertion>> {
    let c = gen_corpus(cfg.seed, cfg.size, &ALL_KINDS)?;
    let i = sobolev_preset(&EmbeddingPreset::John { n: 3, m: 1 })?;
    let y = NormFunctional::Lp(2.0);
    let dn = |f: &StepFunction| domain_norm(&y, &i, f).unwrap_or(f64::NAN);
    let mut out = Vec::new();

    let chi = StepFunction::indicator(0.5, 1.0)?;
    let none = domain_norm(&NormFunctional::Lp(f64::INFINITY), &Profile::power(1.0)?, &chi);
    out.push(Assertion::flag("no-domain-when-H1-unbounded", matches!(none, Err(OptimalError::NoDomain))));

    let sample = c.prefix(40);
    let (dev, w) = worst_over(sample, |f| rel_dev(dn(&f.scale(2.5)), 2.5 * dn(f)));
    out.push(Assertion::at_most("homogeneous", dev, QUAD_TOL).witness(w.map(|k| step_to_csv(&sample[k]))));

    let ps: Vec<_> = sample.chunks_exact(2).map(|w| (&w[0], &w[1])).collect();
    let (dev, w) = worst_over(&ps, |(f, g)| excess(dn(f), dn(&f.add(g))));
    out.push(Assertion::at_most("monotone-envelope", dev, EXACT_TOL).witness(w.map(|k| pair_csv(ps[k].0, ps[k].1))));

    // Equal-length pieces, so a permutation of the values is equimeasurable.
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let cells = 16;
    let breaks: Vec<f64> = (1..cells).map(|k| k as f64 / cells as f64).collect();
    let shuffles: Vec<(StepFunction, StepFunction)> = sample
        .iter()
        .map(|f| {
            let vals: Vec<f64> = (0..cells).map(|k| f.eval((k as f64 + 0.5) / cells as f64)).collect();
            let mut perm = vals.clone();
            perm.shuffle(&mut rng);
            Ok((StepFunction::new(breaks.clone(), vals)?, StepFunction::new(breaks.clone(), perm)?))
        })
        .collect::<Res<_>>()?;
    // ‖H_I h‖_Y <= ‖H_I f*‖_Y fails for some shuffles; only the two-sided
    // equivalence with a constant holds, so the ratio is bounded instead.
    let (ratio, w) = worst_over(&shuffles, |(f, h)| {
        let hh = apply_hi(&i, h, 1).map_err(|e| e.to_string()).and_then(|e| y.value_eval(&e).map_err(|e| e.to_string()));
        match hh {
            Ok(0.0) => 0.0,
            Ok(v) => v / dn(f),
            Err(_) => f64::NAN,
        }
    });
    out.push(Assertion::at_most("shuffle-ratio", ratio, BRACKET_BOUND).witness(w.map(|k| pair_csv(&shuffles[k].0, &shuffles[k].1))));

    // ∫ g H_I f = ∫ f R_I g
    let (dev, w) = worst_over(&ps, |(f, g)| {
        let Ok(hf) = apply_hi(&i, f, 1) else { return f64::NAN };
        let rg = apply_ri(&i, g);
        let lhs = pair_integral(g, &|t| hf.eval_unchecked(t));
        let rhs = pair_integral(f, &|t| rg.eval_unchecked(t));
        rel_dev(lhs, rhs)
    });
    out.push(Assertion::at_most("hi-ri-duality", dev, QUAD_TOL).witness(w.map(|k| pair_csv(ps[k].0, ps[k].1))));
    Ok(out)
}

fn glz_cases(cfg: &SuiteConfig) -> Res<Vec<Assertion>> {
    let c = doubled_corpus(cfg)?;
    let (alpha, m, q) = (2.0 / 3.0, 1, 2.0);
    let j = sobolev_preset(&EmbeddingPreset::Mazya { alpha, m })?;
    let mut out = Vec::new();
    for (p, beta, expect) in [
        (2.0, 0.0, GlzBranch::Subcritical),
        (3.0, 0.0, GlzBranch::CriticalLog),
        (3.0, 0.5, GlzBranch::CriticalLogLog),
        (4.0, 0.0, GlzBranch::Bounded),
    ] {
        let label = format!("p={p},beta={beta}");
        let case = glz_equivalent(p, q, beta, alpha, m)?;
        out.push(Assertion::flag(format!("{label}/branch"), case.branch == expect));
        let x = NormFunctional::lz(p, q, beta, 0.0);
        let rep = compare_functionals(
            "target",
            |f| target_norm(&x, &j, f).unwrap_or(f64::NAN),
            &case.norm.to_string(),
            |f| case.norm.value(f).unwrap_or(f64::NAN),
            &c.members,
        );
        out.extend(bracket(&label, &rep, BRACKET_BOUND));
        // The corpus stops at scale 2^-16; indicators at 2^-150 and 2^-300
        // test whether the ratio has settled.
        let ratio = |k: i32| -> Res<f64> {
            let chi = StepFunction::indicator(2f64.powi(-k), 1.0)?;
            Ok(target_norm(&x, &j, &chi)? / case.norm.value(&chi)?)
        };
        let (r1, r2) = (ratio(150)?, ratio(300)?);
        out.push(Assertion::at_most(format!("{label}/indicator-scale-stable"), rel_change(r1, r2), STABILITY_TOL));
    }
    let below = glz_equivalent(3.0 * (1.0 - 1e-6), q, 0.0, alpha, m)?.branch;
    let above = glz_equivalent(3.0 * (1.0 + 1e-6), q, 0.0, alpha, m)?.branch;
    let edge = glz_equivalent(3.0, q, 0.5 + 1e-6, alpha, m)?.branch;
    out.push(Assertion::flag("branch-edges", below == GlzBranch::Subcritical && above == GlzBranch::Bounded && edge == GlzBranch::Bounded));
    Ok(out)
}

fn kfunctional(cfg: &SuiteConfig) -> Res<Vec<Assertion>> {
    let c = gen_corpus(cfg.seed, cfg.size, &ALL_KINDS)?;
    let ts = log_grid(1e-3, 0.999, 20);
    let mut out = Vec::new();
    for (label, alpha) in [("power(1/2)", 0.5), ("power(2/3)", 2.0 / 3.0)] {
        let i = Profile::power(alpha)?;
        let rep = kfunctional_check(&i, &c.members, &ts);
        out.push(Assertion::at_most(format!("{label}/upper-factor-2"), rep.upper_ratio, 2.0 + EXACT_TOL).witness(rep.witness.clone()));
        out.push(Assertion::at_most(format!("{label}/threshold-constant"), rep.brute_constant, 2.0));
        let k = StepFunction::constant(3.0)?;
        let dev = ts.iter().fold(0.0, |m, &t| worst(m, rel_dev(k_formula(&i, &k, t), 3.0 * t)).max(excess(k_upper(&i, &k, t), 3.0 * t)));
        out.push(Assertion::at_most(format!("{label}/constant"), dev, EXACT_TOL));
        let small = NormFunctional::SmallM(i.clone());
        let (dev, w) = worst_over(c.prefix(50), |f| rel_dev(k_formula(&i, f, 1.0), small.value(f).unwrap_or(f64::NAN)));
        out.push(Assertion::at_most(format!("{label}/t-to-one"), dev, EXACT_TOL).witness(w.map(|k| step_to_csv(&c.members[k]))));
    }
    let i = Profile::power(0.5)?;
    let r: f64 = 0.0625;
    let chi = StepFunction::indicator(r, 1.0)?;
    out.push(Assertion::at_most("indicator", rel_dev(k_formula(&i, &chi, r.sqrt()), r.sqrt()), EXACT_TOL));
    Ok(out)
}

fn level_suite(cfg: &SuiteConfig) -> Res<Vec<Assertion>> {
    let c = pairs_corpus(cfg)?;
    let mut out = Vec::new();
    let levels: Vec<StepFunction> = c.members.par_iter().map(level_function).collect();
    let idx: Vec<usize> = (0..c.len()).collect();
    let csv = |w: Option<usize>| w.map(|k| step_to_csv(&c.members[k]));

    let (dev, w) = worst_over(&idx, |&k| {
        let (f, l, s) = (&c.members[k], &levels[k], c.members[k].rearrange());
        let pts = merge_points(&merge_points(f.breakpoints(), l.breakpoints()), &[1.0]);
        pts.iter().fold(0.0, |m, &t| {
            let (a, b, d) = (f.primitive(t), l.primitive(t), s.primitive(t));
            worst(m, excess(a, b).max(excess(b, d)))
        })
    });
    out.push(Assertion::at_most("primitive-sandwich", dev, REARRANGEMENT_TOL).witness(csv(w)));

    let bad = levels.iter().position(|l| !l.is_nonincreasing());
    out.push(Assertion::flag("nonincreasing", bad.is_none()).witness(csv(bad)));

    let (dev, w) = worst_over(&idx, |&k| rel_dev(levels[k].total(), c.members[k].total()));
    out.push(Assertion::at_most("mass-preserved", dev, REARRANGEMENT_TOL).witness(csv(w)));

    // the least concave majorant touches the primitive at its corners
    let (dev, w) = worst_over(&idx, |&k| {
        let (f, l) = (&c.members[k], &levels[k]);
        l.breakpoints().iter().fold(0.0, |m, &t| worst(m, rel_dev(l.primitive(t), f.primitive(t))))
    });
    out.push(Assertion::at_most("majorant-touches", dev, REARRANGEMENT_TOL).witness(csv(w)));

    let (dev, w) = worst_over(&idx, |&k| {
        let s = c.members[k].rearrange().into_inner();
        rel_dev(level_function(&s).total(), s.total()).max(if level_function(&s) == s { 0.0 } else { 1.0 })
    });
    out.push(Assertion::at_most("fixes-nonincreasing", dev, 0.0).witness(csv(w)));

    let l2 = NormFunctional::Lp(2.0);
    let sample = c.prefix(cfg.size);
    let (dev, w) = worst_over(sample, |f| match (down_dual_norm(&l2, f), l2.value(f)) {
        (Ok(a), Ok(b)) => excess(a, b),
        _ => f64::NAN,
    });
    out.push(Assertion::at_most("down-dual-below-ri", dev, REARRANGEMENT_TOL).witness(csv(w)));
    Ok(out)
}
