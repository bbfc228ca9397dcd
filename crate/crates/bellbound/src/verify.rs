//! The verification suite behind `bellbound verify`.
//!
//! Every corpus protocol is generated from a seed derived from the base
//! seed, and every failure line names a builtin (`random-b-indep:<seed>`,
//! `random:<seed>`, ...) that `bellbound analyze` replays directly.

use std::fmt::Write as _;

use bellbound_core::bell::{self, VariantSpec, LOCAL_BOUND};
use bellbound_core::bounds::{IC_BOUND, THEOREM_TOLERANCE};
use bellbound_core::info::{binary_entropy, inv_binary_entropy_upper, DiscreteJoint};
use bellbound_core::protocol::{
    derive_seed, make_biased_strategy, make_local_shared_bit, make_one_bit_pr,
    random_protocol_b_independent, random_protocol_general, Analysis, Flavor, Protocol,
    RandomSizes,
};
use bellbound_core::var;
use rayon::prelude::*;
use serde::Serialize;

use crate::format::format_short as g;
use crate::resolve::{resolve, SHIPPED_BUILTINS};
use crate::scan::scan_parallel;

/// Exact-arithmetic tolerance for the corpus theorems.
pub const EXACT_TOLERANCE: f64 = 1e-12;
/// Post-filter for the outcome-information corpus.
pub const FILTER_TOLERANCE: f64 = 1e-9;
/// Slack on β for the filtered outcome corpus.
pub const OUTCOME_SLACK: f64 = 1e-6;
pub const INVERSION_TOLERANCE: f64 = 1e-10;
pub const MONTE_CARLO_TOLERANCE: f64 = 0.005;
/// Stream index that separates the outcome corpus from the setting corpus.
pub const OUTCOME_STREAM: u64 = 0x6f75_7463_6f6d_6500;

const MAX_LISTED_FAILURES: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyConfig {
    pub seed: u64,
    pub corpus_size: usize,
    pub resolution: usize,
    pub mc_trials: u64,
    pub mc_seed: u64,
    /// Adds a protocol with `chi = b` to the setting-blind corpus.
    pub inject_broken: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            seed: 42,
            corpus_size: 1000,
            resolution: 201,
            mc_trials: 1_000_000,
            mc_seed: 7,
            inject_broken: false,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub id: &'static str,
    pub passed: bool,
    pub cases: usize,
    pub summary: String,
    pub failure_count: usize,
    pub failures: Vec<String>,
}

struct CheckBuilder {
    id: &'static str,
    cases: usize,
    failures: Vec<String>,
}

impl CheckBuilder {
    fn new(id: &'static str) -> Self {
        Self {
            id,
            cases: 0,
            failures: Vec::new(),
        }
    }

    fn case(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures.push(describe());
        }
    }

    fn finish(self, summary: String) -> Check {
        let failure_count = self.failures.len();
        let mut failures = self.failures;
        failures.truncate(MAX_LISTED_FAILURES);
        Check {
            id: self.id,
            passed: failure_count == 0 && self.cases > 0,
            cases: self.cases,
            summary,
            failure_count,
            failures,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub corpus_size: usize,
    pub resolution: usize,
    pub mc_trials: u64,
    pub mc_seed: u64,
    pub inject_broken: bool,
    pub setting_corpus_seeds: Vec<u64>,
    pub outcome_corpus_base: u64,
    pub outcome_corpus_seeds: Vec<u64>,
    /// Seeds that survived the `I(B; lambda, chi) = 0`, `H(B) = 1` filter.
    pub outcome_corpus_kept: Vec<u64>,
    pub checks: Vec<Check>,
    pub passed: bool,
}

/// One analyzed protocol.
struct Case {
    name: String,
    seed: Option<u64>,
    joint: DiscreteJoint,
    analysis: Analysis,
}

fn evaluate(p: &Protocol) -> Result<Case, String> {
    let run = || -> bellbound_core::Result<Case> {
        let joint = p.exact_joint()?;
        let analysis = Analysis::of_joint(&joint)?;
        Ok(Case {
            name: p.label.clone(),
            seed: p.seed,
            joint,
            analysis,
        })
    };
    run().map_err(|e| format!("{}: {e}", p.label))
}

fn evaluate_all(protocols: &[Protocol]) -> Vec<Result<Case, String>> {
    protocols.par_iter().map(evaluate).collect()
}

/// `chi = b` and a shared bit: carries setting information while labeled
/// as setting-blind. Used as a negative control.
fn broken_protocol() -> Protocol {
    let mut p = make_one_bit_pr();
    p.label = "random-b-indep:injected(chi=b)".to_string();
    p
}

fn surface_checks(cfg: &VerifyConfig) -> Vec<Check> {
    let surface = match scan_parallel(cfg.resolution) {
        Ok(s) => s,
        Err(e) => {
            let mut c = CheckBuilder::new("surface-beta");
            c.case(false, || e.to_string());
            let mut d = CheckBuilder::new("surface-alpha");
            d.case(false, || e.to_string());
            return vec![c.finish(String::new()), d.finish(String::new())];
        }
    };
    let s = &surface.summary;
    let mut beta = CheckBuilder::new("surface-beta");
    let mut alpha = CheckBuilder::new("surface-alpha");
    for p in &surface.points {
        beta.case(p.beta_max <= LOCAL_BOUND + THEOREM_TOLERANCE, || {
            format!("beta_max({}, {}) = {}", g(p.p1), g(p.p2), g(p.beta_max))
        });
        alpha.case(p.alpha_max <= IC_BOUND + THEOREM_TOLERANCE, || {
            format!("alpha_max({}, {}) = {}", g(p.p1), g(p.p2), g(p.alpha_max))
        });
    }
    beta.case((s.max_beta_max - LOCAL_BOUND).abs() <= THEOREM_TOLERANCE, || {
        format!("max beta_max = {}", g(s.max_beta_max))
    });
    let centre = surface
        .points
        .iter()
        .find(|p| p.p1 == 0.5 && p.p2 == 0.5)
        .map(|p| p.beta_max);
    beta.case(
        (s.min_beta_max - 0.5).abs() <= THEOREM_TOLERANCE
            && centre.is_some_and(|c| (c - 0.5).abs() <= THEOREM_TOLERANCE),
        || {
            format!(
                "min beta_max = {}, value at (0.5, 0.5) = {:?}",
                g(s.min_beta_max),
                centre.map(g)
            )
        },
    );
    alpha.case((s.max_alpha_max - IC_BOUND).abs() <= THEOREM_TOLERANCE, || {
        format!("max alpha_max = {}", g(s.max_alpha_max))
    });
    let n = surface.points.len();
    vec![
        beta.finish(format!(
            "{n} grid points; max beta_max {}, min {} at (0.5, 0.5)",
            g(s.max_beta_max),
            g(s.min_beta_max)
        )),
        alpha.finish(format!("{n} grid points; max alpha_max {}", g(s.max_alpha_max))),
    ]
}

fn local_exhaustive(cases: &[Result<Case, String>]) -> Check {
    let mut c = CheckBuilder::new("local-exhaustive");
    let mut best_beta = f64::MIN;
    let mut best_variant = f64::MIN;
    for case in cases {
        match case {
            Ok(k) => {
                let s = &k.analysis.score;
                best_beta = best_beta.max(s.beta_score);
                best_variant = best_variant.max(s.max_variant_score());
                c.case(s.max_variant_score() <= LOCAL_BOUND, || {
                    format!("{}: max variant score {}", k.name, g(s.max_variant_score()))
                });
            }
            Err(e) => c.case(false, || e.clone()),
        }
    }
    c.case(best_beta == LOCAL_BOUND && best_variant == LOCAL_BOUND, || {
        format!("maximum not attained: beta {}, variants {}", g(best_beta), g(best_variant))
    });
    c.finish(format!(
        "{} strategy pairs; max beta {}, max over variants {}",
        cases.len(),
        g(best_beta),
        g(best_variant)
    ))
}

fn pr_check(case: &Result<Case, String>) -> Check {
    let mut c = CheckBuilder::new("pr-onebit");
    let k = match case {
        Ok(k) => k,
        Err(e) => {
            c.case(false, || e.clone());
            return c.finish(String::new());
        }
    };
    let s = &k.analysis.score;
    let i = &k.analysis.info;
    let near = |x: f64, y: f64| (x - y).abs() <= EXACT_TOLERANCE;
    let conditionals = bell::variant_conditionals(&k.joint, VariantSpec::CHSH)
        .map(|t| t.iter().flatten().all(|&p| near(p, 1.0)))
        .unwrap_or(false);
    for (what, ok, value) in [
        ("beta", near(s.beta_score, 1.0), s.beta_score),
        ("ic_alpha", near(s.ic_alpha, 2.0), s.ic_alpha),
        ("I(b;lambda,chi)", near(i.i_b, 1.0), i.i_b),
        ("Delta(b;chi)", near(i.delta_b, 1.0), i.delta_b),
        ("I(B;lambda,chi)", near(i.i_big_b, 1.0), i.i_big_b),
    ] {
        c.case(ok, || format!("{what} = {}", g(value)));
    }
    c.case(conditionals, || "a CHSH conditional is below 1".to_string());
    c.case(s.violations == [VariantSpec::CHSH] && s.ic_violated, || {
        format!("violations {:?}, ic_violated {}", s.violations, s.ic_violated)
    });
    c.finish(format!(
        "beta {}, alpha {}, I(b;lambda,chi) {}, Delta(b;chi) {}",
        g(s.beta_score),
        g(s.ic_alpha),
        g(i.i_b),
        g(i.delta_b)
    ))
}

fn setting_necessity(cases: &[Result<Case, String>]) -> Check {
    let mut c = CheckBuilder::new("setting-necessity");
    let (mut worst_beta, mut worst_alpha, mut worst_ib) = (f64::MIN, f64::MIN, 0.0f64);
    for case in cases {
        let k = match case {
            Ok(k) => k,
            Err(e) => {
                c.case(false, || e.clone());
                continue;
            }
        };
        let s = &k.analysis.score;
        let i_b = k.analysis.info.i_b;
        worst_beta = worst_beta.max(s.beta_score);
        worst_alpha = worst_alpha.max(s.ic_alpha);
        worst_ib = worst_ib.max(i_b);
        let ok = i_b <= EXACT_TOLERANCE
            && s.beta_score <= LOCAL_BOUND + EXACT_TOLERANCE
            && s.ic_alpha <= IC_BOUND + EXACT_TOLERANCE;
        c.case(ok, || {
            format!(
                "{}: I(b;lambda,chi) {}, beta {}, alpha {}",
                k.name,
                g(i_b),
                g(s.beta_score),
                g(s.ic_alpha)
            )
        });
    }
    c.finish(format!(
        "max I(b;lambda,chi) {}, max beta {}, max alpha {}",
        g(worst_ib),
        g(worst_beta),
        g(worst_alpha)
    ))
}

/// The per-cell surface bound dominates β for setting-blind protocols.
fn surface_consistency(cases: &[Result<Case, String>]) -> Check {
    let mut c = CheckBuilder::new("surface-consistency");
    let mut tightest = f64::MAX;
    for k in cases.iter().flatten() {
        let beta = k.analysis.score.beta_score;
        match k.analysis.averaged_beta_bound {
            Some(bound) => {
                tightest = tightest.min(bound - beta);
                c.case(
                    beta <= bound + THEOREM_TOLERANCE && bound <= LOCAL_BOUND + THEOREM_TOLERANCE,
                    || format!("{}: beta {} vs averaged bound {}", k.name, g(beta), g(bound)),
                );
            }
            None => c.case(false, || format!("{}: a cell misses one of Bob's settings", k.name)),
        }
    }
    c.finish(format!("min slack of the averaged surface bound {}", g(tightest)))
}

fn outcome_necessity(cases: &[Result<Case, String>]) -> (Check, Vec<u64>) {
    let mut c = CheckBuilder::new("outcome-necessity");
    let mut kept = Vec::new();
    let mut worst = f64::MIN;
    let mut errors = Vec::new();
    for case in cases {
        let k = match case {
            Ok(k) => k,
            Err(e) => {
                errors.push(e.clone());
                continue;
            }
        };
        let i = &k.analysis.info;
        if i.i_big_b > FILTER_TOLERANCE || (i.h_big_b - 1.0).abs() > FILTER_TOLERANCE {
            continue;
        }
        kept.extend(k.seed);
        let beta = k.analysis.score.beta_score;
        worst = worst.max(beta);
        c.case(beta <= LOCAL_BOUND + OUTCOME_SLACK, || {
            format!("{}: I(B;lambda,chi) {}, H(B) {}, beta {}", k.name, g(i.i_big_b), g(i.h_big_b), g(beta))
        });
    }
    for e in errors {
        c.case(false, || e);
    }
    let summary = format!(
        "{} of {} protocols pass the filter; max beta {}",
        kept.len(),
        cases.len(),
        if kept.is_empty() { "n/a".to_string() } else { g(worst) }
    );
    (c.finish(summary), kept)
}

fn biased_demo() -> Check {
    let mut c = CheckBuilder::new("biased-demo");
    let near = |x: f64, y: f64| (x - y).abs() <= EXACT_TOLERANCE;
    let build = |p: f64, f: Flavor| -> Result<Case, String> {
        make_biased_strategy(p, f)
            .map_err(|e| e.to_string())
            .and_then(|proto| evaluate(&proto))
    };
    let twin = VariantSpec::new(true, false, true);
    let mut summary = String::new();
    match (build(0.8, Flavor::One), build(0.8, Flavor::Zero)) {
        (Ok(one), Ok(zero)) => {
            let i_b = one.analysis.info.i_big_b;
            let s_one = one.analysis.score.score(VariantSpec::CHSH);
            let s_zero = zero.analysis.score.score(twin);
            c.case(i_b <= EXACT_TOLERANCE, || format!("biased:0.8:one I(B;lambda,chi) = {}", g(i_b)));
            c.case(near(s_one, 0.9), || format!("biased:0.8:one (0,0,0) = {}", g(s_one)));
            c.case(near(s_zero, 0.9), || format!("biased:0.8:zero (1,0,1) = {}", g(s_zero)));
            c.case(zero.analysis.info.i_big_b <= EXACT_TOLERANCE, || {
                format!("biased:0.8:zero I(B;lambda,chi) = {}", g(zero.analysis.info.i_big_b))
            });
            let gap = one
                .joint
                .relabel(var::A_OUTCOME, &[1, 0])
                .and_then(|j| j.relabel(var::B_SETTING, &[1, 0]))
                .and_then(|j| j.max_abs_diff(&zero.joint));
            c.case(matches!(gap, Ok(d) if d == 0.0), || {
                format!("relabeled joints differ by {gap:?}")
            });
            let _ = write!(
                summary,
                "p=0.8: I(B;lambda,chi) {}, (0,0,0) {}, twin (1,0,1) {}, relabel gap {}",
                g(i_b),
                g(s_one),
                g(s_zero),
                gap.map(g).unwrap_or_else(|e| e.to_string())
            );
        }
        (a, b) => {
            for e in [a.err(), b.err()].into_iter().flatten() {
                c.case(false, || e);
            }
        }
    }
    // chi is independent of B, whatever the bias
    for p in [0.5, 0.8] {
        for f in [Flavor::One, Flavor::Zero] {
            let Ok(k) = build(p, f) else {
                c.case(false, || format!("biased:{p}:{} failed to build", f.name()));
                continue;
            };
            let (ib, ic) = (
                k.joint.index_of(var::B_OUTCOME).unwrap_or(0),
                k.joint.index_of(var::CHI).unwrap_or(0),
            );
            for big_b in 0..2 {
                let pb = k.joint.probability(|a| a[ib] == big_b);
                if pb == 0.0 {
                    continue;
                }
                for s in 0..2 {
                    let ps = k.joint.probability(|a| a[ib] == big_b && a[ic] == s) / pb;
                    c.case(near(ps, 0.5), || {
                        format!("{}: P(chi={s}|B={big_b}) = {}", k.name, g(ps))
                    });
                }
            }
            if p == 0.5 {
                let sc = &k.analysis.score;
                c.case(
                    near(sc.score(VariantSpec::CHSH), 0.75)
                        && near(sc.score(twin), 0.75)
                        && sc.violations.is_empty(),
                    || format!("{}: scores {} / {}", k.name, g(sc.score(VariantSpec::CHSH)), g(sc.score(twin))),
                );
            }
        }
    }
    c.finish(summary)
}

fn fano_consistency(groups: &[&[Result<Case, String>]]) -> Check {
    let mut c = CheckBuilder::new("fano-consistency");
    let mut min_slack = f64::MAX;
    for k in groups.iter().flat_map(|g| g.iter()).flatten() {
        let f = &k.analysis.fano;
        min_slack = min_slack
            .min(f.error_entropy_a0 - f.cond_entropy_big_b)
            .min(f.error_entropy_a1 - f.cond_entropy_bxorb);
        c.case(f.holds, || {
            format!(
                "{}: H(Pe0) {} vs {}, H(Pe1) {} vs {}, beta {} vs bound {}",
                k.name,
                g(f.error_entropy_a0),
                g(f.cond_entropy_big_b),
                g(f.error_entropy_a1),
                g(f.cond_entropy_bxorb),
                g(k.analysis.score.beta_score),
                g(f.beta_bound)
            )
        });
    }
    c.finish(format!("min entropy slack {}", g(min_slack)))
}

fn freedom(groups: &[&[Result<Case, String>]]) -> Check {
    let mut c = CheckBuilder::new("freedom-no-signaling");
    let mut worst = 0.0f64;
    for k in groups.iter().flat_map(|g| g.iter()).flatten() {
        let a = &k.analysis;
        worst = worst
            .max(a.signaling_gap)
            .max(a.info.i_b_lambda)
            .max(a.i_a_resources);
        c.case(
            a.signaling_gap <= EXACT_TOLERANCE
                && a.info.i_b_lambda <= EXACT_TOLERANCE
                && a.i_a_resources <= EXACT_TOLERANCE,
            || {
                format!(
                    "{}: signaling gap {}, I(b;lambda) {}, I(a;lambda,chi,b) {}",
                    k.name,
                    g(a.signaling_gap),
                    g(a.info.i_b_lambda),
                    g(a.i_a_resources)
                )
            },
        );
    }
    c.finish(format!("largest violation of freedom or no-signaling {}", g(worst)))
}

fn entropy_inversion() -> Check {
    let mut c = CheckBuilder::new("entropy-inversion");
    let mut worst = 0.0f64;
    for k in 0..=1000u32 {
        let h = f64::from(k) / 1000.0;
        let err = inv_binary_entropy_upper(h)
            .and_then(binary_entropy)
            .map(|back| (back - h).abs());
        match err {
            Ok(e) => {
                worst = worst.max(e);
                c.case(e <= INVERSION_TOLERANCE, || format!("h = {}: error {}", g(h), g(e)));
            }
            Err(e) => c.case(false, || format!("h = {}: {e}", g(h))),
        }
    }
    c.finish(format!("1001 points; max round-trip error {}", g(worst)))
}

fn monte_carlo(cfg: &VerifyConfig) -> Check {
    let mut c = CheckBuilder::new("monte-carlo");
    let results: Vec<Result<f64, String>> = SHIPPED_BUILTINS
        .par_iter()
        .map(|name| {
            let p = resolve(name).map_err(|e| e.to_string())?;
            let r = crate::simulate::simulate(&p, cfg.mc_trials, cfg.mc_seed)
                .map_err(|e| format!("{name}: {e}"))?;
            r.beta_abs_gap
                .ok_or_else(|| format!("{name}: a setting was never sampled"))
        })
        .collect();
    let mut worst = 0.0f64;
    for (name, r) in SHIPPED_BUILTINS.iter().zip(results) {
        match r {
            Ok(gap) => {
                worst = worst.max(gap);
                c.case(gap <= MONTE_CARLO_TOLERANCE, || {
                    format!("{name}: |beta_emp - beta| = {}", g(gap))
                });
            }
            Err(e) => c.case(false, || e),
        }
    }
    c.finish(format!(
        "{} builtins, {} trials, seed {}; max |beta_emp - beta| {}",
        SHIPPED_BUILTINS.len(),
        cfg.mc_trials,
        cfg.mc_seed,
        g(worst)
    ))
}

pub fn run_suite(cfg: &VerifyConfig) -> VerifyReport {
    let n = cfg.corpus_size as u64;
    let setting_seeds: Vec<u64> = (0..n).map(|i| derive_seed(cfg.seed, i)).collect();
    let outcome_base = derive_seed(cfg.seed, OUTCOME_STREAM);
    let outcome_seeds: Vec<u64> = (0..n).map(|i| derive_seed(outcome_base, i)).collect();

    let build = |seeds: &[u64], f: fn(u64, RandomSizes) -> bellbound_core::Result<Protocol>| {
        seeds
            .par_iter()
            .map(|&s| f(s, RandomSizes::from_seed(s)))
            .collect::<Vec<_>>()
    };
    let to_cases = |built: Vec<bellbound_core::Result<Protocol>>| -> Vec<Result<Case, String>> {
        built
            .par_iter()
            .map(|p| p.as_ref().map_err(|e| e.to_string()).and_then(evaluate))
            .collect()
    };

    let mut setting_built = build(&setting_seeds, random_protocol_b_independent);
    if cfg.inject_broken {
        setting_built.push(Ok(broken_protocol()));
    }
    let setting_cases = to_cases(setting_built);
    let outcome_cases = to_cases(build(&outcome_seeds, random_protocol_general));

    let local: Vec<Protocol> = (0..256u32)
        .map(|i| make_local_shared_bit((i / 16) as u8, (i % 16) as u8))
        .collect();
    let local_cases = evaluate_all(&local);
    let builtins: Vec<Protocol> = SHIPPED_BUILTINS
        .iter()
        .filter_map(|n| resolve(n).ok())
        .collect();
    let builtin_cases = evaluate_all(&builtins);
    let pr_case = evaluate(&make_one_bit_pr());

    let mut checks = surface_checks(cfg);
    checks.push(local_exhaustive(&local_cases));
    checks.push(pr_check(&pr_case));
    checks.push(setting_necessity(&setting_cases));
    checks.push(surface_consistency(&setting_cases));
    let (outcome_check, kept) = outcome_necessity(&outcome_cases);
    checks.push(outcome_check);
    checks.push(biased_demo());
    let all: [&[Result<Case, String>]; 4] =
        [&builtin_cases, &local_cases, &setting_cases, &outcome_cases];
    checks.push(fano_consistency(&all));
    checks.push(freedom(&all));
    checks.push(entropy_inversion());
    if cfg.mc_trials > 0 {
        checks.push(monte_carlo(cfg));
    }

    let passed = checks.iter().all(|c| c.passed);
    VerifyReport {
        seed: cfg.seed,
        corpus_size: cfg.corpus_size,
        resolution: cfg.resolution,
        mc_trials: cfg.mc_trials,
        mc_seed: cfg.mc_seed,
        inject_broken: cfg.inject_broken,
        setting_corpus_seeds: setting_seeds,
        outcome_corpus_base: outcome_base,
        outcome_corpus_seeds: outcome_seeds,
        outcome_corpus_kept: kept,
        checks,
        passed,
    }
}

/// Plain-text pass/fail table.
pub fn render_table(r: &VerifyReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "bellbound verify: seed {}, corpus {}, resolution {}, monte carlo {} trials (seed {})",
        r.seed, r.corpus_size, r.resolution, r.mc_trials, r.mc_seed
    );
    let first_last = |s: &[u64]| match (s.first(), s.last()) {
        (Some(a), Some(b)) => format!("{a} .. {b}"),
        _ => "none".to_string(),
    };
    let _ = writeln!(
        out,
        "setting-blind corpus: random-b-indep:<derive_seed({}, i)>, i < {}: {}",
        r.seed,
        r.corpus_size,
        first_last(&r.setting_corpus_seeds)
    );
    let _ = writeln!(
        out,
        "outcome corpus:       random:<derive_seed({}, i)>, i < {}: {} ({} kept)",
        r.outcome_corpus_base,
        r.corpus_size,
        first_last(&r.outcome_corpus_seeds),
        r.outcome_corpus_kept.len()
    );
    if r.inject_broken {
        let _ = writeln!(out, "negative control injected into the setting-blind corpus");
    }
    out.push('\n');
    let width = r.checks.iter().map(|c| c.id.len()).max().unwrap_or(5).max(5);
    let _ = writeln!(out, "{:<width$}  {:<6}  {:>6}  detail", "check", "result", "cases");
    for c in &r.checks {
        let _ = writeln!(
            out,
            "{:<width$}  {:<6}  {:>6}  {}",
            c.id,
            if c.passed { "PASS" } else { "FAIL" },
            c.cases,
            c.summary
        );
        for f in &c.failures {
            let _ = writeln!(out, "{:<width$}    failing: {f}", "");
        }
        if c.failure_count > c.failures.len() {
            let _ = writeln!(
                out,
                "{:<width$}    ... {} more failures",
                "",
                c.failure_count - c.failures.len()
            );
        }
    }
    let passed = r.checks.iter().filter(|c| c.passed).count();
    let _ = writeln!(
        out,
        "\n{passed}/{} checks passed: {}",
        r.checks.len(),
        if r.passed { "OK" } else { "FAILED" }
    );
    out
}
