//! Monte Carlo estimates with binomial standard errors.

use bellbound_core::bell::{self, VariantSpec};
use bellbound_core::protocol::{EmpiricalJoint, Protocol};
use serde::Serialize;

use crate::format::{ser_sig, ser_sig_opt};
use crate::report::ProtocolInfo;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Estimate {
    #[serde(serialize_with = "ser_sig_opt")]
    pub estimate: Option<f64>,
    #[serde(serialize_with = "ser_sig_opt")]
    pub std_error: Option<f64>,
    #[serde(serialize_with = "ser_sig")]
    pub exact: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct VariantEstimate {
    pub variant: String,
    #[serde(flatten)]
    pub value: Estimate,
}

#[derive(Debug, Clone, Serialize)]
pub struct SimulationReport {
    pub protocol: ProtocolInfo,
    pub trials: u64,
    pub seed: u64,
    pub beta_score: Estimate,
    pub p_match_a0: Estimate,
    pub p_match_a1: Estimate,
    pub ic_alpha: Estimate,
    pub variants: Vec<VariantEstimate>,
    /// `|beta_emp - beta_exact|`, absent when some setting was never drawn.
    #[serde(serialize_with = "ser_sig_opt")]
    pub beta_abs_gap: Option<f64>,
}

/// Success frequency and its binomial standard error.
fn proportion(hits: u64, n: u64) -> Option<(f64, f64)> {
    (n > 0).then(|| {
        let p = hits as f64 / n as f64;
        (p, (p * (1.0 - p) / n as f64).sqrt())
    })
}

fn ratio<F, G>(sample: &EmpiricalJoint, given: F, event: G) -> Option<(f64, f64)>
where
    F: Fn(&[u32]) -> bool,
    G: Fn(&[u32]) -> bool,
{
    proportion(sample.count(|k| given(k) && event(k)), sample.count(&given))
}

fn split(x: Option<(f64, f64)>, exact: f64) -> Estimate {
    Estimate {
        estimate: x.map(|v| v.0),
        std_error: x.map(|v| v.1),
        exact,
    }
}

/// Key layout of sampled atoms is `[a, b, A, B, lambda, chi]`.
pub fn simulate(
    protocol: &Protocol,
    trials: u64,
    seed: u64,
) -> bellbound_core::Result<SimulationReport> {
    let exact = bell::score_report(&protocol.exact_joint()?)?;
    let sample = protocol.sample_joint(trials, seed)?;

    let m0 = ratio(&sample, |k| k[0] == 0, |k| k[2] == k[3]);
    let m1 = ratio(&sample, |k| k[0] == 1, |k| k[2] == k[3] ^ k[1]);
    let beta = m0.zip(m1).map(|((p0, s0), (p1, s1))| {
        (0.5 * (p0 + p1), 0.5 * (s0 * s0 + s1 * s1).sqrt())
    });
    let alpha = m0.zip(m1).and_then(|((p0, s0), (p1, s1))| {
        let value = bell::ic_alpha(p0, p1).ok()?;
        // delta method
        let (d0, d1) = (4.0 * (2.0 * p0 - 1.0), 4.0 * (2.0 * p1 - 1.0));
        Some((value, ((d0 * s0).powi(2) + (d1 * s1).powi(2)).sqrt()))
    });

    let variants = VariantSpec::ALL
        .iter()
        .map(|&v| {
            let cells: Option<Vec<(f64, f64)>> = (0..4u32)
                .map(|i| {
                    let (a, b) = (i / 2, i % 2);
                    ratio(
                        &sample,
                        |k| k[0] == a && k[1] == b,
                        |k| k[2] ^ k[3] == v.target(a, b),
                    )
                })
                .collect();
            let value = cells.map(|c| {
                let mean = c.iter().map(|x| x.0).sum::<f64>() / 4.0;
                let var = c.iter().map(|x| x.1 * x.1).sum::<f64>() / 16.0;
                (mean, var.sqrt())
            });
            VariantEstimate {
                variant: v.to_string(),
                value: split(value, exact.score(v)),
            }
        })
        .collect();

    Ok(SimulationReport {
        protocol: ProtocolInfo::of(protocol),
        trials,
        seed,
        beta_score: split(beta, exact.beta_score),
        p_match_a0: split(m0, exact.p_match_a0),
        p_match_a1: split(m1, exact.p_match_a1),
        ic_alpha: split(alpha, exact.ic_alpha),
        variants,
        beta_abs_gap: beta.map(|b| (b.0 - exact.beta_score).abs()),
    })
}

pub fn simulation_csv(r: &SimulationReport) -> String {
    use crate::format::{csv_line, format_sig};
    let opt = |x: Option<f64>| x.map(format_sig).unwrap_or_default();
    let row = |name: &str, e: &Estimate| {
        csv_line(&[name.to_string(), opt(e.estimate), opt(e.std_error), format_sig(e.exact)])
    };
    let mut out = csv_line(&["quantity", "estimate", "std_error", "exact"].map(String::from));
    out += &row("beta_score", &r.beta_score);
    out += &row("p_match_a0", &r.p_match_a0);
    out += &row("p_match_a1", &r.p_match_a1);
    out += &row("ic_alpha", &r.ic_alpha);
    for v in &r.variants {
        out += &row(&format!("variant_{}", v.variant.replace([',', '(', ')'], "")), &v.value);
    }
    out
}
