//! Serializable views of core results. Field order here is the JSON key
//! order; every float goes through [`crate::format::round_sig`].

use bellbound_core::bell::{self, BoundStatus, VariantSpec, LOCAL_BOUND};
use bellbound_core::bounds::{SurfaceSummary, IC_BOUND};
use bellbound_core::info::DiscreteJoint;
use bellbound_core::protocol::{Analysis, Protocol};
use serde::Serialize;

use crate::format::{ser_sig, ser_sig_opt, ser_sig_pairs};

#[derive(Debug, Clone, Serialize)]
pub struct ProtocolInfo {
    pub label: String,
    pub seed: Option<u64>,
    pub lambda_size: usize,
    pub bob_private_size: usize,
    pub alice_private_size: usize,
    pub message_alphabet: u32,
}

impl ProtocolInfo {
    pub fn of(p: &Protocol) -> Self {
        Self {
            label: p.label.clone(),
            seed: p.seed,
            lambda_size: p.lambda().len(),
            bob_private_size: p.bob_private().len(),
            alice_private_size: p.alice_private().len(),
            message_alphabet: p.message_alphabet(),
        }
    }
}

fn status_name(s: BoundStatus) -> &'static str {
    match s {
        BoundStatus::Below => "below",
        BoundStatus::Boundary => "boundary",
        BoundStatus::Violated => "violated",
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VariantEntry {
    pub variant: String,
    #[serde(serialize_with = "ser_sig")]
    pub score: f64,
    pub status: &'static str,
    /// `P(A xor B = target | a, b)` in the order `(0,0), (0,1), (1,0), (1,1)`.
    pub conditionals: Vec<Conditional>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Conditional {
    pub a: u32,
    pub b: u32,
    #[serde(serialize_with = "ser_sig")]
    pub prob: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScoreView {
    #[serde(serialize_with = "ser_sig")]
    pub beta_score: f64,
    #[serde(serialize_with = "ser_sig")]
    pub p_match_a0: f64,
    #[serde(serialize_with = "ser_sig")]
    pub p_match_a1: f64,
    #[serde(serialize_with = "ser_sig")]
    pub ic_alpha: f64,
    pub ic_violated: bool,
    pub violations: Vec<String>,
    pub boundary: Vec<String>,
    pub variants: Vec<VariantEntry>,
}

#[derive(Debug, Clone, Serialize)]
pub struct InfoView {
    #[serde(serialize_with = "ser_sig")]
    pub i_big_b: f64,
    #[serde(serialize_with = "ser_sig")]
    pub i_b: f64,
    #[serde(serialize_with = "ser_sig")]
    pub i_bxorb: f64,
    #[serde(serialize_with = "ser_sig")]
    pub i_big_b_lambda: f64,
    #[serde(serialize_with = "ser_sig")]
    pub i_b_lambda: f64,
    #[serde(serialize_with = "ser_sig")]
    pub h_big_b: f64,
    #[serde(serialize_with = "ser_sig")]
    pub h_bxorb: f64,
    #[serde(serialize_with = "ser_sig")]
    pub delta_b: f64,
    #[serde(serialize_with = "ser_sig")]
    pub delta_big_b: f64,
    #[serde(serialize_with = "ser_sig")]
    pub j_big_b: f64,
    #[serde(serialize_with = "ser_sig")]
    pub j_b: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CellView {
    pub lambda: u32,
    pub chi: u32,
    #[serde(serialize_with = "ser_sig")]
    pub weight: f64,
    #[serde(serialize_with = "ser_sig_opt")]
    pub p1: Option<f64>,
    #[serde(serialize_with = "ser_sig_opt")]
    pub p2: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FanoView {
    #[serde(serialize_with = "ser_sig")]
    pub error_entropy_a0: f64,
    #[serde(serialize_with = "ser_sig")]
    pub cond_entropy_big_b: f64,
    #[serde(serialize_with = "ser_sig")]
    pub error_entropy_a1: f64,
    #[serde(serialize_with = "ser_sig")]
    pub cond_entropy_bxorb: f64,
    #[serde(serialize_with = "ser_sig")]
    pub beta_bound: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct FreedomView {
    /// `I(a; lambda, chi, b)`
    #[serde(serialize_with = "ser_sig")]
    pub i_a_resources: f64,
    #[serde(serialize_with = "ser_sig")]
    pub signaling_gap: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalysisReport {
    pub protocol: ProtocolInfo,
    pub scores: ScoreView,
    pub info: InfoView,
    pub cells: Vec<CellView>,
    #[serde(serialize_with = "ser_sig_opt")]
    pub averaged_beta_bound: Option<f64>,
    pub fano: FanoView,
    pub freedom: FreedomView,
}

pub fn variant_entries(
    joint: &DiscreteJoint,
    scores: &[f64; 8],
) -> bellbound_core::Result<Vec<VariantEntry>> {
    VariantSpec::ALL
        .iter()
        .map(|&v| {
            let c = bell::variant_conditionals(joint, v)?;
            let score = scores[v.index()];
            Ok(VariantEntry {
                variant: v.to_string(),
                score,
                status: status_name(BoundStatus::classify(score, LOCAL_BOUND)),
                conditionals: (0..4)
                    .map(|i| Conditional {
                        a: i / 2,
                        b: i % 2,
                        prob: c[(i / 2) as usize][(i % 2) as usize],
                    })
                    .collect(),
            })
        })
        .collect()
}

impl AnalysisReport {
    pub fn build(
        protocol: &Protocol,
        joint: &DiscreteJoint,
        an: &Analysis,
    ) -> bellbound_core::Result<Self> {
        let s = &an.score;
        let i = &an.info;
        let names = |vs: &[VariantSpec]| vs.iter().map(ToString::to_string).collect();
        Ok(Self {
            protocol: ProtocolInfo::of(protocol),
            scores: ScoreView {
                beta_score: s.beta_score,
                p_match_a0: s.p_match_a0,
                p_match_a1: s.p_match_a1,
                ic_alpha: s.ic_alpha,
                ic_violated: s.ic_violated,
                violations: names(&s.violations),
                boundary: names(&s.boundary),
                variants: variant_entries(joint, &s.variant_scores)?,
            },
            info: InfoView {
                i_big_b: i.i_big_b,
                i_b: i.i_b,
                i_bxorb: i.i_bxorb,
                i_big_b_lambda: i.i_big_b_lambda,
                i_b_lambda: i.i_b_lambda,
                h_big_b: i.h_big_b,
                h_bxorb: i.h_bxorb,
                delta_b: i.delta_b,
                delta_big_b: i.delta_big_b,
                j_big_b: i.j_big_b,
                j_b: i.j_b,
            },
            cells: an
                .cells
                .iter()
                .map(|c| CellView {
                    lambda: c.lambda,
                    chi: c.chi,
                    weight: c.weight,
                    p1: c.p1,
                    p2: c.p2,
                })
                .collect(),
            averaged_beta_bound: an.averaged_beta_bound,
            fano: FanoView {
                error_entropy_a0: an.fano.error_entropy_a0,
                cond_entropy_big_b: an.fano.cond_entropy_big_b,
                error_entropy_a1: an.fano.error_entropy_a1,
                cond_entropy_bxorb: an.fano.cond_entropy_bxorb,
                beta_bound: an.fano.beta_bound,
                holds: an.fano.holds,
            },
            freedom: FreedomView {
                i_a_resources: an.i_a_resources,
                signaling_gap: an.signaling_gap,
            },
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SurfaceReport {
    pub resolution: usize,
    #[serde(serialize_with = "ser_sig")]
    pub max_beta_max: f64,
    #[serde(serialize_with = "ser_sig_pairs")]
    pub argmax_beta_max: Vec<(f64, f64)>,
    #[serde(serialize_with = "ser_sig")]
    pub min_beta_max: f64,
    #[serde(serialize_with = "ser_sig_pairs")]
    pub argmin_beta_max: Vec<(f64, f64)>,
    #[serde(serialize_with = "ser_sig")]
    pub max_alpha_max: f64,
    #[serde(serialize_with = "ser_sig_pairs")]
    pub argmax_alpha_max: Vec<(f64, f64)>,
    #[serde(serialize_with = "ser_sig")]
    pub beta_bound: f64,
    #[serde(serialize_with = "ser_sig")]
    pub alpha_bound: f64,
    #[serde(serialize_with = "ser_sig_pairs")]
    pub bound_violations: Vec<(f64, f64)>,
    pub theorem_holds: bool,
}

impl SurfaceReport {
    pub fn new(resolution: usize, s: &SurfaceSummary) -> Self {
        Self {
            resolution,
            max_beta_max: s.max_beta_max,
            argmax_beta_max: s.argmax_beta_max.clone(),
            min_beta_max: s.min_beta_max,
            argmin_beta_max: s.argmin_beta_max.clone(),
            max_alpha_max: s.max_alpha_max,
            argmax_alpha_max: s.argmax_alpha_max.clone(),
            beta_bound: LOCAL_BOUND,
            alpha_bound: IC_BOUND,
            bound_violations: s.bound_violations.clone(),
            theorem_holds: s.theorem_holds(),
        }
    }
}
