//! CHSH-type scores, the β functional, the information-causality
//! functional and the information quantities available to Alice.
//!
//! Joints passed here must contain binary variables named
//! [`var::A_SETTING`], [`var::B_SETTING`], [`var::A_OUTCOME`] and
//! [`var::B_OUTCOME`]; [`full_report`] additionally needs [`var::LAMBDA`]
//! and [`var::CHI`].

use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use crate::info::{stable_sum, DiscreteJoint};
use crate::{var, Error, Result};

/// Classical bound shared by all eight CHSH variants.
pub const LOCAL_BOUND: f64 = 0.75;
/// Margin around [`LOCAL_BOUND`] inside which a score counts as boundary.
pub const VIOLATION_MARGIN: f64 = 1e-12;
/// Tolerance on `P(a, b) = 1/4` when settings are required to be uniform.
pub const SETTINGS_TOLERANCE: f64 = 1e-12;

/// Selects one of the eight inequalities
/// `1/4 sum_{a,b} P(A xor B = ab xor alpha a xor beta b xor gamma | a, b) <= 3/4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VariantSpec {
    pub alpha: bool,
    pub beta: bool,
    pub gamma: bool,
}

impl VariantSpec {
    /// The standard CHSH inequality.
    pub const CHSH: Self = Self::new(false, false, false);

    pub const ALL: [Self; 8] = [
        Self::from_index(0),
        Self::from_index(1),
        Self::from_index(2),
        Self::from_index(3),
        Self::from_index(4),
        Self::from_index(5),
        Self::from_index(6),
        Self::from_index(7),
    ];

    pub const fn new(alpha: bool, beta: bool, gamma: bool) -> Self {
        Self { alpha, beta, gamma }
    }

    /// `index = 4 alpha + 2 beta + gamma`.
    pub const fn from_index(i: usize) -> Self {
        Self::new(i & 4 != 0, i & 2 != 0, i & 1 != 0)
    }

    pub const fn index(self) -> usize {
        (self.alpha as usize) << 2 | (self.beta as usize) << 1 | self.gamma as usize
    }

    /// Same `alpha, beta` with `gamma` flipped: the complementary event.
    pub const fn complement(self) -> Self {
        Self::new(self.alpha, self.beta, !self.gamma)
    }

    /// Required value of `A xor B` for settings `(a, b)`.
    pub const fn target(self, a: u32, b: u32) -> u32 {
        (a & b) ^ (self.alpha as u32 & a) ^ (self.beta as u32 & b) ^ self.gamma as u32
    }
}

impl fmt::Display for VariantSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({},{},{})",
            self.alpha as u8, self.beta as u8, self.gamma as u8
        )
    }
}

/// `P(a, b, A, B)` indexed `[a][b][A][B]`.
#[derive(Debug, Clone, Copy)]
struct OutcomeTable([[[[f64; 2]; 2]; 2]; 2]);

impl OutcomeTable {
    fn from_joint(joint: &DiscreteJoint) -> Result<Self> {
        let names = [var::A_SETTING, var::B_SETTING, var::A_OUTCOME, var::B_OUTCOME];
        for name in names {
            if joint.cardinality(name)? != 2 {
                return Err(Error::NotBinary(name.into()));
            }
        }
        let m = joint.marginalize(&names)?;
        // marginalize keeps the joint's variable order; map back to ours
        let order: Vec<usize> = names
            .iter()
            .map(|n| m.index_of(n))
            .collect::<Result<_>>()?;
        let mut t = [[[[0.0; 2]; 2]; 2]; 2];
        for (k, p) in m.atoms() {
            let (a, b, x, y) = (k[order[0]], k[order[1]], k[order[2]], k[order[3]]);
            t[a as usize][b as usize][x as usize][y as usize] += p;
        }
        Ok(Self(t))
    }

    fn settings(&self, a: usize, b: usize) -> f64 {
        let c = &self.0[a][b];
        stable_sum([c[0][0], c[0][1], c[1][0], c[1][1]])
    }

    fn alice_setting(&self, a: usize) -> f64 {
        self.settings(a, 0) + self.settings(a, 1)
    }

    fn require_settings_support(&self) -> Result<()> {
        for a in 0..2 {
            for b in 0..2 {
                if self.settings(a, b) <= 0.0 {
                    return Err(Error::MissingSettingPair {
                        a: a as u8,
                        b: b as u8,
                    });
                }
            }
        }
        Ok(())
    }

    fn require_uniform_settings(&self) -> Result<()> {
        for a in 0..2 {
            for b in 0..2 {
                let prob = self.settings(a, b);
                if (prob - 0.25).abs() > SETTINGS_TOLERANCE {
                    return Err(Error::NonUniformSettings {
                        a: a as u8,
                        b: b as u8,
                        prob,
                    });
                }
            }
        }
        Ok(())
    }

    /// `P(A xor B = t | a, b)`.
    fn xor_given(&self, a: usize, b: usize, t: u32) -> f64 {
        let c = &self.0[a][b];
        let hit = if t == 0 { c[0][0] + c[1][1] } else { c[0][1] + c[1][0] };
        hit / self.settings(a, b)
    }

    fn variant_score(&self, v: VariantSpec) -> f64 {
        let mut terms = [0.0; 4];
        for a in 0..2u32 {
            for b in 0..2u32 {
                terms[(2 * a + b) as usize] =
                    self.xor_given(a as usize, b as usize, v.target(a, b));
            }
        }
        0.25 * stable_sum(terms)
    }

    fn match_probabilities(&self) -> Result<MatchProbabilities> {
        let pa0 = self.alice_setting(0);
        let pa1 = self.alice_setting(1);
        if pa0 <= 0.0 {
            return Err(Error::ZeroProbabilityCondition("a = 0"));
        }
        if pa1 <= 0.0 {
            return Err(Error::ZeroProbabilityCondition("a = 1"));
        }
        let t = &self.0;
        // A = B at a = 0
        let m0 = stable_sum([t[0][0][0][0], t[0][0][1][1], t[0][1][0][0], t[0][1][1][1]]);
        // A = B xor b at a = 1
        let m1 = stable_sum([t[1][0][0][0], t[1][0][1][1], t[1][1][1][0], t[1][1][0][1]]);
        let p_match_a0 = (m0 / pa0).clamp(0.0, 1.0);
        let p_match_a1 = (m1 / pa1).clamp(0.0, 1.0);
        Ok(MatchProbabilities {
            p_match_a0,
            p_match_a1,
            beta: 0.5 * (p_match_a0 + p_match_a1),
        })
    }
}

/// Score of one CHSH variant: `1/4 sum_{a,b} P(A xor B = target | a, b)`.
pub fn chsh_variant_score(joint: &DiscreteJoint, v: VariantSpec) -> Result<f64> {
    let t = OutcomeTable::from_joint(joint)?;
    t.require_settings_support()?;
    Ok(t.variant_score(v))
}

/// The four conditionals `P(A xor B = target | a, b)` of one variant,
/// indexed `[a][b]`.
pub fn variant_conditionals(joint: &DiscreteJoint, v: VariantSpec) -> Result<[[f64; 2]; 2]> {
    let t = OutcomeTable::from_joint(joint)?;
    t.require_settings_support()?;
    let mut out = [[0.0; 2]; 2];
    for a in 0..2u32 {
        for b in 0..2u32 {
            out[a as usize][b as usize] = t.xor_given(a as usize, b as usize, v.target(a, b));
        }
    }
    Ok(out)
}

/// `P(A = B | a = 0)`, `P(A = B xor b | a = 1)` and their mean β.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatchProbabilities {
    pub p_match_a0: f64,
    pub p_match_a1: f64,
    pub beta: f64,
}

/// β computed from Alice's conditional success events.
pub fn beta_score(joint: &DiscreteJoint) -> Result<MatchProbabilities> {
    OutcomeTable::from_joint(joint)?.match_probabilities()
}

/// Information-causality functional
/// `(2 P(A=B|a=0) - 1)^2 + (2 P(A=B xor b|a=1) - 1)^2`.
pub fn ic_alpha(p_match_a0: f64, p_match_a1: f64) -> Result<f64> {
    for (what, p) in [("P(A=B|a=0)", p_match_a0), ("P(A=B^b|a=1)", p_match_a1)] {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Domain { what, value: p });
        }
    }
    let u = 2.0 * p_match_a0 - 1.0;
    let w = 2.0 * p_match_a1 - 1.0;
    Ok(u * u + w * w)
}

/// Transmitted information about Bob's setting and outcome:
/// `(I(b; lambda, chi) - I(b; lambda), I(B; lambda, chi) - I(B; lambda))`.
pub fn transmitted_deltas(joint: &DiscreteJoint) -> Result<(f64, f64)> {
    let alice = [var::LAMBDA, var::CHI];
    let lam = [var::LAMBDA];
    let delta_b = joint.mutual_information(&[var::B_SETTING], &alice)?
        - joint.mutual_information(&[var::B_SETTING], &lam)?;
    let delta_big_b = joint.mutual_information(&[var::B_OUTCOME], &alice)?
        - joint.mutual_information(&[var::B_OUTCOME], &lam)?;
    Ok((delta_b.max(0.0), delta_big_b.max(0.0)))
}

/// Where a score sits relative to the local bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundStatus {
    Below,
    Boundary,
    Violated,
}

impl BoundStatus {
    pub fn classify(score: f64, bound: f64) -> Self {
        if score > bound + VIOLATION_MARGIN {
            Self::Violated
        } else if score >= bound - VIOLATION_MARGIN {
            Self::Boundary
        } else {
            Self::Below
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScoreReport {
    /// Indexed by [`VariantSpec::index`].
    pub variant_scores: [f64; 8],
    pub beta_score: f64,
    pub ic_alpha: f64,
    pub p_match_a0: f64,
    pub p_match_a1: f64,
    pub violations: Vec<VariantSpec>,
    pub boundary: Vec<VariantSpec>,
    pub ic_violated: bool,
}

impl ScoreReport {
    pub fn score(&self, v: VariantSpec) -> f64 {
        self.variant_scores[v.index()]
    }

    pub fn max_variant_score(&self) -> f64 {
        self.variant_scores.iter().copied().fold(f64::MIN, f64::max)
    }
}

/// Information quantities available at Alice's site through `(lambda, chi)`.
#[derive(Debug, Clone, PartialEq)]
pub struct InfoReport {
    /// `I(B; lambda, chi)`
    pub i_big_b: f64,
    /// `I(b; lambda, chi)`
    pub i_b: f64,
    /// `I(B xor b; lambda, chi)`
    pub i_bxorb: f64,
    /// `I(B; lambda)`
    pub i_big_b_lambda: f64,
    /// `I(b; lambda)`
    pub i_b_lambda: f64,
    pub h_big_b: f64,
    pub h_bxorb: f64,
    pub delta_b: f64,
    pub delta_big_b: f64,
    /// `J(lambda, chi -> B)`
    pub j_big_b: f64,
    /// `J(lambda, chi -> b)`
    pub j_b: f64,
}

fn build_scores(table: &OutcomeTable) -> Result<ScoreReport> {
    let matches = table.match_probabilities()?;
    let mut variant_scores = [0.0; 8];
    for v in VariantSpec::ALL {
        variant_scores[v.index()] = table.variant_score(v);
    }
    let mut violations = Vec::new();
    let mut boundary = Vec::new();
    for v in VariantSpec::ALL {
        match BoundStatus::classify(variant_scores[v.index()], LOCAL_BOUND) {
            BoundStatus::Violated => violations.push(v),
            BoundStatus::Boundary => boundary.push(v),
            BoundStatus::Below => {}
        }
    }
    let alpha = ic_alpha(matches.p_match_a0, matches.p_match_a1)?;
    Ok(ScoreReport {
        variant_scores,
        beta_score: matches.beta,
        ic_alpha: alpha,
        p_match_a0: matches.p_match_a0,
        p_match_a1: matches.p_match_a1,
        violations,
        boundary,
        ic_violated: BoundStatus::classify(alpha, 1.0) == BoundStatus::Violated,
    })
}

/// Scores for a joint with uniform independent settings. β is computed
/// from conditional events and cross-checked against the CHSH variant.
pub fn score_report(joint: &DiscreteJoint) -> Result<ScoreReport> {
    let table = OutcomeTable::from_joint(joint)?;
    table.require_uniform_settings()?;
    let report = build_scores(&table)?;
    let chsh = report.score(VariantSpec::CHSH);
    if (chsh - report.beta_score).abs() > 1e-12 {
        return Err(Error::InvariantBreach(format!(
            "beta {} differs from CHSH score {chsh}",
            report.beta_score
        )));
    }
    Ok(report)
}

/// Scores without the uniform-settings requirement, for sampled joints.
/// The CHSH score and β then agree only approximately.
pub fn score_report_lenient(joint: &DiscreteJoint) -> Result<ScoreReport> {
    let table = OutcomeTable::from_joint(joint)?;
    table.require_settings_support()?;
    build_scores(&table)
}

pub fn info_report(joint: &DiscreteJoint) -> Result<InfoReport> {
    let alice = [var::LAMBDA, var::CHI];
    let lam = [var::LAMBDA];
    let j = joint.derive_xor(var::B_OUTCOME, var::B_SETTING, var::B_XOR_B)?;
    let i_big_b = j.mutual_information(&[var::B_OUTCOME], &alice)?;
    let i_b = j.mutual_information(&[var::B_SETTING], &alice)?;
    let i_bxorb = j.mutual_information(&[var::B_XOR_B], &alice)?;
    let i_big_b_lambda = j.mutual_information(&[var::B_OUTCOME], &lam)?;
    let i_b_lambda = j.mutual_information(&[var::B_SETTING], &lam)?;
    let report = InfoReport {
        i_big_b,
        i_b,
        i_bxorb,
        i_big_b_lambda,
        i_b_lambda,
        h_big_b: j.entropy(&[var::B_OUTCOME])?,
        h_bxorb: j.entropy(&[var::B_XOR_B])?,
        delta_b: (i_b - i_b_lambda).max(0.0),
        delta_big_b: (i_big_b - i_big_b_lambda).max(0.0),
        j_big_b: j.guessed_information(&alice, &[var::B_OUTCOME])?,
        j_b: j.guessed_information(&alice, &[var::B_SETTING])?,
    };
    if report.delta_b > report.i_b + 1e-10 {
        return Err(Error::InvariantBreach(format!(
            "delta_b {} exceeds I(b; lambda, chi) {}",
            report.delta_b, report.i_b
        )));
    }
    Ok(report)
}

/// Both reports for a joint over `(a, b, A, B, lambda, chi)`.
pub fn full_report(joint: &DiscreteJoint) -> Result<(ScoreReport, InfoReport)> {
    Ok((score_report(joint)?, info_report(joint)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::info::Variable;
    use alloc::vec;

    /// Joint over (a, b, A, B, lambda, chi) with uniform settings, from a
    /// function giving P(A, B | a, b) as a 2x2 table.
    fn joint_from<F: Fn(u32, u32) -> [[f64; 2]; 2]>(f: F) -> DiscreteJoint {
        let vars = vec![
            Variable::new("a", 2),
            Variable::new("b", 2),
            Variable::new("A", 2),
            Variable::new("B", 2),
            Variable::new("lambda", 1),
            Variable::new("chi", 1),
        ];
        let mut atoms = Vec::new();
        for a in 0..2 {
            for b in 0..2 {
                let t = f(a, b);
                for x in 0..2 {
                    for y in 0..2 {
                        atoms.push((vec![a, b, x, y, 0, 0], 0.25 * t[x as usize][y as usize]));
                    }
                }
            }
        }
        DiscreteJoint::new(vars, atoms).unwrap()
    }

    fn pr_box() -> DiscreteJoint {
        joint_from(|a, b| {
            if a & b == 0 {
                [[0.5, 0.0], [0.0, 0.5]]
            } else {
                [[0.0, 0.5], [0.5, 0.0]]
            }
        })
    }

    fn uniform() -> DiscreteJoint {
        joint_from(|_, _| [[0.25; 2]; 2])
    }

    #[test]
    fn variant_indexing() {
        for (i, v) in VariantSpec::ALL.iter().enumerate() {
            assert_eq!(v.index(), i);
        }
        assert_eq!(VariantSpec::CHSH.index(), 0);
        assert_eq!(VariantSpec::new(true, false, true).to_string(), "(1,0,1)");
        assert_eq!(VariantSpec::CHSH.complement(), VariantSpec::new(false, false, true));
    }

    #[test]
    fn variant_score_examples() {
        assert_eq!(chsh_variant_score(&pr_box(), VariantSpec::CHSH).unwrap(), 1.0);
        for v in VariantSpec::ALL {
            assert_eq!(chsh_variant_score(&uniform(), v).unwrap(), 0.5);
        }
        // A = B = 0 always
        let det = joint_from(|_, _| [[1.0, 0.0], [0.0, 0.0]]);
        assert_eq!(chsh_variant_score(&det, VariantSpec::CHSH).unwrap(), 0.75);
    }

    #[test]
    fn missing_setting_pair_is_named() {
        let vars = vec![
            Variable::new("a", 2),
            Variable::new("b", 2),
            Variable::new("A", 2),
            Variable::new("B", 2),
        ];
        let atoms = vec![
            (vec![0, 0, 0, 0], 0.5),
            (vec![0, 1, 0, 0], 0.25),
            (vec![1, 0, 0, 0], 0.25),
        ];
        let j = DiscreteJoint::new(vars, atoms).unwrap();
        assert_eq!(
            chsh_variant_score(&j, VariantSpec::CHSH),
            Err(Error::MissingSettingPair { a: 1, b: 1 })
        );
        assert!(matches!(score_report(&j), Err(Error::NonUniformSettings { .. })));
    }

    #[test]
    fn beta_examples() {
        let m = beta_score(&pr_box()).unwrap();
        assert_eq!((m.p_match_a0, m.p_match_a1, m.beta), (1.0, 1.0, 1.0));
        let m = beta_score(&uniform()).unwrap();
        assert_eq!((m.p_match_a0, m.p_match_a1, m.beta), (0.5, 0.5, 0.5));
    }

    #[test]
    fn ic_alpha_examples() {
        assert_eq!(ic_alpha(0.5, 0.5).unwrap(), 0.0);
        assert_eq!(ic_alpha(1.0, 1.0).unwrap(), 2.0);
        assert_eq!(ic_alpha(0.5, 1.0).unwrap(), 1.0);
        assert_eq!(ic_alpha(0.8, 0.3).unwrap(), ic_alpha(0.3, 0.8).unwrap());
        assert!(ic_alpha(1.2, 0.5).is_err());
    }

    #[test]
    fn status_classification() {
        assert_eq!(BoundStatus::classify(0.75, 0.75), BoundStatus::Boundary);
        assert_eq!(BoundStatus::classify(0.75 + 5e-13, 0.75), BoundStatus::Boundary);
        assert_eq!(BoundStatus::classify(0.75 + 2e-12, 0.75), BoundStatus::Violated);
        assert_eq!(BoundStatus::classify(0.7, 0.75), BoundStatus::Below);
    }

    #[test]
    fn reports_on_trivial_joints() {
        let (s, i) = full_report(&uniform()).unwrap();
        assert!(s.variant_scores.iter().all(|&x| x == 0.5));
        assert!(s.violations.is_empty() && !s.ic_violated);
        assert_eq!(i.i_b, 0.0);
        assert_eq!(i.i_big_b, 0.0);
        assert_eq!(i.delta_b, 0.0);
        let (s, _) = full_report(&pr_box()).unwrap();
        assert_eq!(s.violations, vec![VariantSpec::CHSH]);
        assert!(s.ic_violated);
    }
}
