//! Local-hidden-variable protocols with one-way communication from Bob to
//! Alice.
//!
//! A referee draws uniform independent settings `a, b`. Both parties see a
//! shared hidden variable `lambda`; Bob additionally has private
//! randomness `mu_B` and Alice `mu_A`. Bob outputs `B = f(b, lambda, mu_B)`
//! and sends `chi = g(b, lambda, mu_B)`; Alice outputs
//! `A = h(a, lambda, chi, mu_A)`.
//!
//! [`Protocol::exact_joint`] enumerates every combination and exports the
//! joint over `(a, b, A, B, lambda, chi)` with the private randomness summed
//! out, so information quantities measured on it only count what Alice can
//! actually see.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bell::{self, InfoReport, ScoreReport};
use crate::bounds::{self, CellStats};
use crate::info::{h2, stable_sum, DiscreteJoint, Variable};
use crate::{var, Error, Result};

/// Default cap on the number of enumerated combinations.
pub const DEFAULT_ENUMERATION_CAP: u128 = 10_000_000;

/// Tolerance on the total mass of a user-supplied [`Pmf`].
pub const PMF_TOLERANCE: f64 = 1e-9;

/// Slack used by the Fano consistency checks in [`Analysis`].
pub const FANO_TOLERANCE: f64 = 1e-9;

/// Finite probability mass function over `0..len`.
#[derive(Debug, Clone, PartialEq)]
pub struct Pmf(Vec<f64>);

impl Pmf {
    /// Validates `probs` (nonempty, entries in `[0, 1]`, total within
    /// `1e-9` of 1) and rescales it to unit mass.
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidProtocol("empty distribution".to_string()));
        }
        if let Some(p) = probs.iter().find(|p| !(0.0..=1.0).contains(*p)) {
            return Err(Error::InvalidProtocol(format!(
                "probability {p} outside [0, 1]"
            )));
        }
        let total = stable_sum(probs.iter().copied());
        if (total - 1.0).abs() > PMF_TOLERANCE {
            return Err(Error::InvalidProtocol(format!(
                "probabilities sum to {total}"
            )));
        }
        Ok(Self(probs.into_iter().map(|p| p / total).collect()))
    }

    /// Normalizes nonnegative weights with a positive total.
    pub fn from_weights(weights: Vec<f64>) -> Result<Self> {
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidProtocol("negative weight".to_string()));
        }
        let total = stable_sum(weights.iter().copied());
        if total.is_nan() || total <= 0.0 {
            return Err(Error::InvalidProtocol("weights sum to zero".to_string()));
        }
        Ok(Self(weights.into_iter().map(|w| w / total).collect()))
    }

    /// Point mass on a single value.
    pub fn point() -> Self {
        Self(vec![1.0])
    }

    pub fn uniform(n: usize) -> Self {
        assert!(n > 0, "uniform distribution needs at least one value");
        Self(vec![1.0 / n as f64; n])
    }

    /// `[1 - p, p]`.
    pub fn bernoulli(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Domain {
                what: "bias",
                value: p,
            });
        }
        Ok(Self(vec![1.0 - p, p]))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn probs(&self) -> &[f64] {
        &self.0
    }

    fn sample<R: Rng>(&self, rng: &mut R) -> u32 {
        let u: f64 = rng.random();
        let mut acc = 0.0;
        let mut last = 0;
        for (i, p) in self.0.iter().enumerate() {
            if *p > 0.0 {
                acc += p;
                last = i;
                if u < acc {
                    return i as u32;
                }
            }
        }
        last as u32
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Protocol {
    /// Human-readable name, e.g. the builtin name it was built from.
    pub label: String,
    /// Generator seed for randomly constructed protocols.
    pub seed: Option<u64>,
    lambda: Pmf,
    bob_private: Pmf,
    alice_private: Pmf,
    message_alphabet: u32,
    /// `[b][lambda][mu_B]`
    bob_output: Vec<u8>,
    /// `[b][lambda][mu_B]`
    message: Vec<u32>,
    /// `[a][lambda][chi][mu_A]`
    alice_output: Vec<u8>,
}

impl Protocol {
    /// Builds a protocol from explicit lookup tables. Layouts are
    /// row-major: `bob_output` and `message` over `(b, lambda, mu_B)`,
    /// `alice_output` over `(a, lambda, chi, mu_A)`.
    #[allow(clippy::too_many_arguments)]
    pub fn from_tables(
        label: impl Into<String>,
        lambda: Pmf,
        bob_private: Pmf,
        alice_private: Pmf,
        message_alphabet: u32,
        bob_output: Vec<u8>,
        message: Vec<u32>,
        alice_output: Vec<u8>,
    ) -> Result<Self> {
        if message_alphabet == 0 {
            return Err(Error::InvalidProtocol(
                "message alphabet must be nonempty".to_string(),
            ));
        }
        let bob_len = 2 * lambda.len() * bob_private.len();
        let alice_len = 2 * lambda.len() * message_alphabet as usize * alice_private.len();
        if bob_output.len() != bob_len || message.len() != bob_len {
            return Err(Error::InvalidProtocol(format!(
                "Bob's tables need {bob_len} entries"
            )));
        }
        if alice_output.len() != alice_len {
            return Err(Error::InvalidProtocol(format!(
                "Alice's table needs {alice_len} entries"
            )));
        }
        if bob_output.iter().chain(&alice_output).any(|&x| x > 1) {
            return Err(Error::InvalidProtocol("outputs must be bits".to_string()));
        }
        if let Some(m) = message.iter().find(|&&m| m >= message_alphabet) {
            return Err(Error::InvalidProtocol(format!(
                "message symbol {m} outside alphabet of size {message_alphabet}"
            )));
        }
        Ok(Self {
            label: label.into(),
            seed: None,
            lambda,
            bob_private,
            alice_private,
            message_alphabet,
            bob_output,
            message,
            alice_output,
        })
    }

    /// Builds a protocol by tabulating the three maps on their domains.
    #[allow(clippy::too_many_arguments)]
    pub fn from_fns<FB, FM, FA>(
        label: impl Into<String>,
        lambda: Pmf,
        bob_private: Pmf,
        alice_private: Pmf,
        message_alphabet: u32,
        bob_output: FB,
        message: FM,
        alice_output: FA,
    ) -> Result<Self>
    where
        FB: Fn(u32, u32, u32) -> u32,
        FM: Fn(u32, u32, u32) -> u32,
        FA: Fn(u32, u32, u32, u32) -> u32,
    {
        let (nl, nb, na) = (
            lambda.len() as u32,
            bob_private.len() as u32,
            alice_private.len() as u32,
        );
        let mut bob = Vec::new();
        let mut msg = Vec::new();
        for b in 0..2 {
            for l in 0..nl {
                for mb in 0..nb {
                    let out = bob_output(b, l, mb);
                    if out > 1 {
                        return Err(Error::InvalidProtocol(format!("Bob outputs {out}")));
                    }
                    bob.push(out as u8);
                    msg.push(message(b, l, mb));
                }
            }
        }
        let mut alice = Vec::new();
        for a in 0..2 {
            for l in 0..nl {
                for chi in 0..message_alphabet {
                    for ma in 0..na {
                        let out = alice_output(a, l, chi, ma);
                        if out > 1 {
                            return Err(Error::InvalidProtocol(format!("Alice outputs {out}")));
                        }
                        alice.push(out as u8);
                    }
                }
            }
        }
        Self::from_tables(
            label,
            lambda,
            bob_private,
            alice_private,
            message_alphabet,
            bob,
            msg,
            alice,
        )
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn lambda(&self) -> &Pmf {
        &self.lambda
    }

    pub fn bob_private(&self) -> &Pmf {
        &self.bob_private
    }

    pub fn alice_private(&self) -> &Pmf {
        &self.alice_private
    }

    pub fn message_alphabet(&self) -> u32 {
        self.message_alphabet
    }

    fn bob_index(&self, b: u32, l: u32, mb: u32) -> usize {
        ((b as usize * self.lambda.len()) + l as usize) * self.bob_private.len() + mb as usize
    }

    fn alice_index(&self, a: u32, l: u32, chi: u32, ma: u32) -> usize {
        (((a as usize * self.lambda.len()) + l as usize) * self.message_alphabet as usize
            + chi as usize)
            * self.alice_private.len()
            + ma as usize
    }

    pub fn bob_output(&self, b: u32, l: u32, mb: u32) -> u32 {
        u32::from(self.bob_output[self.bob_index(b, l, mb)])
    }

    pub fn message(&self, b: u32, l: u32, mb: u32) -> u32 {
        self.message[self.bob_index(b, l, mb)]
    }

    pub fn alice_output(&self, a: u32, l: u32, chi: u32, ma: u32) -> u32 {
        u32::from(self.alice_output[self.alice_index(a, l, chi, ma)])
    }

    /// Number of `(a, b, lambda, mu_A, mu_B)` combinations.
    pub fn enumeration_size(&self) -> u128 {
        4 * self.lambda.len() as u128
            * self.alice_private.len() as u128
            * self.bob_private.len() as u128
    }

    fn variables(&self) -> Vec<Variable> {
        vec![
            Variable::new(var::A_SETTING, 2),
            Variable::new(var::B_SETTING, 2),
            Variable::new(var::A_OUTCOME, 2),
            Variable::new(var::B_OUTCOME, 2),
            Variable::new(var::LAMBDA, self.lambda.len() as u32),
            Variable::new(var::CHI, self.message_alphabet),
        ]
    }

    pub fn exact_joint(&self) -> Result<DiscreteJoint> {
        self.exact_joint_capped(DEFAULT_ENUMERATION_CAP)
    }

    /// Joint over `(a, b, A, B, lambda, chi)` by exhaustive enumeration.
    pub fn exact_joint_capped(&self, cap: u128) -> Result<DiscreteJoint> {
        let atoms = self.enumeration_size();
        if atoms > cap {
            return Err(Error::EnumerationTooLarge { atoms, cap });
        }
        let mut acc: BTreeMap<Vec<u32>, f64> = BTreeMap::new();
        for (l, &pl) in self.lambda.probs().iter().enumerate() {
            if pl == 0.0 {
                continue;
            }
            let l = l as u32;
            for (mb, &pmb) in self.bob_private.probs().iter().enumerate() {
                if pmb == 0.0 {
                    continue;
                }
                for (ma, &pma) in self.alice_private.probs().iter().enumerate() {
                    if pma == 0.0 {
                        continue;
                    }
                    let weight = 0.25 * pl * pmb * pma;
                    for b in 0..2 {
                        let big_b = self.bob_output(b, l, mb as u32);
                        let chi = self.message(b, l, mb as u32);
                        for a in 0..2 {
                            let big_a = self.alice_output(a, l, chi, ma as u32);
                            *acc.entry(vec![a, b, big_a, big_b, l, chi]).or_insert(0.0) += weight;
                        }
                    }
                }
            }
        }
        DiscreteJoint::new(self.variables(), acc)
    }

    /// One trial: `[a, b, A, B, lambda, chi]`.
    fn trial<R: Rng>(&self, rng: &mut R) -> [u32; 6] {
        let a = rng.random_range(0..2u32);
        let b = rng.random_range(0..2u32);
        let l = self.lambda.sample(rng);
        let mb = self.bob_private.sample(rng);
        let ma = self.alice_private.sample(rng);
        let big_b = self.bob_output(b, l, mb);
        let chi = self.message(b, l, mb);
        let big_a = self.alice_output(a, l, chi, ma);
        [a, b, big_a, big_b, l, chi]
    }

    /// `n` i.i.d. trials driven by a ChaCha8 generator seeded with `seed`.
    pub fn sample_joint(&self, n: u64, seed: u64) -> Result<EmpiricalJoint> {
        if n == 0 {
            return Err(Error::Domain {
                what: "trial count",
                value: 0.0,
            });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let nl = self.lambda.len();
        let nm = self.message_alphabet as usize;
        let mut cells = vec![0u64; 16 * nl * nm];
        for _ in 0..n {
            let [a, b, x, y, l, chi] = self.trial(&mut rng);
            let idx = ((((a * 2 + b) * 2 + x) * 2 + y) as usize * nl + l as usize) * nm
                + chi as usize;
            cells[idx] += 1;
        }
        let mut counts = BTreeMap::new();
        for (idx, &c) in cells.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let chi = idx % nm;
            let rest = idx / nm;
            let l = rest % nl;
            let bits = rest / nl;
            let key = vec![
                (bits >> 3 & 1) as u32,
                (bits >> 2 & 1) as u32,
                (bits >> 1 & 1) as u32,
                (bits & 1) as u32,
                l as u32,
                chi as u32,
            ];
            counts.insert(key, c);
        }
        Ok(EmpiricalJoint {
            variables: self.variables(),
            counts,
            total: n,
            seed,
        })
    }

    /// Exact joint plus both reports and the per-cell statistics.
    pub fn analyze(&self) -> Result<Analysis> {
        Analysis::of_joint(&self.exact_joint()?)
    }
}

/// Observed counts from [`Protocol::sample_joint`].
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalJoint {
    variables: Vec<Variable>,
    pub counts: BTreeMap<Vec<u32>, u64>,
    pub total: u64,
    pub seed: u64,
}

impl EmpiricalJoint {
    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn to_joint(&self) -> Result<DiscreteJoint> {
        DiscreteJoint::from_counts(self.variables.clone(), &self.counts)
    }

    /// Number of trials matching `event` on `[a, b, A, B, lambda, chi]`.
    pub fn count<F: Fn(&[u32]) -> bool>(&self, event: F) -> u64 {
        self.counts
            .iter()
            .filter(|(k, _)| event(k))
            .map(|(_, c)| *c)
            .sum()
    }
}

/// SplitMix64 mix of a base seed and a task index, for independent
/// generator streams.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed
        .wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Deterministic map on one bit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BitMap {
    Const0,
    Const1,
    Identity,
    Not,
}

impl BitMap {
    pub const ALL: [Self; 4] = [Self::Const0, Self::Const1, Self::Identity, Self::Not];

    pub fn apply(self, x: u32) -> u32 {
        match self {
            Self::Const0 => 0,
            Self::Const1 => 1,
            Self::Identity => x & 1,
            Self::Not => (x & 1) ^ 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Const0 => "const0",
            Self::Const1 => "const1",
            Self::Identity => "id",
            Self::Not => "not",
        }
    }
}

impl FromStr for BitMap {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "const0" | "0" => Ok(Self::Const0),
            "const1" | "1" => Ok(Self::Const1),
            "id" | "identity" => Ok(Self::Identity),
            "not" => Ok(Self::Not),
            _ => Err(Error::InvalidProtocol(format!("unknown bit map `{s}`"))),
        }
    }
}

/// No-communication deterministic strategy `A = fa(a)`, `B = fb(b)`.
pub fn make_local_deterministic(fa: BitMap, fb: BitMap) -> Protocol {
    Protocol::from_fns(
        format!("local:{},{}", fa.name(), fb.name()),
        Pmf::point(),
        Pmf::point(),
        Pmf::point(),
        2,
        |b, _, _| fb.apply(b),
        |_, _, _| 0,
        |a, _, _, _| fa.apply(a),
    )
    .expect("local strategy tables are well formed")
}

/// No-communication strategy over a shared uniform bit `lambda`.
///
/// `alice` and `bob` are 4-bit truth tables: the output for setting `s`
/// and hidden bit `l` is bit `2 l + s` of the table. The 16 x 16 pairs
/// cover every deterministic response function of `(setting, lambda)`.
pub fn make_local_shared_bit(alice: u8, bob: u8) -> Protocol {
    let lookup = |table: u8, s: u32, l: u32| u32::from(table >> (2 * l + s) & 1);
    Protocol::from_fns(
        format!("local-shared:{alice:x},{bob:x}"),
        Pmf::uniform(2),
        Pmf::point(),
        Pmf::point(),
        2,
        |b, l, _| lookup(bob, b, l),
        |_, _, _| 0,
        |a, l, _, _| lookup(alice, a, l),
    )
    .expect("local strategy tables are well formed")
}

/// Shared uniform bit `r`; Bob outputs `B = r` and sends `chi = b`; Alice
/// outputs `A = r xor (a chi)`. Reproduces the PR-box correlation exactly.
pub fn make_one_bit_pr() -> Protocol {
    Protocol::from_fns(
        "pr-onebit",
        Pmf::uniform(2),
        Pmf::point(),
        Pmf::point(),
        2,
        |_, l, _| l,
        |b, _, _| b,
        |a, l, chi, _| l ^ (a & chi),
    )
    .expect("PR tables are well formed")
}

/// Which constant Alice outputs on `a = 0` in [`make_biased_strategy`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flavor {
    /// `A = 1` on `a = 0`; targets the variant `(0,0,0)`.
    One,
    /// `A = 0` on `a = 0`; the image of [`Flavor::One`] under
    /// `A -> A xor 1`, `b -> b xor 1`, targeting `(1,0,1)`.
    Zero,
}

impl Flavor {
    pub fn name(self) -> &'static str {
        match self {
            Self::One => "one",
            Self::Zero => "zero",
        }
    }
}

impl FromStr for Flavor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "one" | "1" => Ok(Self::One),
            "zero" | "0" => Ok(Self::Zero),
            _ => Err(Error::InvalidProtocol(format!("unknown flavor `{s}`"))),
        }
    }
}

/// Violation without outcome information when Bob's marginal is biased.
///
/// Bob's private coin sets `B` with `P(B = 1) = p`; `lambda` is trivial.
/// For [`Flavor::One`] Bob sends `chi = B xor b`, Alice answers 1 on
/// `a = 0` and `chi` on `a = 1`. Then `I(B; lambda, chi) = 0`,
/// `I(B xor b; lambda, chi) = 1` and `beta = (1 + p) / 2`.
/// [`Flavor::Zero`] is the relabeled twin: `chi = B xor b xor 1`, Alice
/// answers 0 on `a = 0` and `chi xor 1` on `a = 1`.
pub fn make_biased_strategy(p: f64, flavor: Flavor) -> Result<Protocol> {
    let coin = Pmf::bernoulli(p)?;
    let flip = match flavor {
        Flavor::One => 0,
        Flavor::Zero => 1,
    };
    Protocol::from_fns(
        format!("biased:{p}:{}", flavor.name()),
        Pmf::point(),
        coin,
        Pmf::point(),
        2,
        |_, _, mb| mb,
        move |b, _, mb| mb ^ b ^ flip,
        move |a, _, chi, _| if a == 0 { 1 ^ flip } else { chi ^ flip },
    )
}

/// Support sizes for the random protocol generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RandomSizes {
    pub lambda: u32,
    pub bob_private: u32,
    pub alice_private: u32,
    pub message_alphabet: u32,
}

impl RandomSizes {
    /// Small sizes derived from `seed`: `lambda` in 1..=4, `mu_B` in 1..=3,
    /// `mu_A` in 1..=2, alphabet in 2..=3.
    pub fn from_seed(seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, u64::MAX));
        Self {
            lambda: rng.random_range(1..=4),
            bob_private: rng.random_range(1..=3),
            alice_private: rng.random_range(1..=2),
            message_alphabet: rng.random_range(2..=3),
        }
    }
}

fn random_pmf<R: Rng>(rng: &mut R, n: u32) -> Pmf {
    loop {
        // sparse weights exercise the 0 log 0 branches
        let w: Vec<f64> = (0..n)
            .map(|_| {
                if rng.random_ratio(1, 4) {
                    0.0
                } else {
                    rng.random::<f64>()
                }
            })
            .collect();
        if let Ok(p) = Pmf::from_weights(w) {
            return p;
        }
    }
}

fn random_bits<R: Rng>(rng: &mut R, n: usize) -> Vec<u8> {
    (0..n).map(|_| rng.random_range(0..2u8)).collect()
}

/// Random protocol whose message ignores Bob's setting:
/// `chi = g(lambda, mu_B)`, so `I(b; lambda, chi) = 0` by construction.
/// Output maps are arbitrary random tables.
pub fn random_protocol_b_independent(seed: u64, sizes: RandomSizes) -> Result<Protocol> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lambda = random_pmf(&mut rng, sizes.lambda);
    let bob_private = random_pmf(&mut rng, sizes.bob_private);
    let alice_private = random_pmf(&mut rng, sizes.alice_private);
    let m = sizes.message_alphabet;
    let bob_len = 2 * (sizes.lambda * sizes.bob_private) as usize;
    let bob_output = random_bits(&mut rng, bob_len);
    let per_setting: Vec<u32> = (0..bob_len / 2)
        .map(|_| rng.random_range(0..m))
        .collect();
    let message = per_setting.iter().chain(&per_setting).copied().collect();
    let alice_len = 2 * (sizes.lambda * m * sizes.alice_private) as usize;
    let alice_output = random_bits(&mut rng, alice_len);
    Ok(Protocol::from_tables(
        format!("random-b-indep:{seed}"),
        lambda,
        bob_private,
        alice_private,
        m,
        bob_output,
        message,
        alice_output,
    )?
    .with_seed(seed))
}

/// Unconstrained random protocol, biased toward outcome-blind cases.
///
/// With probability 1/2 Bob's private randomness carries an extra uniform
/// pad bit `u` (`mu_B = 2 w + u`) that is XORed into his output; with
/// probability 1/2 the message table then ignores `u`, which hides `B`
/// from Alice entirely. The message may depend on `b`.
pub fn random_protocol_general(seed: u64, sizes: RandomSizes) -> Result<Protocol> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lambda = random_pmf(&mut rng, sizes.lambda);
    let inner = random_pmf(&mut rng, sizes.bob_private);
    let alice_private = random_pmf(&mut rng, sizes.alice_private);
    let m = sizes.message_alphabet;
    let padded = rng.random_bool(0.5);
    let message_sees_pad = rng.random_bool(0.5);

    let nl = sizes.lambda;
    let nw = sizes.bob_private;
    let base_out: Vec<u8> = random_bits(&mut rng, (2 * nl * nw) as usize);
    let base_msg: Vec<u32> = (0..2 * nl * nw * 2).map(|_| rng.random_range(0..m)).collect();
    let alice_output = random_bits(&mut rng, (2 * nl * m * sizes.alice_private) as usize);

    let label = format!("random:{seed}");
    let protocol = if padded {
        let bob_private = Pmf::from_weights(
            inner
                .probs()
                .iter()
                .flat_map(|&p| [0.5 * p, 0.5 * p])
                .collect(),
        )?;
        Protocol::from_fns(
            label,
            lambda,
            bob_private,
            Pmf::from_weights(alice_private.probs().to_vec())?,
            m,
            |b, l, mb| {
                let (w, u) = (mb / 2, mb % 2);
                u32::from(base_out[((b * nl + l) * nw + w) as usize]) ^ u
            },
            |b, l, mb| {
                let (w, u) = (mb / 2, mb % 2);
                let u = if message_sees_pad { u } else { 0 };
                base_msg[(((b * nl + l) * nw + w) * 2 + u) as usize]
            },
            |a, l, chi, ma| {
                u32::from(alice_output[(((a * nl + l) * m + chi) * sizes.alice_private + ma) as usize])
            },
        )?
    } else {
        let message = (0..2 * nl * nw)
            .map(|i| base_msg[(i * 2) as usize])
            .collect();
        Protocol::from_tables(label, lambda, inner, alice_private, m, base_out, message, alice_output)?
    };
    Ok(protocol.with_seed(seed))
}

/// Fano consistency on the exact joint: the error entropy of each guess
/// bounds the conditional entropy of its target given `(lambda, chi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FanoCheck {
    /// `H(1 - P(A=B|a=0))`
    pub error_entropy_a0: f64,
    /// `H(B | lambda, chi) = H(B) - I(B; lambda, chi)`
    pub cond_entropy_big_b: f64,
    /// `H(1 - P(A=B xor b|a=1))`
    pub error_entropy_a1: f64,
    /// `H(B xor b | lambda, chi)`
    pub cond_entropy_bxorb: f64,
    /// Largest β the information content permits.
    pub beta_bound: f64,
    pub holds: bool,
}

impl FanoCheck {
    fn evaluate(score: &ScoreReport, info: &InfoReport) -> Result<Self> {
        let cond_b = (info.h_big_b - info.i_big_b).max(0.0);
        let cond_x = (info.h_bxorb - info.i_bxorb).max(0.0);
        let e0 = h2(1.0 - score.p_match_a0);
        let e1 = h2(1.0 - score.p_match_a1);
        let beta_bound = bounds::beta_max_from_info(
            info.i_big_b.min(1.0),
            info.i_bxorb.min(1.0),
            info.h_big_b.min(1.0),
            info.h_bxorb.min(1.0),
        )?;
        let holds = e0 >= cond_b - FANO_TOLERANCE
            && e1 >= cond_x - FANO_TOLERANCE
            && score.beta_score <= beta_bound + FANO_TOLERANCE;
        Ok(Self {
            error_entropy_a0: e0,
            cond_entropy_big_b: cond_b,
            error_entropy_a1: e1,
            cond_entropy_bxorb: cond_x,
            beta_bound,
            holds,
        })
    }
}

/// Everything computed for one exact joint.
#[derive(Debug, Clone, PartialEq)]
pub struct Analysis {
    pub score: ScoreReport,
    pub info: InfoReport,
    /// Per `(lambda0, chi0)` conditional statistics.
    pub cells: Vec<CellStats>,
    /// `sum_cells P(cell) beta_max(P1, P2)` when every cell sees both
    /// settings of Bob.
    pub averaged_beta_bound: Option<f64>,
    pub fano: FanoCheck,
    /// `I(a; lambda, chi, b)`
    pub i_a_resources: f64,
    /// `max |P(B | a=0, b) - P(B | a=1, b)|`
    pub signaling_gap: f64,
}

impl Analysis {
    pub fn of_joint(joint: &DiscreteJoint) -> Result<Self> {
        let (score, info) = bell::full_report(joint)?;
        let cells = cell_stats(joint)?;
        let averaged_beta_bound = bounds::averaged_beta_bound(&cells);
        let fano = FanoCheck::evaluate(&score, &info)?;
        let i_a_resources =
            joint.mutual_information(&[var::A_SETTING], &[var::LAMBDA, var::CHI, var::B_SETTING])?;
        Ok(Self {
            score,
            info,
            cells,
            averaged_beta_bound,
            fano,
            i_a_resources,
            signaling_gap: signaling_gap(joint)?,
        })
    }
}

fn cell_stats(joint: &DiscreteJoint) -> Result<Vec<CellStats>> {
    let ib = joint.index_of(var::B_SETTING)?;
    let iy = joint.index_of(var::B_OUTCOME)?;
    let il = joint.index_of(var::LAMBDA)?;
    let ic = joint.index_of(var::CHI)?;
    // (lambda, chi) -> [b][B]
    let mut acc: BTreeMap<(u32, u32), [[f64; 2]; 2]> = BTreeMap::new();
    for (k, p) in joint.atoms() {
        acc.entry((k[il], k[ic])).or_insert([[0.0; 2]; 2])[k[ib] as usize][k[iy] as usize] += p;
    }
    Ok(acc
        .into_iter()
        .map(|((lambda, chi), t)| {
            let cond = |row: [f64; 2]| {
                let s = row[0] + row[1];
                (s > 0.0).then(|| (row[0] / s).clamp(0.0, 1.0))
            };
            CellStats {
                lambda,
                chi,
                weight: t[0][0] + t[0][1] + t[1][0] + t[1][1],
                p1: cond(t[0]),
                p2: cond(t[1]),
            }
        })
        .collect())
}

fn signaling_gap(joint: &DiscreteJoint) -> Result<f64> {
    let ia = joint.index_of(var::A_SETTING)?;
    let ib = joint.index_of(var::B_SETTING)?;
    let iy = joint.index_of(var::B_OUTCOME)?;
    let mut worst = 0.0_f64;
    for b in 0..2 {
        let mut cond = [0.0; 2];
        for a in 0..2 {
            let denom = joint.probability(|k| k[ia] == a && k[ib] == b);
            if denom <= 0.0 {
                return Err(Error::MissingSettingPair {
                    a: a as u8,
                    b: b as u8,
                });
            }
            cond[a as usize] =
                joint.probability(|k| k[ia] == a && k[ib] == b && k[iy] == 0) / denom;
        }
        worst = worst.max((cond[0] - cond[1]).abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bell::VariantSpec;

    #[test]
    fn pmf_validation() {
        assert!(Pmf::new(vec![]).is_err());
        assert!(Pmf::new(vec![0.5, 0.4]).is_err());
        assert!(Pmf::new(vec![1.2, -0.2]).is_err());
        let p = Pmf::new(vec![0.5, 0.5 + 5e-10]).unwrap();
        assert!((p.probs().iter().sum::<f64>() - 1.0).abs() < 1e-15);
        assert!(Pmf::from_weights(vec![0.0, 0.0]).is_err());
        assert_eq!(Pmf::from_weights(vec![1.0, 3.0]).unwrap().probs(), &[0.25, 0.75]);
        assert!(Pmf::bernoulli(1.5).is_err());
    }

    #[test]
    fn table_validation() {
        let bad = Protocol::from_tables(
            "x",
            Pmf::point(),
            Pmf::point(),
            Pmf::point(),
            2,
            vec![0, 0],
            vec![0, 2],
            vec![0; 4],
        );
        assert!(matches!(bad, Err(Error::InvalidProtocol(_))));
        let short = Protocol::from_tables(
            "x",
            Pmf::point(),
            Pmf::point(),
            Pmf::point(),
            2,
            vec![0],
            vec![0, 0],
            vec![0; 4],
        );
        assert!(short.is_err());
        let nonbit = Protocol::from_fns(
            "x",
            Pmf::point(),
            Pmf::point(),
            Pmf::point(),
            2,
            |_, _, _| 2,
            |_, _, _| 0,
            |_, _, _, _| 0,
        );
        assert!(nonbit.is_err());
    }

    #[test]
    fn deterministic_joint() {
        let p = make_local_deterministic(BitMap::Const0, BitMap::Const0);
        let j = p.exact_joint().unwrap();
        assert_eq!(j.probability(|k| k[2] == 0 && k[3] == 0), 1.0);
        for a in 0..2 {
            for b in 0..2 {
                assert_eq!(j.probability(|k| k[0] == a && k[1] == b), 0.25);
            }
        }
        let s = p.analyze().unwrap().score;
        assert_eq!(s.beta_score, 0.75);
        assert!(s.violations.is_empty());
        assert!(s.boundary.contains(&VariantSpec::CHSH));

        // A = a, B = 0 wins three of the four setting pairs
        let s = make_local_deterministic(BitMap::Identity, BitMap::Const0)
            .analyze()
            .unwrap()
            .score;
        assert_eq!(s.beta_score, 0.75);
        // A = not a, B = 0 wins only (a, b) = (1, 0)
        let s = make_local_deterministic(BitMap::Not, BitMap::Const0)
            .analyze()
            .unwrap()
            .score;
        assert_eq!(s.beta_score, 0.25);
    }

    #[test]
    fn enumeration_cap() {
        let p = make_one_bit_pr();
        assert_eq!(p.enumeration_size(), 8);
        assert_eq!(
            p.exact_joint_capped(7),
            Err(Error::EnumerationTooLarge { atoms: 8, cap: 7 })
        );
    }

    #[test]
    fn one_bit_pr() {
        let j = make_one_bit_pr().exact_joint().unwrap();
        assert_eq!(j.support_size(), 8);
        for a in 0..2 {
            for b in 0..2 {
                let hit = j.probability(|k| k[0] == a && k[1] == b && (k[2] ^ k[3]) == a & b);
                assert_eq!(hit, 0.25);
            }
        }
        let an = Analysis::of_joint(&j).unwrap();
        assert_eq!(an.score.beta_score, 1.0);
        assert_eq!(an.score.ic_alpha, 2.0);
        assert_eq!(an.score.violations, vec![VariantSpec::CHSH]);
        assert!((an.info.i_b - 1.0).abs() < 1e-15);
        assert!((an.info.i_big_b - 1.0).abs() < 1e-15);
        assert!((an.info.delta_b - 1.0).abs() < 1e-15);
        assert!(an.info.delta_big_b.abs() < 1e-15);
        assert!(an.fano.holds);
        // chi = b reveals the setting in every cell
        assert_eq!(an.averaged_beta_bound, None);
    }

    #[test]
    fn biased_strategy() {
        let an = make_biased_strategy(0.8, Flavor::One).unwrap().analyze().unwrap();
        assert!((an.score.p_match_a0 - 0.8).abs() < 1e-15);
        assert_eq!(an.score.p_match_a1, 1.0);
        assert!((an.score.score(VariantSpec::CHSH) - 0.9).abs() < 1e-12);
        assert_eq!(an.score.violations, vec![VariantSpec::CHSH]);
        assert!(an.info.i_big_b <= 1e-12);
        assert!((an.info.i_bxorb - 1.0).abs() < 1e-12);
        assert!(an.fano.holds);

        let target = VariantSpec::new(true, false, true);
        let an = make_biased_strategy(0.8, Flavor::Zero).unwrap().analyze().unwrap();
        assert!((an.score.score(target) - 0.9).abs() < 1e-12);
        assert_eq!(an.score.violations, vec![target]);

        for flavor in [Flavor::One, Flavor::Zero] {
            let s = make_biased_strategy(0.5, flavor).unwrap().analyze().unwrap().score;
            assert_eq!(s.score(VariantSpec::CHSH), 0.75);
            assert_eq!(s.score(target), 0.75);
            assert!(s.violations.is_empty());
        }
    }

    #[test]
    fn biased_message_is_independent_of_outcome() {
        let j = make_biased_strategy(0.8, Flavor::One).unwrap().exact_joint().unwrap();
        for big_b in 0..2 {
            let pb = j.probability(|k| k[3] == big_b);
            for s in 0..2 {
                let both = j.probability(|k| k[3] == big_b && k[5] == s);
                assert!((both / pb - 0.5).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn flavors_are_relabelings() {
        let one = make_biased_strategy(0.8, Flavor::One).unwrap().exact_joint().unwrap();
        let zero = make_biased_strategy(0.8, Flavor::Zero).unwrap().exact_joint().unwrap();
        let mapped = one.relabel("A", &[1, 0]).unwrap().relabel("b", &[1, 0]).unwrap();
        assert_eq!(mapped, zero);
    }

    #[test]
    fn sampling_is_deterministic() {
        let p = make_one_bit_pr();
        let x = p.sample_joint(1000, 3).unwrap();
        let y = p.sample_joint(1000, 3).unwrap();
        assert_eq!(x, y);
        assert_eq!(x.counts.values().sum::<u64>(), 1000);
        let one = p.sample_joint(1, 99).unwrap();
        assert_eq!(one.counts.len(), 1);
        assert_eq!(one.counts.values().next(), Some(&1));
        assert!(p.sample_joint(0, 1).is_err());

        let det = make_local_deterministic(BitMap::Const1, BitMap::Const0);
        for seed in 0..5 {
            let e = det.sample_joint(200, seed).unwrap();
            assert_eq!(e.count(|k| k[2] == 1 && k[3] == 0), 200);
        }
    }

    #[test]
    fn derived_seeds_differ() {
        let s: alloc::collections::BTreeSet<u64> = (0..1000).map(|i| derive_seed(42, i)).collect();
        assert_eq!(s.len(), 1000);
        assert_eq!(derive_seed(1, 2), derive_seed(1, 2));
    }

    #[test]
    fn random_b_independent_is_reproducible() {
        let sizes = RandomSizes::from_seed(5);
        let p = random_protocol_b_independent(5, sizes).unwrap();
        assert_eq!(p, random_protocol_b_independent(5, sizes).unwrap());
        assert_eq!(p.seed, Some(5));
        for b in 0..2 {
            for l in 0..sizes.lambda {
                for mb in 0..sizes.bob_private {
                    assert_eq!(p.message(b, l, mb), p.message(0, l, mb));
                }
            }
        }
    }

    #[test]
    fn padded_general_protocols_hide_outcome() {
        let mut hidden = 0;
        for seed in 0..200 {
            let p = random_protocol_general(seed, RandomSizes::from_seed(seed)).unwrap();
            let an = p.analyze().unwrap();
            if an.info.i_big_b <= 1e-9 && (an.info.h_big_b - 1.0).abs() <= 1e-9 {
                hidden += 1;
                assert!(an.score.beta_score <= 0.75 + 1e-12);
            }
        }
        assert!(hidden > 20, "only {hidden} outcome-blind protocols");
    }

    #[test]
    fn bit_map_parsing() {
        for m in BitMap::ALL {
            assert_eq!(m.name().parse::<BitMap>().unwrap(), m);
        }
        assert!("xor".parse::<BitMap>().is_err());
        assert_eq!("one".parse::<Flavor>().unwrap(), Flavor::One);
        assert!("two".parse::<Flavor>().is_err());
    }
}
