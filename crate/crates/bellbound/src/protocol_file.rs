//! JSON protocol definitions.
//!
//! ```json
//! {
//!   "label": "pr-onebit",
//!   "lambda": [{"value": 0, "prob": 0.5}, {"value": 1, "prob": 0.5}],
//!   "message_alphabet": 2,
//!   "bob_output":   [{"key": [0, 0, 0], "value": 0}, ...],
//!   "message":      [{"key": [0, 0, 0], "value": 0}, ...],
//!   "alice_output": [{"key": [0, 0, 0, 0], "value": 0}, ...]
//! }
//! ```
//!
//! Bob's tables are keyed by `[b, lambda, mu_B]`, Alice's by
//! `[a, lambda, chi, mu_A]`. Hidden and private values may be labeled by
//! integers or strings; settings and message symbols are integers.
//! `bob_private` and `alice_private` default to a single point, and
//! `message_alphabet` to 2. Every domain point must appear exactly once.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use bellbound_core::protocol::{Pmf, Protocol};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Label {
    Int(i64),
    Text(String),
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Int(i) => write!(f, "{i}"),
            Self::Text(s) => write!(f, "{s:?}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Outcome {
    pub value: Label,
    pub prob: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Entry {
    pub key: Vec<Label>,
    pub value: u32,
}

fn point_mass() -> Vec<Outcome> {
    vec![Outcome {
        value: Label::Int(0),
        prob: 1.0,
    }]
}

fn binary_alphabet() -> u32 {
    2
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProtocolFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub lambda: Vec<Outcome>,
    #[serde(default = "point_mass")]
    pub bob_private: Vec<Outcome>,
    #[serde(default = "point_mass")]
    pub alice_private: Vec<Outcome>,
    #[serde(default = "binary_alphabet")]
    pub message_alphabet: u32,
    pub bob_output: Vec<Entry>,
    pub message: Vec<Entry>,
    pub alice_output: Vec<Entry>,
}

struct Support {
    index: BTreeMap<Label, u32>,
    pmf: Pmf,
}

fn support(field: &str, outcomes: &[Outcome]) -> Result<Support, String> {
    let mut index = BTreeMap::new();
    for (i, o) in outcomes.iter().enumerate() {
        if index.insert(o.value.clone(), i as u32).is_some() {
            return Err(format!("{field}: value {} listed twice", o.value));
        }
    }
    let pmf = Pmf::new(outcomes.iter().map(|o| o.prob).collect())
        .map_err(|e| format!("{field}: {e}"))?;
    Ok(Support { index, pmf })
}

fn bit_label(field: &str, what: &str, l: &Label, limit: u32) -> Result<u32, String> {
    match l {
        Label::Int(v) if (0..i64::from(limit)).contains(v) => Ok(*v as u32),
        _ => Err(format!("{field}: {what} must be an integer below {limit}, got {l}")),
    }
}

fn lookup(field: &str, what: &str, s: &Support, l: &Label) -> Result<u32, String> {
    s.index
        .get(l)
        .copied()
        .ok_or_else(|| format!("{field}: unknown {what} value {l}"))
}

/// Fills a dense table from keyed entries, rejecting duplicates and gaps.
fn fill<F>(field: &str, entries: &[Entry], dims: &[u32], locate: F) -> Result<Vec<u32>, String>
where
    F: Fn(&[Label]) -> Result<Vec<u32>, String>,
{
    let size: usize = dims.iter().map(|&d| d as usize).product();
    let mut table: Vec<Option<u32>> = vec![None; size];
    for e in entries {
        if e.key.len() != dims.len() {
            return Err(format!(
                "{field}: key {:?} needs {} components",
                e.key,
                dims.len()
            ));
        }
        let coords = locate(&e.key)?;
        let flat = coords
            .iter()
            .zip(dims)
            .fold(0usize, |acc, (&c, &d)| acc * d as usize + c as usize);
        if table[flat].replace(e.value).is_some() {
            return Err(format!("{field}: key {} listed twice", render_key(&e.key)));
        }
    }
    if let Some(missing) = table.iter().position(Option::is_none) {
        return Err(format!(
            "{field}: no entry for table position {missing} (tables must be total)"
        ));
    }
    Ok(table.into_iter().map(|v| v.unwrap_or_default()).collect())
}

fn render_key(key: &[Label]) -> String {
    let parts: Vec<String> = key.iter().map(ToString::to_string).collect();
    format!("[{}]", parts.join(", "))
}

fn to_bits(field: &str, values: Vec<u32>) -> Result<Vec<u8>, String> {
    values
        .into_iter()
        .map(|v| {
            u8::try_from(v)
                .ok()
                .filter(|&b| b <= 1)
                .ok_or_else(|| format!("{field}: output {v} is not a bit"))
        })
        .collect()
}

impl ProtocolFile {
    pub fn into_protocol(self, default_label: &str) -> Result<Protocol, String> {
        let lambda = support("lambda", &self.lambda)?;
        let bob = support("bob_private", &self.bob_private)?;
        let alice = support("alice_private", &self.alice_private)?;
        let m = self.message_alphabet;
        if m == 0 {
            return Err("message_alphabet must be positive".to_string());
        }
        let nl = lambda.pmf.len() as u32;
        let bob_dims = [2, nl, bob.pmf.len() as u32];
        let bob_key = |field: &'static str| {
            let (lambda, bob) = (&lambda, &bob);
            move |k: &[Label]| -> Result<Vec<u32>, String> {
                Ok(vec![
                    bit_label(field, "setting b", &k[0], 2)?,
                    lookup(field, "lambda", lambda, &k[1])?,
                    lookup(field, "bob_private", bob, &k[2])?,
                ])
            }
        };
        let bob_output = fill("bob_output", &self.bob_output, &bob_dims, bob_key("bob_output"))?;
        let message = fill("message", &self.message, &bob_dims, bob_key("message"))?;
        let alice_dims = [2, nl, m, alice.pmf.len() as u32];
        let alice_output = fill("alice_output", &self.alice_output, &alice_dims, |k| {
            Ok(vec![
                bit_label("alice_output", "setting a", &k[0], 2)?,
                lookup("alice_output", "lambda", &lambda, &k[1])?,
                bit_label("alice_output", "message chi", &k[2], m)?,
                lookup("alice_output", "alice_private", &alice, &k[3])?,
            ])
        })?;
        Protocol::from_tables(
            self.label.unwrap_or_else(|| default_label.to_string()),
            lambda.pmf,
            bob.pmf,
            alice.pmf,
            m,
            to_bits("bob_output", bob_output)?,
            message,
            to_bits("alice_output", alice_output)?,
        )
        .map_err(|e| e.to_string())
    }

    /// Export with integer labels `0..n` for every support.
    pub fn from_protocol(p: &Protocol) -> Self {
        let outcomes = |pmf: &Pmf| {
            pmf.probs()
                .iter()
                .enumerate()
                .map(|(i, &prob)| Outcome {
                    value: Label::Int(i as i64),
                    prob,
                })
                .collect::<Vec<_>>()
        };
        let nl = p.lambda().len() as u32;
        let nb = p.bob_private().len() as u32;
        let na = p.alice_private().len() as u32;
        let m = p.message_alphabet();
        let int = |v: u32| Label::Int(i64::from(v));
        let mut bob_output = Vec::new();
        let mut message = Vec::new();
        for b in 0..2 {
            for l in 0..nl {
                for mb in 0..nb {
                    let key = vec![int(b), int(l), int(mb)];
                    bob_output.push(Entry {
                        key: key.clone(),
                        value: p.bob_output(b, l, mb),
                    });
                    message.push(Entry {
                        key,
                        value: p.message(b, l, mb),
                    });
                }
            }
        }
        let mut alice_output = Vec::new();
        for a in 0..2 {
            for l in 0..nl {
                for chi in 0..m {
                    for ma in 0..na {
                        alice_output.push(Entry {
                            key: vec![int(a), int(l), int(chi), int(ma)],
                            value: p.alice_output(a, l, chi, ma),
                        });
                    }
                }
            }
        }
        Self {
            label: Some(p.label.clone()),
            lambda: outcomes(p.lambda()),
            bob_private: outcomes(p.bob_private()),
            alice_private: outcomes(p.alice_private()),
            message_alphabet: m,
            bob_output,
            message,
            alice_output,
        }
    }
}

pub fn parse_protocol(text: &str, default_label: &str) -> Result<Protocol, String> {
    let file: ProtocolFile = serde_json::from_str(text).map_err(|e| e.to_string())?;
    file.into_protocol(default_label)
}

pub fn load_protocol(path: &Path) -> CliResult<Protocol> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    parse_protocol(&text, &path.display().to_string()).map_err(|reason| CliError::ProtocolFile {
        path: path.to_path_buf(),
        reason,
    })
}

pub fn protocol_to_json(p: &Protocol) -> String {
    crate::format::to_json(&ProtocolFile::from_protocol(p))
}
