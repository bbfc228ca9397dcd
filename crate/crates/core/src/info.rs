//! Exact discrete information theory on finite joint distributions.
//!
//! All logarithms are base 2. The convention `0 log 0 = 0` is applied by
//! skipping zero-probability terms, never by shifting arguments.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::{Error, Result};

/// Tolerance on the total mass of a [`DiscreteJoint`].
pub const NORMALIZATION_TOLERANCE: f64 = 1e-12;

/// Mutual information below `-MI_NEGATIVE_TOLERANCE` is treated as a bug.
pub const MI_NEGATIVE_TOLERANCE: f64 = 1e-12;

const MAX_BISECTION_STEPS: usize = 200;

fn check_unit(what: &'static str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::Domain { what, value })
    }
}

/// `-p log2 p`, zero at `p = 0`.
#[inline]
fn neg_xlog2x(p: f64) -> f64 {
    if p > 0.0 {
        -p * libm::log2(p)
    } else {
        0.0
    }
}

/// Binary entropy without the domain check. Inputs outside `(0, 1)` map to 0.
pub(crate) fn h2(p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        return 0.0;
    }
    let h = neg_xlog2x(p) + neg_xlog2x(1.0 - p);
    h.clamp(0.0, 1.0)
}

/// Compensated (Neumaier) summation.
pub(crate) fn stable_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0_f64;
    let mut comp = 0.0_f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Binary entropy `H(p) = -p log2 p - (1-p) log2 (1-p)` in bits.
pub fn binary_entropy(p: f64) -> Result<f64> {
    check_unit("probability", p)?;
    Ok(h2(p))
}

/// Inverse of the binary entropy on the upper branch: the unique
/// `p` in `[1/2, 1]` with `binary_entropy(p) = h`.
///
/// Bisection runs until the bracket can no longer be split in `f64`
/// (well below `1e-12`), capped at 200 steps.
pub fn inv_binary_entropy_upper(h: f64) -> Result<f64> {
    check_unit("entropy", h)?;
    Ok(inv_h2_upper(h))
}

pub(crate) fn inv_h2_upper(h: f64) -> f64 {
    if h <= 0.0 {
        return 1.0;
    }
    if h >= 1.0 {
        return 0.5;
    }
    // h2 is decreasing on [1/2, 1]: h2(lo) >= h > h2(hi)
    let (mut lo, mut hi) = (0.5_f64, 1.0_f64);
    for _ in 0..MAX_BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if h2(mid) > h {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Largest success probability `1 - P_e` allowed by the binary Fano bound
/// `H(P_e) >= H(X|Y)`.
pub fn fano_max_success(h_cond: f64) -> Result<f64> {
    inv_binary_entropy_upper(h_cond)
}

/// Checks the general Fano inequality
/// `H(P_e) + P_e log2(|X| - 1) >= H(X|Y)` with slack `1e-12`.
pub fn fano_check_general(p_error: f64, alphabet_size: u32, h_cond: f64) -> Result<bool> {
    check_unit("error probability", p_error)?;
    if alphabet_size < 2 {
        return Err(Error::Domain {
            what: "alphabet size",
            value: alphabet_size as f64,
        });
    }
    if !h_cond.is_finite() || h_cond < 0.0 {
        return Err(Error::Domain {
            what: "conditional entropy",
            value: h_cond,
        });
    }
    let lhs = h2(p_error) + p_error * libm::log2(f64::from(alphabet_size - 1));
    Ok(lhs >= h_cond - 1e-12)
}

/// A named finite-valued random variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Variable {
    pub name: String,
    pub cardinality: u32,
}

impl Variable {
    pub fn new(name: impl Into<String>, cardinality: u32) -> Self {
        Self {
            name: name.into(),
            cardinality,
        }
    }
}

/// Exact joint probability mass function over an ordered list of variables.
///
/// Only atoms with nonzero probability are stored.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteJoint {
    variables: Vec<Variable>,
    atoms: BTreeMap<Vec<u32>, f64>,
}

impl DiscreteJoint {
    /// Builds a joint from `(assignment, probability)` pairs. Repeated
    /// assignments are summed; zero-probability atoms are dropped.
    pub fn new<I>(variables: Vec<Variable>, atoms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, f64)>,
    {
        for (i, v) in variables.iter().enumerate() {
            if v.cardinality == 0 {
                return Err(Error::InvalidJoint(format!(
                    "variable `{}` has cardinality 0",
                    v.name
                )));
            }
            if variables[..i].iter().any(|w| w.name == v.name) {
                return Err(Error::DuplicateVariable(v.name.clone()));
            }
        }
        let mut map: BTreeMap<Vec<u32>, f64> = BTreeMap::new();
        for (assignment, p) in atoms {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidJoint(format!("probability {p} outside [0, 1]")));
            }
            if assignment.len() != variables.len() {
                return Err(Error::InvalidJoint(format!(
                    "assignment has arity {}, expected {}",
                    assignment.len(),
                    variables.len()
                )));
            }
            for (value, var) in assignment.iter().zip(&variables) {
                if *value >= var.cardinality {
                    return Err(Error::InvalidJoint(format!(
                        "value {value} out of range for `{}` (cardinality {})",
                        var.name, var.cardinality
                    )));
                }
            }
            if p > 0.0 {
                *map.entry(assignment).or_insert(0.0) += p;
            }
        }
        let total = stable_sum(map.values().copied());
        if (total - 1.0).abs() > NORMALIZATION_TOLERANCE {
            return Err(Error::InvalidJoint(format!("total probability {total}")));
        }
        Ok(Self {
            variables,
            atoms: map,
        })
    }

    /// Builds the empirical joint `count / total`.
    pub fn from_counts<'a, I>(variables: Vec<Variable>, counts: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a Vec<u32>, &'a u64)>,
    {
        let counts: Vec<_> = counts.into_iter().collect();
        let total: u64 = counts.iter().map(|(_, c)| **c).sum();
        if total == 0 {
            return Err(Error::InvalidJoint("no observations".to_string()));
        }
        let n = total as f64;
        Self::new(
            variables,
            counts.into_iter().map(|(a, c)| (a.clone(), *c as f64 / n)),
        )
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    /// Atoms in assignment order.
    pub fn atoms(&self) -> impl Iterator<Item = (&[u32], f64)> + '_ {
        self.atoms.iter().map(|(k, p)| (k.as_slice(), *p))
    }

    pub fn support_size(&self) -> usize {
        self.atoms.len()
    }

    /// Probability of a full assignment (0 if outside the support).
    pub fn prob(&self, assignment: &[u32]) -> f64 {
        self.atoms.get(assignment).copied().unwrap_or(0.0)
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.variables
            .iter()
            .position(|v| v.name == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn cardinality(&self, name: &str) -> Result<u32> {
        Ok(self.variables[self.index_of(name)?].cardinality)
    }

    /// Total probability of the atoms satisfying `event`.
    pub fn probability<F>(&self, mut event: F) -> f64
    where
        F: FnMut(&[u32]) -> bool,
    {
        stable_sum(
            self.atoms
                .iter()
                .filter(|(k, _)| event(k))
                .map(|(_, p)| *p),
        )
    }

    fn resolve(&self, names: &[&str]) -> Result<Vec<usize>> {
        let mut out: Vec<usize> = Vec::with_capacity(names.len());
        for name in names {
            let idx = self.index_of(name)?;
            if !out.contains(&idx) {
                out.push(idx);
            }
        }
        Ok(out)
    }

    fn resolve_disjoint(&self, xs: &[&str], ys: &[&str]) -> Result<(Vec<usize>, Vec<usize>)> {
        let x = self.resolve(xs)?;
        let y = self.resolve(ys)?;
        if x.is_empty() {
            return Err(Error::EmptySet);
        }
        if let Some(i) = x.iter().find(|i| y.contains(i)) {
            return Err(Error::OverlappingSets(self.variables[*i].name.clone()));
        }
        Ok((x, y))
    }

    fn project(key: &[u32], idx: &[usize]) -> Vec<u32> {
        idx.iter().map(|&i| key[i]).collect()
    }

    fn grouped(&self, idx: &[usize]) -> BTreeMap<Vec<u32>, f64> {
        let mut out: BTreeMap<Vec<u32>, f64> = BTreeMap::new();
        for (k, p) in &self.atoms {
            *out.entry(Self::project(k, idx)).or_insert(0.0) += *p;
        }
        out
    }

    /// Marginal on `keep`. Variables keep their original relative order.
    pub fn marginalize(&self, keep: &[&str]) -> Result<Self> {
        let mut idx = self.resolve(keep)?;
        if idx.is_empty() {
            return Err(Error::EmptySet);
        }
        idx.sort_unstable();
        let variables = idx.iter().map(|&i| self.variables[i].clone()).collect();
        Ok(Self {
            variables,
            atoms: self.grouped(&idx),
        })
    }

    /// Appends a variable `new_name = u xor v`.
    pub fn derive_xor(&self, u: &str, v: &str, new_name: &str) -> Result<Self> {
        let iu = self.index_of(u)?;
        let iv = self.index_of(v)?;
        for &i in &[iu, iv] {
            if self.variables[i].cardinality != 2 {
                return Err(Error::NotBinary(self.variables[i].name.clone()));
            }
        }
        if self.index_of(new_name).is_ok() {
            return Err(Error::DuplicateVariable(new_name.to_string()));
        }
        let mut variables = self.variables.clone();
        variables.push(Variable::new(new_name, 2));
        let atoms = self
            .atoms
            .iter()
            .map(|(k, p)| {
                let mut k2 = k.clone();
                k2.push(k[iu] ^ k[iv]);
                (k2, *p)
            })
            .collect();
        Ok(Self { variables, atoms })
    }

    /// Applies a value permutation to one variable: value `x` becomes `perm[x]`.
    pub fn relabel(&self, name: &str, perm: &[u32]) -> Result<Self> {
        let i = self.index_of(name)?;
        let card = self.variables[i].cardinality as usize;
        let mut seen = alloc::vec![false; card];
        if perm.len() != card {
            return Err(Error::InvalidJoint(format!(
                "relabeling of `{name}` must have {card} entries"
            )));
        }
        for &t in perm {
            let t = t as usize;
            if t >= card || seen[t] {
                return Err(Error::InvalidJoint(format!(
                    "relabeling of `{name}` is not a permutation"
                )));
            }
            seen[t] = true;
        }
        let atoms = self
            .atoms
            .iter()
            .map(|(k, p)| {
                let mut k2 = k.clone();
                k2[i] = perm[k[i] as usize];
                (k2, *p)
            })
            .collect();
        Ok(Self {
            variables: self.variables.clone(),
            atoms,
        })
    }

    /// Largest absolute atom-wise difference to `other`, which must have the
    /// same variable list.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        if self.variables != other.variables {
            return Err(Error::InvalidJoint(
                "joints are over different variables".to_string(),
            ));
        }
        let mut worst = 0.0_f64;
        for (k, p) in &self.atoms {
            worst = worst.max((p - other.prob(k)).abs());
        }
        for (k, q) in &other.atoms {
            worst = worst.max((q - self.prob(k)).abs());
        }
        Ok(worst)
    }

    /// Shannon entropy of the marginal on `vars`.
    pub fn entropy(&self, vars: &[&str]) -> Result<f64> {
        let idx = self.resolve(vars)?;
        if idx.is_empty() {
            return Err(Error::EmptySet);
        }
        Ok(self.entropy_idx(&idx))
    }

    fn entropy_idx(&self, idx: &[usize]) -> f64 {
        stable_sum(self.grouped(idx).into_values().map(neg_xlog2x)).max(0.0)
    }

    /// `H(X|Y) = sum_y P(y) H(X | Y = y)`.
    pub fn conditional_entropy(&self, xs: &[&str], ys: &[&str]) -> Result<f64> {
        let (x, y) = self.resolve_disjoint(xs, ys)?;
        let mut xy = y.clone();
        xy.extend_from_slice(&x);
        let p_y = self.grouped(&y);
        let p_xy = self.grouped(&xy);
        let h = stable_sum(p_xy.iter().map(|(k, &p)| {
            let py = p_y[&k[..y.len()]];
            -p * libm::log2(p / py)
        }));
        Ok(h.max(0.0))
    }

    /// `I(X;Y)` computed as `sum p(x,y) log2 [p(x,y) / (p(x) p(y))]`.
    ///
    /// Values in `(-1e-12, 0)` are clamped to 0; anything more negative is
    /// reported as an invariant breach.
    pub fn mutual_information(&self, xs: &[&str], ys: &[&str]) -> Result<f64> {
        let (x, y) = self.resolve_disjoint(xs, ys)?;
        if y.is_empty() {
            return Ok(0.0);
        }
        let mut xy = x.clone();
        xy.extend_from_slice(&y);
        let p_x = self.grouped(&x);
        let p_y = self.grouped(&y);
        let p_xy = self.grouped(&xy);
        let mi = stable_sum(p_xy.iter().map(|(k, &p)| {
            let px = p_x[&k[..x.len()]];
            let py = p_y[&k[x.len()..]];
            p * libm::log2(p / (px * py))
        }));
        if mi < -MI_NEGATIVE_TOLERANCE {
            return Err(Error::InvariantBreach(format!(
                "negative mutual information {mi}"
            )));
        }
        Ok(mi.max(0.0))
    }

    /// Guessed information `J(X -> Y) = sum_x P(x) max_y P(y | x)`: the
    /// success probability of the MAP guess of `Y` from `X`.
    ///
    /// `X` may be empty, in which case the result is `max_y P(y)`.
    pub fn guessed_information(&self, xs: &[&str], ys: &[&str]) -> Result<f64> {
        let (y, x) = self.resolve_disjoint(ys, xs)?;
        let mut xy = x.clone();
        xy.extend_from_slice(&y);
        let mut best: BTreeMap<Vec<u32>, f64> = BTreeMap::new();
        for (k, p) in self.grouped(&xy) {
            let slot = best.entry(k[..x.len()].to_vec()).or_insert(0.0);
            if p > *slot {
                *slot = p;
            }
        }
        Ok(stable_sum(best.into_values()).min(1.0))
    }
}
