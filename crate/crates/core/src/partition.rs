//! Integer partitions with cached statistics, constrained generation and
//! multiset splitting.
//!
//! A [`Partition`] is always stored in normal form: parts nonincreasing,
//! every part positive. The three statistics used throughout the crate
//! (length, l.c.m. and the defect `c`, the number of parts different from the
//! l.c.m.) are computed once at construction.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Partition {
    parts: Vec<u32>,
    degree: u32,
    lcm: u64,
    defect: u32,
}

impl Partition {
    /// Builds a partition from parts given in any order.
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::Argument("a partition needs at least one part".into()));
        }
        if parts.contains(&0) {
            return Err(Error::Argument("partition parts must be positive".into()));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Self::from_sorted(parts))
    }

    /// Builds a partition from `(part, multiplicity)` pairs.
    pub fn from_multiplicities(pairs: &[(u32, u32)]) -> Result<Self> {
        let parts = pairs
            .iter()
            .flat_map(|&(part, mult)| std::iter::repeat_n(part, mult as usize))
            .collect();
        Self::new(parts)
    }

    /// `(1, 1, ..., 1)` with `d` parts.
    pub fn trivial(d: u32) -> Self {
        Self::from_sorted(vec![1; d as usize])
    }

    pub(crate) fn from_sorted(parts: Vec<u32>) -> Self {
        debug_assert!(!parts.is_empty());
        debug_assert!(parts.windows(2).all(|w| w[0] >= w[1]));
        let degree = parts.iter().sum();
        let lcm = parts.iter().fold(1u64, |acc, &p| acc.lcm(&u64::from(p)));
        let defect = parts.iter().filter(|&&p| u64::from(p) != lcm).count() as u32;
        Partition {
            parts,
            degree,
            lcm,
            defect,
        }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// The integer being partitioned.
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn lcm(&self) -> u64 {
        self.lcm
    }

    /// Number of parts strictly different from the l.c.m.
    pub fn defect(&self) -> u32 {
        self.defect
    }

    /// `(length, lcm, defect)`.
    pub fn stats(&self) -> (usize, u64, u32) {
        (self.len(), self.lcm, self.defect)
    }

    pub fn is_trivial(&self) -> bool {
        self.lcm == 1
    }

    pub fn largest(&self) -> u32 {
        self.parts[0]
    }

    /// `(part, multiplicity)` pairs, parts decreasing.
    pub fn multiplicities(&self) -> Vec<(u32, u32)> {
        let mut out: Vec<(u32, u32)> = Vec::new();
        for &p in &self.parts {
            match out.last_mut() {
                Some((q, m)) if *q == p => *m += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }

    pub fn all_parts_divisible_by(&self, k: u32) -> bool {
        self.parts.iter().all(|p| p % k == 0)
    }

    /// Whether some sub-multiset of the parts sums to `target.0`, i.e. the
    /// partition splits as a partition of `target.0` plus one of `target.1`.
    ///
    /// Returns `false` when the target does not sum to the degree.
    pub fn refines(&self, target: (u32, u32)) -> bool {
        if target.0 + target.1 != self.degree || target.0 == 0 || target.1 == 0 {
            return false;
        }
        let goal = target.0 as usize;
        // bounded-multiplicity subset sum over distinct part values
        let mut reachable = vec![false; goal + 1];
        reachable[0] = true;
        for (part, mult) in self.multiplicities() {
            let part = part as usize;
            for _ in 0..mult {
                if part > goal {
                    break;
                }
                for sum in (part..=goal).rev() {
                    if reachable[sum - part] {
                        reachable[sum] = true;
                    }
                }
            }
            if reachable[goal] {
                return true;
            }
        }
        reachable[goal]
    }

    /// All distinct splits `self = first ⊔ second` with `first` summing to
    /// `d1`. Identical parts are interchangeable, so each multiset split is
    /// reported once.
    pub fn enumerate_splits(&self, d1: u32) -> Vec<(Partition, Partition)> {
        if d1 == 0 || d1 >= self.degree {
            return Vec::new();
        }
        let mults = self.multiplicities();
        let mut out = Vec::new();
        let mut chosen = vec![0u32; mults.len()];
        split_rec(&mults, 0, d1, &mut chosen, &mut out);
        out
    }
}

fn split_rec(
    mults: &[(u32, u32)],
    idx: usize,
    remaining: u32,
    chosen: &mut Vec<u32>,
    out: &mut Vec<(Partition, Partition)>,
) {
    if idx == mults.len() {
        if remaining == 0 {
            let mut first = Vec::new();
            let mut second = Vec::new();
            for (&(part, mult), &take) in mults.iter().zip(chosen.iter()) {
                first.extend(std::iter::repeat_n(part, take as usize));
                second.extend(std::iter::repeat_n(part, (mult - take) as usize));
            }
            out.push((Partition::from_sorted(first), Partition::from_sorted(second)));
        }
        return;
    }
    let (part, mult) = mults[idx];
    let max_take = mult.min(remaining / part);
    for take in (0..=max_take).rev() {
        chosen[idx] = take;
        split_rec(mults, idx + 1, remaining - take * part, chosen, out);
    }
    chosen[idx] = 0;
}

/// Partitions of `d` with defect at most `c_max`, all parts in `allowed_parts`
/// (when given) and, if `exclude_trivial`, different from `(1, ..., 1)`.
///
/// Output is in reverse-lexicographic order: `(d)` first, `(1, ..., 1)` last.
pub fn generate_partitions(
    d: u32,
    c_max: u32,
    allowed_parts: Option<&[u32]>,
    exclude_trivial: bool,
) -> Result<Vec<Partition>> {
    if d == 0 {
        return Err(Error::Argument("degree must be positive".into()));
    }
    let mut allowed: Vec<u32> = match allowed_parts {
        Some(set) => {
            if set.is_empty() {
                return Err(Error::Argument("allowed part set is empty".into()));
            }
            if set.iter().any(|&p| p == 0 || p > d) {
                return Err(Error::Argument(format!(
                    "allowed parts must lie in 1..={d}"
                )));
            }
            set.to_vec()
        }
        None => (1..=d).collect(),
    };
    allowed.sort_unstable_by(|a, b| b.cmp(a));
    allowed.dedup();

    let mut out = Vec::new();
    let mut current = Vec::new();
    for (i, &first) in allowed.iter().enumerate() {
        current.push(first);
        gen_rec(d - first, &allowed[i..], first, 0, true, c_max, &mut current, &mut out);
        current.pop();
    }
    if exclude_trivial {
        out.retain(|p| !p.is_trivial());
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn gen_rec(
    remaining: u32,
    allowed: &[u32],
    first: u32,
    n_other: u32,
    all_divide_first: bool,
    c_max: u32,
    current: &mut Vec<u32>,
    out: &mut Vec<Partition>,
) {
    // A partition longer than c_max can only qualify when its l.c.m. is its
    // largest part, and that needs every part to divide the largest one.
    let len = current.len() as u32;
    if len > c_max && (!all_divide_first || n_other > c_max) {
        return;
    }
    if remaining == 0 {
        let p = Partition::from_sorted(current.clone());
        if p.defect() <= c_max {
            out.push(p);
        }
        return;
    }
    for (i, &part) in allowed.iter().enumerate() {
        if part > remaining {
            continue;
        }
        current.push(part);
        gen_rec(
            remaining - part,
            &allowed[i..],
            first,
            n_other + u32::from(part != first),
            all_divide_first && first.is_multiple_of(part),
            c_max,
            current,
            out,
        );
        current.pop();
    }
}

/// Positive divisors of `n`, increasing.
pub fn divisors(n: u32) -> Vec<u32> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut i = 1;
    while i * i <= n {
        if n.is_multiple_of(i) {
            small.push(i);
            if i * i != n {
                large.push(n / i);
            }
        }
        i += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str(")")
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl TryFrom<Vec<u32>> for Partition {
    type Error = Error;

    fn try_from(parts: Vec<u32>) -> Result<Self> {
        Partition::new(parts)
    }
}

impl From<Partition> for Vec<u32> {
    fn from(p: Partition) -> Self {
        p.parts
    }
}

/// Parses the parenthesised part list starting at `offset` in a larger
/// string; positions in errors are absolute.
pub(crate) fn parse_parts_at(text: &str, offset: usize) -> Result<Partition> {
    let err = |pos: usize, message: &str| Error::Parse {
        position: offset + pos,
        message: message.to_string(),
    };
    let trimmed_start = text.len() - text.trim_start().len();
    let body = text.trim();
    if !body.starts_with('(') {
        return Err(err(trimmed_start, "expected '('"));
    }
    if !body.ends_with(')') {
        return Err(err(trimmed_start + body.len(), "expected ')'"));
    }
    let inner = &body[1..body.len() - 1];
    let mut parts = Vec::new();
    let mut pos = trimmed_start + 1;
    for item in inner.split(',') {
        let token = item.trim();
        let token_pos = pos + (item.len() - item.trim_start().len());
        if token.is_empty() {
            return Err(err(token_pos, "empty part"));
        }
        // `a^k` is shorthand for k copies of a
        let (value, count) = match token.split_once('^') {
            Some((v, k)) => (v.trim(), k.trim()),
            None => (token, "1"),
        };
        let value: u32 = value
            .parse()
            .map_err(|_| err(token_pos, &format!("'{token}' is not a positive integer")))?;
        let count: u32 = count
            .parse()
            .map_err(|_| err(token_pos, &format!("bad repetition count in '{token}'")))?;
        if value == 0 || count == 0 {
            return Err(err(token_pos, "parts and repetition counts must be positive"));
        }
        parts.extend(std::iter::repeat_n(value, count as usize));
        pos += item.len() + 1;
    }
    Partition::new(parts)
}

impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_parts_at(s, 0)
    }
}
