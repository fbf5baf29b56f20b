//! Irreducible characters of the symmetric group by border-strip removal.
//!
//! Shapes are handled as beta-sets (first-column hook lengths): removing a
//! border strip of length `r` is moving one bead from `b` to `b - r`, with sign
//! given by the parity of the beads jumped over.

use std::collections::{BTreeMap, HashMap};
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use parking_lot::Mutex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cache::CharCache;
use crate::partition::{generate_partitions, Partition};

/// A conjugacy class of the symmetric group of a given degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CharacterKey {
    pub degree: u32,
    pub class: Partition,
}

impl CharacterKey {
    pub fn new(class: Partition) -> Self {
        CharacterKey {
            degree: class.degree(),
            class,
        }
    }
}

/// `lambda -> chi^lambda(mu)` for every `lambda` of the degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacterTableSlice {
    pub key: CharacterKey,
    pub values: BTreeMap<Partition, BigInt>,
}

impl CharacterTableSlice {
    pub fn get(&self, lambda: &Partition) -> Option<&BigInt> {
        self.values.get(lambda)
    }
}

/// Number of partitions of `d`.
pub fn partition_count(d: u32) -> usize {
    let d = d as usize;
    let mut p = vec![0u64; d + 1];
    p[0] = 1;
    for part in 1..=d {
        for n in part..=d {
            p[n] += p[n - part];
        }
    }
    p[d] as usize
}

/// Every partition of `d`, reverse-lexicographic. Shared across calls.
pub fn partitions_of(d: u32) -> std::sync::Arc<Vec<Partition>> {
    static ALL: OnceLock<Mutex<HashMap<u32, std::sync::Arc<Vec<Partition>>>>> = OnceLock::new();
    let table = ALL.get_or_init(Default::default);
    if let Some(hit) = table.lock().get(&d) {
        return hit.clone();
    }
    let list = std::sync::Arc::new(if d == 0 {
        Vec::new()
    } else {
        generate_partitions(d, d, None, false).expect("d > 0")
    });
    table.lock().insert(d, list.clone());
    list
}

fn to_beta(shape: &[u32]) -> Vec<u32> {
    let n = shape.len() as u32;
    shape
        .iter()
        .enumerate()
        .map(|(i, &p)| p + n - 1 - i as u32)
        .collect()
}

/// Beta-set (decreasing) back to a shape, dropping zero rows.
fn from_beta(beta: &[u32]) -> Vec<u32> {
    let n = beta.len() as u32;
    beta.iter()
        .enumerate()
        .map(|(i, &b)| b - (n - 1 - i as u32))
        .filter(|&p| p > 0)
        .collect()
}

/// All border strips of length `r`: `(sign, shape without the strip)`.
fn strips(shape: &[u32], r: u32) -> Vec<(bool, Vec<u32>)> {
    let beta = to_beta(shape);
    let mut out = Vec::new();
    for (i, &b) in beta.iter().enumerate() {
        if b < r {
            continue;
        }
        let target = b - r;
        if beta.contains(&target) {
            continue;
        }
        let jumped = beta.iter().filter(|&&c| c > target && c < b).count();
        let mut moved = beta.clone();
        moved[i] = target;
        moved.sort_unstable_by(|a, b| b.cmp(a));
        out.push((jumped % 2 == 1, from_beta(&moved)));
    }
    out
}

/// The `g`-core of a shape.
pub fn core(shape: &[u32], g: u32) -> Vec<u32> {
    let beta = to_beta(shape);
    let mut runners = vec![0u32; g as usize];
    for &b in &beta {
        runners[(b % g) as usize] += 1;
    }
    let mut slid: Vec<u32> = runners
        .iter()
        .enumerate()
        .flat_map(|(j, &count)| (0..count).map(move |t| j as u32 + g * t))
        .collect();
    slid.sort_unstable_by(|a, b| b.cmp(a));
    from_beta(&slid)
}

type Memo = HashMap<(Vec<u32>, usize), BigInt>;

fn mn(shape: &[u32], class: &[u32], at: usize, memo: &mut Memo) -> BigInt {
    if at == class.len() {
        return if shape.is_empty() { BigInt::one() } else { BigInt::zero() };
    }
    if at + 1 == class.len() {
        // a single strip: the shape must be a hook of that size
        return match strips(shape, class[at]).as_slice() {
            [(neg, rest)] if rest.is_empty() => {
                if *neg {
                    -BigInt::one()
                } else {
                    BigInt::one()
                }
            }
            _ => BigInt::zero(),
        };
    }
    let key = (shape.to_vec(), at);
    if let Some(v) = memo.get(&key) {
        return v.clone();
    }
    let mut total = BigInt::zero();
    for (neg, rest) in strips(shape, class[at]) {
        let v = mn(&rest, class, at + 1, memo);
        if neg {
            total -= v;
        } else {
            total += v;
        }
    }
    memo.insert(key, total.clone());
    total
}

fn gcd_of(parts: &[u32]) -> u32 {
    parts.iter().fold(0u32, |g, &p| g.gcd(&p))
}

fn value_with(lambda: &Partition, mu: &Partition, g: u32, memo: &mut Memo) -> BigInt {
    if g > 1 && !core(lambda.parts(), g).is_empty() {
        return BigInt::zero();
    }
    mn(lambda.parts(), mu.parts(), 0, memo)
}

/// `chi^lambda(mu)`.
pub fn character_value(lambda: &Partition, mu: &Partition) -> BigInt {
    assert_eq!(lambda.degree(), mu.degree(), "shape and class sizes differ");
    value_with(lambda, mu, gcd_of(mu.parts()), &mut Memo::new())
}

/// Product of the hook lengths of a shape.
pub fn hook_product(lambda: &Partition) -> BigInt {
    let rows = lambda.parts();
    let mut prod = BigInt::one();
    for (i, &row) in rows.iter().enumerate() {
        for j in 0..row {
            let arm = row - j - 1;
            let leg = rows[i + 1..].iter().take_while(|&&r| r > j).count() as u32;
            prod *= arm + leg + 1;
        }
    }
    prod
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// `chi^lambda(1^d) = d! / H(lambda)`.
pub fn dimension(lambda: &Partition) -> BigInt {
    factorial(lambda.degree()) / hook_product(lambda)
}

/// Order of the centralizer of a permutation of cycle type `mu`:
/// the product of `k^m_k * m_k!`.
pub fn centralizer_order(mu: &Partition) -> BigInt {
    mu.multiplicities()
        .into_iter()
        .fold(BigInt::one(), |acc, (k, m)| {
            acc * BigInt::from(k).pow(m) * factorial(m)
        })
}

/// Size of the conjugacy class `mu`.
pub fn class_size(mu: &Partition) -> BigInt {
    factorial(mu.degree()) / centralizer_order(mu)
}

/// The full column of the character table at `key.class`, read from the
/// cache when present and written back after computing otherwise.
pub fn character_slice(key: &CharacterKey, cache: Option<&CharCache>) -> CharacterTableSlice {
    if let Some(hit) = cache.and_then(|c| c.load(key)) {
        return hit;
    }
    let shapes = partitions_of(key.degree);
    let g = gcd_of(key.class.parts());
    let values: BTreeMap<Partition, BigInt> = shapes
        .par_iter()
        .map_init(Memo::new, |memo, lambda| {
            (lambda.clone(), value_with(lambda, &key.class, g, memo))
        })
        .collect();
    let slice = CharacterTableSlice {
        key: key.clone(),
        values,
    };
    if let Some(c) = cache {
        // a failed write only loses the memo, never the value
        let _ = c.store(&slice);
    }
    slice
}
