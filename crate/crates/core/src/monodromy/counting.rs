//! Exact counts of permutation triples with prescribed cycle types and
//! trivial product, with and without the transitivity requirement.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::{binomial, Integer};
use num_traits::{Signed, Zero};
use parking_lot::Mutex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::characters::{
    centralizer_order, character_slice, factorial, hook_product, partitions_of, CharacterKey,
};
use crate::cache::CharCache;
use crate::datum::BranchDatum;
use crate::error::{Error, Result};
use crate::partition::Partition;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorizationCount {
    #[serde(with = "decimal")]
    pub all_count: BigUint,
    #[serde(with = "decimal")]
    pub connected_count: BigUint,
}

/// Big integers as decimal strings.
mod decimal {
    use num_bigint::BigUint;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        String::deserialize(d)?.parse().map_err(D::Error::custom)
    }
}

fn check_degrees(classes: &[&Partition; 3]) -> Result<u32> {
    let d = classes[0].degree();
    if classes.iter().any(|c| c.degree() != d) {
        return Err(Error::Argument("classes of different degrees".into()));
    }
    Ok(d)
}

/// The sign of a permutation of cycle type `mu` is `(-1)^(d - len)`.
fn odd(mu: &Partition) -> bool {
    (mu.degree() as usize - mu.len()) % 2 == 1
}

fn to_unsigned(x: BigInt) -> Result<BigUint> {
    match x.sign() {
        Sign::Minus => Err(Error::Consistency(format!("negative count {x}"))),
        _ => Ok(x.magnitude().clone()),
    }
}

/// Number of ordered triples `(s1, s2, s3)` of the given cycle types with
/// `s1 s2 s3 = 1`, transitive or not:
/// `d! * sum_lambda chi(mu1) chi(mu2) chi(mu3) H(lambda) / (z1 z2 z3)`.
pub fn count_all(classes: [&Partition; 3], cache: Option<&CharCache>) -> Result<BigUint> {
    let d = check_degrees(&classes)?;
    if classes.iter().filter(|c| odd(c)).count() % 2 == 1 {
        return Ok(BigUint::zero());
    }
    let slices: Vec<_> = classes
        .iter()
        .map(|c| character_slice(&CharacterKey::new((*c).clone()), cache))
        .collect();
    let shapes = partitions_of(d);
    let sum: BigInt = shapes
        .par_iter()
        .map(|lambda| {
            let mut term = BigInt::from(1);
            for s in &slices {
                let v = s.get(lambda).expect("complete slice");
                if v.is_zero() {
                    return BigInt::zero();
                }
                term *= v;
            }
            term * hook_product(lambda)
        })
        .reduce(BigInt::zero, |a, b| a + b);
    let numerator = factorial(d) * sum;
    let denominator: BigInt = classes.iter().map(|c| centralizer_order(c)).product();
    let (q, r) = numerator.div_rem(&denominator);
    if !r.is_zero() {
        return Err(Error::Consistency(format!(
            "non-integral factorization count for ({}, {}, {})",
            classes[0], classes[1], classes[2]
        )));
    }
    to_unsigned(q)
}

type Triple = [Partition; 3];

fn normalize(mut t: Triple) -> Triple {
    t.sort();
    t
}

/// Counts memoized across calls within one [`Counter`].
pub struct Counter<'a> {
    cache: Option<&'a CharCache>,
    all: Mutex<HashMap<Triple, BigInt>>,
    connected: Mutex<HashMap<Triple, BigInt>>,
}

impl<'a> Counter<'a> {
    pub fn new(cache: Option<&'a CharCache>) -> Self {
        Counter {
            cache,
            all: Mutex::new(HashMap::new()),
            connected: Mutex::new(HashMap::new()),
        }
    }

    fn all(&self, t: &Triple) -> Result<BigInt> {
        if let Some(v) = self.all.lock().get(t) {
            return Ok(v.clone());
        }
        let v = BigInt::from(count_all([&t[0], &t[1], &t[2]], self.cache)?);
        self.all.lock().insert(t.clone(), v.clone());
        Ok(v)
    }

    /// Transitive triples. The orbit of the point 1 has some size `d1`; the
    /// remaining points carry an arbitrary triple, so
    /// `C(D) = A(D) - sum binom(d-1, d1-1) C(D1) A(D - D1)` over the splits
    /// of each class with `D1` of degree `d1 < d`.
    pub fn connected(&self, t: &Triple) -> Result<BigInt> {
        let t = normalize(t.clone());
        let d = t[0].degree();
        let total: usize = t.iter().map(Partition::len).sum();
        // a transitive triple is a connected cover of genus (2 + d - total) / 2
        if total > d as usize + 2 || (total + d as usize) % 2 == 1 {
            return Ok(BigInt::zero());
        }
        if let Some(v) = self.connected.lock().get(&t) {
            return Ok(v.clone());
        }
        let mut value = self.all(&t)?;
        for d1 in 1..d {
            let s0 = t[0].enumerate_splits(d1);
            let s1 = t[1].enumerate_splits(d1);
            let s2 = t[2].enumerate_splits(d1);
            let ways = BigInt::from(binomial(u64::from(d - 1), u64::from(d1 - 1)));
            for (a1, a2) in &s0 {
                for (b1, b2) in &s1 {
                    for (c1, c2) in &s2 {
                        let inner = [a1.clone(), b1.clone(), c1.clone()];
                        let c = self.connected(&inner)?;
                        if c.is_zero() {
                            continue;
                        }
                        let outer = normalize([a2.clone(), b2.clone(), c2.clone()]);
                        let a = self.all(&outer)?;
                        value -= &ways * c * a;
                    }
                }
            }
        }
        if value.is_negative() {
            return Err(Error::Consistency(format!(
                "negative transitive count for ({}, {}, {})",
                t[0], t[1], t[2]
            )));
        }
        self.connected.lock().insert(t, value.clone());
        Ok(value)
    }
}

/// Transitive triples realizing an arbitrary triple of classes.
pub fn count_connected_classes(classes: [&Partition; 3], cache: Option<&CharCache>) -> Result<BigUint> {
    check_degrees(&classes)?;
    let counter = Counter::new(cache);
    to_unsigned(counter.connected(&[classes[0].clone(), classes[1].clone(), classes[2].clone()])?)
}

/// Transitive triples realizing the datum; zero proves it exceptional.
pub fn count_connected(datum: &BranchDatum, cache: Option<&CharCache>) -> Result<BigUint> {
    let [a, b, c] = datum.partitions();
    count_connected_classes([a, b, c], cache)
}

pub fn count_both(datum: &BranchDatum, cache: Option<&CharCache>) -> Result<FactorizationCount> {
    let [a, b, c] = datum.partitions();
    let counter = Counter::new(cache);
    let t = [a.clone(), b.clone(), c.clone()];
    let connected = to_unsigned(counter.connected(&t)?)?;
    let all = to_unsigned(counter.all(&normalize(t))?)?;
    Ok(FactorizationCount {
        all_count: all,
        connected_count: connected,
    })
}
