//! Permutations of `{0..d}` and monodromy certificates.
//!
//! Products compose left to right: `(a * b)(x) = b(a(x))`. Serialized
//! permutations are 1-indexed one-line notation.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::datum::BranchDatum;
use crate::error::{Error, Result};
use crate::partition::Partition;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Permutation(Vec<u32>);

impl Permutation {
    pub fn identity(d: u32) -> Self {
        debug_assert!(d > 0);
        Permutation((0..d).collect())
    }

    /// From 0-indexed images.
    pub fn from_images(images: Vec<u32>) -> Result<Self> {
        let d = images.len();
        if d == 0 {
            return Err(Error::Argument("empty permutation".into()));
        }
        let mut seen = vec![false; d];
        for &x in &images {
            if x as usize >= d || std::mem::replace(&mut seen[x as usize], true) {
                return Err(Error::Argument(format!("{images:?} is not a permutation")));
            }
        }
        Ok(Permutation(images))
    }

    /// From 1-indexed one-line notation.
    pub fn from_one_line(images: &[u32]) -> Result<Self> {
        if images.contains(&0) {
            return Err(Error::Argument("one-line notation is 1-indexed".into()));
        }
        Self::from_images(images.iter().map(|&x| x - 1).collect())
    }

    /// From disjoint cycles on 0-indexed points.
    pub fn from_cycles(d: u32, cycles: &[Vec<u32>]) -> Result<Self> {
        let mut images: Vec<u32> = (0..d).collect();
        for cycle in cycles {
            for (i, &x) in cycle.iter().enumerate() {
                let next = cycle[(i + 1) % cycle.len()];
                if x >= d || next >= d {
                    return Err(Error::Argument(format!("point out of range in {cycle:?}")));
                }
                images[x as usize] = next;
            }
        }
        Self::from_images(images)
    }

    pub fn degree(&self) -> u32 {
        self.0.len() as u32
    }

    pub fn apply(&self, x: u32) -> u32 {
        self.0[x as usize]
    }

    pub fn images(&self) -> &[u32] {
        &self.0
    }

    pub fn one_line(&self) -> Vec<u32> {
        self.0.iter().map(|&x| x + 1).collect()
    }

    /// `self` first, then `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        Permutation(self.0.iter().map(|&x| other.0[x as usize]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Permutation(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    /// Cycles, each starting at its least point, ordered by that point.
    pub fn cycles(&self) -> Vec<Vec<u32>> {
        let mut seen = vec![false; self.0.len()];
        let mut out = Vec::new();
        for start in 0..self.0.len() {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push(x as u32);
                x = self.0[x] as usize;
            }
            out.push(cycle);
        }
        out
    }

    pub fn cycle_type(&self) -> Partition {
        Partition::new(self.cycles().iter().map(|c| c.len() as u32).collect())
            .expect("degree at least 1")
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut any = false;
        for c in self.cycles().into_iter().filter(|c| c.len() > 1) {
            any = true;
            let pts: Vec<String> = c.iter().map(|x| (x + 1).to_string()).collect();
            write!(f, "({})", pts.join(" "))?;
        }
        if !any {
            f.write_str("()")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Permutation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.one_line().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<u32>::deserialize(d)?;
        Permutation::from_one_line(&v).map_err(serde::de::Error::custom)
    }
}

/// Number of orbits of the group generated by the given permutations.
pub fn orbit_count(gens: &[&Permutation], d: u32) -> usize {
    let mut parent: Vec<u32> = (0..d).collect();
    fn find(parent: &mut [u32], mut x: u32) -> u32 {
        while parent[x as usize] != x {
            parent[x as usize] = parent[parent[x as usize] as usize];
            x = parent[x as usize];
        }
        x
    }
    let mut orbits = d as usize;
    for g in gens {
        for x in 0..d {
            let (a, b) = (find(&mut parent, x), find(&mut parent, g.apply(x)));
            if a != b {
                parent[a as usize] = b;
                orbits -= 1;
            }
        }
    }
    orbits
}

/// A monodromy triple realizing a branch datum: `sigma_i` has cycle type
/// `Pi_i`, `sigma1 sigma2 sigma3 = 1` and the triple acts transitively.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub d: u32,
    pub sigma1: Permutation,
    pub sigma2: Permutation,
    pub sigma3: Permutation,
}

impl Certificate {
    /// Completes a pair to a triple with trivial product.
    pub fn from_pair(sigma1: Permutation, sigma2: Permutation) -> Self {
        let sigma3 = sigma1.then(&sigma2).inverse();
        Certificate {
            d: sigma1.degree(),
            sigma1,
            sigma2,
            sigma3,
        }
    }

    pub fn sigmas(&self) -> [&Permutation; 3] {
        [&self.sigma1, &self.sigma2, &self.sigma3]
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse {
            position: e.column(),
            message: e.to_string(),
        })
    }
}

/// Checks cycle types, product and transitivity exactly.
pub fn verify_certificate(datum: &BranchDatum, cert: &Certificate) -> bool {
    let d = datum.degree();
    if cert.d != d || cert.sigmas().iter().any(|s| s.degree() != d) {
        return false;
    }
    let types_ok = cert
        .sigmas()
        .iter()
        .zip(datum.partitions())
        .all(|(s, p)| &s.cycle_type() == p);
    let product_ok = cert.sigma1.then(&cert.sigma2).then(&cert.sigma3).is_identity();
    types_ok && product_ok && orbit_count(&cert.sigmas(), d) == 1
}
