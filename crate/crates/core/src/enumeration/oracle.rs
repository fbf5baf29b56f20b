//! Bound-free brute force over every partition of every degree. Slow, and
//! deliberately shares no pruning with the fast enumerators so that it can
//! catch mistakes in them.

use std::collections::{BTreeSet, HashMap};

use rayon::prelude::*;

use crate::datum::BranchDatum;
use crate::error::Result;
use crate::partition::Partition;

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[derive(Clone)]
struct Row {
    parts: Vec<u32>,
    len: usize,
    lcm: u64,
    c: u32,
}

fn visit(rest: u32, cap: u32, cur: &mut Vec<u32>, f: &mut dyn FnMut(&[u32])) {
    if rest == 0 {
        f(cur);
        return;
    }
    for part in (1..=cap.min(rest)).rev() {
        cur.push(part);
        visit(rest - part, part, cur, f);
        cur.pop();
    }
}

/// Every partition of `d` with l.c.m. at least 2 and defect at most `c_max`.
fn rows(d: u32, c_max: u32) -> Vec<Row> {
    let mut out = Vec::new();
    visit(d, d, &mut Vec::new(), &mut |parts| {
        let lcm = parts.iter().fold(1u64, |a, &p| a / gcd(a, p as u64) * p as u64);
        let c = parts.iter().filter(|&&p| p as u64 != lcm).count() as u32;
        if lcm >= 2 && c <= c_max {
            out.push(Row {
                parts: parts.to_vec(),
                len: parts.len(),
                lcm,
                c,
            });
        }
    });
    out
}

fn triples(d: u32, c_sum: u32, len_sum: usize, hyperbolic_only: bool) -> Result<Vec<BranchDatum>> {
    let rs = rows(d, c_sum);
    // index by (defect, length) so the third member is looked up, not scanned
    let mut by_shape: HashMap<(u32, usize), Vec<usize>> = HashMap::new();
    for (k, row) in rs.iter().enumerate() {
        by_shape.entry((row.c, row.len)).or_default().push(k);
    }
    let mut out = Vec::new();
    for i in 0..rs.len() {
        for j in i..rs.len() {
            let (a, b) = (&rs[i], &rs[j]);
            if a.c + b.c > c_sum || a.len + b.len >= len_sum {
                continue;
            }
            let key = (c_sum - a.c - b.c, len_sum - a.len - b.len);
            let Some(bucket) = by_shape.get(&key) else {
                continue;
            };
            for &k in bucket.iter().filter(|&&k| k >= j) {
                let c = &rs[k];
                let (p, q, r) = (a.lcm as u128, b.lcm as u128, c.lcm as u128);
                if hyperbolic_only && q * r + p * r + p * q >= p * q * r {
                    continue;
                }
                let genus = if len_sum == d as usize + 2 { 0 } else { 1 };
                out.push(BranchDatum::new(
                    d,
                    genus,
                    [
                        Partition::new(a.parts.clone())?,
                        Partition::new(b.parts.clone())?,
                        Partition::new(c.parts.clone())?,
                    ],
                )?);
            }
        }
    }
    Ok(out)
}

/// Sphere-cover data of degree `d`: defect sum 4, total length `d + 2`,
/// hyperbolic l.c.m. triple.
pub fn brute_s4_degree(d: u32) -> Result<Vec<BranchDatum>> {
    triples(d, 4, d as usize + 2, true)
}

/// Torus-cover data of degree `d`: defect sum 1, total length `d`.
pub fn brute_t1_degree(d: u32) -> Result<Vec<BranchDatum>> {
    triples(d, 1, d as usize, false)
}

/// Brute-force sphere-cover data over `2..=max_degree`.
pub fn brute_s4(max_degree: u32) -> Result<BTreeSet<BranchDatum>> {
    let found: Vec<Vec<BranchDatum>> = (2..=max_degree)
        .into_par_iter()
        .map(brute_s4_degree)
        .collect::<Result<_>>()?;
    Ok(found.into_iter().flatten().collect())
}

/// Brute-force torus-cover data over `2..=max_degree`.
pub fn brute_t1(max_degree: u32) -> Result<BTreeSet<BranchDatum>> {
    let found: Vec<Vec<BranchDatum>> = (2..=max_degree)
        .into_par_iter()
        .map(brute_t1_degree)
        .collect::<Result<_>>()?;
    Ok(found.into_iter().flatten().collect())
}
