//! Reference counts by running over every pair `(s1, s2)` in `S_d x S_d`.
//! Only practical for `d <= 7`; used to check the character formulas.

use std::collections::HashMap;

use rayon::prelude::*;

use super::characters::partitions_of;
use crate::partition::Partition;

/// Largest degree accepted by [`brute_force_counts`].
pub const MAX_DEGREE: u32 = 8;

fn all_permutations(d: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let mut p: Vec<u8> = (0..d as u8).collect();
    fn heap(k: usize, p: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if k <= 1 {
            out.push(p.clone());
            return;
        }
        for i in 0..k {
            heap(k - 1, p, out);
            let j = if k.is_multiple_of(2) { i } else { 0 };
            p.swap(j, k - 1);
        }
    }
    heap(d, &mut p, &mut out);
    out
}

/// Cycle type packed as base-9 digits: the digit at `len` counts cycles
/// of that length.
fn type_key(p: &[u8]) -> u64 {
    let mut seen = [false; MAX_DEGREE as usize];
    let mut key = 0u64;
    for s in 0..p.len() {
        if seen[s] {
            continue;
        }
        let (mut x, mut n) = (s, 0u32);
        while !seen[x] {
            seen[x] = true;
            x = p[x] as usize;
            n += 1;
        }
        key += 9u64.pow(n);
    }
    key
}

fn shape_key(p: &Partition) -> u64 {
    p.parts().iter().map(|&n| 9u64.pow(n)).sum()
}

fn transitive(a: &[u8], b: &[u8]) -> bool {
    let d = a.len();
    let mut reached = 1u32;
    let mut stack = vec![0usize];
    while let Some(x) = stack.pop() {
        for y in [a[x] as usize, b[x] as usize] {
            if reached & (1 << y) == 0 {
                reached |= 1 << y;
                stack.push(y);
            }
        }
    }
    reached.count_ones() as usize == d
}

/// For every ordered triple of cycle types, the number of triples with
/// `s1 s2 s3 = 1` and the number of those acting transitively.
pub fn brute_force_counts(d: u32) -> HashMap<[Partition; 3], (u64, u64)> {
    assert!((1..=MAX_DEGREE).contains(&d), "degree {d} out of range");
    let shapes = partitions_of(d);
    let index: HashMap<u64, usize> = shapes.iter().enumerate().map(|(i, p)| (shape_key(p), i)).collect();
    let n = shapes.len();
    let perms = all_permutations(d as usize);
    let types: Vec<usize> = perms.iter().map(|p| index[&type_key(p)]).collect();
    let cell = |a: usize, b: usize, c: usize| (a * n + b) * n + c;

    let tally = perms
        .par_iter()
        .enumerate()
        .fold(
            || vec![(0u64, 0u64); n * n * n],
            |mut acc, (i, s1)| {
                let mut prod = vec![0u8; d as usize];
                for (j, s2) in perms.iter().enumerate() {
                    for x in 0..d as usize {
                        prod[x] = s2[s1[x] as usize];
                    }
                    // s3 is the inverse of the product, of the same type
                    let k = index[&type_key(&prod)];
                    let e = &mut acc[cell(types[i], types[j], k)];
                    e.0 += 1;
                    if transitive(s1, s2) {
                        e.1 += 1;
                    }
                }
                acc
            },
        )
        .reduce(
            || vec![(0u64, 0u64); n * n * n],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    x.0 += y.0;
                    x.1 += y.1;
                }
                a
            },
        );

    let mut out = HashMap::new();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                out.insert(
                    [shapes[a].clone(), shapes[b].clone(), shapes[c].clone()],
                    tally[cell(a, b, c)],
                );
            }
        }
    }
    out
}
