//! Candidates whose covering orbifold is a sphere with four cone points.
//!
//! Degrees up to 12 are handled by a direct sieve over partitions. For
//! larger degrees the target `S(p,q,r)` must be close to Euclidean, which
//! leaves a short list of target shapes; for each one the degree is bounded
//! and the partitions are solved for directly.

use std::collections::BTreeSet;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::bounds::{
    candidate_sources, congruence_classes, d_max, d_max_congruent, floor, r_bound_mod6,
    triangles_with_reciprocal_sum_above,
};
use super::{into_records, CandidateRecord};
use crate::datum::BranchDatum;
use crate::error::Result;
use crate::orbifold::Rational;
use crate::partition::{divisors, generate_partitions, Partition};

/// Largest degree handled by the sieve.
pub const SIEVE_MAX_DEGREE: u32 = 12;

/// Survivor counts after each sieve step at one degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SieveTrace {
    pub degree: u32,
    /// Nontrivial partitions with defect at most 4.
    pub partitions: usize,
    /// Unordered triples with defect sum 4 and total length `d + 2`.
    pub triples: usize,
    /// Triples whose l.c.m. triple is hyperbolic.
    pub hyperbolic: usize,
}

fn is_hyperbolic(p: u64, q: u64, r: u64) -> bool {
    // 1/p + 1/q + 1/r < 1
    p * q + q * r + r * p < p * q * r
}

/// Sieve for one degree, returning the survivors and the step counts.
pub fn sieve(d: u32) -> Result<(Vec<BranchDatum>, SieveTrace)> {
    let parts = generate_partitions(d, 4, None, true)?;
    let n = parts.len();
    let mut triples = 0;
    let mut out = Vec::new();
    for i in 0..n {
        for j in i..n {
            let cij = parts[i].defect() + parts[j].defect();
            let lij = parts[i].len() + parts[j].len();
            if cij > 4 || lij > d as usize + 1 {
                continue;
            }
            for k in j..n {
                if cij + parts[k].defect() != 4 || lij + parts[k].len() != d as usize + 2 {
                    continue;
                }
                triples += 1;
                if is_hyperbolic(parts[i].lcm(), parts[j].lcm(), parts[k].lcm()) {
                    out.push(BranchDatum::new(
                        d,
                        0,
                        [parts[i].clone(), parts[j].clone(), parts[k].clone()],
                    )?);
                }
            }
        }
    }
    let trace = SieveTrace {
        degree: d,
        partitions: n,
        triples,
        hyperbolic: out.len(),
    };
    Ok((out, trace))
}

/// Target shapes for degrees at least 13: `1/p + 1/q + 1/r > 11/13`.
pub fn large_degree_targets() -> Vec<[u64; 3]> {
    triangles_with_reciprocal_sum_above(Rational::new(11, 13))
}

/// Degrees `d >= 13` left for the target `S(p,q,r)` after every bound.
pub fn admissible_degrees(target: [u64; 3]) -> Result<Vec<u32>> {
    let [p, q, r] = target;
    let top = floor(&d_max(p, q, r)?);
    if top <= i64::from(SIEVE_MAX_DEGREE) {
        return Ok(Vec::new());
    }
    let from_sources: BTreeSet<u32> = candidate_sources(p, q, r, SIEVE_MAX_DEGREE + 1)?
        .into_iter()
        .map(|(_, d)| d)
        .collect();
    let mut out = Vec::new();
    for d in SIEVE_MAX_DEGREE + 1..=top as u32 {
        if [p, q] == [2, 3] {
            if r > u64::from(r_bound_mod6(d % 6)) {
                continue;
            }
            let mut cut = false;
            for (k, n) in congruence_classes(d) {
                cut |= floor(&d_max_congruent(k, n, r)?) < i64::from(d);
            }
            if cut {
                continue;
            }
        }
        if from_sources.contains(&d) {
            out.push(d);
        }
    }
    Ok(out)
}

/// Partitions of `d` into divisors of `p` with l.c.m. exactly `p`.
fn partitions_with_lcm(d: u32, p: u64) -> Result<Vec<Partition>> {
    let allowed: Vec<u32> = divisors(p as u32).into_iter().filter(|&x| x <= d).collect();
    Ok(generate_partitions(d, 4, Some(&allowed), true)?
        .into_iter()
        .filter(|x| x.lcm() == p)
        .collect())
}

/// Data of degree `d` over the target `S(p,q,r)`.
pub fn solve_target(target: [u64; 3], d: u32) -> Result<Vec<BranchDatum>> {
    let [p, q, r] = target;
    let lp = partitions_with_lcm(d, p)?;
    let lq = if q == p { lp.clone() } else { partitions_with_lcm(d, q)? };
    let lr = if r == q { lq.clone() } else { partitions_with_lcm(d, r)? };
    let mut out = Vec::new();
    for (i, a) in lp.iter().enumerate() {
        let j0 = if q == p { i } else { 0 };
        for (j, b) in lq.iter().enumerate().skip(j0) {
            let k0 = if r == q { j } else { 0 };
            for c in lr.iter().skip(k0) {
                let defect = a.defect() + b.defect() + c.defect();
                let len = a.len() + b.len() + c.len();
                if defect == 4 && len == d as usize + 2 {
                    out.push(BranchDatum::new(d, 0, [a.clone(), b.clone(), c.clone()])?);
                }
            }
        }
    }
    Ok(out)
}

fn large_degree_data() -> Result<Vec<BranchDatum>> {
    let jobs: Vec<([u64; 3], u32)> = large_degree_targets()
        .into_iter()
        .map(|t| Ok(admissible_degrees(t)?.into_iter().map(move |d| (t, d))))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    let found: Vec<Vec<BranchDatum>> = jobs
        .par_iter()
        .map(|&(t, d)| solve_target(t, d))
        .collect::<Result<_>>()?;
    Ok(found.into_iter().flatten().collect())
}

fn data_of_degree(d: u32) -> Result<Vec<BranchDatum>> {
    if d < 2 {
        return Ok(Vec::new());
    }
    if d <= SIEVE_MAX_DEGREE {
        return Ok(sieve(d)?.0);
    }
    let mut out = Vec::new();
    for t in large_degree_targets() {
        if admissible_degrees(t)?.contains(&d) {
            out.extend(solve_target(t, d)?);
        }
    }
    Ok(out)
}

/// All sphere-cover candidates, in table order.
pub fn enumerate_s4() -> Result<Vec<CandidateRecord>> {
    let small: Vec<Vec<BranchDatum>> = (2..=SIEVE_MAX_DEGREE)
        .into_par_iter()
        .map(|d| sieve(d).map(|x| x.0))
        .collect::<Result<_>>()?;
    let mut data: Vec<BranchDatum> = small.into_iter().flatten().collect();
    data.extend(large_degree_data()?);
    into_records(data)
}

/// Sphere-cover candidates of a single degree.
pub fn enumerate_s4_degree(d: u32) -> Result<Vec<CandidateRecord>> {
    into_records(data_of_degree(d)?)
}

/// Sum of `1/p` over the three cone orders; exposed for diagnostics.
pub fn reciprocal_sum(target: [u64; 3]) -> Rational {
    target
        .iter()
        .fold(Rational::zero(), |acc, &p| acc + Rational::new(1, p as i64))
}

#[allow(dead_code)]
fn is_hyperbolic_rational(target: [u64; 3]) -> bool {
    reciprocal_sum(target) < Rational::one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_ten_sieve() {
        let (data, trace) = sieve(10).unwrap();
        assert_eq!(
            trace,
            SieveTrace {
                degree: 10,
                partitions: 29,
                triples: 18,
                hyperbolic: 16
            }
        );
        assert_eq!(data.len(), 16);
    }

    #[test]
    fn hyperbolicity_check_agrees() {
        for p in 2..12 {
            for q in p..12 {
                for r in q..40 {
                    assert_eq!(is_hyperbolic(p, q, r), is_hyperbolic_rational([p, q, r]));
                }
            }
        }
    }

    #[test]
    fn target_2_4_6() {
        assert_eq!(admissible_degrees([2, 4, 6]).unwrap(), vec![13, 14, 15, 16]);
        let mut all = Vec::new();
        for d in 13..=16 {
            all.extend(solve_target([2, 4, 6], d).unwrap());
        }
        let shown: Vec<String> = all.iter().map(ToString::to_string).collect();
        assert_eq!(
            shown,
            vec![
                "14:(2,2,2,2,2,2,2)(4,4,4,1,1)(6,6,1,1)",
                "16:(2,2,2,2,2,2,2,2)(4,4,4,4)(6,6,1,1,1,1)",
            ]
        );
    }

    #[test]
    fn sporadic_targets_stay_below_thirteen() {
        for t in [[2, 5, 5], [2, 5, 6], [3, 3, 4], [3, 3, 5]] {
            assert!(admissible_degrees(t).unwrap().is_empty(), "{t:?}");
        }
    }

    #[test]
    fn degree_sixty() {
        let got = data_of_degree(60).unwrap();
        assert_eq!(got.len(), 1);
        assert_eq!(got[0], "60:(2^30)(3^20)(7^8,1^4)".parse().unwrap());
    }
}
