//! Candidates whose covering orbifold is a torus with one cone point.
//!
//! Over each branching point but one the partition is `(p, ..., p)`; the
//! remaining one is `(r, ..., r, r')` with `r'` a proper divisor of `r`.

use num_traits::Signed;

use super::bounds::triangles_with_reciprocal_sum_above;
use super::{into_records, CandidateRecord};
use crate::datum::BranchDatum;
use crate::error::Result;
use crate::orbifold::{Orbifold, Rational};
use crate::partition::{divisors, Partition};

/// Largest degree handled by the direct divisor sweep.
pub const SWEEP_MAX_DEGREE: u32 = 17;

fn build(d: u32, p: u32, q: u32, r: u32, r_prime: u32) -> Result<BranchDatum> {
    let k = (d - r_prime) / r;
    BranchDatum::new(
        d,
        1,
        [
            Partition::from_multiplicities(&[(p, d / p)])?,
            Partition::from_multiplicities(&[(q, d / q)])?,
            Partition::from_multiplicities(&[(r, k), (r_prime, 1)])?,
        ],
    )
}

fn proper_divisors(n: u32) -> Vec<u32> {
    divisors(n).into_iter().filter(|&x| x < n).collect()
}

/// Sweep over `p, q | d`, `r' | r`, `r' < r`.
pub fn sweep(d: u32) -> Result<Vec<BranchDatum>> {
    let divs: Vec<u32> = divisors(d).into_iter().filter(|&x| x > 1).collect();
    let mut out = Vec::new();
    for (i, &p) in divs.iter().enumerate() {
        for &q in &divs[i..] {
            for r in 2..=d {
                for r_prime in proper_divisors(r) {
                    if r_prime >= d || !(d - r_prime).is_multiple_of(r) || (d - r_prime) / r == 0 {
                        continue;
                    }
                    if d / p + d / q + (d - r_prime) / r + 1 == d {
                        out.push(build(d, p, q, r, r_prime)?);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Targets for degrees at least 18: `1/p + 1/q + 1/r > 17/18`.
pub fn large_degree_targets() -> Vec<[u64; 3]> {
    triangles_with_reciprocal_sum_above(Rational::new(17, 18))
}

/// Solves `d * (-chi(target)) = 1 - r'/R` for each choice of the special
/// cone point `R` and proper divisor `r'`, keeping integral solutions.
pub fn solve_large_degree() -> Result<Vec<BranchDatum>> {
    let mut out = Vec::new();
    for target in large_degree_targets() {
        let neg_chi = -Orbifold::sphere(&target)?.chi_orb();
        debug_assert!(neg_chi.is_positive());
        for j in 0..3 {
            if j > 0 && target[j] == target[j - 1] {
                continue;
            }
            let big_r = target[j] as u32;
            let others: Vec<u32> = (0..3).filter(|&i| i != j).map(|i| target[i] as u32).collect();
            for r_prime in proper_divisors(big_r) {
                let d = (Rational::from_integer(1) - Rational::new(i64::from(r_prime), i64::from(big_r))) / neg_chi;
                if !d.is_integer() {
                    continue;
                }
                let d = d.to_integer() as u32;
                if d <= SWEEP_MAX_DEGREE
                    || others.iter().any(|&o| !d.is_multiple_of(o))
                    || !(d - r_prime).is_multiple_of(big_r)
                    || d < big_r + r_prime
                {
                    continue;
                }
                out.push(build(d, others[0], others[1], big_r, r_prime)?);
            }
        }
    }
    Ok(out)
}

/// All torus-cover candidates, in table order.
pub fn enumerate_t1() -> Result<Vec<CandidateRecord>> {
    let mut data = Vec::new();
    for d in 2..=SWEEP_MAX_DEGREE {
        data.extend(sweep(d)?);
    }
    data.extend(solve_large_degree()?);
    into_records(data)
}

/// Torus-cover candidates of a single degree.
pub fn enumerate_t1_degree(d: u32) -> Result<Vec<CandidateRecord>> {
    let data = if d < 2 {
        Vec::new()
    } else if d <= SWEEP_MAX_DEGREE {
        sweep(d)?
    } else {
        solve_large_degree()?.into_iter().filter(|x| x.degree() == d).collect()
    };
    into_records(data)
}
