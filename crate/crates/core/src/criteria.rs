//! Cheap sufficient conditions for a branch datum to be exceptional.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::datum::BranchDatum;
use crate::partition::divisors;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Criterion {
    VeryEvenData,
    Divisibility,
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Criterion::VeryEvenData => "VeryEvenData",
            Criterion::Divisibility => "Divisibility",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriterionResult {
    pub criterion: Criterion,
    pub applies: bool,
    pub excludes: bool,
    pub witness: String,
}

/// The other two indices, for each choice of the odd one out.
const ROLES: [(usize, [usize; 2]); 3] = [(0, [1, 2]), (1, [0, 2]), (2, [0, 1])];

fn not_spherical(criterion: Criterion) -> CriterionResult {
    CriterionResult {
        criterion,
        applies: false,
        excludes: false,
        witness: "covering surface is not a sphere".into(),
    }
}

/// For a cover by the sphere: if `d` is even and two partitions have only
/// even parts, the third must refine `(d/2, d/2)`.
pub fn ved_excludes(datum: &BranchDatum) -> CriterionResult {
    if datum.cover_genus() != 0 {
        return not_spherical(Criterion::VeryEvenData);
    }
    let d = datum.degree();
    let parts = datum.partitions();
    let mut result = CriterionResult {
        criterion: Criterion::VeryEvenData,
        applies: false,
        excludes: false,
        witness: if d % 2 == 1 {
            "odd degree".into()
        } else {
            "no two partitions with only even parts".into()
        },
    };
    if d % 2 == 1 {
        return result;
    }
    let half = d / 2;
    for (third, others) in ROLES {
        if !others.iter().all(|&i| parts[i].all_parts_divisible_by(2)) {
            continue;
        }
        result.applies = true;
        if parts[third].refines((half, half)) {
            result.witness = format!("{} refines ({half},{half})", parts[third]);
        } else {
            result.excludes = true;
            result.witness = format!("{} does not refine ({half},{half})", parts[third]);
            return result;
        }
    }
    result
}

/// For a cover by the sphere: if some `k >= 2` divides `d` and every part
/// of two partitions, the third partition has no part larger than `d/k`.
pub fn divisibility_excludes(datum: &BranchDatum) -> CriterionResult {
    if datum.cover_genus() != 0 {
        return not_spherical(Criterion::Divisibility);
    }
    let d = datum.degree();
    let parts = datum.partitions();
    let mut result = CriterionResult {
        criterion: Criterion::Divisibility,
        applies: false,
        excludes: false,
        witness: "no k >= 2 divides d and two whole partitions".into(),
    };
    for k in divisors(d).into_iter().rev().filter(|&k| k >= 2) {
        for (third, others) in ROLES {
            if !others.iter().all(|&i| parts[i].all_parts_divisible_by(k)) {
                continue;
            }
            let bound = d / k;
            let largest = parts[third].largest();
            if largest > bound {
                return CriterionResult {
                    criterion: Criterion::Divisibility,
                    applies: true,
                    excludes: true,
                    witness: format!("k={k}: {} has part {largest} > {bound}", parts[third]),
                };
            }
            if !result.applies {
                result.applies = true;
                result.witness = format!("k={k}: parts of {} are at most {bound}", parts[third]);
            }
        }
    }
    result
}

/// Both criteria, in pipeline order.
pub fn all_criteria(datum: &BranchDatum) -> [CriterionResult; 2] {
    [ved_excludes(datum), divisibility_excludes(datum)]
}
