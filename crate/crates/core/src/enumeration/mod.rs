//! Enumeration of candidate branch data over the sphere with three branching
//! points whose associated orbifold cover lands in a hyperbolic triangle
//! orbifold with a one-dimensional Teichmüller space upstairs.

pub mod bounds;
pub mod golden;
pub mod oracle;
pub mod s4;
pub mod t1;

use serde::{Deserialize, Serialize};

use crate::datum::BranchDatum;
use crate::error::Result;
use crate::orbifold::{associated_cover, CandidateOrbifoldCover};

pub use bounds::{d_max, d_max_congruent, r_bound_mod6};
pub use s4::{enumerate_s4, enumerate_s4_degree, SieveTrace};
pub use t1::{enumerate_t1, enumerate_t1_degree};

/// Which of the two candidate families a record belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    /// Covering surface is a sphere, source orbifold `S(a,b,c,d)`.
    S4,
    /// Covering surface is a torus, source orbifold `T(a)`.
    T1,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CandidateRecord {
    pub datum: BranchDatum,
    pub cover: CandidateOrbifoldCover,
    pub reference_number: Option<u32>,
}

impl CandidateRecord {
    /// Wraps a datum, computing its cover and looking up its table number.
    pub fn new(datum: BranchDatum) -> Result<Self> {
        let cover = associated_cover(&datum)?;
        let reference_number = golden::number_of(&datum);
        Ok(CandidateRecord {
            datum,
            cover,
            reference_number,
        })
    }

    pub fn family(&self) -> Family {
        if self.datum.cover_genus() == 0 {
            Family::S4
        } else {
            Family::T1
        }
    }
}

pub(crate) fn into_records(data: Vec<BranchDatum>) -> Result<Vec<CandidateRecord>> {
    let mut records = data
        .into_iter()
        .map(CandidateRecord::new)
        .collect::<Result<Vec<_>>>()?;
    records.sort_by(|a, b| {
        (a.datum.degree(), a.reference_number, &a.datum).cmp(&(b.datum.degree(), b.reference_number, &b.datum))
    });
    Ok(records)
}

/// Both families, table order.
pub fn enumerate_all() -> Result<Vec<CandidateRecord>> {
    let mut all = enumerate_s4()?;
    all.extend(enumerate_t1()?);
    Ok(all)
}
