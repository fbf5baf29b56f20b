//! Candidate branched covers of the sphere with three branching points whose
//! associated orbifold cover has a two-dimensional Teichmüller space: their
//! enumeration and the decision of which ones are realizable.

pub mod cache;
pub mod criteria;
pub mod datum;
pub mod dessin;
pub mod emit;
pub mod enumeration;
pub mod error;
pub mod monodromy;
pub mod orbifold;
pub mod partition;

pub use datum::BranchDatum;
pub use enumeration::{enumerate_all, enumerate_s4, enumerate_t1, CandidateRecord, Family};
pub use error::{Error, Result};
pub use monodromy::{decide, Certificate, Decision, Policy, Verdict};
pub use orbifold::{associated_cover, CandidateOrbifoldCover, GeometryClass, Orbifold};
pub use partition::Partition;
