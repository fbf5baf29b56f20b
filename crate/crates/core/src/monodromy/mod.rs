//! Realizability by monodromy: permutation triples, exact counts through
//! symmetric-group characters, and the decision pipeline built on both.

pub mod brute;
pub mod characters;
pub mod counting;
pub mod decide;
pub mod perm;
pub mod search;

pub use characters::{character_slice, character_value, CharacterKey, CharacterTableSlice};
pub use counting::{count_all, count_connected, FactorizationCount};
pub use decide::{decide, Decision, Layer, Policy, Verdict};
pub use perm::{verify_certificate, Certificate, Permutation};
pub use search::{find_realization, Budget, SearchOutcome};
