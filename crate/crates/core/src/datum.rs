//! Branch data: a degree, the genus of the covering surface, and the three
//! partitions of local degrees over the branching points of the sphere.

use std::cmp::Reverse;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partition::{parse_parts_at, Partition};

/// A candidate surface branched cover over the sphere with three branching
/// points. The partitions are kept in canonical order (increasing l.c.m.,
/// ties broken reverse-lexicographically) so that equal data compare equal.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BranchDatum {
    degree: u32,
    cover_genus: u32,
    partitions: [Partition; 3],
}

/// Canonical sort key for a partition inside a datum.
pub(crate) fn canonical_key(p: &Partition) -> (u64, Reverse<&[u32]>) {
    (p.lcm(), Reverse(p.parts()))
}

pub(crate) fn canonical_order(mut parts: [Partition; 3]) -> [Partition; 3] {
    parts.sort_by(|a, b| canonical_key(a).cmp(&canonical_key(b)));
    parts
}

impl BranchDatum {
    /// Builds a datum with an explicitly declared cover genus. Riemann-Hurwitz
    /// is not enforced here; see [`BranchDatum::check_rh`].
    pub fn new(degree: u32, cover_genus: u32, partitions: [Partition; 3]) -> Result<Self> {
        if degree == 0 {
            return Err(Error::Argument("degree must be positive".into()));
        }
        for p in &partitions {
            if p.degree() != degree {
                return Err(Error::Argument(format!(
                    "partition {p} does not sum to the degree {degree}"
                )));
            }
        }
        Ok(BranchDatum {
            degree,
            cover_genus,
            partitions: canonical_order(partitions),
        })
    }

    /// Builds a datum whose cover genus is read off Riemann-Hurwitz: total
    /// length `d + 2` means a sphere, `d` a torus. Anything else is rejected.
    pub fn infer(degree: u32, partitions: [Partition; 3]) -> Result<Self> {
        let total: usize = partitions.iter().map(Partition::len).sum();
        let genus = if total == degree as usize + 2 {
            0
        } else if total == degree as usize {
            1
        } else {
            return Err(Error::Domain(format!(
                "total length {total} is neither d+2 nor d for d = {degree}"
            )));
        };
        Self::new(degree, genus, partitions)
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn cover_genus(&self) -> u32 {
        self.cover_genus
    }

    pub fn partitions(&self) -> &[Partition; 3] {
        &self.partitions
    }

    pub fn total_length(&self) -> usize {
        self.partitions.iter().map(Partition::len).sum()
    }

    pub fn defect_sum(&self) -> u32 {
        self.partitions.iter().map(Partition::defect).sum()
    }

    /// Riemann-Hurwitz with three branching points over the sphere:
    /// `chi(cover) - l(Pi) = d * (2 - 3)`.
    pub fn check_rh(&self) -> bool {
        let chi_cover = 2 - 2 * i64::from(self.cover_genus);
        chi_cover - self.total_length() as i64 == -i64::from(self.degree)
    }

    /// The l.c.m. of each partition, in datum order.
    pub fn cone_orders(&self) -> [u64; 3] {
        [
            self.partitions[0].lcm(),
            self.partitions[1].lcm(),
            self.partitions[2].lcm(),
        ]
    }
}

impl fmt::Display for BranchDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{}{}{}",
            self.degree, self.partitions[0], self.partitions[1], self.partitions[2]
        )
    }
}

impl fmt::Debug for BranchDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} [g={}]", self.cover_genus)
    }
}

/// Grammar: `<d>:(<parts>)(<parts>)(<parts>)`, parts comma separated, with
/// `a^k` accepted as shorthand for `k` copies of `a`. The cover genus is
/// inferred from Riemann-Hurwitz.
impl FromStr for BranchDatum {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (d_text, rest) = s.split_once(':').ok_or(Error::Parse {
            position: 0,
            message: "expected '<degree>:' prefix".into(),
        })?;
        let degree: u32 = d_text.trim().parse().map_err(|_| Error::Parse {
            position: 0,
            message: format!("'{}' is not a degree", d_text.trim()),
        })?;
        let base = d_text.len() + 1;
        let mut groups = Vec::new();
        let mut offsets = Vec::new();
        let mut start = None;
        for (i, ch) in rest.char_indices() {
            match ch {
                '(' if start.is_none() => start = Some(i),
                '(' => {
                    return Err(Error::Parse {
                        position: base + i,
                        message: "nested '('".into(),
                    })
                }
                ')' => {
                    let open = start.take().ok_or(Error::Parse {
                        position: base + i,
                        message: "unmatched ')'".into(),
                    })?;
                    groups.push(parse_parts_at(&rest[open..=i], base + open)?);
                    offsets.push(base + open);
                }
                c if start.is_none() && !c.is_whitespace() => {
                    return Err(Error::Parse {
                        position: base + i,
                        message: format!("unexpected '{c}' between partitions"),
                    })
                }
                _ => {}
            }
        }
        if let Some(open) = start {
            return Err(Error::Parse {
                position: base + open,
                message: "unterminated partition".into(),
            });
        }
        let groups: [Partition; 3] = groups.try_into().map_err(|g: Vec<Partition>| Error::Parse {
            position: s.len(),
            message: format!("expected 3 partitions, found {}", g.len()),
        })?;
        for (k, p) in groups.iter().enumerate() {
            if p.degree() != degree {
                return Err(Error::Parse {
                    position: offsets[k],
                    message: format!("partition {} ({p}) sums to {} not {degree}", k + 1, p.degree()),
                });
            }
        }
        BranchDatum::infer(degree, groups)
    }
}
