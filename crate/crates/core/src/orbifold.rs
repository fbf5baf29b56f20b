//! Closed orientable 2-orbifolds and the preferred candidate orbifold cover
//! attached to a branch datum.

use std::fmt;

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::datum::BranchDatum;
use crate::error::{Error, Result};

pub type Rational = Ratio<i64>;

/// A closed orientable surface of the given genus with cone points.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Orbifold {
    genus: u32,
    cone_orders: Vec<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GeometryClass {
    Bad,
    Spherical,
    Euclidean,
    Hyperbolic,
}

impl Orbifold {
    pub fn new(genus: u32, mut cone_orders: Vec<u64>) -> Result<Self> {
        if cone_orders.iter().any(|&p| p < 2) {
            return Err(Error::Argument("cone orders must be at least 2".into()));
        }
        cone_orders.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Orbifold { genus, cone_orders })
    }

    /// Sphere with the given cone points.
    pub fn sphere(cone_orders: &[u64]) -> Result<Self> {
        Self::new(0, cone_orders.to_vec())
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    /// Cone orders, nonincreasing.
    pub fn cone_orders(&self) -> &[u64] {
        &self.cone_orders
    }

    pub fn chi_orb(&self) -> Rational {
        let base = Rational::from_integer(2 - 2 * i64::from(self.genus));
        self.cone_orders.iter().fold(base, |acc, &p| {
            acc - (Rational::one() - Rational::new(1, p as i64))
        })
    }

    pub fn classify_geometry(&self) -> GeometryClass {
        let chi = self.chi_orb();
        if chi.is_negative() {
            GeometryClass::Hyperbolic
        } else if chi.is_zero() {
            GeometryClass::Euclidean
        } else {
            let bad = self.genus == 0
                && (self.cone_orders.len() == 1
                    || (self.cone_orders.len() == 2 && self.cone_orders[0] != self.cone_orders[1]));
            if bad {
                GeometryClass::Bad
            } else {
                GeometryClass::Spherical
            }
        }
    }

    /// Real dimension of the Teichmüller space, `6(g-1) + 2n`.
    pub fn teichmuller_dim(&self) -> Result<u32> {
        if self.classify_geometry() != GeometryClass::Hyperbolic {
            return Err(Error::Domain(format!("{self} is not hyperbolic")));
        }
        let dim = 6 * (i64::from(self.genus) - 1) + 2 * self.cone_orders.len() as i64;
        Ok(dim as u32)
    }
}

impl fmt::Display for Orbifold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.genus {
            0 => f.write_str("S(")?,
            1 => f.write_str("T(")?,
            g => write!(f, "F{g}(")?,
        }
        for (i, p) in self.cone_orders.iter().rev().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str(")")
    }
}

impl fmt::Debug for Orbifold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Induced cone orders `p_i / d_ij` sitting over one cone point of order `p_i`.
/// Entries equal to 1 (non-singular preimages) are kept.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CoveringInstruction {
    pub target_order: u64,
    pub induced: Vec<u64>,
}

impl CoveringInstruction {
    /// Induced orders greater than 1, increasing.
    pub fn singular(&self) -> Vec<u64> {
        let mut v: Vec<u64> = self.induced.iter().copied().filter(|&q| q > 1).collect();
        v.sort_unstable();
        v
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CandidateOrbifoldCover {
    pub degree: u32,
    pub source: Orbifold,
    pub target: Orbifold,
    pub instructions: Vec<CoveringInstruction>,
}

impl fmt::Display for CandidateOrbifoldCover {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {} [deg {}] instr: ", self.source, self.target, self.degree)?;
        let shown: Vec<String> = self
            .instructions
            .iter()
            .filter_map(|ins| {
                let singular = ins.singular();
                (!singular.is_empty()).then(|| {
                    let list: Vec<String> = singular.iter().map(u64::to_string).collect();
                    format!("({})->{}", list.join(","), ins.target_order)
                })
            })
            .collect();
        if shown.is_empty() {
            f.write_str("none")
        } else {
            f.write_str(&shown.join("; "))
        }
    }
}

/// Riemann-Hurwitz check; see [`BranchDatum::check_rh`].
pub fn check_rh(datum: &BranchDatum) -> bool {
    datum.check_rh()
}

/// The candidate orbifold cover with smallest cone orders: `p_i` is the
/// l.c.m. of the i-th partition and each local degree `d_ij` induces a cone
/// of order `p_i / d_ij` upstairs.
pub fn associated_cover(datum: &BranchDatum) -> Result<CandidateOrbifoldCover> {
    if !datum.check_rh() {
        return Err(Error::Domain(format!(
            "{datum} violates Riemann-Hurwitz for cover genus {}",
            datum.cover_genus()
        )));
    }
    let mut instructions = Vec::with_capacity(3);
    let mut target_orders = Vec::new();
    let mut source_orders = Vec::new();
    for part in datum.partitions() {
        let p = part.lcm();
        let induced: Vec<u64> = part.parts().iter().map(|&dij| p / u64::from(dij)).collect();
        source_orders.extend(induced.iter().copied().filter(|&q| q > 1));
        if p > 1 {
            target_orders.push(p);
        }
        instructions.push(CoveringInstruction {
            target_order: p,
            induced,
        });
    }
    let cover = CandidateOrbifoldCover {
        degree: datum.degree(),
        source: Orbifold::new(datum.cover_genus(), source_orders)?,
        target: Orbifold::new(0, target_orders)?,
        instructions,
    };
    let lhs = cover.source.chi_orb();
    let rhs = cover.target.chi_orb() * Rational::from_integer(i64::from(datum.degree()));
    if lhs != rhs {
        return Err(Error::Consistency(format!(
            "orbifold Riemann-Hurwitz fails for {datum}: {lhs} != {rhs}"
        )));
    }
    Ok(cover)
}
