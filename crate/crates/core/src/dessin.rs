//! Dessins d'enfants: bipartite maps stored as rotation systems.
//!
//! Edges are the points `0..d`. The rotation at a white vertex is a cycle of
//! the white permutation, at a black vertex a cycle of the black one; faces
//! are the cycles of `(white * black)^-1`, and a face meeting `k` edges of
//! that cycle has a boundary walk of length `2k`.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::datum::BranchDatum;
use crate::error::{Error, Result};
use crate::monodromy::perm::{verify_certificate, Certificate, Permutation};
use crate::monodromy::search::role_variants;
use crate::partition::Partition;

/// Which partition of the datum is read off white valences, black valences
/// and half face lengths.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RoleMap {
    pub white: usize,
    pub black: usize,
    pub faces: usize,
}

impl RoleMap {
    pub const NATURAL: RoleMap = RoleMap {
        white: 0,
        black: 1,
        faces: 2,
    };

    pub fn new(white: usize, black: usize, faces: usize) -> Result<Self> {
        let mut seen = [white, black, faces];
        seen.sort_unstable();
        if seen != [0, 1, 2] {
            return Err(Error::Argument(format!(
                "role map ({white},{black},{faces}) is not a permutation of (0,1,2)"
            )));
        }
        Ok(RoleMap { white, black, faces })
    }

    /// The six role maps.
    pub fn all() -> [RoleMap; 6] {
        [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]].map(|[white, black, faces]| RoleMap {
            white,
            black,
            faces,
        })
    }

    /// The role map sending the given partitions of `datum` to white
    /// valences, black valences and half face lengths.
    pub fn matching(datum: &BranchDatum, white: &Partition, black: &Partition, faces: &Partition) -> Option<RoleMap> {
        let parts = datum.partitions();
        RoleMap::all()
            .into_iter()
            .find(|r| &parts[r.white] == white && &parts[r.black] == black && &parts[r.faces] == faces)
    }

    fn as_array(self) -> [usize; 3] {
        [self.white, self.black, self.faces]
    }
}

impl Default for RoleMap {
    fn default() -> Self {
        RoleMap::NATURAL
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dessin {
    pub edges: u32,
    /// Cyclic order of edges around each white vertex.
    pub white: Vec<Vec<u32>>,
    pub black: Vec<Vec<u32>>,
    /// Edges met along each face, one per white corner.
    pub faces: Vec<Vec<u32>>,
    edge_white: Vec<u32>,
    edge_black: Vec<u32>,
}

fn vertex_of(d: u32, rotations: &[Vec<u32>], side: &str) -> Result<Vec<u32>> {
    let mut owner = vec![u32::MAX; d as usize];
    for (v, rot) in rotations.iter().enumerate() {
        if rot.is_empty() {
            return Err(Error::Domain(format!("{side} vertex {v} has no edges")));
        }
        for &e in rot {
            if e >= d || owner[e as usize] != u32::MAX {
                return Err(Error::Domain(format!("edge {e} misplaced at {side} vertex {v}")));
            }
            owner[e as usize] = v as u32;
        }
    }
    if let Some(e) = owner.iter().position(|&v| v == u32::MAX) {
        return Err(Error::Domain(format!("edge {e} has no {side} end")));
    }
    Ok(owner)
}

fn valences(rotations: &[Vec<u32>]) -> Partition {
    Partition::new(rotations.iter().map(|r| r.len() as u32).collect()).expect("nonempty rotations")
}

impl Dessin {
    /// Builds the map from rotations at white and black vertices; the faces
    /// are derived.
    pub fn from_rotations(edges: u32, white: Vec<Vec<u32>>, black: Vec<Vec<u32>>) -> Result<Self> {
        if edges == 0 {
            return Err(Error::Domain("a dessin needs at least one edge".into()));
        }
        let edge_white = vertex_of(edges, &white, "white")?;
        let edge_black = vertex_of(edges, &black, "black")?;
        let w = Permutation::from_cycles(edges, &white)?;
        let b = Permutation::from_cycles(edges, &black)?;
        let faces = w.then(&b).inverse().cycles();
        Ok(Dessin {
            edges,
            white,
            black,
            faces,
            edge_white,
            edge_black,
        })
    }

    /// White vertices from `sigma1`, black from `sigma2`, faces from `sigma3`.
    pub fn from_certificate(datum: &BranchDatum, cert: &Certificate) -> Result<Self> {
        Self::with_roles(datum, cert, RoleMap::NATURAL)
    }

    /// Like [`Dessin::from_certificate`], with the roles of the three
    /// partitions chosen by `roles`.
    pub fn with_roles(datum: &BranchDatum, cert: &Certificate, roles: RoleMap) -> Result<Self> {
        if !verify_certificate(datum, cert) {
            return Err(Error::Domain(format!("certificate does not realize {datum}")));
        }
        let parts = datum.partitions();
        let want = roles.as_array().map(|i| &parts[i]);
        let [s1, s2, s3] = cert.sigmas();
        let [w, b, _] = role_variants(s1, s2, s3)
            .into_iter()
            .find(|v| v.iter().zip(want).all(|(s, p)| &s.cycle_type() == p))
            .ok_or_else(|| Error::Domain("no rearrangement matches the role map".into()))?;
        Self::from_rotations(cert.d, w.cycles(), b.cycles())
    }

    pub fn white_valences(&self) -> Partition {
        valences(&self.white)
    }

    pub fn black_valences(&self) -> Partition {
        valences(&self.black)
    }

    /// Boundary lengths of the faces, largest first.
    pub fn face_lengths(&self) -> Vec<u32> {
        let mut out: Vec<u32> = self.faces.iter().map(|f| 2 * f.len() as u32).collect();
        out.sort_unstable_by(|a, b| b.cmp(a));
        out
    }

    pub fn vertex_count(&self) -> usize {
        self.white.len() + self.black.len()
    }

    /// `V - E + F`.
    pub fn euler_characteristic(&self) -> i64 {
        self.vertex_count() as i64 - i64::from(self.edges) + self.faces.len() as i64
    }

    pub fn component_count(&self) -> usize {
        let nw = self.white.len();
        let mut parent: Vec<usize> = (0..self.vertex_count()).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let mut components = parent.len();
        for e in 0..self.edges as usize {
            let a = find(&mut parent, self.edge_white[e] as usize);
            let b = find(&mut parent, nw + self.edge_black[e] as usize);
            if a != b {
                parent[a] = b;
                components -= 1;
            }
        }
        components
    }

    /// Genus of the surface carrying a connected dessin.
    pub fn genus(&self) -> Option<u32> {
        let twice = 2 - self.euler_characteristic();
        (self.component_count() == 1 && twice >= 0 && twice % 2 == 0).then_some((twice / 2) as u32)
    }

    /// Graphviz text: white vertices as circles, black ones as filled boxes,
    /// each edge labelled with its position in the rotation at either end.
    pub fn export_dot(&self) -> String {
        let mut out = String::from("graph dessin {\n");
        for (i, rot) in self.white.iter().enumerate() {
            writeln!(out, "  w{i} [shape=circle, label=\"{}\"];", rot.len()).unwrap();
        }
        for (i, rot) in self.black.iter().enumerate() {
            writeln!(out, "  b{i} [shape=box, style=filled, fillcolor=black, fontcolor=white, label=\"{}\"];", rot.len())
                .unwrap();
        }
        for e in 0..self.edges {
            let (w, b) = (self.edge_white[e as usize], self.edge_black[e as usize]);
            let tail = self.white[w as usize].iter().position(|&x| x == e).unwrap();
            let head = self.black[b as usize].iter().position(|&x| x == e).unwrap();
            writeln!(
                out,
                "  w{w} -- b{b} [label=\"{}\", taillabel=\"{tail}\", headlabel=\"{head}\"];",
                e + 1
            )
            .unwrap();
        }
        out.push_str("}\n");
        out
    }

    /// Rotation system as JSON, edges numbered from 1.
    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct View {
            edges: u32,
            white: Vec<Vec<u32>>,
            black: Vec<Vec<u32>>,
            faces: Vec<Vec<u32>>,
            face_lengths: Vec<u32>,
            genus: Option<u32>,
        }
        let shift = |v: &[Vec<u32>]| -> Vec<Vec<u32>> {
            v.iter().map(|c| c.iter().map(|x| x + 1).collect()).collect()
        };
        serde_json::to_string(&View {
            edges: self.edges,
            white: shift(&self.white),
            black: shift(&self.black),
            faces: shift(&self.faces),
            face_lengths: self.face_lengths(),
            genus: self.genus(),
        })
        .expect("plain data")
    }
}

/// Checks valences and face lengths against the datum under `roles`, along
/// with connectivity and the genus.
pub fn verify_dessin(datum: &BranchDatum, dessin: &Dessin, roles: RoleMap) -> bool {
    if dessin.edges != datum.degree() {
        return false;
    }
    let parts = datum.partitions();
    let faces: Vec<u32> = parts[roles.faces].parts().iter().map(|x| 2 * x).collect();
    dessin.white_valences() == parts[roles.white]
        && dessin.black_valences() == parts[roles.black]
        && dessin.face_lengths() == faces
        && dessin.genus() == Some(datum.cover_genus())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monodromy::search::{find_realization, Budget, SearchOutcome};

    fn realize(s: &str) -> (BranchDatum, Certificate) {
        let datum: BranchDatum = s.parse().unwrap();
        match find_realization(&datum, Budget::unbounded()) {
            SearchOutcome::Found(c) => (datum, c),
            other => panic!("{s}: {other:?}"),
        }
    }

    #[test]
    fn torus_of_degree_four() {
        let (datum, cert) = realize("4:(3,1)(4)(4)");
        let dessin = Dessin::from_certificate(&datum, &cert).unwrap();
        assert_eq!(dessin.white.len(), 2);
        assert_eq!(dessin.white_valences(), "(3,1)".parse().unwrap());
        assert_eq!(dessin.black.len(), 1);
        assert_eq!(dessin.face_lengths(), vec![8]);
        assert_eq!(dessin.genus(), Some(1));
        assert!(verify_dessin(&datum, &dessin, RoleMap::NATURAL));

        let dot = dessin.export_dot();
        assert_eq!(dot.lines().filter(|l| l.contains(" [shape=")).count(), 3);
        assert_eq!(dot.lines().filter(|l| l.contains(" -- ")).count(), 4);
        assert_eq!(dot, dessin.export_dot());
    }

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn faces_from_the_middle_partition() {
        let (datum, cert) = realize("5:(2,1,1,1)(4,1)(5)");
        let roles = RoleMap::matching(&datum, &p("(2,1,1,1)"), &p("(5)"), &p("(4,1)")).unwrap();
        let dessin = Dessin::with_roles(&datum, &cert, roles).unwrap();
        assert_eq!(dessin.face_lengths(), vec![8, 2]);
        assert_eq!(dessin.genus(), Some(0));
        assert!(verify_dessin(&datum, &dessin, roles));
        let natural = Dessin::from_certificate(&datum, &cert).unwrap();
        assert_eq!(natural.face_lengths(), vec![10]);
        assert!(!verify_dessin(&datum, &dessin, RoleMap::NATURAL));
    }

    #[test]
    fn theta_map() {
        let dessin = Dessin::from_rotations(2, vec![vec![0, 1]], vec![vec![0, 1]]).unwrap();
        assert_eq!(dessin.white_valences(), p("(2)"));
        assert_eq!(dessin.face_lengths(), vec![2, 2]);
        assert_eq!(dessin.genus(), Some(0));
        let datum: BranchDatum = "2:(2)(2)(1,1)".parse().unwrap();
        let roles = RoleMap::matching(&datum, &p("(2)"), &p("(2)"), &p("(1,1)")).unwrap();
        assert!(verify_dessin(&datum, &dessin, roles));
    }

    #[test]
    fn perturbed_faces_fail() {
        let (datum, cert) = realize("5:(2,1,1,1)(4,1)(5)");
        let roles = RoleMap::matching(&datum, &p("(2,1,1,1)"), &p("(5)"), &p("(4,1)")).unwrap();
        let dessin = Dessin::with_roles(&datum, &cert, roles).unwrap();
        let moved: BranchDatum = "5:(2,1,1,1)(3,2)(5)".parse().unwrap();
        let roles = RoleMap::matching(&moved, &p("(2,1,1,1)"), &p("(5)"), &p("(3,2)")).unwrap();
        assert!(!verify_dessin(&moved, &dessin, roles));
    }

    #[test]
    fn disconnected_union_fails() {
        // a theta map beside the degree-four torus: the local data and the
        // Euler count fit a genus-zero datum, but the map is disconnected
        let (datum, cert) = realize("4:(3,1)(4)(4)");
        let torus = Dessin::from_certificate(&datum, &cert).unwrap();
        let shift = |v: &[Vec<u32>]| -> Vec<Vec<u32>> { v.iter().map(|c| c.iter().map(|x| x + 2).collect()).collect() };
        let mut white = vec![vec![0, 1]];
        white.extend(shift(&torus.white));
        let mut black = vec![vec![0, 1]];
        black.extend(shift(&torus.black));
        let union = Dessin::from_rotations(6, white, black).unwrap();
        assert_eq!(union.component_count(), 2);
        assert_eq!(union.euler_characteristic(), 2);
        assert_eq!(union.genus(), None);
        assert_eq!(union.face_lengths(), vec![8, 2, 2]);
        let datum: BranchDatum = "6:(3,2,1)(4,2)(4,1,1)".parse().unwrap();
        assert_eq!(datum.cover_genus(), 0);
        let roles = RoleMap::matching(&datum, &p("(3,2,1)"), &p("(4,2)"), &p("(4,1,1)")).unwrap();
        assert!(!verify_dessin(&datum, &union, roles));
    }

    #[test]
    fn bad_rotations_rejected() {
        assert!(Dessin::from_rotations(2, vec![vec![0, 0]], vec![vec![0, 1]]).is_err());
        assert!(Dessin::from_rotations(2, vec![vec![0]], vec![vec![0, 1]]).is_err());
        assert!(Dessin::from_rotations(0, vec![], vec![]).is_err());
        assert!(RoleMap::new(0, 0, 1).is_err());
    }
}
