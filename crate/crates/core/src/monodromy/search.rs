//! Backtracking search for monodromy triples.
//!
//! `sigma1` is fixed to the least permutation of its cycle type (fixed points
//! first, then cycles by increasing length on consecutive points). `sigma2`
//! is grown while tracing the cycles of the product `pi = sigma1 sigma2`,
//! one at a time from the least untraced point; every step either closes
//! the current product cycle or sends `sigma1(x)` to a point without a
//! `sigma2`-preimage. Partial `sigma2` is kept as chains, and the orbits of
//! `<sigma1, partial sigma2>` in a union-find with rollback.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::perm::{verify_certificate, Certificate, Permutation};
use crate::datum::BranchDatum;
use crate::partition::Partition;

const NONE: u32 = u32::MAX;

/// Node allowance for one search; `None` means unbounded.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    pub nodes: Option<u64>,
    pub seed: u64,
}

impl Budget {
    pub fn unbounded() -> Self {
        Budget { nodes: None, seed: 0 }
    }

    pub fn nodes(n: u64) -> Self {
        Budget {
            nodes: Some(n),
            seed: 0,
        }
    }

    pub fn with_seed(self, seed: u64) -> Self {
        Budget { seed, ..self }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(Certificate),
    /// The whole space was explored: no transitive triple exists.
    Exhausted,
    BudgetExceeded,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Mode {
    Find,
    Count { transitive: bool },
}

enum Undo {
    Assign { y: u32, z: u32 },
    Chain { p: u32, other: u32, len: u32 },
    Rem2(usize),
    Rem3(usize),
    Source(u32),
    Touch(usize),
    Union { child: usize, parent: usize, open_child: u32 },
    Open(usize),
}

struct Searcher {
    d: usize,
    mode: Mode,
    s1: Vec<u32>,
    cyc: Vec<usize>,
    cyc_len: Vec<u32>,
    cyc_first: Vec<u32>,
    s2: Vec<u32>,
    pre2: Vec<u32>,
    other_end: Vec<u32>,
    chain_len: Vec<u32>,
    rem2: Vec<u32>,
    rem3: Vec<u32>,
    source: Vec<bool>,
    touched: Vec<bool>,
    // union-find over sigma1-cycles
    parent: Vec<usize>,
    size: Vec<u32>,
    open: Vec<u32>,
    log: Vec<Undo>,
    nodes: u64,
    limit: u64,
    aborted: bool,
    count: u128,
    found: Option<Vec<u32>>,
    rng: Option<ChaCha8Rng>,
}

/// The least permutation of cycle type `p`.
pub fn canonical_permutation(p: &Partition) -> Permutation {
    let mut lengths: Vec<u32> = p.parts().to_vec();
    lengths.sort_unstable();
    let mut cycles = Vec::new();
    let mut next = 0;
    for len in lengths {
        cycles.push((next..next + len).collect::<Vec<u32>>());
        next += len;
    }
    Permutation::from_cycles(p.degree(), &cycles).expect("valid cycles")
}

fn multiplicity_table(p: &Partition, d: usize) -> Vec<u32> {
    let mut t = vec![0; d + 1];
    for &x in p.parts() {
        t[x as usize] += 1;
    }
    t
}

fn max_remaining(rem: &[u32]) -> usize {
    rem.iter().rposition(|&m| m > 0).unwrap_or(0)
}

impl Searcher {
    fn new(a: &Partition, b: &Partition, c: &Partition, mode: Mode, budget: Budget) -> Self {
        let d = a.degree() as usize;
        let s1 = canonical_permutation(a);
        let cycles = s1.cycles();
        let mut cyc = vec![0; d];
        let mut cyc_len = Vec::new();
        let mut cyc_first = Vec::new();
        for (i, c) in cycles.iter().enumerate() {
            for &x in c {
                cyc[x as usize] = i;
            }
            cyc_len.push(c.len() as u32);
            cyc_first.push(c[0]);
        }
        let n = cycles.len();
        let rng = match mode {
            Mode::Find if budget.seed != 0 => Some(ChaCha8Rng::seed_from_u64(budget.seed)),
            _ => None,
        };
        Searcher {
            d,
            mode,
            s1: s1.images().to_vec(),
            cyc,
            cyc_len: cyc_len.clone(),
            cyc_first,
            s2: vec![NONE; d],
            pre2: vec![NONE; d],
            other_end: (0..d as u32).collect(),
            chain_len: vec![1; d],
            rem2: multiplicity_table(b, d),
            rem3: multiplicity_table(c, d),
            source: vec![false; d],
            touched: vec![false; n],
            parent: (0..n).collect(),
            size: cyc_len.clone(),
            open: cyc_len,
            log: Vec::new(),
            nodes: 0,
            limit: budget.nodes.unwrap_or(u64::MAX),
            aborted: false,
            count: 0,
            found: None,
            rng,
        }
    }

    fn find(&self, mut c: usize) -> usize {
        while self.parent[c] != c {
            c = self.parent[c];
        }
        c
    }

    fn undo_to(&mut self, mark: usize) {
        while self.log.len() > mark {
            match self.log.pop().expect("nonempty") {
                Undo::Assign { y, z } => {
                    self.s2[y as usize] = NONE;
                    self.pre2[z as usize] = NONE;
                }
                Undo::Chain { p, other, len } => {
                    self.other_end[p as usize] = other;
                    self.chain_len[p as usize] = len;
                }
                Undo::Rem2(l) => self.rem2[l] += 1,
                Undo::Rem3(l) => self.rem3[l] += 1,
                Undo::Source(x) => self.source[x as usize] = false,
                Undo::Touch(c) => self.touched[c] = false,
                Undo::Union {
                    child,
                    parent,
                    open_child,
                } => {
                    self.parent[child] = child;
                    self.size[parent] -= self.size[child];
                    self.open[parent] -= open_child;
                }
                Undo::Open(c) => self.open[c] += 1,
            }
        }
    }

    fn touch(&mut self, x: u32) {
        let c = self.cyc[x as usize];
        if !self.touched[c] {
            self.touched[c] = true;
            self.log.push(Undo::Touch(c));
        }
    }

    fn transitive(&self) -> bool {
        !matches!(self.mode, Mode::Count { transitive: false })
    }

    /// A component closed under both generators but smaller than everything.
    fn closed_early(&self, root: usize) -> bool {
        self.transitive() && self.open[root] == 0 && (self.size[root] as usize) < self.d
    }

    /// Sets `sigma2(y) = z`, then closes any chain that can no longer grow.
    /// Returns false (state partly updated) on contradiction.
    fn assign(&mut self, y: u32, z: u32) -> bool {
        let (yu, zu) = (y as usize, z as usize);
        debug_assert!(self.s2[yu] == NONE && self.pre2[zu] == NONE);
        self.touch(y);
        self.touch(z);
        let head = self.other_end[yu];
        let len;
        if head == z {
            // closes a sigma2 cycle
            len = self.chain_len[yu] as usize;
            if self.rem2[len] == 0 {
                return false;
            }
            self.rem2[len] -= 1;
            self.log.push(Undo::Rem2(len));
        } else {
            let tail = self.other_end[zu];
            len = (self.chain_len[yu] + self.chain_len[zu]) as usize;
            if len > max_remaining(&self.rem2) {
                return false;
            }
            for p in [head, tail] {
                self.log.push(Undo::Chain {
                    p,
                    other: self.other_end[p as usize],
                    len: self.chain_len[p as usize],
                });
            }
            self.other_end[head as usize] = tail;
            self.other_end[tail as usize] = head;
            self.chain_len[head as usize] = len as u32;
            self.chain_len[tail as usize] = len as u32;
        }
        self.s2[yu] = z;
        self.pre2[zu] = y;
        self.log.push(Undo::Assign { y, z });

        let (ry, rz) = (self.find(self.cyc[yu]), self.find(self.cyc[zu]));
        self.open[ry] -= 1;
        self.log.push(Undo::Open(ry));
        let root = if ry != rz {
            let (child, parent) = if self.size[ry] < self.size[rz] { (ry, rz) } else { (rz, ry) };
            self.parent[child] = parent;
            self.size[parent] += self.size[child];
            self.open[parent] += self.open[child];
            self.log.push(Undo::Union {
                child,
                parent,
                open_child: self.open[child],
            });
            parent
        } else {
            ry
        };
        if self.closed_early(root) {
            return false;
        }
        if head != z && len == max_remaining(&self.rem2) {
            // the chain cannot merge any further
            let tail = self.other_end[head as usize];
            return self.assign(tail, head);
        }
        true
    }

    fn tick(&mut self) -> bool {
        self.nodes += 1;
        if self.nodes > self.limit {
            self.aborted = true;
        }
        !self.aborted
    }

    fn done(&self) -> bool {
        self.aborted || self.found.is_some()
    }

    fn next_cycle(&mut self) {
        if self.done() {
            return;
        }
        let Some(x0) = (0..self.d).find(|&x| !self.source[x]) else {
            match self.mode {
                Mode::Find => self.found = Some(self.s2.clone()),
                Mode::Count { .. } => self.count += 1,
            }
            return;
        };
        let mark = self.log.len();
        self.touch(x0 as u32);
        self.extend(x0 as u32, x0 as u32, 1);
        self.undo_to(mark);
    }

    /// The current product cycle runs `x0 .. x` and has `k` points; decides
    /// `pi(x)`.
    fn extend(&mut self, x0: u32, x: u32, k: usize) {
        if self.done() || !self.tick() {
            return;
        }
        let mark = self.log.len();
        self.source[x as usize] = true;
        self.log.push(Undo::Source(x));
        let y = self.s1[x as usize];
        let max3 = max_remaining(&self.rem3);
        let forced = self.s2[y as usize];
        if forced != NONE {
            if forced == x0 {
                self.close(k);
            } else if k < max3 {
                self.extend(x0, forced, k + 1);
            }
            self.undo_to(mark);
            return;
        }
        // close here
        if self.rem3[k] > 0 && self.pre2[x0 as usize] == NONE {
            let m = self.log.len();
            if self.assign(y, x0) {
                self.close(k);
            }
            self.undo_to(m);
            if self.done() {
                self.undo_to(mark);
                return;
            }
        }
        if k < max3 {
            for z in self.candidates(x0) {
                let m = self.log.len();
                if self.assign(y, z) {
                    self.extend(x0, z, k + 1);
                }
                self.undo_to(m);
                if self.done() {
                    break;
                }
            }
        }
        self.undo_to(mark);
    }

    fn close(&mut self, k: usize) {
        if self.rem3[k] == 0 {
            return;
        }
        self.rem3[k] -= 1;
        self.log.push(Undo::Rem3(k));
        self.next_cycle();
    }

    /// Points without a `sigma2`-preimage other than `x0`. In find mode only
    /// one point is offered per length among untouched `sigma1`-cycles: any
    /// permutation of those cycles commutes with `sigma1` and fixes the
    /// partial assignment.
    fn candidates(&mut self, x0: u32) -> Vec<u32> {
        let reduce = self.mode == Mode::Find;
        let mut out = Vec::new();
        let mut seen_lengths: Vec<u32> = Vec::new();
        for z in 0..self.d as u32 {
            if z == x0 || self.pre2[z as usize] != NONE {
                continue;
            }
            let c = self.cyc[z as usize];
            if reduce && !self.touched[c] {
                if z != self.cyc_first[c] || seen_lengths.contains(&self.cyc_len[c]) {
                    continue;
                }
                seen_lengths.push(self.cyc_len[c]);
            }
            out.push(z);
        }
        if let Some(rng) = self.rng.as_mut() {
            out.shuffle(rng);
        }
        out
    }
}

/// The six triples with trivial product obtainable from `(a, b, c)` by
/// cyclic rotation and by reversing with inverses.
pub fn role_variants(a: &Permutation, b: &Permutation, c: &Permutation) -> [[Permutation; 3]; 6] {
    let (ai, bi, ci) = (a.inverse(), b.inverse(), c.inverse());
    [
        [a.clone(), b.clone(), c.clone()],
        [b.clone(), c.clone(), a.clone()],
        [c.clone(), a.clone(), b.clone()],
        [ci.clone(), bi.clone(), ai.clone()],
        [bi.clone(), ai.clone(), ci.clone()],
        [ai, ci, bi],
    ]
}

/// Rearranges a triple with trivial product so that its cycle types follow
/// the order of the datum.
pub fn align_to_datum(datum: &BranchDatum, a: &Permutation, b: &Permutation, c: &Permutation) -> Option<Certificate> {
    role_variants(a, b, c).into_iter().find_map(|[s1, s2, s3]| {
        let cert = Certificate {
            d: datum.degree(),
            sigma1: s1,
            sigma2: s2,
            sigma3: s3,
        };
        verify_certificate(datum, &cert).then_some(cert)
    })
}

/// Role orders `(fixed, built, product)` as indices into the datum.
pub const ROLE_ORDERS: [[usize; 3]; 6] = [[0, 1, 2], [1, 2, 0], [2, 0, 1], [0, 2, 1], [2, 1, 0], [1, 0, 2]];

/// Searches with `Pi_roles[0]` fixed, `Pi_roles[1]` built, and the product
/// constrained to `Pi_roles[2]`.
pub fn find_with_roles(datum: &BranchDatum, roles: [usize; 3], budget: Budget) -> (SearchOutcome, u64) {
    let parts = datum.partitions();
    let (a, b, c) = (&parts[roles[0]], &parts[roles[1]], &parts[roles[2]]);
    let mut s = Searcher::new(a, b, c, Mode::Find, budget);
    s.next_cycle();
    let outcome = match s.found.take() {
        Some(images) => {
            let s1 = Permutation::from_images(s.s1.clone()).expect("permutation");
            let s2 = Permutation::from_images(images).expect("permutation");
            let s3 = s1.then(&s2).inverse();
            let cert = align_to_datum(datum, &s1, &s2, &s3)
                .expect("search produced a triple with the wrong cycle types");
            SearchOutcome::Found(cert)
        }
        None if s.aborted => SearchOutcome::BudgetExceeded,
        None => SearchOutcome::Exhausted,
    };
    (outcome, s.nodes)
}

/// Default role order: the product is the partition with the fewest parts,
/// and the fixed permutation the one with the most.
pub fn default_roles(datum: &BranchDatum) -> [usize; 3] {
    let parts = datum.partitions();
    let mut idx = [0usize, 1, 2];
    idx.sort_by_key(|&i| (std::cmp::Reverse(parts[i].len()), i));
    [idx[0], idx[1], idx[2]]
}

/// Looks for a transitive triple realizing `datum`.
pub fn find_realization(datum: &BranchDatum, budget: Budget) -> SearchOutcome {
    find_with_roles(datum, default_roles(datum), budget).0
}

/// Counts every `sigma2` completing the fixed `sigma1` of type `Pi_1`
/// (transitive triples only, or all of them). Multiplying by the class size
/// of `Pi_1` gives the number of triples.
pub fn count_with_fixed_sigma1(classes: [&Partition; 3], transitive: bool) -> u128 {
    let mut s = Searcher::new(
        classes[0],
        classes[1],
        classes[2],
        Mode::Count { transitive },
        Budget::unbounded(),
    );
    s.next_cycle();
    s.count
}
