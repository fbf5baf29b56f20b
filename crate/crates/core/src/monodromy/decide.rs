//! The decision pipeline: criteria, then search, then exact counting.

use std::fmt;

use num_bigint::BigUint;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::counting::{count_both, FactorizationCount};
use super::perm::{verify_certificate, Certificate};
use super::search::{find_with_roles, Budget, SearchOutcome, default_roles, ROLE_ORDERS};
use crate::cache::CharCache;
use crate::criteria::{all_criteria, Criterion, CriterionResult};
use crate::datum::BranchDatum;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Policy {
    /// Degrees up to this are searched exhaustively.
    pub exhaustive_max_degree: u32,
    /// Node budget for the first search at larger degrees.
    pub node_budget: u64,
    pub allow_counting: bool,
    pub seed: u64,
}

impl Default for Policy {
    fn default() -> Self {
        Policy {
            exhaustive_max_degree: 14,
            node_budget: 10_000_000,
            allow_counting: true,
            seed: 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Realizable,
    Exceptional,
    Undecided,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Realizable => "realizable",
            Verdict::Exceptional => "exceptional",
            Verdict::Undecided => "undecided",
        })
    }
}

/// Which layer of the pipeline settled the question.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Layer {
    VeryEvenData,
    Divisibility,
    Search,
    ExhaustiveSearch,
    ZeroCount,
    /// Positive count, certificate found by the follow-up search.
    CountThenSearch,
    None,
}

impl fmt::Display for Layer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decision {
    pub datum: BranchDatum,
    pub verdict: Verdict,
    pub layer: Layer,
    pub criteria: Vec<CriterionResult>,
    pub certificate: Option<Certificate>,
    pub counts: Option<FactorizationCount>,
    pub search_nodes: u64,
}

impl Decision {
    /// Re-checks the evidence: a valid certificate for a realizable datum,
    /// an excluding criterion or a zero transitive count for an exceptional
    /// one.
    pub fn evidence_holds(&self) -> bool {
        match self.verdict {
            Verdict::Realizable => self
                .certificate
                .as_ref()
                .is_some_and(|c| verify_certificate(&self.datum, c)),
            Verdict::Exceptional => {
                let by_criterion = self.criteria.iter().any(|c| c.excludes);
                let by_count = self
                    .counts
                    .as_ref()
                    .is_some_and(|c| c.connected_count.is_zero());
                by_criterion || by_count
            }
            Verdict::Undecided => false,
        }
    }

    /// One-line summary of the evidence.
    pub fn evidence_summary(&self) -> String {
        match (self.verdict, self.layer) {
            (Verdict::Exceptional, Layer::VeryEvenData | Layer::Divisibility) => {
                let c = self.criteria.iter().find(|c| c.excludes).expect("excluding criterion");
                format!("{}: {}", c.criterion, c.witness)
            }
            (Verdict::Exceptional, _) => {
                let all = self
                    .counts
                    .as_ref()
                    .map(|c| c.all_count.to_string())
                    .unwrap_or_else(|| "?".into());
                format!("connected count 0 (all {all})")
            }
            (Verdict::Realizable, _) => {
                let c = self.certificate.as_ref().expect("certificate");
                format!("certificate {} | {} | {}", c.sigma1, c.sigma2, c.sigma3)
            }
            (Verdict::Undecided, _) => "search budget exhausted".into(),
        }
    }
}

fn criterion_layer(c: Criterion) -> Layer {
    match c {
        Criterion::VeryEvenData => Layer::VeryEvenData,
        Criterion::Divisibility => Layer::Divisibility,
    }
}

/// Keeps trying role orders and seeds with growing budgets until a
/// certificate turns up. Only called once a positive count guarantees one
/// exists; the budget eventually exceeds the whole space, so it terminates.
fn search_until_found(datum: &BranchDatum, policy: &Policy, nodes: &mut u64) -> Certificate {
    let mut budget = policy.node_budget.max(1_000);
    let mut round = 0u64;
    loop {
        for roles in ROLE_ORDERS {
            let b = Budget::nodes(budget).with_seed(policy.seed.wrapping_add(round * 7919 + 1));
            let (outcome, used) = find_with_roles(datum, roles, b);
            *nodes += used;
            if let SearchOutcome::Found(cert) = outcome {
                return cert;
            }
        }
        round += 1;
        budget = budget.saturating_mul(2);
    }
}

/// Runs the full pipeline.
pub fn decide(datum: &BranchDatum, policy: &Policy, cache: Option<&CharCache>) -> Result<Decision> {
    let criteria: Vec<CriterionResult> = all_criteria(datum).into();
    let mut decision = Decision {
        datum: datum.clone(),
        verdict: Verdict::Undecided,
        layer: Layer::None,
        criteria,
        certificate: None,
        counts: None,
        search_nodes: 0,
    };
    if let Some(c) = decision.criteria.iter().find(|c| c.excludes) {
        decision.verdict = Verdict::Exceptional;
        decision.layer = criterion_layer(c.criterion);
        return Ok(decision);
    }

    let exhaustive = datum.degree() <= policy.exhaustive_max_degree;
    let budget = if exhaustive {
        Budget::unbounded()
    } else {
        Budget::nodes(policy.node_budget)
    };
    let (outcome, used) = find_with_roles(datum, default_roles(datum), budget.with_seed(policy.seed));
    decision.search_nodes = used;
    match outcome {
        SearchOutcome::Found(cert) => {
            decision.verdict = Verdict::Realizable;
            decision.layer = Layer::Search;
            decision.certificate = Some(cert);
            return Ok(decision);
        }
        SearchOutcome::Exhausted => {
            decision.verdict = Verdict::Exceptional;
            decision.layer = Layer::ExhaustiveSearch;
            if policy.allow_counting {
                let counts = count_both(datum, cache)?;
                if !counts.connected_count.is_zero() {
                    return Err(Error::Consistency(format!(
                        "exhaustive search found nothing for {datum} but the count is {}",
                        counts.connected_count
                    )));
                }
                decision.counts = Some(counts);
            }
            return Ok(decision);
        }
        SearchOutcome::BudgetExceeded => {}
    }

    if !policy.allow_counting {
        return Ok(decision);
    }
    let counts = count_both(datum, cache)?;
    if counts.connected_count == BigUint::zero() {
        decision.verdict = Verdict::Exceptional;
        decision.layer = Layer::ZeroCount;
        decision.counts = Some(counts);
        return Ok(decision);
    }
    decision.counts = Some(counts);
    let mut nodes = decision.search_nodes;
    let cert = search_until_found(datum, policy, &mut nodes);
    decision.search_nodes = nodes;
    decision.verdict = Verdict::Realizable;
    decision.layer = Layer::CountThenSearch;
    decision.certificate = Some(cert);
    Ok(decision)
}
