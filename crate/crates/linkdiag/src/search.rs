//! Prime search: find tame primes with prescribed linking edges to an
//! existing set, extend certified sets one going-up step at a time, and
//! construct strictly circular sets from nothing.
//!
//! Candidates are scanned directly along the progression 1 mod p with every
//! constraint tested per candidate; a residue-class pre-sieve does not apply
//! because "p-th power mod s" is a subgroup condition, not a residue class.

use serde::{Deserialize, Serialize};

use crate::arith::{self, OddPrime, TamePrime};
use crate::cert::{
    certify_diagram, going_up_ok, verify_certificate, Certificate, Combinations, EdgeMode,
};
use crate::circuit::is_strictly_circular;
use crate::diagram::{LinkingDiagram, PrimeSet};
use crate::error::{Error, Result};

/// Which way the prescribed edge points, with `q` standing for the prime
/// being sought.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    NewToOther,
    OtherToNew,
}

/// A required or forbidden edge between the sought prime and a member of the
/// base set. The text form is `q->7`, `7->q`, `!q->7`, `!7->q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeConstraint {
    pub other: u64,
    pub direction: Direction,
    pub required: bool,
}

impl std::str::FromStr for EdgeConstraint {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let (required, body) = match text.strip_prefix('!') {
            Some(rest) => (false, rest),
            None => (true, text),
        };
        let Some((left, right)) = body.split_once("->") else {
            return Err(Error::ConstraintSyntax(text.to_string()));
        };
        let parse_prime = |s: &str| {
            s.trim()
                .parse::<u64>()
                .map_err(|_| Error::ConstraintSyntax(text.to_string()))
        };
        match (left.trim(), right.trim()) {
            ("q", "q") => Err(Error::ConstraintSyntax(text.to_string())),
            ("q", other) => Ok(EdgeConstraint {
                other: parse_prime(other)?,
                direction: Direction::NewToOther,
                required,
            }),
            (other, "q") => Ok(EdgeConstraint {
                other: parse_prime(other)?,
                direction: Direction::OtherToNew,
                required,
            }),
            _ => Err(Error::ConstraintSyntax(text.to_string())),
        }
    }
}

impl std::fmt::Display for EdgeConstraint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let bang = if self.required { "" } else { "!" };
        match self.direction {
            Direction::NewToOther => write!(f, "{bang}q->{}", self.other),
            Direction::OtherToNew => write!(f, "{bang}{}->q", self.other),
        }
    }
}

/// Caps on a scan: how many candidates may be examined and how large they
/// may grow.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBudget {
    pub max_candidates: u64,
    pub upper_bound: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_candidates: 100_000,
            upper_bound: 1 << 32,
        }
    }
}

/// Primes ≡ 1 mod p in ascending order.
pub fn tame_candidates(p: OddPrime) -> impl Iterator<Item = u64> {
    let step = p.get();
    (1u64..)
        .map(move |k| k * step + 1)
        .filter(|&q| arith::is_prime(q))
}

fn validated_constraints(
    set: &PrimeSet,
    constraints: &[EdgeConstraint],
) -> Result<Vec<EdgeConstraint>> {
    let mut seen: Vec<EdgeConstraint> = Vec::new();
    for &c in constraints {
        if !set.contains(c.other) {
            return Err(Error::NotAMember(c.other));
        }
        match seen
            .iter()
            .find(|s| s.other == c.other && s.direction == c.direction)
        {
            Some(prev) if prev.required != c.required => {
                return Err(Error::ConflictingConstraints {
                    other: c.other,
                    direction: match c.direction {
                        Direction::NewToOther => "q->other".into(),
                        Direction::OtherToNew => "other->q".into(),
                    },
                })
            }
            Some(_) => {}
            None => seen.push(c),
        }
    }
    Ok(seen)
}

fn satisfies(q: TamePrime, set: &PrimeSet, constraints: &[EdgeConstraint]) -> Result<bool> {
    for c in constraints {
        let other = set.get(set.index_of(c.other).expect("validated member"));
        let edge = match c.direction {
            Direction::NewToOther => !arith::is_pth_power(q.get(), other)?,
            Direction::OtherToNew => !arith::is_pth_power(c.other, q)?,
        };
        if edge != c.required {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Scans the progression 1 mod p for up to `count` primes outside S that
/// satisfy every constraint. The scan examines at most
/// `budget.max_candidates` primes and never goes above `budget.upper_bound`;
/// whatever was found by then is returned, possibly nothing.
pub fn find_prime(
    set: &PrimeSet,
    constraints: &[EdgeConstraint],
    count: usize,
    budget: &SearchBudget,
) -> Result<Vec<u64>> {
    let constraints = validated_constraints(set, constraints)?;
    let p = set.p();
    let mut found = Vec::new();
    let mut examined = 0u64;
    for q in tame_candidates(p) {
        if q > budget.upper_bound || found.len() >= count || examined >= budget.max_candidates {
            break;
        }
        if set.contains(q) {
            continue;
        }
        examined += 1;
        let q_tame = TamePrime::new(q, p)?;
        if satisfies(q_tame, set, &constraints)? {
            found.push(q);
        }
    }
    Ok(found)
}

/// Adds `count` primes to a certified set, each the smallest candidate with
/// a going-up witness against the current set, and returns the re-verified
/// enlarged certificate. Budget exhaustion reports how far it got.
pub fn extend_set(
    cert: &Certificate,
    count: usize,
    mode: EdgeMode,
    budget: &SearchBudget,
) -> Result<Certificate> {
    let report = verify_certificate(cert);
    if !report.ok {
        return Err(Error::CertificateRejected(report.failures.join("; ")));
    }
    let p = OddPrime::new(cert.p)?;
    let mut current = cert.clone();
    for round in 0..count {
        let set = PrimeSet::new(p, current.s.iter().copied())?;
        let mut examined = 0u64;
        let mut added = false;
        for q in tame_candidates(p) {
            if q > budget.upper_bound || examined >= budget.max_candidates {
                break;
            }
            if set.contains(q) {
                continue;
            }
            examined += 1;
            if let Some(witness) = going_up_ok(&set, q, mode)? {
                current = current.extended(q, witness, mode)?;
                added = true;
                break;
            }
        }
        if !added {
            return Err(Error::BudgetExhausted(format!(
                "extended by {round} of {count} primes; set so far: {}",
                current
                    .s
                    .iter()
                    .map(|q| q.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            )));
        }
    }
    let report = verify_certificate(&current);
    if !report.ok {
        return Err(Error::CertificateRejected(report.failures.join("; ")));
    }
    Ok(current)
}

/// Builds a certified strictly circular set of the requested even size n ≥ 4
/// from scratch: 4-subsets of the tame candidates are scanned in ascending
/// order of their largest element (lexicographically within), and the first
/// strictly circular one is extended to size n by weak going-up steps.
pub fn construct_circular_set(p: OddPrime, n: usize, budget: &SearchBudget) -> Result<Certificate> {
    if n < 4 || !n.is_multiple_of(2) {
        return Err(Error::InvalidCircuitSize(n));
    }
    let mut pool: Vec<u64> = Vec::new();
    let mut examined = 0u64;
    for q in tame_candidates(p) {
        if q > budget.upper_bound {
            break;
        }
        pool.push(q);
        let top = pool.len() - 1;
        if top < 3 {
            continue;
        }
        for triple in Combinations::new(top, 3) {
            if examined >= budget.max_candidates {
                return Err(Error::BudgetExhausted(format!(
                    "no strictly circular 4-set within {} candidate subsets",
                    budget.max_candidates
                )));
            }
            examined += 1;
            let members = [pool[triple[0]], pool[triple[1]], pool[triple[2]], pool[top]];
            let set = PrimeSet::new(p, members)?;
            let d = LinkingDiagram::build(&set)?;
            if is_strictly_circular(&d) {
                let cert = certify_diagram(&d, EdgeMode::Weak)?
                    .into_certificate()
                    .expect("a circular whole set certifies itself");
                return extend_set(&cert, n - 4, EdgeMode::Weak, budget);
            }
        }
    }
    Err(Error::BudgetExhausted(format!(
        "no strictly circular 4-set among primes up to {}",
        budget.upper_bound
    )))
}
