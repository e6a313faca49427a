//! Certificates that a tame prime set S supports cohomological dimension 2:
//! a strictly circular core T ⊆ S plus a going-up chain that adds the
//! remaining primes one at a time, each step witnessed by a previously
//! certified prime.
//!
//! A certificate is self-contained and independently re-checkable: the
//! verifier rebuilds the diagram from the recorded roots and re-runs every
//! test, trusting none of the stored values.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::arith::{self, OddPrime, TamePrime};
use crate::canon::to_canonical_json;
use crate::circuit::{check_ordering, find_nonsingular_circuit, CircuitOrdering};
use crate::diagram::{LinkingDiagram, PrimeSet};
use crate::error::{Error, Result};

/// Which predicate a going-up step must witness.
///
/// Strong requires the step prime q to be a non-p-th-power mod the witness
/// q', i.e. an edge of Γ. Weak only requires p to divide the order of q mod
/// q', which the strong condition implies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeMode {
    Strong,
    Weak,
}

impl std::fmt::Display for EdgeMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            EdgeMode::Strong => write!(f, "strong"),
            EdgeMode::Weak => write!(f, "weak"),
        }
    }
}

/// The per-step predicate: does `from` link to `to` strongly enough for the
/// chosen mode?
pub fn mode_edge(from: u64, to: TamePrime, mode: EdgeMode) -> Result<bool> {
    match mode {
        EdgeMode::Strong => Ok(!arith::is_pth_power(from, to)?),
        EdgeMode::Weak => {
            let order = arith::multiplicative_order(from, to.get())?;
            Ok(order % to.p().get() == 0)
        }
    }
}

/// One going-up step: `prime` joins the set, vouched for by `witness`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainStep {
    pub prime: u64,
    pub witness: u64,
    pub mode: EdgeMode,
}

/// The fixed consequences attached to every complete certificate: the group
/// G_S(p) has cohomological dimension 2 and strict cohomological dimension 3,
/// is a duality group of dimension 2, Spec(Z) − S is a K(π,1) for p, and
/// Q_S(p) realizes the maximal p-extension of Q_ℓ for every ℓ in S.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Conclusions {
    pub cd: u32,
    pub scd: u32,
    pub duality_dimension: u32,
    pub etale_k_pi_1: bool,
    pub realizes_local_extensions: bool,
}

impl Default for Conclusions {
    fn default() -> Self {
        Conclusions {
            cd: 2,
            scd: 3,
            duality_dimension: 2,
            etale_k_pi_1: true,
            realizes_local_extensions: true,
        }
    }
}

pub const CERTIFICATE_VERSION: u32 = 1;

/// A serialized, re-checkable witness that the certified conclusions hold
/// for (p, S).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub p: u64,
    #[serde(rename = "S")]
    pub s: Vec<u64>,
    #[serde(rename = "T")]
    pub t: Vec<u64>,
    /// The circuit ordering of T, as prime values.
    pub ordering: Vec<u64>,
    /// The primitive root used for every member of S.
    pub roots: BTreeMap<u64, u64>,
    pub chain: Vec<ChainStep>,
    pub conclusions: Conclusions,
    pub version: u32,
}

impl Certificate {
    pub fn to_json(&self) -> Result<String> {
        to_canonical_json(self)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// The certificate for S ∪ {prime}, extended by one going-up step. The
    /// step predicate is re-checked here; the caller supplies the witness.
    pub fn extended(&self, prime: u64, witness: u64, mode: EdgeMode) -> Result<Certificate> {
        let p = OddPrime::new(self.p)?;
        let added = TamePrime::new(prime, p)?;
        if self.s.contains(&prime) {
            return Err(Error::DuplicatePrime(prime));
        }
        if !self.s.contains(&witness) {
            return Err(Error::NotAMember(witness));
        }
        if !mode_edge(prime, TamePrime::new(witness, p)?, mode)? {
            return Err(Error::CertificateRejected(format!(
                "{prime} has no {mode} witness in {witness}"
            )));
        }
        let mut next = self.clone();
        next.s.push(added.get());
        next.s.sort_unstable();
        next.roots.insert(prime, arith::primitive_root(prime)?);
        next.chain.push(ChainStep {
            prime,
            witness,
            mode,
        });
        Ok(next)
    }
}

/// The members of `d` from which `targets` can be reached along directed
/// mode-edges, including the targets themselves. Computed by breadth-first
/// search along reversed edges.
pub fn reachable_to(d: &LinkingDiagram, targets: &[u64], mode: EdgeMode) -> Result<BTreeSet<u64>> {
    if targets.is_empty() {
        return Err(Error::EmptyTarget);
    }
    Ok(chain_distances(d, targets, mode)?
        .into_iter()
        .enumerate()
        .filter_map(|(i, dist)| dist.map(|_| d.set().get(i).get()))
        .collect())
}

/// BFS distance of every member to the target set along mode-edges (None =
/// unreachable), plus the chosen witness index one step closer. Ties among
/// witnesses break toward the smallest prime.
fn chain_distances(
    d: &LinkingDiagram,
    targets: &[u64],
    mode: EdgeMode,
) -> Result<Vec<Option<u64>>> {
    let n = d.len();
    let mut dist: Vec<Option<u64>> = vec![None; n];
    for &t in targets {
        let i = d.set().index_of(t).ok_or(Error::NotAMember(t))?;
        dist[i] = Some(0);
    }
    let mut level = 0;
    loop {
        let mut changed = false;
        for i in 0..n {
            if dist[i].is_some() {
                continue;
            }
            for j in 0..n {
                if i != j
                    && dist[j] == Some(level)
                    && mode_edge(d.set().get(i).get(), d.set().get(j), mode)?
                {
                    dist[i] = Some(level + 1);
                    changed = true;
                    break;
                }
            }
        }
        if !changed {
            return Ok(dist);
        }
        level += 1;
    }
}

/// Orders S ∖ targets into going-up steps, nearest first, each witnessed by
/// a neighbor strictly closer to the targets; None when some member cannot
/// reach them. Ties break by ascending prime value.
pub fn build_chain(
    d: &LinkingDiagram,
    targets: &[u64],
    mode: EdgeMode,
) -> Result<Option<Vec<ChainStep>>> {
    if targets.is_empty() {
        return Ok(None);
    }
    let dist = chain_distances(d, targets, mode)?;
    if dist.iter().any(Option::is_none) {
        return Ok(None);
    }
    let n = d.len();
    let mut order: Vec<usize> = (0..n).filter(|&i| dist[i] != Some(0)).collect();
    order.sort_by_key(|&i| (dist[i], d.set().get(i).get()));
    let mut chain = Vec::with_capacity(order.len());
    for i in order {
        let q = d.set().get(i).get();
        let k = dist[i].expect("reachable");
        let mut witness = None;
        for (j, dist_j) in dist.iter().enumerate() {
            if i != j && *dist_j == Some(k - 1) && mode_edge(q, d.set().get(j), mode)? {
                witness = Some(d.set().get(j).get());
                break; // members are in ascending order, so first hit is smallest
            }
        }
        chain.push(ChainStep {
            prime: q,
            witness: witness.expect("distance k has a neighbor at k-1"),
            mode,
        });
    }
    Ok(Some(chain))
}

/// Why certify declined to produce a certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CertifyOutcome {
    Certified(Certificate),
    /// No subset of even size ≥ 4 is strictly circular.
    NoCircularCore,
    /// A circular core exists but some primes cannot reach it; the first
    /// such core with the primes left stranded.
    Unreachable {
        core: Vec<u64>,
        unreachable: Vec<u64>,
    },
}

impl CertifyOutcome {
    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            CertifyOutcome::Certified(c) => Some(c),
            _ => None,
        }
    }

    pub fn into_certificate(self) -> Option<Certificate> {
        match self {
            CertifyOutcome::Certified(c) => Some(c),
            _ => None,
        }
    }
}

/// Searches S for a certificate: subsets of even size 4, 6, ... are scanned
/// in lexicographic order over the canonical prime order, and the first
/// strictly circular subset whose complement chains onto it wins.
pub fn certify(set: &PrimeSet, mode: EdgeMode) -> Result<CertifyOutcome> {
    certify_diagram(&LinkingDiagram::build(set)?, mode)
}

/// `certify` on a prebuilt diagram (the circuit conditions and the chain are
/// root-independent, so any valid choice of roots gives the same outcome).
pub fn certify_diagram(d: &LinkingDiagram, mode: EdgeMode) -> Result<CertifyOutcome> {
    let n = d.len();
    let mut blocked: Option<(Vec<u64>, Vec<u64>)> = None;
    let mut size = 4;
    while size <= n {
        for subset in Combinations::new(n, size) {
            let sub = d.restrict(&subset)?;
            let Some(ordering) = find_nonsingular_circuit(&sub) else {
                continue;
            };
            let core = sub.set().values();
            match build_chain(d, &core, mode)? {
                Some(chain) => {
                    let roots = d
                        .set()
                        .primes()
                        .iter()
                        .zip(d.roots())
                        .map(|(q, &g)| (q.get(), g))
                        .collect();
                    return Ok(CertifyOutcome::Certified(Certificate {
                        p: d.p().get(),
                        s: d.set().values(),
                        t: core,
                        ordering: ordering.primes(&sub),
                        roots,
                        chain,
                        conclusions: Conclusions::default(),
                        version: CERTIFICATE_VERSION,
                    }));
                }
                None => {
                    if blocked.is_none() {
                        let reached = reachable_to(d, &core, mode)?;
                        let missing = d
                            .set()
                            .values()
                            .into_iter()
                            .filter(|q| !reached.contains(q))
                            .collect();
                        blocked = Some((core, missing));
                    }
                }
            }
        }
        size += 2;
    }
    Ok(match blocked {
        Some((core, unreachable)) => CertifyOutcome::Unreachable { core, unreachable },
        None => CertifyOutcome::NoCircularCore,
    })
}

/// The smallest member of S that witnesses `ell` under `mode`, if any.
/// `ell` must be a tame prime outside S.
pub fn going_up_ok(set: &PrimeSet, ell: u64, mode: EdgeMode) -> Result<Option<u64>> {
    TamePrime::new(ell, set.p())?;
    if set.contains(ell) {
        return Err(Error::DuplicatePrime(ell));
    }
    for q in set.primes() {
        if mode_edge(ell, *q, mode)? {
            return Ok(Some(q.get()));
        }
    }
    Ok(None)
}

/// The verifier's findings: `ok` iff every re-derived check passed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub ok: bool,
    pub failures: Vec<String>,
}

impl VerificationReport {
    pub fn to_json(&self) -> Result<String> {
        to_canonical_json(self)
    }
}

/// Re-derives everything a certificate claims: the prime set, the roots, the
/// circuit verdict on T, and every chain step's predicate. Stored ℓ values
/// are never trusted; the diagram is rebuilt from scratch.
pub fn verify_certificate(cert: &Certificate) -> VerificationReport {
    let mut failures = Vec::new();

    if cert.version != CERTIFICATE_VERSION {
        failures.push(format!("unsupported version {}", cert.version));
    }
    if cert.conclusions != Conclusions::default() {
        failures.push("conclusions differ from the certified consequences".into());
    }

    let p = match OddPrime::new(cert.p) {
        Ok(p) => p,
        Err(e) => {
            failures.push(format!("invalid p: {e}"));
            return VerificationReport {
                ok: false,
                failures,
            };
        }
    };
    let set = match PrimeSet::new(p, cert.s.iter().copied()) {
        Ok(set) => set,
        Err(e) => {
            failures.push(format!("invalid S: {e}"));
            return VerificationReport {
                ok: false,
                failures,
            };
        }
    };
    if set.values() != cert.s {
        failures.push("S is not sorted ascending".into());
    }

    // T must be a nonempty sorted subset of S of even size >= 4.
    let t_set: BTreeSet<u64> = cert.t.iter().copied().collect();
    if t_set.len() != cert.t.len() || cert.t.windows(2).any(|w| w[0] >= w[1]) {
        failures.push("T is not sorted and duplicate-free".into());
    }
    for &q in &cert.t {
        if !set.contains(q) {
            failures.push(format!("T member {q} is not in S"));
        }
    }
    if cert.t.len() < 4 || !cert.t.len().is_multiple_of(2) {
        failures.push(format!("T has size {}, need even >= 4", cert.t.len()));
    }

    // Roots: one per member of S, each a primitive root.
    for q in set.primes() {
        match cert.roots.get(&q.get()) {
            Some(&g) => match arith::is_primitive_root(g, q.get()) {
                Ok(true) => {}
                _ => failures.push(format!("{g} is not a primitive root mod {q}")),
            },
            None => failures.push(format!("no root recorded for {q}")),
        }
    }

    // Circuit verdict on T, rebuilt from the recorded roots.
    match rebuild_core_verdict(p, cert) {
        Ok(pass) => {
            if !pass {
                failures.push("ordering of T is not a non-singular circuit".into());
            }
        }
        Err(e) => failures.push(format!("cannot re-check the ordering: {e}")),
    }

    // Chain: adds exactly S \ T, witnesses known at each step, predicates hold.
    let mut known: BTreeSet<u64> = t_set;
    let mut expected: BTreeSet<u64> = set
        .values()
        .into_iter()
        .filter(|q| !known.contains(q))
        .collect();
    for step in &cert.chain {
        if !expected.remove(&step.prime) {
            failures.push(format!(
                "chain adds {} which is not a missing member of S",
                step.prime
            ));
            continue;
        }
        if !known.contains(&step.witness) {
            failures.push(format!(
                "witness {} for {} is neither in T nor previously added",
                step.witness, step.prime
            ));
        } else {
            match TamePrime::new(step.witness, p).and_then(|w| mode_edge(step.prime, w, step.mode))
            {
                Ok(true) => {}
                Ok(false) => failures.push(format!(
                    "{} fails the {} predicate against witness {}",
                    step.prime, step.mode, step.witness
                )),
                Err(e) => failures.push(format!(
                    "cannot test {} against {}: {e}",
                    step.prime, step.witness
                )),
            }
        }
        known.insert(step.prime);
    }
    if !expected.is_empty() {
        failures.push(format!(
            "chain never adds: {}",
            expected
                .iter()
                .map(|q| q.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        ));
    }

    VerificationReport {
        ok: failures.is_empty(),
        failures,
    }
}

fn rebuild_core_verdict(p: OddPrime, cert: &Certificate) -> Result<bool> {
    let t = PrimeSet::new(p, cert.t.iter().copied())?;
    let roots = t
        .primes()
        .iter()
        .map(|q| {
            cert.roots
                .get(&q.get())
                .copied()
                .ok_or_else(|| Error::MalformedCertificate(format!("no root for {q}")))
        })
        .collect::<Result<Vec<_>>>()?;
    let d = LinkingDiagram::build_with_roots(&t, &roots)?;
    let ordering = CircuitOrdering::from_primes(&d, &cert.ordering)?;
    Ok(check_ordering(&d, &ordering)?.pass)
}

/// Lexicographic k-subsets of 0..n.
pub(crate) struct Combinations {
    n: usize,
    current: Option<Vec<usize>>,
}

impl Combinations {
    pub(crate) fn new(n: usize, k: usize) -> Self {
        let current = if k <= n { Some((0..k).collect()) } else { None };
        Combinations { n, current }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let current = self.current.take()?;
        let k = current.len();
        let mut next = current.clone();
        let mut i = k;
        loop {
            if i == 0 {
                self.current = None;
                break;
            }
            i -= 1;
            if next[i] < self.n - (k - i) {
                next[i] += 1;
                for j in i + 1..k {
                    next[j] = next[j - 1] + 1;
                }
                self.current = Some(next);
                break;
            }
        }
        Some(current)
    }
}
