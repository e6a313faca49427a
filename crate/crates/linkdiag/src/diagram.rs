//! The linking diagram Γ(S)(p): a directed graph on a set of tame primes
//! with an F_p-valued linking number on every ordered pair of distinct
//! members. (r, s) is an edge exactly when ℓ(r, s) ≠ 0, equivalently when r
//! is not a p-th power mod s.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::arith::{self, FpElement, OddPrime, TamePrime};
use crate::canon::to_canonical_json;
use crate::error::{Error, Result};

/// A finite set of tame primes for a fixed p, kept sorted ascending; every
/// index used elsewhere (orderings, matrices, certificates) refers to this
/// canonical order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeSet {
    p: OddPrime,
    primes: Vec<TamePrime>,
}

impl PrimeSet {
    /// Validates every member, sorts ascending, rejects duplicates.
    pub fn new(p: OddPrime, values: impl IntoIterator<Item = u64>) -> Result<Self> {
        let mut primes = values
            .into_iter()
            .map(|q| TamePrime::new(q, p))
            .collect::<Result<Vec<_>>>()?;
        primes.sort();
        if primes.is_empty() {
            return Err(Error::EmptySet);
        }
        for pair in primes.windows(2) {
            if pair[0] == pair[1] {
                return Err(Error::DuplicatePrime(pair[0].get()));
            }
        }
        Ok(PrimeSet { p, primes })
    }

    pub fn p(&self) -> OddPrime {
        self.p
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    pub fn primes(&self) -> &[TamePrime] {
        &self.primes
    }

    pub fn values(&self) -> Vec<u64> {
        self.primes.iter().map(|q| q.get()).collect()
    }

    pub fn get(&self, index: usize) -> TamePrime {
        self.primes[index]
    }

    pub fn index_of(&self, value: u64) -> Option<usize> {
        self.primes.binary_search_by_key(&value, |q| q.get()).ok()
    }

    pub fn contains(&self, value: u64) -> bool {
        self.index_of(value).is_some()
    }
}

/// Γ(S)(p) together with the primitive roots that pin down the ℓ values.
///
/// Immutable once built. The zero pattern of the matrix (hence the edge set)
/// does not depend on the choice of roots; the individual entries do, so the
/// roots are recorded to make every serialization reproducible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkingDiagram {
    set: PrimeSet,
    roots: Vec<u64>,
    // ell[i][j] = ℓ(q_i, q_j); the diagonal is undefined, not zero.
    ell: Vec<Vec<Option<FpElement>>>,
}

impl LinkingDiagram {
    /// Builds the diagram with the smallest primitive root of every member.
    pub fn build(set: &PrimeSet) -> Result<Self> {
        let roots = set
            .primes()
            .iter()
            .map(|q| arith::primitive_root(q.get()))
            .collect::<Result<Vec<_>>>()?;
        Self::build_with_roots_unchecked(set, roots)
    }

    /// Builds the diagram with caller-chosen primitive roots, one per member
    /// in canonical order. Each root is validated.
    pub fn build_with_roots(set: &PrimeSet, roots: &[u64]) -> Result<Self> {
        if roots.len() != set.len() {
            return Err(Error::MalformedCertificate(format!(
                "expected {} roots, got {}",
                set.len(),
                roots.len()
            )));
        }
        for (q, &g) in set.primes().iter().zip(roots) {
            if !arith::is_primitive_root(g, q.get())? {
                return Err(Error::NotPrimitiveRoot {
                    root: g,
                    prime: q.get(),
                });
            }
        }
        Self::build_with_roots_unchecked(set, roots.to_vec())
    }

    fn build_with_roots_unchecked(set: &PrimeSet, roots: Vec<u64>) -> Result<Self> {
        let n = set.len();
        let mut ell = vec![vec![None; n]; n];
        for (i, row) in ell.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                if i != j {
                    *entry = Some(arith::linking_number(
                        set.get(i).get(),
                        set.get(j),
                        roots[j],
                    )?);
                }
            }
        }
        Ok(LinkingDiagram {
            set: set.clone(),
            roots,
            ell,
        })
    }

    pub fn p(&self) -> OddPrime {
        self.set.p()
    }

    pub fn set(&self) -> &PrimeSet {
        &self.set
    }

    pub fn len(&self) -> usize {
        self.set.len()
    }

    pub fn is_empty(&self) -> bool {
        self.set.is_empty()
    }

    /// The primitive root recorded for the member at `index`.
    pub fn root(&self, index: usize) -> u64 {
        self.roots[index]
    }

    pub fn roots(&self) -> &[u64] {
        &self.roots
    }

    /// ℓ between members by index; `None` on the diagonal.
    pub fn ell(&self, from: usize, to: usize) -> Option<FpElement> {
        self.ell[from][to]
    }

    /// ℓ between members by value.
    pub fn ell_of(&self, r: u64, s: u64) -> Result<FpElement> {
        let (i, j) = self.pair_indices(r, s)?;
        Ok(self.ell[i][j].expect("distinct members"))
    }

    /// True iff (r, s) is an edge, i.e. ℓ(r, s) ≠ 0. Consults the stored
    /// matrix, not the residue test.
    pub fn has_edge(&self, r: u64, s: u64) -> Result<bool> {
        let (i, j) = self.pair_indices(r, s)?;
        Ok(self.has_edge_at(i, j))
    }

    pub fn has_edge_at(&self, from: usize, to: usize) -> bool {
        matches!(self.ell[from][to], Some(v) if !v.is_zero())
    }

    fn pair_indices(&self, r: u64, s: u64) -> Result<(usize, usize)> {
        let i = self.set.index_of(r).ok_or(Error::NotAMember(r))?;
        let j = self.set.index_of(s).ok_or(Error::NotAMember(s))?;
        if i == j {
            return Err(Error::SelfPair(r));
        }
        Ok((i, j))
    }

    /// All edges as (r, s) value pairs, ascending lexicographic.
    pub fn edges(&self) -> Vec<(u64, u64)> {
        let n = self.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i != j && self.has_edge_at(i, j) {
                    out.push((self.set.get(i).get(), self.set.get(j).get()));
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// The sub-diagram on a subset of member indices. Linking numbers only
    /// depend on the pair and the target's root, so the entries are inherited
    /// rather than recomputed.
    pub fn restrict(&self, indices: &[usize]) -> Result<Self> {
        let mut idx = indices.to_vec();
        idx.sort_unstable();
        idx.dedup();
        if idx.is_empty() {
            return Err(Error::EmptySet);
        }
        let primes = idx.iter().map(|&i| self.set.get(i)).collect::<Vec<_>>();
        let set = PrimeSet {
            p: self.set.p(),
            primes,
        };
        let roots = idx.iter().map(|&i| self.roots[i]).collect::<Vec<_>>();
        let k = idx.len();
        let mut ell = vec![vec![None; k]; k];
        for a in 0..k {
            for b in 0..k {
                if a != b {
                    ell[a][b] = self.ell[idx[a]][idx[b]];
                }
            }
        }
        Ok(LinkingDiagram { set, roots, ell })
    }

    /// DOT rendering: nodes ascending, edges lexicographic, ℓ values as edge
    /// labels. Byte-stable across runs.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph linking_diagram {\n");
        for q in self.set.primes() {
            out.push_str(&format!("    \"{}\";\n", q.get()));
        }
        for (r, s) in self.edges() {
            let ell = self.ell_of(r, s).expect("edge endpoints are members");
            out.push_str(&format!("    \"{r}\" -> \"{s}\" [label=\"{ell}\"];\n"));
        }
        out.push_str("}\n");
        out
    }

    /// Canonical JSON with fields p, primes, roots, matrix, edges. The
    /// diagonal serializes as null.
    pub fn to_json(&self) -> Result<String> {
        to_canonical_json(&DiagramRecord::from(self))
    }

    /// Parses `to_json` output. The matrix is revalidated entry by entry
    /// against the recorded roots, so a tampered record is rejected.
    pub fn from_json(text: &str) -> Result<Self> {
        let record: DiagramRecord = serde_json::from_str(text)?;
        record.try_into()
    }
}

/// Serialization schema for a diagram.
#[derive(Debug, Serialize, Deserialize)]
struct DiagramRecord {
    p: u64,
    primes: Vec<u64>,
    roots: BTreeMap<u64, u64>,
    matrix: Vec<Vec<Option<u64>>>,
    edges: Vec<(u64, u64)>,
}

impl From<&LinkingDiagram> for DiagramRecord {
    fn from(d: &LinkingDiagram) -> Self {
        DiagramRecord {
            p: d.p().get(),
            primes: d.set.values(),
            roots: d
                .set
                .primes()
                .iter()
                .zip(&d.roots)
                .map(|(q, &g)| (q.get(), g))
                .collect(),
            matrix: d
                .ell
                .iter()
                .map(|row| row.iter().map(|v| v.map(FpElement::value)).collect())
                .collect(),
            edges: d.edges(),
        }
    }
}

impl TryFrom<DiagramRecord> for LinkingDiagram {
    type Error = Error;

    fn try_from(record: DiagramRecord) -> Result<Self> {
        let p = OddPrime::new(record.p)?;
        let set = PrimeSet::new(p, record.primes.iter().copied())?;
        if set.values() != record.primes {
            return Err(Error::MalformedCertificate(
                "primes are not sorted ascending".into(),
            ));
        }
        let roots = set
            .primes()
            .iter()
            .map(|q| {
                record
                    .roots
                    .get(&q.get())
                    .copied()
                    .ok_or_else(|| Error::MalformedCertificate(format!("no root for {q}")))
            })
            .collect::<Result<Vec<_>>>()?;
        let rebuilt = LinkingDiagram::build_with_roots(&set, &roots)?;
        let stored: Vec<Vec<Option<u64>>> = rebuilt
            .ell
            .iter()
            .map(|row| row.iter().map(|v| v.map(FpElement::value)).collect())
            .collect();
        if stored != record.matrix {
            return Err(Error::MalformedCertificate(
                "matrix does not match the recorded roots".into(),
            ));
        }
        if rebuilt.edges() != record.edges {
            return Err(Error::MalformedCertificate(
                "edge list does not match the matrix".into(),
            ));
        }
        Ok(rebuilt)
    }
}
