//! The Koch presentation of G_S(p) read off a linking diagram: one generator
//! x_i per prime q_i and one relation per generator,
//!
//! ```text
//! r_i = x_i^(q_i - 1) · ∏_{j≠i} [x_i, x_j]^(ℓ_ij)
//! ```
//!
//! modulo the third step of the lower p-central series. Commutators with
//! ℓ_ij = 0 are omitted. The class of x_i^(q_i-1) only depends on the
//! exponent mod p², so that reduction is carried alongside the literal one.

use serde::{Deserialize, Serialize};

use crate::canon::to_canonical_json;
use crate::diagram::LinkingDiagram;
use crate::error::Result;

/// One commutator factor [x_i, x_j]^exponent; `generator` is the 1-based j.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Commutator {
    pub generator: usize,
    pub exponent: u64,
}

/// The relation attached to generator i (1-based).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Relation {
    pub generator: usize,
    pub prime: u64,
    pub exponent: u64,
    pub exponent_mod_p2: u64,
    /// Nonzero ℓ_ij factors, ascending j.
    pub commutators: Vec<Commutator>,
}

/// Generators bound to primes in canonical order, one relation each, so the
/// generator and relation ranks both equal |S|.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KochPresentation {
    pub p: u64,
    pub n: usize,
    pub primes: Vec<u64>,
    pub relations: Vec<Relation>,
}

impl KochPresentation {
    pub fn to_json(&self) -> Result<String> {
        to_canonical_json(self)
    }
}

pub fn koch_presentation(d: &LinkingDiagram) -> KochPresentation {
    let p = d.p().get();
    let p_squared = (p as u128) * (p as u128);
    let n = d.len();
    let relations = (0..n)
        .map(|i| {
            let q = d.set().get(i).get();
            let commutators = (0..n)
                .filter(|&j| j != i)
                .filter_map(|j| {
                    let ell = d.ell(i, j).expect("distinct members");
                    (!ell.is_zero()).then_some(Commutator {
                        generator: j + 1,
                        exponent: ell.value(),
                    })
                })
                .collect();
            Relation {
                generator: i + 1,
                prime: q,
                exponent: q - 1,
                exponent_mod_p2: ((q - 1) as u128 % p_squared) as u64,
                commutators,
            }
        })
        .collect();
    KochPresentation {
        p,
        n,
        primes: d.set().values(),
        relations,
    }
}

/// Deterministic text form: generator bindings first, then one relation per
/// line with commutators in ascending generator order.
pub fn render_presentation(pres: &KochPresentation) -> String {
    let mut out = String::new();
    for (i, q) in pres.primes.iter().enumerate() {
        out.push_str(&format!("x_{} ~ {}\n", i + 1, q));
    }
    for rel in &pres.relations {
        out.push_str(&format!(
            "r_{} = x_{}^{}",
            rel.generator, rel.generator, rel.exponent
        ));
        for c in &rel.commutators {
            out.push_str(&format!(
                " [x_{}, x_{}]^{}",
                rel.generator, c.generator, c.exponent
            ));
        }
        out.push('\n');
    }
    out
}
