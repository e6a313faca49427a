//! Linking diagrams of tame prime sets.
//!
//! For an odd prime p and a finite set S of primes ≡ 1 mod p, this crate
//! computes the linking diagram Γ(S)(p), decides strict circularity, and
//! emits machine-checkable certificates that G_S(p) — the Galois group of
//! the maximal p-extension of Q unramified outside S — has cohomological
//! dimension 2. It also renders the Koch presentation read off the diagram
//! and searches for primes with prescribed linking edges.
//!
//! The certificate pipeline is split into a producer ([`cert::certify`]) and
//! an independent verifier ([`cert::verify_certificate`]) that recomputes
//! every claim from scratch.

pub mod arith;
pub mod canon;
pub mod cert;
pub mod circuit;
pub mod diagram;
pub mod error;
pub mod present;
pub mod search;

pub use arith::{FpElement, OddPrime, TamePrime};
pub use cert::{
    build_chain, certify, going_up_ok, reachable_to, verify_certificate, Certificate,
    CertifyOutcome, ChainStep, Conclusions, EdgeMode, VerificationReport,
};
pub use circuit::{
    check_ordering, find_nonsingular_circuit, is_strictly_circular, CircuitOrdering, CircuitVerdict,
};
pub use diagram::{LinkingDiagram, PrimeSet};
pub use error::{Error, Result};
pub use present::{koch_presentation, render_presentation, KochPresentation};
pub use search::{
    construct_circular_set, extend_set, find_prime, Direction, EdgeConstraint, SearchBudget,
};
