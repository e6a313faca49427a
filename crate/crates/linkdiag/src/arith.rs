//! Exact modular arithmetic over 64-bit integers: primality, multiplicative
//! orders, primitive roots, discrete logarithms, p-th power residue tests and
//! linking numbers.
//!
//! Everything here is a pure function; intermediates widen to `u128` so the
//! full `u64` range is overflow-safe.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Modular multiplication with a `u128` intermediate.
pub fn mod_mul(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// Modular exponentiation by binary method.
pub fn mod_pow(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    base %= m;
    let mut acc: u64 = 1;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mod_mul(acc, base, m);
        }
        base = mod_mul(base, base, m);
        exp >>= 1;
    }
    acc
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Deterministic Miller-Rabin for the full 64-bit range.
///
/// The witness set {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37} is known to
/// be exact for all n < 3.3·10^24, so there are no probabilistic failures.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n.is_multiple_of(q) {
            return false;
        }
    }
    let trailing = (n - 1).trailing_zeros();
    let odd_part = (n - 1) >> trailing;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = mod_pow(a, odd_part, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..trailing {
            x = mod_mul(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Prime factorization by trial division, as (prime, multiplicity) pairs in
/// ascending order.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut factors = Vec::new();
    let mut d = 2u64;
    while d as u128 * d as u128 <= n as u128 {
        if n.is_multiple_of(d) {
            let mut mult = 0;
            while n.is_multiple_of(d) {
                n /= d;
                mult += 1;
            }
            factors.push((d, mult));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        factors.push((n, 1));
    }
    factors
}

/// Order of `a` in (Z/qZ)^×: the smallest d ≥ 1 with a^d ≡ 1 mod q.
///
/// q must be prime; the order is found by factoring q−1 with trial division
/// and peeling prime factors off the exponent.
pub fn multiplicative_order(a: u64, q: u64) -> Result<u64> {
    if !is_prime(q) {
        return Err(Error::NotPrime(q));
    }
    if a.is_multiple_of(q) {
        return Err(Error::NotCoprime { a, m: q });
    }
    let a = a % q;
    let mut order = q - 1;
    for (f, _) in factorize(q - 1) {
        while order.is_multiple_of(f) && mod_pow(a, order / f, q) == 1 {
            order /= f;
        }
    }
    Ok(order)
}

/// Smallest primitive root g ≥ 2 modulo an odd prime s. Deterministic, so
/// diagrams built from it are reproducible bit for bit.
pub fn primitive_root(s: u64) -> Result<u64> {
    if s < 3 || s.is_multiple_of(2) || !is_prime(s) {
        return Err(Error::NotOddPrime(s));
    }
    let factors = factorize(s - 1);
    let mut g = 2u64;
    loop {
        if factors
            .iter()
            .all(|&(f, _)| mod_pow(g, (s - 1) / f, s) != 1)
        {
            return Ok(g);
        }
        g += 1;
        debug_assert!(g < s);
    }
}

/// True iff `root` generates all of (Z/primeZ)^×.
pub fn is_primitive_root(root: u64, prime: u64) -> Result<bool> {
    if root.is_multiple_of(prime) {
        return Ok(false);
    }
    Ok(multiplicative_order(root, prime)? == prime - 1)
}

// Below this size a linear scan beats the table setup.
const LINEAR_SCAN_LIMIT: u64 = 1 << 16;

/// Index of r in base g modulo the prime s: the unique x in [0, s−1) with
/// g^x ≡ r mod s, provided g is a primitive root.
///
/// Baby-step/giant-step with a table of ⌈√(s−1)⌉ entries; plain scan for
/// small s. Errors with `NoDiscreteLog` when no exponent works, which is the
/// case exactly when g does not generate r.
pub fn discrete_log(g: u64, r: u64, s: u64) -> Result<u64> {
    if !is_prime(s) {
        return Err(Error::NotPrime(s));
    }
    if g.is_multiple_of(s) {
        return Err(Error::NotCoprime { a: g, m: s });
    }
    if r.is_multiple_of(s) {
        return Err(Error::NotCoprime { a: r, m: s });
    }
    let g = g % s;
    let r = r % s;
    if s < LINEAR_SCAN_LIMIT {
        let mut cur = 1u64;
        for x in 0..s - 1 {
            if cur == r {
                return Ok(x);
            }
            cur = mod_mul(cur, g, s);
        }
        return Err(Error::NoDiscreteLog { g, r, s });
    }
    let m = (s as f64 - 1.0).sqrt().ceil() as u64 + 1;
    let mut table = std::collections::HashMap::with_capacity(m as usize);
    let mut cur = 1u64;
    for j in 0..m {
        table.entry(cur).or_insert(j);
        cur = mod_mul(cur, g, s);
    }
    // g^(-m) via Fermat: g^(s-1-m mod s-1)
    let giant = mod_pow(g, s - 1 - (m % (s - 1)), s);
    let mut cur = r;
    for i in 0..=(s - 1) / m {
        if let Some(&j) = table.get(&cur) {
            let x = i * m + j;
            if x < s - 1 {
                return Ok(x);
            }
        }
        cur = mod_mul(cur, giant, s);
    }
    Err(Error::NoDiscreteLog { g, r, s })
}

/// An odd prime p ≥ 3, the modulus all linking numbers live over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct OddPrime(u64);

impl OddPrime {
    pub fn new(value: u64) -> Result<Self> {
        if value < 3 || value.is_multiple_of(2) || !is_prime(value) {
            return Err(Error::NotOddPrime(value));
        }
        Ok(OddPrime(value))
    }

    pub fn get(self) -> u64 {
        self.0
    }
}

impl TryFrom<u64> for OddPrime {
    type Error = Error;
    fn try_from(value: u64) -> Result<Self> {
        OddPrime::new(value)
    }
}

impl From<OddPrime> for u64 {
    fn from(p: OddPrime) -> u64 {
        p.0
    }
}

impl std::fmt::Display for OddPrime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

/// A prime q ≡ 1 mod p, q ≠ p: the only primes apart from p that can ramify
/// in a p-extension of Q.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TamePrime {
    value: u64,
    p: OddPrime,
}

impl TamePrime {
    pub fn new(value: u64, p: OddPrime) -> Result<Self> {
        if !is_prime(value) {
            return Err(Error::NotPrime(value));
        }
        // value ≡ 1 mod p also rules out value == p.
        if value % p.get() != 1 {
            return Err(Error::NotTame { value, p: p.get() });
        }
        Ok(TamePrime { value, p })
    }

    pub fn get(self) -> u64 {
        self.value
    }

    pub fn p(self) -> OddPrime {
        self.p
    }
}

impl std::fmt::Display for TamePrime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.value.fmt(f)
    }
}

/// A residue class mod p.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FpElement {
    value: u64,
    p: OddPrime,
}

impl FpElement {
    pub fn new(value: u64, p: OddPrime) -> Self {
        FpElement {
            value: value % p.get(),
            p,
        }
    }

    pub fn value(self) -> u64 {
        self.value
    }

    pub fn p(self) -> OddPrime {
        self.p
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    /// Multiplicative inverse; self must be nonzero.
    pub fn inverse(self) -> FpElement {
        debug_assert!(!self.is_zero());
        FpElement::new(mod_pow(self.value, self.p.get() - 2, self.p.get()), self.p)
    }
}

impl std::ops::Mul for FpElement {
    type Output = FpElement;

    fn mul(self, other: FpElement) -> FpElement {
        debug_assert_eq!(self.p, other.p);
        FpElement::new(mod_mul(self.value, other.value, self.p.get()), self.p)
    }
}

impl std::fmt::Display for FpElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.value.fmt(f)
    }
}

/// True iff r is a p-th power residue modulo s, decided by the Euler-style
/// test r^((s−1)/p) ≡ 1 mod s.
pub fn is_pth_power(r: u64, s: TamePrime) -> Result<bool> {
    let sv = s.get();
    if r.is_multiple_of(sv) {
        return Err(Error::NotCoprime { a: r, m: sv });
    }
    Ok(mod_pow(r % sv, (sv - 1) / s.p().get(), sv) == 1)
}

/// The linking number ℓ(r, s): the class mod p of −c where r ≡ g_s^c mod s.
///
/// Well-defined because c is unique mod s−1 and p | s−1. Nonzero exactly when
/// r is not a p-th power mod s, although this function never takes that
/// shortcut: it always computes the index of r in base g_s.
pub fn linking_number(r: u64, s: TamePrime, g_s: u64) -> Result<FpElement> {
    let p = s.p();
    if r == s.get() {
        return Err(Error::SelfPair(r));
    }
    let index = discrete_log(g_s, r, s.get())?;
    let value = (p.get() - index % p.get()) % p.get();
    Ok(FpElement::new(value, p))
}
