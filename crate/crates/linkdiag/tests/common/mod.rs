//! Shared helpers for the integration suites: a seeded RNG and a set of
//! small, independently written oracles (trial-division primality, recursive
//! powmod, residue-test edges, fixpoint reachability, lexicographic
//! permutation scans). These never call into the library paths they check.

#![allow(dead_code)]

use std::collections::BTreeSet;

/// Deterministic splitmix64; good enough statistics for test sampling and no
/// external dependency to keep results identical everywhere.
pub struct SplitMix64(u64);

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64(seed)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    pub fn below(&mut self, n: u64) -> u64 {
        self.next_u64() % n
    }

    pub fn pick<'a, T>(&mut self, items: &'a [T]) -> &'a T {
        &items[self.below(items.len() as u64) as usize]
    }
}

/// Recursive square-and-multiply, written independently of the library's
/// iterative version.
pub fn oracle_pow(base: u64, exp: u64, modulus: u64) -> u64 {
    if exp == 0 {
        return 1 % modulus;
    }
    if exp.is_multiple_of(2) {
        oracle_pow(
            ((base as u128 * base as u128) % modulus as u128) as u64,
            exp / 2,
            modulus,
        )
    } else {
        ((base as u128 * oracle_pow(base, exp - 1, modulus) as u128) % modulus as u128) as u64
    }
}

/// The residue test r^((s-1)/p) ≡ 1 mod s, the independent route to the edge
/// predicate.
pub fn oracle_is_pth_power(r: u64, s: u64, p: u64) -> bool {
    assert_eq!((s - 1) % p, 0);
    assert_ne!(r % s, 0);
    oracle_pow(r % s, (s - 1) / p, s) == 1
}

/// Edge set of Γ(S)(p) straight from the residue test.
pub fn oracle_edges(p: u64, primes: &[u64]) -> BTreeSet<(u64, u64)> {
    let mut edges = BTreeSet::new();
    for &r in primes {
        for &s in primes {
            if r != s && !oracle_is_pth_power(r, s, p) {
                edges.insert((r, s));
            }
        }
    }
    edges
}

pub fn oracle_is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// The first `count` primes ≡ 1 mod p, by trial division.
pub fn tame_pool(p: u64, count: usize) -> Vec<u64> {
    let mut pool = Vec::with_capacity(count);
    let mut q = p + 1;
    while pool.len() < count {
        if oracle_is_prime(q) {
            pool.push(q);
        }
        q += p;
    }
    pool
}

/// `size` distinct primes sampled from `pool`, sorted ascending.
pub fn sample_distinct(rng: &mut SplitMix64, pool: &[u64], size: usize) -> Vec<u64> {
    assert!(size <= pool.len());
    let mut chosen = BTreeSet::new();
    while chosen.len() < size {
        chosen.insert(*rng.pick(pool));
    }
    chosen.into_iter().collect()
}

/// All permutations of 0..n in lexicographic order.
pub fn lex_permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut prefix = Vec::new();
    let mut used = vec![false; n];
    fn rec(n: usize, prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for v in 0..n {
            if !used[v] {
                used[v] = true;
                prefix.push(v);
                rec(n, prefix, used, out);
                prefix.pop();
                used[v] = false;
            }
        }
    }
    rec(n, &mut prefix, &mut used, &mut out);
    out
}

/// Members of `primes` from which `targets` are reachable along the oracle
/// edge set, computed by fixpoint relaxation rather than breadth-first
/// search.
pub fn oracle_reachable(
    p: u64,
    primes: &[u64],
    targets: &[u64],
    edges: &BTreeSet<(u64, u64)>,
) -> BTreeSet<u64> {
    let _ = p;
    let mut reached: BTreeSet<u64> = targets.iter().copied().collect();
    loop {
        let mut grew = false;
        for &q in primes {
            if reached.contains(&q) {
                continue;
            }
            if reached.iter().any(|&w| edges.contains(&(q, w))) {
                reached.insert(q);
                grew = true;
            }
        }
        if !grew {
            return reached;
        }
    }
}

/// Lexicographic subsets of `items` of the given size.
pub fn lex_subsets(items: &[u64], size: usize) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut prefix = Vec::new();
    fn rec(
        items: &[u64],
        start: usize,
        size: usize,
        prefix: &mut Vec<u64>,
        out: &mut Vec<Vec<u64>>,
    ) {
        if prefix.len() == size {
            out.push(prefix.clone());
            return;
        }
        for i in start..items.len() {
            prefix.push(items[i]);
            rec(items, i + 1, size, prefix, out);
            prefix.pop();
        }
    }
    rec(items, 0, size, &mut prefix, &mut out);
    out
}
