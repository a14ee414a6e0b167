//! Multiplicative number theory: the prime table, factorization into
//! multi-indices, smooth numbers and prime sums.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub const DEFAULT_SIEVE_BOUND: u64 = 10_000_000;

/// Sparse exponent vector. Positions are 1-based; zero exponents are never stored.
///
/// For a Dirichlet index `n`, position `j` refers to the `j`-th prime. For a
/// torus frequency, position `j` is the `j`-th coordinate.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex {
    entries: Vec<(u32, i64)>,
}

impl MultiIndex {
    pub fn zero() -> Self {
        Self::default()
    }

    /// Builds an index from `(position, exponent)` pairs in any order.
    /// Repeated positions are summed; zero results are dropped.
    pub fn from_pairs<I: IntoIterator<Item = (u32, i64)>>(pairs: I) -> Result<Self> {
        let mut raw: Vec<(u32, i64)> = pairs.into_iter().collect();
        if raw.iter().any(|&(pos, _)| pos == 0) {
            return Err(Error::invalid("multi-index positions are 1-based"));
        }
        raw.sort_unstable_by_key(|&(pos, _)| pos);
        let mut entries: Vec<(u32, i64)> = Vec::with_capacity(raw.len());
        for (pos, e) in raw {
            match entries.last_mut() {
                Some(last) if last.0 == pos => last.1 += e,
                _ => entries.push((pos, e)),
            }
        }
        entries.retain(|&(_, e)| e != 0);
        Ok(Self { entries })
    }

    /// Dense exponent vector, coordinate `i` stored at position `i + 1`.
    pub fn from_dense(exponents: &[i64]) -> Self {
        let entries = exponents
            .iter()
            .enumerate()
            .filter(|(_, &e)| e != 0)
            .map(|(i, &e)| (i as u32 + 1, e))
            .collect();
        Self { entries }
    }

    pub fn to_dense(&self, dims: usize) -> Vec<i64> {
        let mut out = vec![0; dims];
        for &(pos, e) in &self.entries {
            out[pos as usize - 1] = e;
        }
        out
    }

    pub fn entries(&self) -> &[(u32, i64)] {
        &self.entries
    }

    pub fn get(&self, position: u32) -> i64 {
        self.entries
            .binary_search_by_key(&position, |&(p, _)| p)
            .map(|i| self.entries[i].1)
            .unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Largest position carrying a nonzero exponent (0 for the zero index).
    pub fn max_position(&self) -> u32 {
        self.entries.last().map_or(0, |&(p, _)| p)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.entries.iter().all(|&(_, e)| e > 0)
    }

    /// Sum of exponents.
    pub fn total(&self) -> i64 {
        self.entries.iter().map(|&(_, e)| e).sum()
    }

    pub fn l1(&self) -> i64 {
        self.entries.iter().map(|&(_, e)| e.abs()).sum()
    }

    pub fn norm_sq(&self) -> i64 {
        self.entries.iter().map(|&(_, e)| e * e).sum()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut entries = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut i, mut j) = (0, 0);
        while i < self.entries.len() || j < other.entries.len() {
            let a = self.entries.get(i);
            let b = other.entries.get(j);
            match (a, b) {
                (Some(&(pa, ea)), Some(&(pb, eb))) if pa == pb => {
                    if ea + eb != 0 {
                        entries.push((pa, ea + eb));
                    }
                    i += 1;
                    j += 1;
                }
                (Some(&(pa, ea)), Some(&(pb, _))) if pa < pb => {
                    entries.push((pa, ea));
                    i += 1;
                }
                (Some(&(pa, ea)), None) => {
                    entries.push((pa, ea));
                    i += 1;
                }
                (_, Some(&(pb, eb))) => {
                    entries.push((pb, eb));
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        Self { entries }
    }

    pub fn scale(&self, k: i64) -> Self {
        if k == 0 {
            return Self::zero();
        }
        Self {
            entries: self.entries.iter().map(|&(p, e)| (p, e * k)).collect(),
        }
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (p, e)) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "({p},{e})")?;
        }
        write!(f, "}}")
    }
}

/// Table of primes up to a fixed bound, built once by the sieve of Eratosthenes.
#[derive(Debug)]
pub struct Sieve {
    bound: u64,
    primes: Vec<u64>,
}

impl Sieve {
    pub fn new(bound: u64) -> Self {
        let bound = bound.max(2);
        let n = bound as usize;
        let mut composite = vec![false; n + 1];
        let mut primes = Vec::new();
        for i in 2..=n {
            if !composite[i] {
                primes.push(i as u64);
                let mut j = i.saturating_mul(i);
                while j <= n {
                    composite[j] = true;
                    j += i;
                }
            }
        }
        Self { bound, primes }
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// 1-based index of the prime `p`, if `p` is a prime within the table.
    pub fn prime_index(&self, p: u64) -> Option<usize> {
        self.primes.binary_search(&p).ok().map(|i| i + 1)
    }

    /// The `j`-th prime (1-based).
    pub fn nth_prime(&self, j: usize) -> Option<u64> {
        j.checked_sub(1).and_then(|i| self.primes.get(i).copied())
    }

    /// pi(x) for `x <= bound`.
    pub fn prime_count(&self, x: u64) -> Result<usize> {
        if x > self.bound {
            return Err(Error::OutOfRange(format!(
                "prime count at {x} exceeds sieve bound {}",
                self.bound
            )));
        }
        Ok(self.primes.partition_point(|&p| p <= x))
    }

    pub fn primes_up_to(&self, x: u64) -> Vec<u64> {
        if x <= self.bound {
            return self.primes[..self.primes.partition_point(|&p| p <= x)].to_vec();
        }
        let mut out = self.primes.clone();
        out.extend(segmented_primes(self.bound + 1, x, self));
        out
    }

    /// Prime factorization as `(prime, exponent)` pairs, ascending.
    pub fn prime_factors(&self, mut n: u64) -> Result<Vec<(u64, u32)>> {
        if n == 0 {
            return Err(Error::invalid("cannot factor 0"));
        }
        let mut out = Vec::new();
        for &p in &self.primes {
            if p.saturating_mul(p) > n {
                break;
            }
            if n % p == 0 {
                let mut e = 0;
                while n % p == 0 {
                    n /= p;
                    e += 1;
                }
                out.push((p, e));
            }
        }
        if n > 1 {
            let last = *self.primes.last().unwrap_or(&2);
            if last.saturating_mul(last) < n && !is_prime_u64(n) {
                return Err(Error::OutOfRange(format!(
                    "cofactor {n} is too large for trial division up to {}",
                    self.bound
                )));
            }
            out.push((n, 1));
        }
        Ok(out)
    }

    /// The Bohr lift exponent of `n`: position `j` carries the exponent of the `j`-th prime.
    pub fn factorize(&self, n: u64) -> Result<MultiIndex> {
        let pairs = self.prime_factors(n)?;
        let mut entries = Vec::with_capacity(pairs.len());
        for (p, e) in pairs {
            let j = self.prime_index(p).ok_or_else(|| {
                Error::OutOfRange(format!(
                    "prime factor {p} of {n} exceeds the sieve bound {}",
                    self.bound
                ))
            })?;
            entries.push((j as u32, e as i64));
        }
        Ok(MultiIndex { entries })
    }
}

fn segmented_primes(lo: u64, hi: u64, base: &Sieve) -> Vec<u64> {
    let mut out = Vec::new();
    if lo > hi {
        return out;
    }
    let root = (hi as f64).sqrt() as u64 + 1;
    let small = if root <= base.bound {
        base.primes_up_to(root)
    } else {
        Sieve::new(root).primes
    };
    const SEGMENT: u64 = 1 << 20;
    let mut start = lo;
    while start <= hi {
        let end = (start + SEGMENT - 1).min(hi);
        let mut composite = vec![false; (end - start + 1) as usize];
        for &p in &small {
            if p * p > end {
                break;
            }
            let mut m = (start.div_ceil(p)).max(p) * p;
            while m <= end {
                composite[(m - start) as usize] = true;
                m += p;
            }
        }
        for (i, &c) in composite.iter().enumerate() {
            let v = start + i as u64;
            if !c && v >= 2 {
                out.push(v);
            }
        }
        start = end + 1;
    }
    out
}

/// The process-wide prime table, bound [`DEFAULT_SIEVE_BOUND`].
pub fn sieve() -> &'static Sieve {
    static SIEVE: OnceLock<Sieve> = OnceLock::new();
    SIEVE.get_or_init(|| Sieve::new(DEFAULT_SIEVE_BOUND))
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    let mul = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let pow = |mut a: u64, mut e: u64| {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = mul(r, a);
            }
            a = mul(a, a);
            e >>= 1;
        }
        r
    };
    'bases: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul(x, x);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

pub fn factorize(n: u64) -> Result<MultiIndex> {
    sieve().factorize(n)
}

/// Number of prime factors counted with multiplicity.
pub fn big_omega(n: u64) -> Result<u32> {
    Ok(sieve().prime_factors(n)?.iter().map(|&(_, e)| e).sum())
}

/// d(n), the number of divisors.
pub fn divisor_count(n: u64) -> Result<u64> {
    Ok(sieve()
        .prime_factors(n)?
        .iter()
        .map(|&(_, e)| e as u64 + 1)
        .product())
}

/// A set of primes: an explicit list, all primes up to a bound, or all primes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PrimeSet {
    Explicit(Vec<u64>),
    UpTo(u64),
    All,
}

impl PrimeSet {
    /// Validates primality and sorts. Duplicates are rejected.
    pub fn explicit(mut primes: Vec<u64>) -> Result<Self> {
        primes.sort_unstable();
        if primes.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::invalid("prime set contains duplicates"));
        }
        if let Some(&bad) = primes.iter().find(|&&p| !is_prime_u64(p)) {
            return Err(Error::invalid(format!("{bad} is not prime")));
        }
        Ok(PrimeSet::Explicit(primes))
    }

    pub fn empty() -> Self {
        PrimeSet::Explicit(Vec::new())
    }

    pub fn contains(&self, p: u64) -> bool {
        match self {
            PrimeSet::Explicit(v) => v.binary_search(&p).is_ok(),
            PrimeSet::UpTo(b) => p <= *b && is_prime_u64(p),
            PrimeSet::All => is_prime_u64(p),
        }
    }

    pub fn is_finite(&self) -> bool {
        !matches!(self, PrimeSet::All)
    }

    /// Members not exceeding `x`, ascending.
    pub fn primes_up_to(&self, x: u64) -> Vec<u64> {
        match self {
            PrimeSet::Explicit(v) => v.iter().copied().filter(|&p| p <= x).collect(),
            PrimeSet::UpTo(b) => sieve().primes_up_to(x.min(*b)),
            PrimeSet::All => sieve().primes_up_to(x),
        }
    }

    /// pi_0(x), the counting function of the set.
    pub fn count_up_to(&self, x: f64) -> usize {
        if x < 2.0 {
            return 0;
        }
        let xi = x.floor() as u64;
        match self {
            PrimeSet::Explicit(v) => v.partition_point(|&p| p <= xi),
            _ => self.primes_up_to(xi).len(),
        }
    }

    /// Largest member, when finite.
    pub fn max_prime(&self) -> Option<u64> {
        match self {
            PrimeSet::Explicit(v) => v.last().copied(),
            PrimeSet::UpTo(b) => sieve().primes_up_to(*b).last().copied(),
            PrimeSet::All => None,
        }
    }

    /// Materialized member list for finite sets.
    pub fn members(&self) -> Result<Vec<u64>> {
        match self {
            PrimeSet::Explicit(v) => Ok(v.clone()),
            PrimeSet::UpTo(b) => Ok(sieve().primes_up_to(*b)),
            PrimeSet::All => Err(Error::invalid("the set of all primes has no finite member list")),
        }
    }

    /// True when every prime factor of `n` belongs to the set.
    pub fn is_smooth(&self, n: u64) -> Result<bool> {
        Ok(sieve()
            .prime_factors(n)?
            .iter()
            .all(|&(p, _)| self.contains(p)))
    }
}

impl Serialize for PrimeSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let members = self.members().map_err(serde::ser::Error::custom)?;
        members.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PrimeSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<u64>::deserialize(deserializer)?;
        if v.windows(2).any(|w| w[0] >= w[1]) {
            return Err(serde::de::Error::custom("prime list must be strictly increasing"));
        }
        PrimeSet::explicit(v).map_err(serde::de::Error::custom)
    }
}

/// The P0-smooth integers in `[1, limit]`, ascending. Always contains 1.
///
/// Generated multiplicatively: each prime extends the current list by its powers.
pub fn smooth_numbers(p0: &PrimeSet, limit: u64) -> Vec<u64> {
    if limit == 0 {
        return Vec::new();
    }
    let mut out = vec![1u64];
    for p in p0.primes_up_to(limit) {
        let mut frontier = out.clone();
        while !frontier.is_empty() {
            frontier = frontier
                .into_iter()
                .filter_map(|m| m.checked_mul(p).filter(|&v| v <= limit))
                .collect();
            out.extend_from_slice(&frontier);
        }
    }
    out.sort_unstable();
    out
}

/// Sum of 1/p over primes p <= x.
pub fn prime_reciprocal_sum(x: f64) -> Result<f64> {
    if x < 2.0 || !x.is_finite() {
        return Err(Error::invalid("prime_reciprocal_sum needs x >= 2"));
    }
    let primes = sieve().primes_up_to(x.floor() as u64);
    // Summing from the small end keeps the error near one ulp per term.
    Ok(primes.iter().map(|&p| 1.0 / p as f64).sum())
}

/// Distinct primes dividing any element of `ns`.
pub fn prime_support<I: IntoIterator<Item = u64>>(ns: I) -> Result<BTreeSet<u64>> {
    let mut out = BTreeSet::new();
    for n in ns {
        for (p, _) in sieve().prime_factors(n)? {
            out.insert(p);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorize_examples() {
        assert!(factorize(1).unwrap().is_zero());
        assert_eq!(factorize(12).unwrap().entries(), &[(1, 2), (2, 1)]);
        assert_eq!(factorize(360).unwrap().entries(), &[(1, 3), (2, 2), (3, 1)]);
        assert!(factorize(0).is_err());
    }

    #[test]
    fn factorize_large_prime_cofactor() {
        let p = 9_999_991;
        let idx = factorize(2 * p).unwrap();
        assert_eq!(idx.get(1), 1);
        assert_eq!(sieve().nth_prime(idx.max_position() as usize), Some(p));
    }

    #[test]
    fn omega_and_divisors() {
        assert_eq!(big_omega(1).unwrap(), 0);
        assert_eq!(big_omega(12).unwrap(), 3);
        assert_eq!(big_omega(1024).unwrap(), 10);
        assert_eq!(divisor_count(1).unwrap(), 1);
        assert_eq!(divisor_count(12).unwrap(), 6);
        assert_eq!(divisor_count(64).unwrap(), 7);
    }

    #[test]
    fn smooth_examples() {
        let p23 = PrimeSet::explicit(vec![2, 3]).unwrap();
        assert_eq!(smooth_numbers(&p23, 10), vec![1, 2, 3, 4, 6, 8, 9]);
        assert_eq!(smooth_numbers(&PrimeSet::empty(), 10), vec![1]);
        let p2 = PrimeSet::explicit(vec![2]).unwrap();
        assert_eq!(smooth_numbers(&p2, 9), vec![1, 2, 4, 8]);
    }

    #[test]
    fn smooth_matches_divisibility_scan() {
        let p0 = PrimeSet::explicit(vec![3, 7, 11]).unwrap();
        let fast = smooth_numbers(&p0, 5000);
        let slow: Vec<u64> = (1..=5000u64)
            .filter(|&n| {
                let mut m = n;
                for p in [3, 7, 11] {
                    while m % p == 0 {
                        m /= p;
                    }
                }
                m == 1
            })
            .collect();
        assert_eq!(fast, slow);
    }

    #[test]
    fn reciprocal_sums() {
        assert_eq!(prime_reciprocal_sum(2.0).unwrap(), 0.5);
        let ten = 0.5 + 1.0 / 3.0 + 0.2 + 1.0 / 7.0;
        assert!((prime_reciprocal_sum(10.0).unwrap() - ten).abs() < 1e-15);
        assert!((prime_reciprocal_sum(100.0).unwrap() - 1.802_817).abs() < 1e-6);
        assert!(prime_reciprocal_sum(1.5).is_err());
    }

    #[test]
    fn mertens_spread() {
        let diffs: Vec<f64> = [1e3, 1e4, 1e5, 1e6]
            .iter()
            .map(|&x: &f64| prime_reciprocal_sum(x).unwrap() - x.ln().ln())
            .collect();
        let max = diffs.iter().cloned().fold(f64::MIN, f64::max);
        let min = diffs.iter().cloned().fold(f64::MAX, f64::min);
        assert!(max - min < 0.05, "{diffs:?}");
    }

    #[test]
    fn recomposition_up_to_a_million() {
        let s = sieve();
        for n in 1..=1_000_000u64 {
            let idx = s.factorize(n).unwrap();
            let back: u64 = idx
                .entries()
                .iter()
                .map(|&(j, e)| s.nth_prime(j as usize).unwrap().pow(e as u32))
                .product();
            assert_eq!(back, n);
        }
    }

    #[test]
    fn miller_rabin_agrees_with_sieve() {
        let s = Sieve::new(100_000);
        for n in 0..100_000u64 {
            assert_eq!(is_prime_u64(n), s.prime_index(n).is_some(), "{n}");
        }
        assert!(is_prime_u64(18_446_744_073_709_551_557));
    }

    #[test]
    fn segmented_extension() {
        let s = Sieve::new(1000);
        let ext = s.primes_up_to(5000);
        let direct = Sieve::new(5000);
        assert_eq!(ext, direct.primes());
    }

    #[test]
    fn prime_set_serde() {
        let set = PrimeSet::explicit(vec![5, 2, 3]).unwrap();
        let txt = serde_json::to_string(&set).unwrap();
        assert_eq!(txt, "[2,3,5]");
        let back: PrimeSet = serde_json::from_str(&txt).unwrap();
        assert_eq!(back, set);
        assert!(serde_json::from_str::<PrimeSet>("[2,4]").is_err());
        assert!(serde_json::from_str::<PrimeSet>("[3,2]").is_err());
    }

    #[test]
    fn multi_index_ops() {
        let a = MultiIndex::from_pairs([(2, 1), (1, 3), (2, -1)]).unwrap();
        assert_eq!(a.entries(), &[(1, 3)]);
        let b = MultiIndex::from_dense(&[0, -2, 1]);
        assert_eq!(b.entries(), &[(2, -2), (3, 1)]);
        assert_eq!(a.add(&b).to_dense(3), vec![3, -2, 1]);
        assert_eq!(b.add(&b.scale(-1)), MultiIndex::zero());
        assert!(MultiIndex::from_pairs([(0, 1)]).is_err());
        assert_eq!(format!("{}", factorize(12).unwrap()), "{(1,2),(2,1)}");
    }
}
