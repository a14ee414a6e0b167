//! Named generators of Dirichlet polynomials.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use super::DirichletPolynomial;
use crate::bohr::sieve;
use crate::error::{check_budget, Error, Result};
use crate::rng::{derive_seed, domain, Stream};

/// `a_n = n^-shift / log n`, `2 <= n <= N`. With `shift = 1` this is the truncated `h(s)`.
pub fn hilbert(n_max: u64, shift: f64) -> Result<DirichletPolynomial> {
    Ok(DirichletPolynomial::from_sorted(
        (2..=n_max)
            .map(|n| {
                let x = n as f64;
                (n, Complex64::new(x.powf(-shift) / x.ln(), 0.0))
            })
            .collect(),
    ))
}

/// `a_n = 1 / (n log n)`, `2 <= n <= N`.
pub fn log_reciprocal(n_max: u64) -> Result<DirichletPolynomial> {
    hilbert(n_max, 1.0)
}

/// `a_p = 1/p` for primes `p <= N`.
pub fn prime_reciprocal(n_max: u64) -> Result<DirichletPolynomial> {
    Ok(DirichletPolynomial::from_sorted(
        sieve()
            .primes_up_to(n_max)
            .into_iter()
            .map(|p| (p, Complex64::new(1.0 / p as f64, 0.0)))
            .collect(),
    ))
}

/// The `j`-th prime block `[e^(2^j), e^(2^j + 1)]` as integer bounds.
pub fn corollary35_block(j: u32) -> (u64, u64) {
    let lo = (2f64.powi(j as i32)).exp().ceil() as u64;
    let hi = (2f64.powi(j as i32) + 1.0).exp().floor() as u64;
    (lo, hi)
}

/// `a_p = e^(-2^j) 2^j` for primes `p` in block `j`, `j <= J`.
///
/// The blocks grow doubly exponentially; `budget` caps the sieved range.
pub fn corollary35(j_max: u32, budget: u64) -> Result<DirichletPolynomial> {
    if j_max > 40 {
        return Err(Error::OutOfRange(format!("block index {j_max} is far beyond u64")));
    }
    let top = (2f64.powi(j_max as i32) + 1.0).exp();
    check_budget(top.min(u128::MAX as f64) as u128, budget)?;
    let primes = sieve().primes_up_to(top.floor() as u64);
    let mut coeffs = Vec::new();
    for j in 0..=j_max {
        let (lo, hi) = corollary35_block(j);
        let w = 2f64.powi(j as i32);
        let a = (-w).exp() * w;
        let start = primes.partition_point(|&p| p < lo);
        let end = primes.partition_point(|&p| p <= hi);
        coeffs.extend(primes[start..end].iter().map(|&p| (p, Complex64::new(a, 0.0))));
    }
    Ok(DirichletPolynomial::from_sorted(coeffs))
}

/// `g(s) = sum_{1 <= k <= log log N} [e^(e^k)]^-s`.
pub fn double_exp(n_max: u64) -> Result<DirichletPolynomial> {
    if n_max < 3 {
        return Ok(DirichletPolynomial::zero());
    }
    let k_max = (n_max as f64).ln().ln().floor() as i32;
    let mut coeffs = Vec::new();
    for k in 1..=k_max.max(0) {
        let v = (k as f64).exp().exp();
        if v >= u64::MAX as f64 {
            return Err(Error::OutOfRange(format!("[e^(e^{k})] does not fit in u64")));
        }
        coeffs.push((v.floor() as u64, Complex64::new(1.0, 0.0)));
    }
    Ok(DirichletPolynomial::from_sorted(coeffs))
}

/// Independent complex Gaussian coefficients for `1 <= n <= N`.
pub fn random(n_max: u64, seed: u64) -> Result<DirichletPolynomial> {
    let key = derive_seed(seed, domain::GENERATOR);
    Ok(DirichletPolynomial::from_sorted(
        (1..=n_max)
            .map(|n| {
                let mut s = Stream::new(key, n);
                (n, Complex64::new(s.normal(), s.normal()) / 2f64.sqrt())
            })
            .collect(),
    ))
}

/// Random nonnegative coefficients, uniform on `[0, 1)`, for `2 <= n <= N`.
pub fn random_nonneg(n_max: u64, seed: u64) -> Result<DirichletPolynomial> {
    let key = derive_seed(seed, domain::GENERATOR ^ 0x100);
    Ok(DirichletPolynomial::from_sorted(
        (2..=n_max)
            .map(|n| (n, Complex64::new(Stream::new(key, n).uniform(), 0.0)))
            .collect(),
    ))
}

/// A named family with its parameters, as used on the command line.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Family {
    Hilbert { n: u64, shift: f64 },
    LogReciprocal { n: u64 },
    PrimeReciprocal { n: u64 },
    Corollary35 { j: u32 },
    DoubleExp { n: u64 },
    Random { n: u64, seed: u64 },
}

impl Family {
    pub fn build(&self, budget: u64) -> Result<DirichletPolynomial> {
        match *self {
            Family::Hilbert { n, shift } => hilbert(n, shift),
            Family::LogReciprocal { n } => log_reciprocal(n),
            Family::PrimeReciprocal { n } => prime_reciprocal(n),
            Family::Corollary35 { j } => corollary35(j, budget),
            Family::DoubleExp { n } => double_exp(n),
            Family::Random { n, seed } => random(n, seed),
        }
    }

    /// Parses a family name with its size parameters.
    pub fn from_name(name: &str, n: u64, j: u32, shift: f64, seed: u64) -> Result<Self> {
        Ok(match name.parse::<FamilyName>()? {
            FamilyName::Hilbert => Family::Hilbert { n, shift },
            FamilyName::LogReciprocal => Family::LogReciprocal { n },
            FamilyName::PrimeReciprocal => Family::PrimeReciprocal { n },
            FamilyName::Corollary35 => Family::Corollary35 { j },
            FamilyName::DoubleExp => Family::DoubleExp { n },
            FamilyName::Random => Family::Random { n, seed },
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyName {
    Hilbert,
    LogReciprocal,
    PrimeReciprocal,
    Corollary35,
    DoubleExp,
    Random,
}

impl FamilyName {
    pub const ALL: [FamilyName; 6] = [
        FamilyName::Hilbert,
        FamilyName::LogReciprocal,
        FamilyName::PrimeReciprocal,
        FamilyName::Corollary35,
        FamilyName::DoubleExp,
        FamilyName::Random,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            FamilyName::Hilbert => "hilbert",
            FamilyName::LogReciprocal => "log-reciprocal",
            FamilyName::PrimeReciprocal => "prime-reciprocal",
            FamilyName::Corollary35 => "corollary35",
            FamilyName::DoubleExp => "double-exp",
            FamilyName::Random => "random",
        }
    }
}

impl fmt::Display for FamilyName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FamilyName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FamilyName::ALL
            .into_iter()
            .find(|f| f.as_str() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = FamilyName::ALL.iter().map(|f| f.as_str()).collect();
                Error::invalid(format!("unknown family {s:?}; expected one of {}", names.join(", ")))
            })
    }
}
