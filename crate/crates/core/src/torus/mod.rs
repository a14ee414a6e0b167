//! Sparse trigonometric polynomials on the torus `T^n`.

mod grid;
mod kernel;

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::bohr::MultiIndex;
use crate::error::{check_budget, Error, Result};
use crate::numeric::ExactComplexSum;

pub use grid::{grid_slices, norm, sup_bound, NormEstimate, NormMethod, Quadrature, SupBound};
pub use kernel::{
    default_kernel_grid, dirichlet_kernel, ftilde_norm, kernel_scaling_experiment,
    multivar_sup_check, multivar_sup_constant, projection_ratio_search, refor_experiment,
    refor_growth, KernelRow, KernelScaling, MultivarSupReport, ReforGrowth, ReforRecord,
    SearchConfig, SearchResult,
};

/// A set of lattice frequencies that a Fourier multiplier keeps.
pub trait FrequencyRegion {
    fn contains_frequency(&self, alpha: &[i64]) -> bool;
}

/// The whole lattice.
#[derive(Clone, Copy, Debug)]
pub struct AllFrequencies;

impl FrequencyRegion for AllFrequencies {
    fn contains_frequency(&self, _alpha: &[i64]) -> bool {
        true
    }
}

/// Closed Euclidean ball `{ |alpha| <= radius }`.
#[derive(Clone, Copy, Debug)]
pub struct Ball {
    pub radius: f64,
}

impl Ball {
    /// Largest integer `s` with `s <= radius^2`.
    pub fn radius_sq_floor(&self) -> i64 {
        (self.radius * self.radius + 1e-9).floor() as i64
    }
}

impl FrequencyRegion for Ball {
    fn contains_frequency(&self, alpha: &[i64]) -> bool {
        alpha.iter().map(|a| a * a).sum::<i64>() <= self.radius_sq_floor()
    }
}

impl<F: Fn(&[i64]) -> bool> FrequencyRegion for F {
    fn contains_frequency(&self, alpha: &[i64]) -> bool {
        self(alpha)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TorusPolynomial {
    dims: usize,
    terms: BTreeMap<MultiIndex, Complex64>,
}

impl TorusPolynomial {
    pub fn zero(dims: usize) -> Result<Self> {
        if dims == 0 {
            return Err(Error::invalid("torus dimension must be at least 1"));
        }
        Ok(Self {
            dims,
            terms: BTreeMap::new(),
        })
    }

    /// Builds a polynomial from dense frequency vectors. Repeated frequencies are summed.
    pub fn from_terms<I>(dims: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<i64>, Complex64)>,
    {
        let mut out = Self::zero(dims)?;
        for (alpha, c) in terms {
            if alpha.len() != dims {
                return Err(Error::DimensionMismatch {
                    expected: dims,
                    got: alpha.len(),
                });
            }
            out.add_term(MultiIndex::from_dense(&alpha), c)?;
        }
        Ok(out)
    }

    pub fn from_sparse<I>(dims: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiIndex, Complex64)>,
    {
        let mut out = Self::zero(dims)?;
        for (alpha, c) in terms {
            out.add_term(alpha, c)?;
        }
        Ok(out)
    }

    pub fn monomial(alpha: &[i64], c: Complex64) -> Result<Self> {
        Self::from_terms(alpha.len(), [(alpha.to_vec(), c)])
    }

    pub fn constant(dims: usize, c: Complex64) -> Result<Self> {
        Self::from_terms(dims, [(vec![0; dims], c)])
    }

    pub fn add_term(&mut self, alpha: MultiIndex, c: Complex64) -> Result<()> {
        if alpha.max_position() as usize > self.dims {
            return Err(Error::DimensionMismatch {
                expected: self.dims,
                got: alpha.max_position() as usize,
            });
        }
        match self.terms.entry(alpha) {
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if *slot.get() == Complex64::new(0.0, 0.0) {
                    slot.remove();
                }
            }
            Entry::Vacant(slot) => {
                if c != Complex64::new(0.0, 0.0) {
                    slot.insert(c);
                }
            }
        }
        Ok(())
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Complex64)> {
        self.terms.iter()
    }

    /// Terms with dense frequency vectors.
    pub fn dense_terms(&self) -> Vec<(Vec<i64>, Complex64)> {
        self.terms
            .iter()
            .map(|(a, c)| (a.to_dense(self.dims), *c))
            .collect()
    }

    pub fn coeff(&self, alpha: &[i64]) -> Complex64 {
        self.terms
            .get(&MultiIndex::from_dense(alpha))
            .copied()
            .unwrap_or_default()
    }

    /// `(min, max)` exponent of coordinate `j` (0-based); `(0, 0)` for the zero polynomial.
    pub fn degree_range(&self, j: usize) -> (i64, i64) {
        let mut lo = i64::MAX;
        let mut hi = i64::MIN;
        for alpha in self.terms.keys() {
            let e = alpha.get(j as u32 + 1);
            lo = lo.min(e);
            hi = hi.max(e);
        }
        if lo > hi {
            (0, 0)
        } else {
            (lo, hi)
        }
    }

    /// Largest `max - min` exponent over coordinates.
    pub fn degree_span(&self) -> i64 {
        (0..self.dims)
            .map(|j| {
                let (lo, hi) = self.degree_range(j);
                hi - lo
            })
            .max()
            .unwrap_or(0)
    }

    /// Largest total degree `sum_j alpha_j` over stored frequencies.
    pub fn total_degree(&self) -> i64 {
        self.terms.keys().map(|a| a.total()).max().unwrap_or(0)
    }

    pub fn is_analytic(&self) -> bool {
        self.terms.keys().all(|a| a.is_nonnegative())
    }

    pub fn eval(&self, theta: &[f64]) -> Result<Complex64> {
        if theta.len() != self.dims {
            return Err(Error::DimensionMismatch {
                expected: self.dims,
                got: theta.len(),
            });
        }
        Ok(self.eval_unchecked(theta))
    }

    pub(crate) fn eval_unchecked(&self, theta: &[f64]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (alpha, c) in &self.terms {
            let phase: f64 = alpha
                .entries()
                .iter()
                .map(|&(j, e)| e as f64 * theta[j as usize - 1])
                .sum();
            acc += c * Complex64::from_polar(1.0, phase);
        }
        acc
    }

    /// The Riesz projection: keeps frequencies with every coordinate nonnegative.
    pub fn riesz_project(&self) -> Self {
        self.filter(|alpha| alpha.is_nonnegative())
    }

    /// The Fourier multiplier with symbol the indicator of `region`.
    pub fn multiplier_project<R: FrequencyRegion + ?Sized>(&self, region: &R) -> Self {
        let dims = self.dims;
        self.filter(|alpha| region.contains_frequency(&alpha.to_dense(dims)))
    }

    fn filter<F: Fn(&MultiIndex) -> bool>(&self, keep: F) -> Self {
        Self {
            dims: self.dims,
            terms: self
                .terms
                .iter()
                .filter(|(a, _)| keep(a))
                .map(|(a, c)| (a.clone(), *c))
                .collect(),
        }
    }

    pub fn scale(&self, k: Complex64) -> Self {
        if k == Complex64::new(0.0, 0.0) {
            return Self::zero(self.dims).expect("dims already validated");
        }
        Self {
            dims: self.dims,
            terms: self.terms.iter().map(|(a, c)| (a.clone(), c * k)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_dims(other)?;
        let mut out = self.clone();
        for (a, c) in &other.terms {
            out.add_term(a.clone(), *c)?;
        }
        Ok(out)
    }

    pub fn mul(&self, other: &Self, budget: u64) -> Result<Self> {
        self.check_dims(other)?;
        check_budget(self.len() as u128 * other.len() as u128, budget)?;
        let mut sums: BTreeMap<MultiIndex, ExactComplexSum> = BTreeMap::new();
        for (a, c) in &self.terms {
            for (b, d) in &other.terms {
                sums.entry(a.add(b)).or_default().add(c * d);
            }
        }
        let terms: BTreeMap<MultiIndex, Complex64> = sums
            .into_iter()
            .map(|(a, s)| (a, s.value()))
            .filter(|(_, c)| *c != Complex64::new(0.0, 0.0))
            .collect();
        Ok(Self {
            dims: self.dims,
            terms,
        })
    }

    pub fn pow(&self, k: u32, budget: u64) -> Result<Self> {
        let mut out = Self::constant(self.dims, Complex64::new(1.0, 0.0))?;
        for _ in 0..k {
            out = out.mul(self, budget)?;
        }
        Ok(out)
    }

    /// `sum |c|^2`, the squared L^2 norm by Parseval.
    pub fn coeff_l2_sq(&self) -> f64 {
        self.terms.values().map(|c| c.norm_sqr()).sum()
    }

    /// `sum |c|`, an upper bound for the sup norm.
    pub fn coeff_l1(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).sum()
    }

    /// `sum |c| |alpha|_1`, a Lipschitz constant in the l-infinity angle metric.
    pub fn lipschitz(&self) -> f64 {
        self.terms
            .iter()
            .map(|(a, c)| c.norm() * a.l1() as f64)
            .sum()
    }

    /// Re-indexes every frequency through `map` into a `dims`-dimensional torus. Collisions are summed.
    pub fn map_frequencies<F>(&self, dims: usize, map: F) -> Result<Self>
    where
        F: Fn(&[i64]) -> Vec<i64>,
    {
        let d = self.dims;
        Self::from_terms(
            dims,
            self.terms.iter().map(|(a, c)| (map(&a.to_dense(d)), *c)),
        )
    }

    /// The same polynomial viewed on `T^dims`, `dims >= self.dims()`.
    pub fn embed(&self, dims: usize) -> Result<Self> {
        if dims < self.dims {
            return Err(Error::DimensionMismatch {
                expected: self.dims,
                got: dims,
            });
        }
        Ok(Self {
            dims,
            terms: self.terms.clone(),
        })
    }

    /// `terms` frequencies drawn uniformly from `[-degree, degree]^dims`
    /// (or `[0, degree]^dims` when `analytic`) with complex Gaussian coefficients.
    /// Repeated draws merge, so the result may have fewer terms.
    pub fn random(dims: usize, degree: i64, terms: usize, analytic: bool, seed: u64) -> Result<Self> {
        if degree < 0 {
            return Err(Error::invalid("degree must be nonnegative"));
        }
        let lo = if analytic { 0 } else { -degree };
        let width = (degree - lo + 1) as u64;
        let key = crate::rng::derive_seed(seed, crate::rng::domain::GENERATOR);
        let mut out = Self::zero(dims)?;
        for k in 0..terms as u64 {
            let mut s = crate::rng::Stream::new(key, k);
            let alpha: Vec<i64> = (0..dims).map(|_| lo + s.below(width) as i64).collect();
            let c = Complex64::new(s.normal(), s.normal());
            out.add_term(MultiIndex::from_dense(&alpha), c)?;
        }
        Ok(out)
    }

    fn check_dims(&self, other: &Self) -> Result<()> {
        if self.dims != other.dims {
            return Err(Error::DimensionMismatch {
                expected: self.dims,
                got: other.dims,
            });
        }
        Ok(())
    }
}
