//! Lifting a polynomial on `T^n` to `T^{n+m}` through affine functionals, so that a
//! polytope multiplier becomes a Riesz projection in higher dimension.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::polytope::{AffineFunctional, LatticePolytope};
use crate::torus::{norm, NormEstimate, Quadrature, TorusPolynomial};

/// `g(eta) = sum_alpha c_alpha eta^(alpha, phi_1(alpha), ..., phi_m(alpha))`.
pub fn build_lift(f: &TorusPolynomial, functionals: &[AffineFunctional]) -> Result<TorusPolynomial> {
    let n = f.dims();
    if let Some(bad) = functionals.iter().find(|phi| phi.dims() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: bad.dims(),
        });
    }
    let mut terms = Vec::with_capacity(f.len());
    for (alpha, c) in f.dense_terms() {
        let mut lifted = alpha.clone();
        for phi in functionals {
            let v = i64::try_from(phi.eval(&alpha))
                .map_err(|_| Error::OutOfRange("lifted exponent overflows i64".into()))?;
            lifted.push(v);
        }
        terms.push((lifted, c));
    }
    TorusPolynomial::from_terms(n + functionals.len(), terms)
}

#[derive(Clone, Debug)]
pub struct PolytopeLift {
    pub g: TorusPolynomial,
    /// Total dimension `n + m` of the lifted torus.
    pub dims: usize,
    /// Joint shift applied to the frequencies of `f` and to `E`.
    pub shift: i64,
    pub facets: Vec<AffineFunctional>,
}

impl PolytopeLift {
    /// Restricts a polynomial on the lifted torus to its first `n` coordinates
    /// and undoes the shift.
    pub fn project_back(&self, h: &TorusPolynomial, n: usize) -> Result<TorusPolynomial> {
        let s = self.shift;
        h.map_frequencies(n, |a| a[..n].iter().map(|x| x - s).collect())
    }
}

/// Shifts `f` and `E` jointly into the positive cone with the least shift, then
/// lifts through the facets of the shifted `E`.
pub fn lift_from_polytope(f: &TorusPolynomial, e: &LatticePolytope) -> Result<PolytopeLift> {
    let n = f.dims();
    if e.dims() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: e.dims(),
        });
    }
    let f_shift = (0..n).map(|j| -f.degree_range(j).0).max().unwrap_or(0).max(0);
    let shift = f_shift.max(e.minimal_positive_shift());
    let e_shifted = e.translate(&vec![shift; n])?;
    let f_shifted = f.map_frequencies(n, |a| a.iter().map(|x| x + shift).collect())?;
    let facets = e_shifted.facets().to_vec();
    let g = build_lift(&f_shifted, &facets)?;
    Ok(PolytopeLift {
        dims: g.dims(),
        g,
        shift,
        facets,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct IsometryReport {
    pub f_norm: NormEstimate,
    pub g_norm: NormEstimate,
    pub difference: f64,
    /// Combined standard error of the two estimates.
    pub stderr: f64,
}

pub fn verify_isometry(f: &TorusPolynomial, g: &TorusPolynomial, p: f64, quad: &Quadrature) -> Result<IsometryReport> {
    let f_norm = norm(f, p, quad)?;
    let mut gq = *quad;
    // An independent stream for the lifted side keeps the two estimates uncorrelated.
    gq.seed = quad.seed.wrapping_add(0x5bd1_e995);
    let g_norm = norm(g, p, &gq)?;
    Ok(IsometryReport {
        difference: (f_norm.value - g_norm.value).abs(),
        stderr: f_norm.stderr.hypot(g_norm.stderr),
        f_norm,
        g_norm,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::DEFAULT_BUDGET;
    use crate::torus::dirichlet_kernel;
    use num_complex::Complex64;
    use std::f64::consts::PI;

    fn one() -> Complex64 {
        Complex64::new(1.0, 0.0)
    }

    #[test]
    fn lift_examples() {
        let z = TorusPolynomial::monomial(&[1], one()).unwrap();
        assert_eq!(build_lift(&z, &[]).unwrap(), z);
        let g = build_lift(&z, &[AffineFunctional::new(vec![2], 1)]).unwrap();
        assert_eq!(g, TorusPolynomial::monomial(&[1, 3], one()).unwrap());
        let f = TorusPolynomial::from_terms(1, [(vec![0], one()), (vec![1], one())]).unwrap();
        let g = build_lift(&f, &[AffineFunctional::new(vec![1], 0)]).unwrap();
        let want = TorusPolynomial::from_terms(2, [(vec![0, 0], one()), (vec![1, 1], one())]).unwrap();
        assert_eq!(g, want);
        assert!(build_lift(&f, &[AffineFunctional::new(vec![1, 1], 0)]).is_err());
    }

    #[test]
    fn anchor_norm_survives_lift() {
        let f = TorusPolynomial::from_terms(1, [(vec![0], one()), (vec![1], one())]).unwrap();
        let g = build_lift(&f, &[AffineFunctional::new(vec![1], 0)]).unwrap();
        let r = verify_isometry(&f, &g, 1.0, &Quadrature::grid(1024)).unwrap();
        assert!((r.f_norm.value - 4.0 / PI).abs() < 1e-5);
        assert!((r.g_norm.value - 4.0 / PI).abs() < 1e-5);
        let r2 = verify_isometry(&f, &g, 2.0, &Quadrature::even_exact()).unwrap();
        assert_eq!(r2.difference, 0.0);
    }

    #[test]
    fn polytope_lift_reproduces_multiplier() {
        let d1 = dirichlet_kernel(2.0, 1, DEFAULT_BUDGET).unwrap();
        let ft = TorusPolynomial::from_terms(
            2,
            d1.dense_terms().iter().flat_map(|(a, _)| {
                d1.dense_terms()
                    .into_iter()
                    .map(move |(b, _)| (vec![a[0], b[0]], one()))
            }),
        )
        .unwrap();
        let e = LatticePolytope::ball_hull(2, 2.0, DEFAULT_BUDGET).unwrap();
        let lift = lift_from_polytope(&ft, &e).unwrap();
        assert_eq!(lift.dims, 2 + e.facets().len());
        let projected = lift.project_back(&lift.g.riesz_project(), 2).unwrap();
        assert_eq!(projected, ft.multiplier_project(&e));
        // Lifted grids at the same resolution are exact rearrangements of the base grid.
        let m = 8;
        let lhs = norm(&lift.g.riesz_project(), 1.0, &Quadrature::grid(m)).unwrap().value;
        let kernel = dirichlet_kernel(2.0, 2, DEFAULT_BUDGET).unwrap();
        let rhs = norm(&kernel, 1.0, &Quadrature::grid(m)).unwrap().value;
        assert!((lhs - rhs).abs() < 1e-9, "{lhs} vs {rhs}");
    }

    #[test]
    fn disjoint_region_projects_to_zero() {
        let f = TorusPolynomial::monomial(&[5, 5], one()).unwrap();
        let e = LatticePolytope::ball_hull(2, 1.0, DEFAULT_BUDGET).unwrap();
        let lift = lift_from_polytope(&f, &e).unwrap();
        assert!(lift.g.riesz_project().is_empty());
    }
}
