//! Exact lattice polytopes: convex hulls of integer points, facet functionals,
//! and translation into the positive cone.

use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{check_budget, Error, Result};
use crate::torus::{Ball, FrequencyRegion};

pub const MAX_HULL_DIMS: usize = 4;

/// `phi(alpha) = <alpha, beta> + b`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AffineFunctional {
    pub beta: Vec<i64>,
    pub b: i64,
}

impl AffineFunctional {
    pub fn new(beta: Vec<i64>, b: i64) -> Self {
        Self { beta, b }
    }

    pub fn dims(&self) -> usize {
        self.beta.len()
    }

    pub fn eval(&self, alpha: &[i64]) -> i128 {
        self.beta
            .iter()
            .zip(alpha)
            .map(|(&x, &y)| x as i128 * y as i128)
            .sum::<i128>()
            + self.b as i128
    }

    fn is_primitive(&self) -> bool {
        self.beta.iter().fold(0i128, |g, &x| gcd(g, x as i128)) == 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticePolytope {
    dims: usize,
    vertices: Vec<Vec<i64>>,
    facets: Vec<AffineFunctional>,
}

impl LatticePolytope {
    /// Convex hull of a finite set of lattice points in `Z^n`, `n <= 4`.
    pub fn hull(dims: usize, points: &[Vec<i64>]) -> Result<Self> {
        if dims == 0 || dims > MAX_HULL_DIMS {
            return Err(Error::OutOfRange(format!(
                "hulls are supported for 1 <= n <= {MAX_HULL_DIMS}, got {dims}"
            )));
        }
        if let Some(p) = points.iter().find(|p| p.len() != dims) {
            return Err(Error::DimensionMismatch {
                expected: dims,
                got: p.len(),
            });
        }
        let mut pts: Vec<Vec<i64>> = points.to_vec();
        pts.sort();
        pts.dedup();
        if dims == 1 {
            return segment(&pts);
        }
        let pts = drop_midpoints(pts);
        HullBuilder::run(dims, pts)
    }

    /// Hull of `{alpha in Z^n : |alpha| <= R}`.
    pub fn ball_hull(n: usize, radius: f64, budget: u64) -> Result<Self> {
        if n == 0 || n > MAX_HULL_DIMS {
            return Err(Error::OutOfRange(format!(
                "ball hulls are supported for 1 <= n <= {MAX_HULL_DIMS}, got {n}"
            )));
        }
        if !(radius >= 1.0) || !radius.is_finite() {
            return Err(Error::Degenerate(format!(
                "a ball of radius {radius} holds too few lattice points"
            )));
        }
        let r = radius.floor() as i64;
        check_budget(((2 * r + 1) as u128).pow(n as u32), budget)?;
        let ball = Ball { radius };
        let pts: Vec<Vec<i64>> = box_points(&vec![-r; n], &vec![r; n])
            .filter(|a| ball.contains_frequency(a))
            .collect();
        Self::hull(n, &pts)
    }

    /// Validates a vertex/facet description. Facet normals must be primitive,
    /// every vertex must satisfy every facet, and each facet must be tight at
    /// `n` affinely independent vertices.
    pub fn from_parts(dims: usize, vertices: Vec<Vec<i64>>, facets: Vec<AffineFunctional>) -> Result<Self> {
        if dims == 0 {
            return Err(Error::invalid("polytope dimension must be at least 1"));
        }
        for v in &vertices {
            if v.len() != dims {
                return Err(Error::DimensionMismatch {
                    expected: dims,
                    got: v.len(),
                });
            }
        }
        for f in &facets {
            if f.dims() != dims {
                return Err(Error::DimensionMismatch {
                    expected: dims,
                    got: f.dims(),
                });
            }
            if !f.is_primitive() {
                return Err(Error::invalid(format!("facet normal {:?} is not primitive", f.beta)));
            }
            if vertices.iter().any(|v| f.eval(v) < 0) {
                return Err(Error::invalid(format!("facet {f:?} cuts off a vertex")));
            }
            let tight: Vec<&Vec<i64>> = vertices.iter().filter(|v| f.eval(v) == 0).collect();
            if affine_rank(&tight) + 1 < dims {
                return Err(Error::Degenerate(format!("facet {f:?} is not tight at n vertices")));
            }
        }
        let all: Vec<&Vec<i64>> = vertices.iter().collect();
        if affine_rank(&all) < dims {
            return Err(Error::Degenerate("vertices lie in a hyperplane".into()));
        }
        Ok(Self {
            dims,
            vertices,
            facets,
        })
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    pub fn vertices(&self) -> &[Vec<i64>] {
        &self.vertices
    }

    /// Primitive inner-pointing facet functionals, `phi >= 0` on the polytope.
    pub fn facets(&self) -> &[AffineFunctional] {
        &self.facets
    }

    pub fn contains(&self, alpha: &[i64]) -> Result<bool> {
        if alpha.len() != self.dims {
            return Err(Error::DimensionMismatch {
                expected: self.dims,
                got: alpha.len(),
            });
        }
        Ok(self.facets.iter().all(|f| f.eval(alpha) >= 0))
    }

    /// Coordinatewise `(min, max)` over the vertices.
    pub fn bounding_box(&self) -> (Vec<i64>, Vec<i64>) {
        let mut lo = vec![i64::MAX; self.dims];
        let mut hi = vec![i64::MIN; self.dims];
        for v in &self.vertices {
            for j in 0..self.dims {
                lo[j] = lo[j].min(v[j]);
                hi[j] = hi[j].max(v[j]);
            }
        }
        (lo, hi)
    }

    /// All lattice points of the polytope, in lexicographic order.
    pub fn lattice_points(&self) -> Vec<Vec<i64>> {
        let (lo, hi) = self.bounding_box();
        box_points(&lo, &hi)
            .filter(|a| self.facets.iter().all(|f| f.eval(a) >= 0))
            .collect()
    }

    /// `P + shift`, with `b` adjusted by `-<shift, beta>`.
    pub fn translate(&self, shift: &[i64]) -> Result<Self> {
        if shift.len() != self.dims {
            return Err(Error::DimensionMismatch {
                expected: self.dims,
                got: shift.len(),
            });
        }
        let vertices = self
            .vertices
            .iter()
            .map(|v| v.iter().zip(shift).map(|(a, s)| a + s).collect())
            .collect();
        let facets = self
            .facets
            .iter()
            .map(|f| {
                let dot: i64 = f.beta.iter().zip(shift).map(|(b, s)| b * s).sum();
                AffineFunctional::new(f.beta.clone(), f.b - dot)
            })
            .collect();
        Ok(Self {
            dims: self.dims,
            vertices,
            facets,
        })
    }

    /// `(P + N (1, ..., 1), N)` with the least `N >= 0` putting `P` inside `Z_+^n`.
    pub fn translate_positive(&self) -> (Self, i64) {
        let n = self.minimal_positive_shift();
        let shifted = self
            .translate(&vec![n; self.dims])
            .expect("shift has the right length");
        (shifted, n)
    }

    pub fn minimal_positive_shift(&self) -> i64 {
        self.vertices
            .iter()
            .flat_map(|v| v.iter())
            .map(|&x| -x)
            .max()
            .unwrap_or(0)
            .max(0)
    }
}

impl FrequencyRegion for LatticePolytope {
    fn contains_frequency(&self, alpha: &[i64]) -> bool {
        alpha.len() == self.dims && self.facets.iter().all(|f| f.eval(alpha) >= 0)
    }
}

fn segment(pts: &[Vec<i64>]) -> Result<LatticePolytope> {
    let (lo, hi) = match (pts.first(), pts.last()) {
        (Some(a), Some(b)) if a[0] < b[0] => (a[0], b[0]),
        _ => return Err(Error::Degenerate("a segment needs two distinct points".into())),
    };
    Ok(LatticePolytope {
        dims: 1,
        vertices: vec![vec![lo], vec![hi]],
        facets: vec![AffineFunctional::new(vec![-1], hi), AffineFunctional::new(vec![1], -lo)],
    })
}

/// Iterates the integer points of the box `[lo, hi]` in lexicographic order.
pub fn box_points(lo: &[i64], hi: &[i64]) -> impl Iterator<Item = Vec<i64>> {
    let lo = lo.to_vec();
    let hi = hi.to_vec();
    let empty = lo.iter().zip(&hi).any(|(a, b)| a > b);
    let mut cur = if empty { None } else { Some(lo.clone()) };
    std::iter::from_fn(move || {
        let out = cur.clone()?;
        let mut next = out.clone();
        let mut j = next.len();
        loop {
            if j == 0 {
                cur = None;
                break;
            }
            j -= 1;
            next[j] += 1;
            if next[j] <= hi[j] {
                cur = Some(next);
                break;
            }
            next[j] = lo[j];
        }
        Some(out)
    })
}

/// Removes points that are the midpoint of two unit-step neighbours in the set;
/// such points are never vertices.
fn drop_midpoints(pts: Vec<Vec<i64>>) -> Vec<Vec<i64>> {
    let set: HashSet<&Vec<i64>> = pts.iter().collect();
    let keep: Vec<bool> = pts
        .iter()
        .map(|p| {
            !(0..p.len()).any(|j| {
                let mut a = p.clone();
                let mut b = p.clone();
                a[j] += 1;
                b[j] -= 1;
                set.contains(&a) && set.contains(&b)
            })
        })
        .collect();
    pts.into_iter()
        .zip(keep)
        .filter_map(|(p, k)| k.then_some(p))
        .collect()
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Rank of integer vectors by fraction-free elimination.
fn rank(rows: &[Vec<i128>]) -> usize {
    let mut m: Vec<Vec<i128>> = rows.to_vec();
    let cols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..m.len()).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, piv);
        for i in 0..m.len() {
            if i != r && m[i][c] != 0 {
                let (a, b) = (m[r][c], m[i][c]);
                for k in 0..cols {
                    m[i][k] = m[i][k] * a - m[r][k] * b;
                }
                let g = m[i].iter().fold(0, |g, &x| gcd(g, x));
                if g > 1 {
                    for x in m[i].iter_mut() {
                        *x /= g;
                    }
                }
            }
        }
        r += 1;
    }
    r
}

/// Dimension of the affine hull of a point set (`-1` is reported as 0 for the empty set).
fn affine_rank(pts: &[&Vec<i64>]) -> usize {
    let Some(first) = pts.first() else {
        return 0;
    };
    let rows: Vec<Vec<i128>> = pts[1..]
        .iter()
        .map(|p| p.iter().zip(first.iter()).map(|(a, b)| (*a - *b) as i128).collect())
        .collect();
    rank(&rows)
}

/// Picks points from `pts` that are affinely independent, up to `want` of them.
fn independent_subset(pts: &[&Vec<i64>], want: usize) -> Vec<Vec<i64>> {
    let mut chosen: Vec<Vec<i64>> = Vec::new();
    for p in pts {
        if chosen.len() == want {
            break;
        }
        let mut trial: Vec<&Vec<i64>> = chosen.iter().collect();
        trial.push(p);
        if chosen.is_empty() || affine_rank(&trial) == chosen.len() {
            chosen.push((*p).clone());
        }
    }
    chosen
}

/// Primitive normal of the hyperplane through `n` affinely independent points of `Z^n`.
fn hyperplane(points: &[Vec<i64>]) -> (Vec<i128>, i128) {
    let n = points[0].len();
    let d: Vec<Vec<i128>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(&points[0]).map(|(a, b)| (*a - *b) as i128).collect())
        .collect();
    let mut normal = vec![0i128; n];
    for (k, slot) in normal.iter_mut().enumerate() {
        let minor: Vec<Vec<i128>> = d
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(j, _)| *j != k)
                    .map(|(_, v)| *v)
                    .collect()
            })
            .collect();
        let sign = if k % 2 == 0 { 1 } else { -1 };
        *slot = sign * det(&minor);
    }
    let g = normal.iter().fold(0, |g, &x| gcd(g, x));
    for x in normal.iter_mut() {
        *x /= g;
    }
    let b = -normal
        .iter()
        .zip(&points[0])
        .map(|(a, &x)| a * x as i128)
        .sum::<i128>();
    (normal, b)
}

fn det(m: &[Vec<i128>]) -> i128 {
    match m.len() {
        0 => 1,
        1 => m[0][0],
        2 => m[0][0] * m[1][1] - m[0][1] * m[1][0],
        n => (0..n)
            .map(|c| {
                let minor: Vec<Vec<i128>> = m[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|(j, _)| *j != c).map(|(_, v)| *v).collect())
                    .collect();
                let sign = if c % 2 == 0 { 1 } else { -1 };
                sign * m[0][c] * det(&minor)
            })
            .sum(),
    }
}

struct Facet {
    normal: Vec<i128>,
    b: i128,
    /// Indices of processed points lying on the hyperplane.
    on: BTreeSet<usize>,
}

impl Facet {
    fn eval(&self, p: &[i64]) -> i128 {
        self.normal.iter().zip(p).map(|(a, &x)| a * x as i128).sum::<i128>() + self.b
    }
}

/// Incremental beneath-beyond construction in exact integer arithmetic.
struct HullBuilder {
    dims: usize,
    pts: Vec<Vec<i64>>,
    processed: Vec<usize>,
    facets: Vec<Facet>,
    /// `(n + 1)` times an interior point.
    center: Vec<i128>,
}

impl HullBuilder {
    fn run(dims: usize, pts: Vec<Vec<i64>>) -> Result<LatticePolytope> {
        let refs: Vec<&Vec<i64>> = pts.iter().collect();
        let simplex = independent_subset(&refs, dims + 1);
        if simplex.len() < dims + 1 {
            return Err(Error::Degenerate(format!(
                "the points span an affine space of dimension {} < {dims}",
                simplex.len().saturating_sub(1)
            )));
        }
        let mut center = vec![0i128; dims];
        for v in &simplex {
            for j in 0..dims {
                center[j] += v[j] as i128;
            }
        }
        let simplex_idx: Vec<usize> = simplex
            .iter()
            .map(|v| pts.iter().position(|p| p == v).expect("simplex drawn from points"))
            .collect();
        let mut hb = HullBuilder {
            dims,
            pts,
            processed: simplex_idx.clone(),
            facets: Vec::new(),
            center,
        };
        for skip in 0..=dims {
            let face: Vec<Vec<i64>> = simplex_idx
                .iter()
                .enumerate()
                .filter(|(k, _)| *k != skip)
                .map(|(_, &i)| hb.pts[i].clone())
                .collect();
            hb.add_facet(&face);
        }
        for i in 0..hb.pts.len() {
            if !simplex_idx.contains(&i) {
                hb.insert(i);
            }
        }
        Ok(hb.finish())
    }

    fn oriented(&self, face: &[Vec<i64>]) -> (Vec<i128>, i128) {
        let (mut normal, mut b) = hyperplane(face);
        let at_center: i128 = normal.iter().zip(&self.center).map(|(a, c)| a * c).sum::<i128>()
            + (self.dims as i128 + 1) * b;
        debug_assert!(at_center != 0);
        if at_center < 0 {
            for x in normal.iter_mut() {
                *x = -*x;
            }
            b = -b;
        }
        (normal, b)
    }

    fn add_facet(&mut self, face: &[Vec<i64>]) {
        let (normal, b) = self.oriented(face);
        if self.facets.iter().any(|f| f.normal == normal && f.b == b) {
            return;
        }
        let mut facet = Facet {
            normal,
            b,
            on: BTreeSet::new(),
        };
        for &i in &self.processed {
            if facet.eval(&self.pts[i]) == 0 {
                facet.on.insert(i);
            }
        }
        self.facets.push(facet);
    }

    fn insert(&mut self, i: usize) {
        let p = self.pts[i].clone();
        let values: Vec<i128> = self.facets.iter().map(|f| f.eval(&p)).collect();
        if values.iter().all(|&v| v > 0) {
            return;
        }
        let visible: Vec<usize> = (0..self.facets.len()).filter(|&k| values[k] < 0).collect();
        self.processed.push(i);
        if visible.is_empty() {
            for (k, f) in self.facets.iter_mut().enumerate() {
                if values[k] == 0 {
                    f.on.insert(i);
                }
            }
            return;
        }
        let mut new_faces: Vec<Vec<Vec<i64>>> = Vec::new();
        for &v in &visible {
            for k in 0..self.facets.len() {
                if values[k] < 0 {
                    continue;
                }
                let shared: Vec<&Vec<i64>> = self.facets[v]
                    .on
                    .intersection(&self.facets[k].on)
                    .map(|&j| &self.pts[j])
                    .collect();
                if shared.len() + 1 < self.dims || affine_rank(&shared) + 2 != self.dims {
                    continue;
                }
                let mut face = independent_subset(&shared, self.dims - 1);
                face.push(p.clone());
                new_faces.push(face);
            }
        }
        let mut k = 0;
        self.facets.retain(|_| {
            let keep = values[k] >= 0;
            k += 1;
            keep
        });
        for f in self.facets.iter_mut() {
            if f.eval(&p) == 0 {
                f.on.insert(i);
            }
        }
        for face in new_faces {
            self.add_facet(&face);
        }
    }

    fn finish(self) -> LatticePolytope {
        let dims = self.dims;
        let mut facets: Vec<AffineFunctional> = self
            .facets
            .iter()
            .map(|f| {
                AffineFunctional::new(
                    f.normal.iter().map(|&x| x as i64).collect(),
                    f.b as i64,
                )
            })
            .collect();
        facets.sort();
        facets.dedup();
        let mut vertices: Vec<Vec<i64>> = self
            .processed
            .iter()
            .map(|&i| self.pts[i].clone())
            .filter(|p| {
                let tight: Vec<Vec<i128>> = self
                    .facets
                    .iter()
                    .filter(|f| f.eval(p) == 0)
                    .map(|f| f.normal.clone())
                    .collect();
                rank(&tight) == dims
            })
            .collect();
        vertices.sort();
        vertices.dedup();
        LatticePolytope {
            dims,
            vertices,
            facets,
        }
    }
}
