use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;
use serde::Serialize;

use super::DirichletPolynomial;
use crate::bohr::is_prime_u64;
use crate::error::{Error, Result};
use crate::numeric::Sum;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriterionResult {
    pub value: f64,
    pub argmax_x: f64,
    pub critical_points: usize,
}

fn nonneg_coeffs(f: &DirichletPolynomial) -> Result<Vec<(u64, f64)>> {
    f.terms()
        .iter()
        .map(|&(n, c)| {
            if c.im != 0.0 || c.re < 0.0 {
                Err(Error::invalid(format!(
                    "coefficient a_{n} = {c} is not a nonnegative real; pass absolute values"
                )))
            } else {
                Ok((n, c.re))
            }
        })
        .collect()
}

/// `S^2(x) = sum_{k >= 1} (sum_{x^k <= n < x^(k+1)} a_n)^2`, directly from the block partition.
pub fn fefferman_s_squared_at(f: &DirichletPolynomial, x: f64) -> Result<f64> {
    let coeffs = nonneg_coeffs(f)?;
    Ok(s_squared_at_log(&coeffs, x.ln()))
}

fn s_squared_at_log(coeffs: &[(u64, f64)], u: f64) -> f64 {
    let mut blocks: Vec<Sum> = Vec::new();
    for &(n, a) in coeffs {
        let k = ((n as f64).ln() / u).floor() as usize;
        if k == 0 {
            continue;
        }
        if blocks.len() <= k {
            blocks.resize(k + 1, Sum::default());
        }
        blocks[k].add(a);
    }
    blocks.iter().map(|b| b.value() * b.value()).sum()
}

#[derive(PartialEq)]
struct Event {
    u: f64,
    k: usize,
    /// Position in the coefficient list; each `k`-stream walks it downwards.
    idx: usize,
}

impl Eq for Event {}

impl Ord for Event {
    fn cmp(&self, other: &Self) -> Ordering {
        self.u.total_cmp(&other.u).then_with(|| other.k.cmp(&self.k))
    }
}

impl PartialOrd for Event {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// The exact `S = sup_{x >= e} S(x)` for nonnegative coefficients.
///
/// In `u = log x`, index `n` lies in block `k = floor(log n / u)`, so the
/// partition only changes at `u = log(n) / k`. Sweeping `u` downward from
/// `log N` to 1, the pieces `(u_next, u]` are visited in turn and `S^2` is
/// updated incrementally; the best piece is re-evaluated from scratch at an
/// interior point.
pub fn fefferman_s(f: &DirichletPolynomial) -> Result<CriterionResult> {
    let coeffs: Vec<(u64, f64)> = nonneg_coeffs(f)?.into_iter().filter(|t| t.1 > 0.0).collect();
    let logs: Vec<f64> = coeffs.iter().map(|t| (t.0 as f64).ln()).collect();
    let k_max = logs.last().map_or(0, |l| l.floor() as usize);
    // One stream per k, each ordered by decreasing u = log(n)/k.
    let mut heap = BinaryHeap::with_capacity(k_max);
    for k in 1..=k_max {
        if let Some(idx) = logs.len().checked_sub(1) {
            let u = logs[idx] / k as f64;
            if u >= 1.0 {
                heap.push(Event { u, k, idx });
            }
        }
    }
    let mut block_of = vec![0usize; coeffs.len()];
    let mut sums = vec![0.0f64; k_max + 2];
    let mut s2 = 0.0f64;
    let mut best = 0.0f64;
    let mut best_piece: Option<(f64, f64)> = None;
    let mut groups = 0usize;
    let mut pending: Option<f64> = None;
    // Value of the piece ending at the current group is recorded when the next group starts.
    let record = |u_hi: f64, u_lo: f64, s2: f64, best: &mut f64, best_piece: &mut Option<(f64, f64)>| {
        if s2 > *best {
            *best = s2;
            *best_piece = Some((u_lo, u_hi));
        }
    };
    while let Some(ev) = heap.pop() {
        if let Some(u_hi) = pending {
            if ev.u < u_hi * (1.0 - 1e-12) {
                groups += 1;
                record(u_hi, ev.u, s2, &mut best, &mut best_piece);
                pending = None;
            }
        }
        if pending.is_none() {
            pending = Some(ev.u);
        }
        let a = coeffs[ev.idx].1;
        let from = block_of[ev.idx];
        debug_assert_eq!(from + 1, ev.k);
        if from > 0 {
            s2 += (sums[from] - a).powi(2) - sums[from].powi(2);
            sums[from] -= a;
        }
        s2 += (sums[ev.k] + a).powi(2) - sums[ev.k].powi(2);
        sums[ev.k] += a;
        block_of[ev.idx] = ev.k;
        if ev.idx > 0 {
            let u = logs[ev.idx - 1] / ev.k as f64;
            if u >= 1.0 {
                heap.push(Event {
                    u,
                    k: ev.k,
                    idx: ev.idx - 1,
                });
            }
        }
    }
    if let Some(u_hi) = pending {
        groups += 1;
        record(u_hi, 1.0, s2, &mut best, &mut best_piece);
    }
    let Some((lo, hi)) = best_piece else {
        return Ok(CriterionResult {
            value: 0.0,
            argmax_x: std::f64::consts::E,
            critical_points: groups,
        });
    };
    let u = if hi > lo { 0.5 * (lo + hi) } else { hi };
    let exact = s_squared_at_log(&coeffs, u);
    Ok(CriterionResult {
        value: exact.sqrt(),
        argmax_x: u.exp(),
        critical_points: groups,
    })
}

/// `sup_{x >= 2} sum_{x <= n < x^2} a_n` for nonnegative coefficients.
///
/// For `x` between consecutive support points `s_{i-1} < x <= s_i` the window
/// `[x, x^2)` is largest at `x = s_i`, so it suffices to try `x` in the support.
pub fn bloch_criterion(f: &DirichletPolynomial) -> Result<CriterionResult> {
    let coeffs: Vec<(u64, f64)> = nonneg_coeffs(f)?.into_iter().filter(|t| t.0 >= 2).collect();
    let mut best = CriterionResult {
        value: 0.0,
        argmax_x: 2.0,
        critical_points: coeffs.len(),
    };
    let mut end = 0usize;
    let mut window = Sum::default();
    let mut removed = Sum::default();
    for (i, &(lo, _)) in coeffs.iter().enumerate() {
        let sq = lo as u128 * lo as u128;
        while end < coeffs.len() && (coeffs[end].0 as u128) < sq {
            window.add(coeffs[end].1);
            end += 1;
        }
        if i > 0 {
            removed.add(coeffs[i - 1].1);
        }
        let mut v = window;
        v.add(-removed.value());
        let value = v.value();
        if value > best.value {
            best.value = value;
            best.argmax_x = lo as f64;
        }
    }
    Ok(best)
}

/// `fefferman_s` of `sum |a_p| p^-s`; decides BMOA membership for every unimodular twist of the coefficients.
pub fn prime_bmoa_criterion(f: &DirichletPolynomial) -> Result<CriterionResult> {
    if let Some(&(n, _)) = f.terms().iter().find(|t| !is_prime_u64(t.0)) {
        return Err(Error::invalid(format!("index {n} is not prime")));
    }
    fefferman_s(&f.map_coeffs(|_, c| Complex64::new(c.norm(), 0.0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dirichlet::families;
    use crate::rng::Stream;

    fn poly(terms: &[(u64, f64)]) -> DirichletPolynomial {
        DirichletPolynomial::from_real(terms.iter().copied()).unwrap()
    }

    /// Block sums from the definition, with powers of x instead of logarithms.
    fn brute_s2(terms: &[(u64, f64)], x: f64) -> f64 {
        let mut total = 0.0;
        let mut k = 1;
        loop {
            let lo = x.powi(k);
            if lo > terms.iter().map(|t| t.0).max().unwrap_or(0) as f64 {
                break;
            }
            let hi = x.powi(k + 1);
            let block: f64 = terms.iter().filter(|t| (t.0 as f64) >= lo && (t.0 as f64) < hi).map(|t| t.1).sum();
            total += block * block;
            k += 1;
        }
        total
    }

    #[test]
    fn fefferman_examples() {
        let r = fefferman_s(&poly(&[(3, 1.0), (5, 1.0)])).unwrap();
        assert!((r.value * r.value - 4.0).abs() < 1e-12);
        assert_eq!(fefferman_s(&poly(&[(2, 1.0)])).unwrap().value, 0.0);
        assert!((fefferman_s(&poly(&[(3, 1.0)])).unwrap().value - 1.0).abs() < 1e-15);
        // a 2^-s term changes nothing
        let with2 = fefferman_s(&poly(&[(2, 7.0), (3, 1.0), (5, 1.0)])).unwrap();
        assert!((with2.value - 2.0).abs() < 1e-12);
        assert!(fefferman_s(&poly(&[(3, -1.0)])).is_err());
        assert!(fefferman_s(&DirichletPolynomial::new([(3, Complex64::new(0.0, 1.0))]).unwrap()).is_err());
    }

    #[test]
    fn fefferman_value_attained_at_argmax() {
        let mut s = Stream::new(11, 0);
        for _ in 0..20 {
            let terms: Vec<(u64, f64)> = (0..12).map(|_| (2 + s.below(300), s.uniform())).collect();
            let f = poly(&terms);
            let r = fefferman_s(&f).unwrap();
            let at = fefferman_s_squared_at(&f, r.argmax_x).unwrap();
            assert!((at.sqrt() - r.value).abs() < 1e-12);
            assert!(r.argmax_x >= std::f64::consts::E);
        }
    }

    #[test]
    fn fefferman_dominates_brute_force() {
        let mut s = Stream::new(5, 0);
        for _ in 0..20 {
            let terms: Vec<(u64, f64)> = (0..10).map(|_| (2 + s.below(200), s.uniform())).collect();
            let f = poly(&terms);
            let exact = fefferman_s(&f).unwrap().value.powi(2);
            let merged: Vec<(u64, f64)> = f.terms().iter().map(|t| (t.0, t.1.re)).collect();
            let grid = (0..2000)
                .map(|i| (1.0 + 5.0 * i as f64 / 2000.0).exp())
                .map(|x| brute_s2(&merged, x))
                .fold(0.0, f64::max);
            assert!(grid <= exact + 1e-12);
        }
    }

    #[test]
    fn bloch_criterion_examples() {
        let r = bloch_criterion(&poly(&[(3, 1.0), (5, 1.0)])).unwrap();
        assert_eq!(r.value, 2.0);
        assert!(r.argmax_x > 5f64.sqrt() && r.argmax_x <= 3.0);
        assert_eq!(bloch_criterion(&poly(&[(2, 1.0)])).unwrap().value, 1.0);
        assert_eq!(bloch_criterion(&poly(&[(4, 1.0), (17, 1.0)])).unwrap().value, 1.0);
        assert_eq!(bloch_criterion(&poly(&[(1, 3.0)])).unwrap().value, 0.0);
    }

    #[test]
    fn bloch_criterion_matches_fine_grid() {
        let mut s = Stream::new(9, 0);
        for _ in 0..20 {
            let terms: Vec<(u64, f64)> = (0..8).map(|_| (2 + s.below(100), s.uniform())).collect();
            let f = poly(&terms);
            let merged: Vec<(u64, f64)> = f.terms().iter().map(|t| (t.0, t.1.re)).collect();
            let exact = bloch_criterion(&f).unwrap().value;
            let mut grid = 0.0f64;
            for i in 0..=20_000 {
                let x = 2.0 + 100.0 * i as f64 / 20_000.0;
                let v: f64 = merged.iter().filter(|t| t.0 as f64 >= x && (t.0 as f64) < x * x).map(|t| t.1).sum();
                grid = grid.max(v);
            }
            assert!((grid - exact).abs() < 1e-12, "{grid} vs {exact}");
        }
    }

    #[test]
    fn prime_criterion() {
        assert!(prime_bmoa_criterion(&poly(&[(1, 1.0)])).is_err());
        assert!(prime_bmoa_criterion(&poly(&[(4, 1.0)])).is_err());
        let single = prime_bmoa_criterion(&poly(&[(101, -0.5)])).unwrap();
        assert!((single.value - 0.5).abs() < 1e-15);
        let pr = prime_bmoa_criterion(&families::prime_reciprocal(100_000).unwrap()).unwrap();
        assert!(pr.value.is_finite() && pr.value < 2.0);
    }
}
