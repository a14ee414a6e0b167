use std::f64::consts::PI;

use num_complex::Complex64;

use bohr_harmonic::bohr::PrimeSet;
use bohr_harmonic::compare::{bernstein_check, ratio_table, shift_check, CompareConfig, CompareFamily};
use bohr_harmonic::dirichlet::families::{log_reciprocal, random, random_nonneg};
use bohr_harmonic::dirichlet::{
    bloch_norm, fefferman_s, fefferman_s_squared_at, helson_check, hq_norm, littlewood_paley_check,
    DirichletPolynomial, HinfConfig,
};
use bohr_harmonic::lift::{build_lift, verify_isometry};
use bohr_harmonic::polytope::AffineFunctional;
use bohr_harmonic::randomseries::{bmoa_random_experiment, estimate_x, kahane_experiment, prime_sum, XConfig};
use bohr_harmonic::rng::Stream;
use bohr_harmonic::torus::{
    dirichlet_kernel, kernel_scaling_experiment, multivar_sup_check, norm, refor_growth, Quadrature, TorusPolynomial,
};
use bohr_harmonic::transference::{
    check_contraction, choose_q, verify_separation, CompletelyMultiplicative, DEFAULT_Q_CAP,
};
use bohr_harmonic::DEFAULT_BUDGET;

fn report(id: u32, name: &str, pass: bool, detail: String) {
    println!("{} criterion {id:>2} {name}: {detail}", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "criterion {id} ({name}) failed: {detail}");
}

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

#[test]
fn c01_parseval_exactness() {
    let mut worst = 0.0f64;
    for seed in 0..200u64 {
        let dims = 1 + (seed % 3) as usize;
        let degree = 1 + (seed % 8) as i64;
        let f = TorusPolynomial::random(dims, degree, 1 + (seed % 12) as usize, false, seed).unwrap();
        let grid = norm(&f, 2.0, &Quadrature::grid(32)).unwrap().value;
        worst = worst.max((grid - f.coeff_l2_sq().sqrt()).abs());
    }
    report(1, "grid L2 equals coefficient l2", worst < 1e-12, format!("max deviation {worst:.3e} over 200 polynomials"));
}

#[test]
fn c02_riesz_projection_desk_check() {
    let q = Quadrature::grid(4096);
    let mut worst = 0.0f64;
    for seed in 0..200u64 {
        let f = TorusPolynomial::random(1, 1 + (seed % 16) as i64, 1 + (seed % 20) as usize, false, 1000 + seed).unwrap();
        for p in [4.0 / 3.0, 2.0, 4.0] {
            let bound = 1.0 / (PI / p).sin();
            let r = norm(&f.riesz_project(), p, &q).unwrap().value / norm(&f, p, &q).unwrap().value;
            worst = worst.max(r / bound);
        }
    }
    report(2, "projection ratio against 1/sin(pi/p)", worst <= 1.0 + 1e-6, format!("max ratio/bound {worst:.6}"));
}

#[test]
fn c03_kernel_scaling() {
    let d11 = dirichlet_kernel(1.0, 1, DEFAULT_BUDGET).unwrap();
    let anchor = norm(&d11, 1.0, &Quadrature::grid(1 << 16)).unwrap().value;
    let want = 1.0 / 3.0 + 2.0 * 3f64.sqrt() / PI;
    let s2 = kernel_scaling_experiment(2, &[4.0, 8.0, 16.0, 32.0], None, DEFAULT_BUDGET).unwrap().slope;
    let s3 = kernel_scaling_experiment(3, &[4.0, 8.0, 16.0], None, DEFAULT_BUDGET * 10).unwrap().slope;
    let pass = (anchor - want).abs() < 1e-6 && (0.35..=0.65).contains(&s2) && (0.8..=1.2).contains(&s3);
    report(3, "ball kernel L1 growth", pass, format!("anchor err {:.2e}, slope n=2 {s2:.4}, slope n=3 {s3:.4}", (anchor - want).abs()));
}

#[test]
fn c04_lift_isometry() {
    let mut worst2 = 0.0f64;
    let mut worst1 = 0.0f64;
    let mut worst3 = 0.0f64;
    for seed in 0..50u64 {
        let n = 1 + (seed % 2) as usize;
        let m = 1 + ((seed / 2) % 2) as usize;
        let f = TorusPolynomial::random(n, 3, 6, false, 77 + seed).unwrap();
        let mut s = Stream::new(seed, 4);
        let funcs: Vec<AffineFunctional> = (0..m)
            .map(|_| AffineFunctional::new((0..n).map(|_| s.below(5) as i64 - 2).collect(), s.below(4) as i64))
            .collect();
        let g = build_lift(&f, &funcs).unwrap();
        let e = verify_isometry(&f, &g, 2.0, &Quadrature::even_exact()).unwrap();
        worst2 = worst2.max(e.difference);
        let grid = if n + m >= 4 { 32 } else { 64 };
        worst1 = worst1.max(verify_isometry(&f, &g, 1.0, &Quadrature::grid(grid)).unwrap().difference);
        let mc = verify_isometry(&f, &g, 3.0, &Quadrature::monte_carlo(20_000, seed)).unwrap();
        worst3 = worst3.max(mc.difference / mc.stderr);
    }
    let z = TorusPolynomial::from_terms(1, [(vec![0], one()), (vec![1], one())]).unwrap();
    let zl = build_lift(&z, &[AffineFunctional::new(vec![1], 0)]).unwrap();
    let anchor = verify_isometry(&z, &zl, 1.0, &Quadrature::grid(1024)).unwrap();
    let anchor_err = (anchor.f_norm.value - 4.0 / PI).abs().max((anchor.g_norm.value - 4.0 / PI).abs());
    let pass = worst2 <= 1e-12 && worst1 <= 1e-3 && worst3 <= 3.0 && anchor_err <= 1e-5;
    report(
        4,
        "norms preserved under lift",
        pass,
        format!("p=2 {worst2:.2e}, p=1 {worst1:.2e}, p=3 {worst3:.2} stderr, anchor {anchor_err:.2e}"),
    );
}

#[test]
fn c05_tensor_kernel_growth() {
    let rejected = refor_growth(1.5, 3, &[4.0, 8.0]).is_err();
    let g = refor_growth(1.5, 4, &[4.0, 8.0, 16.0]).unwrap();
    let pass = rejected && (g.exponent - g.target).abs() <= 0.2;
    report(5, "dimension precondition and growth exponent", pass, format!("n=3 rejected: {rejected}, exponent {:.4} vs {:.4}", g.exponent, g.target));
}

#[test]
fn c06_h4_exactness() {
    let f = DirichletPolynomial::from_real([(2, 1.0), (3, 1.0)]).unwrap();
    let exact = hq_norm(&f, 4.0, &Quadrature::even_exact()).unwrap().value.powi(4);
    let mc = hq_norm(&f, 4.0, &Quadrature::monte_carlo(200_000, 3)).unwrap();
    let mc_ok = (mc.value - 6f64.powf(0.25)).abs() <= 3.0 * mc.stderr;
    let mut mismatches = 0;
    for seed in 0..50u64 {
        let g = random(2 + seed % 40, seed).unwrap();
        let a = hq_norm(&g, 4.0, &Quadrature::even_exact()).unwrap().value;
        let b = norm(&g.bohr_lift().unwrap(), 4.0, &Quadrature::even_exact()).unwrap().value;
        if a != b {
            mismatches += 1;
        }
    }
    let pass = (exact - 6.0).abs() < 1e-12 && mc_ok && mismatches == 0;
    report(6, "even-exact H4", pass, format!("||f||_4^4 = {exact}, mc within 3 stderr: {mc_ok}, path mismatches {mismatches}/50"));
}

#[test]
fn c07_littlewood_paley() {
    let mut worst = 0.0f64;
    for seed in 0..20u64 {
        let f = random(2 + seed % 19, 500 + seed).unwrap();
        let r = littlewood_paley_check(&f, 100_000, seed).unwrap();
        worst = worst.max(r.relative_error());
    }
    report(7, "Littlewood-Paley identity", worst < 0.05, format!("max relative error {:.4}", worst));
}

#[test]
fn c08_fefferman_exact_sup() {
    let f = DirichletPolynomial::from_real([(3, 1.0), (5, 1.0)]).unwrap();
    let s2 = fefferman_s(&f).unwrap().value.powi(2);
    let two = DirichletPolynomial::from_real([(2, 1.0)]).unwrap();
    let mut two_inert = fefferman_s(&two).unwrap().value == 0.0;
    let mut worst = 0.0f64;
    let mut dominated = true;
    for seed in 0..50u64 {
        let g = random_nonneg(5 + seed % 40, seed).unwrap();
        let exact = fefferman_s(&g).unwrap().value.powi(2);
        let u_max = (g.length() as f64).ln();
        let mut brute = 0.0f64;
        for i in 0..10_000 {
            let u = 1.0 + (u_max - 1.0) * i as f64 / 9_999.0;
            brute = brute.max(fefferman_s_squared_at(&g, u.exp()).unwrap());
        }
        dominated &= brute <= exact * (1.0 + 1e-12);
        worst = worst.max((exact - brute).abs() / exact.max(1.0));
        let plus2 = DirichletPolynomial::new(g.terms().iter().copied().chain([(2, one())])).unwrap();
        for x in [std::f64::consts::E, 3.0, 7.5, 20.0] {
            two_inert &= fefferman_s_squared_at(&plus2, x).unwrap() == fefferman_s_squared_at(&g, x).unwrap();
        }
    }
    let pass = (s2 - 4.0).abs() < 1e-12 && two_inert && dominated && worst <= 1e-12;
    report(
        8,
        "exact breakpoint supremum",
        pass,
        format!("S^2(3,5) = {s2}, 2^-s inert: {two_inert}, grid never exceeds exact: {dominated}, max gap to grid {worst:.3e}"),
    );
}

#[test]
fn c09_bloch_anchors() {
    let mut worst = 0.0f64;
    for n in [2u64, 3, 10, 1000] {
        let f = DirichletPolynomial::from_real([(n, 1.0)]).unwrap();
        worst = worst.max((bloch_norm(&f, 256, 1.0).unwrap().value - (-1.0f64).exp()).abs());
    }
    let b: Vec<f64> = [10u64, 1000, 100_000]
        .iter()
        .map(|&n| bloch_norm(&log_reciprocal(n).unwrap(), 256, 1.0).unwrap().value)
        .collect();
    let pass = worst <= 1e-9 && b.iter().all(|&v| v <= 1.0);
    report(9, "Bloch anchors", pass, format!("max |B - 1/e| {worst:.2e}, log-reciprocal B {b:?}"));
}

#[test]
fn c10_ratio_growth() {
    let ns = [1_000u64, 100_000, 10_000_000];
    let lr = ratio_table(CompareFamily::LogReciprocal, &ns, &CompareConfig { bmoa_max_terms: 0, ..CompareConfig::default() }).unwrap();
    let diffs: Vec<f64> = lr.iter().map(|r| r.sup_over_bloch - r.log_log_n).collect();
    let spread = diffs.iter().cloned().fold(f64::MIN, f64::max) - diffs.iter().cloned().fold(f64::MAX, f64::min);
    let de = ratio_table(CompareFamily::DoubleExp, &ns, &CompareConfig::default()).unwrap();
    let band: Vec<f64> = de.iter().map(|r| r.bmoa.unwrap().powi(2) / r.log_log_n).collect();
    let pass = spread < 1.5 && band.iter().all(|&v| (0.05..=20.0).contains(&v));
    report(10, "norm ratio growth", pass, format!("ratio - log log N {diffs:?} (spread {spread:.4}), BMOA^2 / log log N {band:?}"));
}

#[test]
fn c11_bernstein_and_shift() {
    let cfg = HinfConfig { samples: 4097, ..HinfConfig::default() };
    let mut violations = 0;
    for seed in 0..100u64 {
        let f = random(50, 9000 + seed).unwrap();
        violations += usize::from(!bernstein_check(&f, &cfg).unwrap().holds());
        for c in [0.25, 0.5, 0.75] {
            violations += usize::from(!shift_check(&f, c, &cfg).unwrap().holds);
        }
    }
    let single = DirichletPolynomial::from_real([(50, 1.0)]).unwrap();
    let eq = bernstein_check(&single, &cfg).unwrap();
    let eq_err = (eq.derivative_lower - 50f64.ln()).abs();
    let pass = violations == 0 && eq_err <= 1e-12 && (eq.sup_upper - 1.0).abs() <= 1e-12;
    report(11, "Bernstein and shift suites", pass, format!("{violations} violations, equality case error {eq_err:.2e}"));
}

#[test]
fn c12_multivariate_sup() {
    let mut violations = 0;
    let mut worst = 0.0f64;
    for seed in 0..50u64 {
        let f = TorusPolynomial::random(2, 4, 3 + (seed % 10) as usize, true, 300 + seed).unwrap();
        let r = multivar_sup_check(&f, 8, 64, DEFAULT_BUDGET).unwrap();
        violations += usize::from(!r.holds);
        worst = worst.max(r.ratio);
    }
    report(12, "sup against L^(n log d) with constant 2 pi^(1/log 2)", violations == 0, format!("{violations} violations, max ratio {worst:.4}"));
}

#[test]
fn c13_transference_certificate() {
    let id = CompletelyMultiplicative::Identity;
    let plan = choose_q(&id, 100.0, DEFAULT_Q_CAP, DEFAULT_BUDGET).unwrap();
    let sep = verify_separation(&plan, 100_000).unwrap();
    let growth: Vec<f64> = [10.0f64, 100.0, 1000.0]
        .iter()
        .map(|&n| choose_q(&id, n, DEFAULT_Q_CAP, DEFAULT_BUDGET).unwrap().q as f64 / (n * n.ln()))
        .collect();
    let mut worst = 0.0f64;
    for seed in 0..100u64 {
        let f = random(101 + seed % 100, 4000 + seed).unwrap();
        worst = worst.max(check_contraction(&f, &plan, 4.0).unwrap().ratio);
    }
    let pass = sep.violations.is_empty() && growth.iter().all(|&g| g < 5.0) && worst <= 2f64.sqrt();
    report(
        13,
        "transference certificate",
        pass,
        format!("Q = {}, {} violations up to 1e5, Q/(N log N) {growth:?}, max contraction {worst:.4}", plan.q, sep.violations.len()),
    );
}

#[test]
fn c14_kahane_ratio() {
    let mut ratios = Vec::new();
    for k in [50usize, 200] {
        let f = prime_sum(k).unwrap();
        let rows = kahane_experiment(&PrimeSet::All, &f, &[f.length()], 50, 0, DEFAULT_BUDGET).unwrap();
        ratios.push(rows[0].ratio);
    }
    let pass = ratios.iter().all(|&r| r < 10.0) && ratios[1] <= 2.0 * ratios[0] && ratios[0] <= 2.0 * ratios[1];
    report(14, "Kahane ratio", pass, format!("ratios for K = 50, 200: {ratios:?}"));
}

#[test]
fn c15_random_bmoa_experiment() {
    let p0 = PrimeSet::explicit(vec![2, 3]).unwrap();
    let a = |n: u64| if n < 2 { 0.0 } else { 1.0 / ((n as f64).sqrt() * (n as f64).ln().powi(2)) };
    let r = bmoa_random_experiment(&p0, a, &[32, 64, 128, 256, 512], 50, 0, &XConfig::default()).unwrap();
    let last = &r.rows[r.rows.len() - 2..];
    let stable = last[1].mean_x_upper <= 2.0 * last[0].mean_x_upper;
    let mut anchor = 0.0f64;
    for n in [2u64, 3, 10] {
        let l = (n as f64).ln();
        let want = (1.0 - (1.0 + 2.0 * l) * (-2.0 * l).exp()) / 4.0;
        let x = estimate_x(&DirichletPolynomial::from_real([(n, 1.0)]).unwrap(), 0, &XConfig::default()).unwrap();
        anchor = anchor.max((x.upper - want).abs());
    }
    let pass = r.in_hypothesis && r.durendir_far.is_finite() && stable && anchor <= 1e-6;
    report(
        15,
        "random BMOA experiment",
        pass,
        format!(
            "weighted sum {:.6} (converging {}), mean X {:.5} -> {:.5}, anchor error {anchor:.2e}",
            r.durendir_far, r.in_hypothesis, last[0].mean_x_upper, last[1].mean_x_upper
        ),
    );
}

#[test]
fn c16_helson() {
    let mut violations = 0;
    for seed in 0..50u64 {
        let f = random(2 + seed % 29, 700 + seed).unwrap();
        violations += usize::from(!helson_check(&f, 50_000, seed).unwrap().holds);
    }
    let g = DirichletPolynomial::from_real([(2, 1.0), (3, 1.0)]).unwrap();
    let h = helson_check(&g, 200_000, 1).unwrap();
    let anchor = (h.lhs.value - 4.0 / PI).abs() <= 3.0 * h.lhs.stderr && (h.rhs - 1.0).abs() < 1e-15;
    report(16, "Helson inequality", violations == 0 && anchor, format!("{violations} violations, ||2^-s + 3^-s||_1 = {:.5} vs rhs {}", h.lhs.value, h.rhs));
}
