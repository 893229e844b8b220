mod common;

use common::{q, rng};
use moment_hyp::mod13::{factor_a, factor_b};
use moment_hyp::poly::resultant;
use moment_hyp::region::*;
use moment_hyp::Rational;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::Rng;

fn f(x: &Rational) -> f64 {
    x.to_f64().unwrap()
}

#[test]
fn max_imag_examples() {
    assert_eq!(max_imag(0.0, 0.0).unwrap(), 0.0);
    assert!(max_imag(0.05, 0.05).unwrap() <= DEFAULT_IMAG_TOL);
    assert!(max_imag(0.05, 5.0).unwrap() > 1e-3);
    assert!(max_imag(0.06, 0.05).is_err());
    assert!(max_imag(-0.01, 0.05).is_err());
}

#[test]
fn multiplicity_resultant_vanishes_on_edges() {
    for eta in [0.01, 0.05, 0.2] {
        assert_eq!(multiplicity_resultant(eta, eta).unwrap(), 0.0);
        assert_eq!(multiplicity_resultant(0.0, eta).unwrap(), 0.0);
        let e = Rational::from_float(eta.sqrt()).unwrap();
        let eta_q = &e * &e;
        assert!(multiplicity_resultant_exact(&e, &eta_q).unwrap().is_zero());
        assert!(multiplicity_resultant_exact(&q(0, 1), &eta_q).unwrap().is_zero());
    }
}

#[test]
fn r_constant_and_sign() {
    assert_eq!(r_eta(&q(0, 1), &q(0, 1)), q(-3277351494140625, 1));
    let n = 120;
    for i in 0..=n {
        for j in i..=n {
            let (e1, e2) = (0.095 * i as f64 / n as f64, 0.095 * j as f64 / n as f64);
            assert!(r_eta(&e1, &e2) < 0.0, "r({e1}, {e2}) = {}", r_eta(&e1, &e2));
        }
    }
}

#[test]
fn resultant_identity_exact() {
    let mut r = rng(71);
    for _ in 0..20 {
        let e = q(r.gen_range(-40..=40), r.gen_range(1..=60));
        let eta2 = &e * &e + q(r.gen_range(0..=30), r.gen_range(1..=90));
        let lhs = resultant(&factor_a(&e, &eta2), &factor_b(&e, &eta2)).unwrap();
        assert_eq!(lhs, factor_resultant_closed_form(&e, &eta2), "e = {e}, η₂ = {eta2}");
    }
}

#[test]
fn multiplicity_resultant_dual_mode() {
    let mut r = rng(72);
    let mut checked = 0;
    while checked < 10 {
        let e = q(r.gen_range(1..=30), r.gen_range(10..=100));
        let eta2 = &e * &e + q(r.gen_range(1..=30), r.gen_range(100..=400));
        let (eta1_f, eta2_f) = (f(&(&e * &e)), f(&eta2));
        if eta2_f > 0.3 {
            continue;
        }
        let exact = multiplicity_resultant_exact(&e, &eta2).unwrap();
        let float = multiplicity_resultant(eta1_f, eta2_f).unwrap();
        let rel = ((float - f(&exact)) / f(&exact)).abs();
        assert!(rel < 1e-6, "({eta1_f}, {eta2_f}): float {float} exact {}", f(&exact));
        checked += 1;
    }
}

#[test]
fn edge_resultants_positive_below_threshold() {
    assert!(edge_q_resultant(&0.05).unwrap() > 0.0);
    assert!(edge_qtilde_resultant(&0.05f64.sqrt()).unwrap() > 0.0);
    // exact sign at the same points
    assert!(edge_q_resultant(&q(1, 20)).unwrap().is_positive());
    let e = q(2236, 10000);
    assert!(edge_qtilde_resultant(&e).unwrap().is_positive());
}

#[test]
fn scan_small_eta2_hyperbolic() {
    let grid = scan_grid(0.15, 0.15, 200, 200, &ScanOptions::default()).unwrap();
    assert_eq!(grid.samples.len(), 200 * 201 / 2);
    let mut outside = 0;
    for gs in &grid.samples {
        let s = &gs.sample;
        assert!(s.eta1 <= s.eta2 && s.max_imag >= 0.0);
        if s.hyperbolic {
            assert!(s.max_imag <= DEFAULT_IMAG_TOL);
        } else {
            outside += 1;
        }
        if s.eta2 < 0.09 {
            assert!(s.hyperbolic, "({}, {}) not hyperbolic", s.eta1, s.eta2);
        }
    }
    assert!(outside > 0);
    // keyed by grid index
    assert!(grid.samples.windows(2).all(|w| (w[0].i1, w[0].i2) < (w[1].i1, w[1].i2)));
}

#[test]
fn scan_single_point() {
    let grid = scan_grid(0.15, 0.15, 1, 1, &ScanOptions::default()).unwrap();
    assert_eq!(grid.samples.len(), 1);
    let s = &grid.samples[0].sample;
    assert_eq!((s.eta1, s.eta2), (0.0, 0.0));
    assert!(s.hyperbolic);
    assert_eq!(candidate(0.0, 0.0), Candidate::Origin);
    assert!(scan_grid(0.15, 0.15, 0, 3, &ScanOptions::default()).is_err());
}

#[test]
fn scan_is_deterministic() {
    let opts = ScanOptions::default();
    let a = scan_grid(0.12, 0.15, 23, 31, &opts).unwrap();
    let b = scan_grid(0.12, 0.15, 23, 31, &opts).unwrap();
    assert_eq!(a.samples, b.samples);
}

#[test]
fn diagonal_boundary_matches_edge_bisection() {
    let n = 400;
    let opts = ScanOptions::default();
    let step = 0.5 / (n - 1) as f64;
    let first = (0..n)
        .map(|i| step * i as f64)
        .find(|&eta| !sample(eta, eta, &opts).unwrap().hyperbolic)
        .expect("diagonal leaves the region below 0.5");
    // bisection on the edge curve res(q̃, q̃') between the last hyperbolic and first non-hyperbolic point
    let (mut lo, mut hi) = (first - step, first);
    let g = |eta: f64| edge_qtilde_resultant(&eta.sqrt()).unwrap();
    let (glo, ghi) = (g(lo), g(hi));
    if glo.signum() != ghi.signum() {
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if g(mid).signum() == glo.signum() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        assert!(hi >= first - step && hi <= first);
    } else {
        panic!("edge resultant keeps its sign across the diagonal exit at {first}");
    }
    // 𝕴 along the diagonal switches on at the same place
    let (mut a, mut b) = (first - step, first);
    for _ in 0..60 {
        let mid = 0.5 * (a + b);
        if max_imag(mid, mid).unwrap() > DEFAULT_IMAG_TOL {
            b = mid;
        } else {
            a = mid;
        }
    }
    assert!((b - hi).abs() < 1e-6, "𝕴 switches on at {b}, edge resultant changes sign at {hi}");
}

#[test]
fn boundary_lies_on_resultant_zero_set() {
    let cell = 0.15 / 399.0;
    for k in 1..10 {
        let eta1 = 0.01 * k as f64;
        let Some(b) = boundary_on_line(eta1, 0.3, DEFAULT_IMAG_TOL, 1e-6).unwrap() else { continue };
        let below = multiplicity_resultant(eta1, b - cell).unwrap();
        let above = multiplicity_resultant(eta1, b + cell).unwrap();
        assert!(below.signum() != above.signum(), "η₁ = {eta1}: ℛ {below} / {above} around {b}");
    }
}

#[test]
fn delta_estimate() {
    let d = estimate_delta_max(DEFAULT_BISECTION_TOL).unwrap();
    assert!((0.090..=0.100).contains(&d.delta), "δ̃ = {}", d.delta);
    assert!(d.s1_zero_edge_positive && d.diagonal_edge_positive);
    let half = estimate_delta_max(DEFAULT_BISECTION_TOL / 2.0).unwrap();
    assert!((d.delta - half.delta).abs() < 1e-3);
    assert!(estimate_delta_max(0.0).is_err());
}

#[test]
fn ns_fourier_examples() {
    let zero = [[0.0; 3]; 3];
    let (th, s) = ns_fourier_first_order(1.0, 1.0, 1.0, &zero, &[1.0, 0.0, 0.0]).unwrap();
    assert_eq!(s, [-3.75, 0.0, 0.0]);
    assert_eq!(th, zero);

    let id = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    let (th, _) = ns_fourier_first_order(1.3, 0.7, 2.0, &id, &[0.0; 3]).unwrap();
    assert!(th.iter().flatten().all(|x| x.abs() < 1e-15));

    let mut shear = zero;
    shear[1][0] = 1.0; // ∂v₁/∂x₂
    let (mu, rho) = (0.8, 1.6);
    let (th, _) = ns_fourier_first_order(mu, rho, 1.0, &shear, &[0.0; 3]).unwrap();
    assert!((th[0][1] + mu / rho).abs() < 1e-15 && (th[1][0] + mu / rho).abs() < 1e-15);
    assert_eq!(th[0][0] + th[1][1] + th[2][2], 0.0);
    assert!(ns_fourier_first_order(0.0, 1.0, 1.0, &zero, &[0.0; 3]).is_err());
}

#[test]
fn criterion_examples() {
    let c = c_hyp(0.095);
    assert!((0.064..=0.067).contains(&c), "C_hyp = {c}");
    assert!((c - 0.0656).abs() < 1e-4);
    let base = CriterionInput { grad_theta_norm: 0.0, theta: 1.0, l_mfp: 1.0, delta_max: 0.095 };
    assert!(hyperbolicity_criterion(&base).unwrap().satisfied);
    let steep = CriterionInput { grad_theta_norm: 0.1, ..base.clone() };
    assert!(!hyperbolicity_criterion(&steep).unwrap().satisfied);
    let bad = CriterionInput { theta: 0.0, ..base };
    assert!(hyperbolicity_criterion(&bad).is_err());
}
