#![allow(dead_code)]

use moment_hyp::state::{Tensor3, Vec3};
use moment_hyp::{mod13, GradState, ModState, Rational, Scalar};
use nalgebra::{DMatrix, SymmetricEigen};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn q(n: i64, d: i64) -> Rational {
    Rational::from_ratio(n, d)
}

/// `LLᵀ + cI` with `L` uniform in `[−1, 1]`.
pub fn random_spd(rng: &mut ChaCha8Rng, c: f64) -> Tensor3<f64> {
    let l: [[f64; 3]; 3] = std::array::from_fn(|_| std::array::from_fn(|_| rng.gen_range(-1.0..1.0)));
    std::array::from_fn(|i| {
        std::array::from_fn(|j| (0..3).map(|k| l[i][k] * l[j][k]).sum::<f64>() + if i == j { c } else { 0.0 })
    })
}

pub fn random_vec(rng: &mut ChaCha8Rng, r: f64) -> Vec3<f64> {
    std::array::from_fn(|_| rng.gen_range(-r..r))
}

/// Random modified-system state whose `η₂` equals `eta2`.
pub fn random_mod_state(rng: &mut ChaCha8Rng, eta2: f64) -> ModState<f64> {
    let theta = random_spd(rng, 0.3);
    let rho = rng.gen_range(0.5..2.0);
    let u = random_vec(rng, 1.0);
    let v = random_vec(rng, 1.0);
    let base = ModState::new(rho, u, theta, v).unwrap();
    let e = mod13::eta_invariants(&base).unwrap().eta2;
    let t = if e > 0.0 { (eta2 / e).sqrt() } else { 0.0 };
    ModState::new(rho, u, theta, v.map(|x| x * t)).unwrap()
}

pub fn random_grad_state(rng: &mut ChaCha8Rng) -> GradState<f64> {
    let theta = random_spd(rng, 0.3);
    GradState::new(rng.gen_range(0.5..2.0), random_vec(rng, 1.0), theta, random_vec(rng, 0.5)).unwrap()
}

/// Small random rational with denominator up to `den`.
pub fn random_q(rng: &mut ChaCha8Rng, num: i64, den: i64) -> Rational {
    q(rng.gen_range(-num..=num), rng.gen_range(1..=den))
}

/// Diagonally dominant symmetric rational tensor, hence SPD.
pub fn random_spd_q(rng: &mut ChaCha8Rng) -> Tensor3<Rational> {
    let mut t: Tensor3<Rational> = std::array::from_fn(|_| std::array::from_fn(|_| q(0, 1)));
    for i in 0..3 {
        for j in i + 1..3 {
            let v = random_q(rng, 3, 9);
            t[i][j] = v.clone();
            t[j][i] = v;
        }
    }
    for i in 0..3 {
        let off = (0..3).filter(|&j| j != i).fold(q(0, 1), |acc, j| acc + num_traits::Signed::abs(&t[i][j]));
        t[i][i] = off + q(rng.gen_range(1..=20), rng.gen_range(1..=4));
    }
    t
}

/// Probabilists' Gauss–Hermite rule (weight `e^{−x²/2}/√(2π)`) by Golub–Welsch.
pub fn gauss_hermite(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut j = DMatrix::zeros(n, n);
    for k in 1..n {
        let b = (k as f64).sqrt();
        j[(k, k - 1)] = b;
        j[(k - 1, k)] = b;
    }
    let eig = SymmetricEigen::new(j);
    let mut pairs: Vec<(f64, f64)> =
        (0..n).map(|k| (eig.eigenvalues[k], eig.eigenvectors[(0, k)].powi(2))).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs.into_iter().unzip()
}

/// Tensor-product nodes for `N(0, Θ)`: returns `(C, weight)` pairs.
pub fn gaussian_nodes(theta: &Tensor3<f64>, n: usize) -> Vec<([f64; 3], f64)> {
    let (x, w) = gauss_hermite(n);
    let m = nalgebra::Matrix3::from_fn(|i, j| theta[i][j]);
    let l = m.cholesky().expect("SPD").l();
    let mut out = Vec::with_capacity(n * n * n);
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let z = nalgebra::Vector3::new(x[a], x[b], x[c]);
                let v = l * z;
                out.push(([v[0], v[1], v[2]], w[a] * w[b] * w[c]));
            }
        }
    }
    out
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

pub fn to_q<T: Scalar>(x: f64) -> T {
    T::from_float(x)
}

/// Rational state with `√θ₁₁` rational and `s₁ = e·ρ·√θ₁₁`, so `√η₁ = |e|`.
pub fn rational_state(r: &mut ChaCha8Rng, e: Rational, s_parallel: bool, eta2_free: bool) -> ModState<Rational> {
    loop {
        let mut th = random_spd_q(r);
        let root = [q(3, 1), q(4, 1), q(7, 2), q(9, 2)][r.gen_range(0..4)].clone();
        th[0][0] = &root * &root;
        let rho = q(r.gen_range(1..=6), r.gen_range(1..=3));
        let u = [random_q(r, 5, 3), random_q(r, 5, 3), random_q(r, 5, 3)];
        let s = if s_parallel {
            // s = kΘe₁ with k = eρ/√θ₁₁
            let k = &e * &rho / &root;
            [&k * &th[0][0], &k * &th[0][1], &k * &th[0][2]]
        } else {
            let s1 = &e * &rho * &root;
            let (s2, s3) = if eta2_free { (random_q(r, 3, 5), random_q(r, 3, 5)) } else { (q(0, 1), q(0, 1)) };
            [s1, s2, s3]
        };
        if let Ok(st) = ModState::new(rho, u, th, s) {
            return st;
        }
    }
}
