//! Grad's 13-moment system: coefficient matrices, sources, special states
//! and the non-diagonalizability certificate for Gaussian states.

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::poly::Polynomial;
use crate::rotation;
use crate::scalar::Scalar;
use crate::state::{
    dot, mat_vec, scaled_identity3, theta_col, zeros3, GradState, GradState1D, Tensor3, Vec3,
};

/// Transport coefficients for the relaxation sources.
#[derive(Clone, Debug, PartialEq)]
pub struct SourceParams<T> {
    pub mu: T,
}

impl<T: Scalar> SourceParams<T> {
    pub fn new(mu: T) -> Result<Self> {
        if !mu.gt_zero() {
            return Err(Error::InvalidInput(format!("viscosity must be positive, got {mu}")));
        }
        Ok(Self { mu })
    }

    /// Maxwell molecules: `μ = ρ·l·√(πθ/2)`.
    pub fn from_mean_free_path(rho: f64, theta: f64, l_mfp: f64) -> Result<SourceParams<f64>> {
        if !(l_mfp > 0.0) || !(theta > 0.0) {
            return Err(Error::InvalidInput("mean free path and temperature must be positive".into()));
        }
        SourceParams::new(rho * l_mfp * (std::f64::consts::PI * theta / 2.0).sqrt())
    }
}

/// The 5×5 matrix of the one-dimensional reduction, ordering `(ρ, u₁, θ₁₁, θ₂₂, q₁)`.
pub fn assemble_1d<T: Scalar>(s: &GradState1D<T>) -> Matrix<T> {
    let c = |n: i64, d: i64| T::from_ratio(n, d);
    let (rho, u, t11, t22, q1) = (&s.rho, &s.u1, &s.theta11, &s.theta22, &s.q1);
    let z = T::zero;
    let diff = t11.clone() - t22.clone();
    Matrix::from_rows(vec![
        vec![u.clone(), rho.clone(), z(), z(), z()],
        vec![t11.clone() / rho.clone(), u.clone(), T::one(), z(), z()],
        vec![z(), c(2, 1) * t11.clone(), u.clone(), z(), c(6, 5) / rho.clone()],
        vec![z(), z(), z(), u.clone(), c(2, 5) / rho.clone()],
        vec![
            -c(4, 9) * diff.clone() * diff,
            c(16, 5) * q1.clone(),
            rho.clone() * (c(11, 1) * t11.clone() + c(16, 1) * t22.clone()) / c(18, 1),
            rho.clone() * (c(17, 1) * t11.clone() - c(8, 1) * t22.clone()) / c(9, 1),
            u.clone(),
        ],
    ])
}

/// Closed-form `det(λI − M̂)` as a polynomial in `x = λ − u₁`:
/// `x[x⁴ − (2/45)(101θ₁₁+16θ₂₂)x² − (96/25)(q₁/ρ)x + (1/15)(53θ₁₁² − 16θ₁₁θ₂₂ + 8θ₂₂²)]`.
pub fn charpoly_1d_shifted<T: Scalar>(s: &GradState1D<T>) -> Polynomial<T> {
    let c = |n: i64, d: i64| T::from_ratio(n, d);
    let (t11, t22) = (s.theta11.clone(), s.theta22.clone());
    Polynomial::new(vec![
        T::zero(),
        c(1, 15) * (c(53, 1) * t11.clone() * t11.clone() - c(16, 1) * t11.clone() * t22.clone()
            + c(8, 1) * t22.clone() * t22.clone()),
        -c(96, 25) * s.q1.clone() / s.rho.clone(),
        -c(2, 45) * (c(101, 1) * t11 + c(16, 1) * t22),
        T::zero(),
        T::one(),
    ])
}

/// The same polynomial in `λ̂ = (λ − u₁)/√θ`, normalised to be monic.
/// Needs `√θ` in the scalar type.
pub fn charpoly_1d_reference<T: Scalar>(s: &GradState1D<T>) -> Result<Polynomial<T>> {
    let theta = s.temperature();
    let root = theta
        .sqrt()
        .ok_or_else(|| Error::NotRepresentable(format!("sqrt({theta})")))?;
    // p(x) with x = √θ·λ̂, divided by θ^{5/2}
    let scaled = charpoly_1d_shifted(s).compose_affine(&root, &T::zero());
    Ok(scaled.monic())
}

/// The 13×13 matrix of the quasi-linear form in direction x₁.
///
/// Entered row by row from the standard table, except rows 3–4, where the unit
/// entries sit in the θ₁₂ and θ₁₃ columns (`∂u_i/∂t + … + ∂θ_{i1}/∂x₁`).
pub fn assemble_m1<T: Scalar>(s: &GradState<T>) -> Matrix<T> {
    let c = |n: i64, d: i64| T::from_ratio(n, d);
    let rho = s.rho.clone();
    let th = |i: usize, j: usize| s.theta[i - 1][j - 1].clone();
    let q = |i: usize| s.q[i - 1].clone();
    let t = s.temperature();
    let mut m = Matrix::identity(13).scale(&s.u[0]);
    // 1-based placement, matching the table layout
    let mut set = |i: usize, j: usize, v: T| m[(i - 1, j - 1)] = v;

    set(1, 2, rho.clone());

    set(2, 1, th(1, 1) / rho.clone());
    set(2, 5, T::one());
    set(3, 1, th(1, 2) / rho.clone());
    set(3, 8, T::one());
    set(4, 1, th(1, 3) / rho.clone());
    set(4, 9, T::one());

    set(5, 2, c(2, 1) * th(1, 1));
    set(5, 11, c(6, 5) / rho.clone());
    set(6, 3, c(2, 1) * th(1, 2));
    set(6, 11, c(2, 5) / rho.clone());
    set(7, 4, c(2, 1) * th(1, 3));
    set(7, 11, c(2, 5) / rho.clone());
    set(8, 2, th(1, 2));
    set(8, 3, th(1, 1));
    set(8, 12, c(2, 5) / rho.clone());
    set(9, 2, th(1, 3));
    set(9, 4, th(1, 1));
    set(9, 13, c(2, 5) / rho.clone());
    set(10, 3, th(1, 3));
    set(10, 4, th(1, 2));

    let d = t.clone() - th(1, 1);
    set(11, 1, -(d.clone() * d) - (th(1, 2) * th(1, 2) + th(1, 3) * th(1, 3)));
    set(11, 2, c(16, 5) * q(1));
    set(11, 3, c(2, 5) * q(2));
    set(11, 4, c(2, 5) * q(3));
    set(11, 5, rho.clone() * (th(1, 1) + c(8, 1) * t.clone()) / c(6, 1));
    set(11, 6, rho.clone() * (c(7, 1) * th(1, 1) - c(4, 1) * t.clone()) / c(6, 1));
    set(11, 7, rho.clone() * (c(7, 1) * th(1, 1) - c(4, 1) * t.clone()) / c(6, 1));
    set(11, 8, -rho.clone() * th(1, 2));
    set(11, 9, -rho.clone() * th(1, 3));

    set(12, 1, th(1, 2) * th(3, 3) - th(1, 3) * th(2, 3) - t.clone() * th(1, 2));
    set(12, 2, c(7, 5) * q(2));
    set(12, 3, c(7, 5) * q(1));
    set(12, 5, rho.clone() * th(1, 2) / c(6, 1));
    set(12, 6, c(7, 6) * rho.clone() * th(1, 2));
    set(12, 7, c(7, 6) * rho.clone() * th(1, 2));
    set(12, 8, rho.clone() * (c(2, 1) * t.clone() - th(2, 2)));
    set(12, 9, -rho.clone() * th(2, 3));

    set(13, 1, th(1, 3) * th(2, 2) - th(1, 2) * th(2, 3) - t.clone() * th(1, 3));
    set(13, 2, c(7, 5) * q(3));
    set(13, 4, c(7, 5) * q(1));
    set(13, 5, rho.clone() * th(1, 3) / c(6, 1));
    set(13, 6, c(7, 6) * rho.clone() * th(1, 3));
    set(13, 7, c(7, 6) * rho.clone() * th(1, 3));
    set(13, 8, -rho.clone() * th(2, 3));
    set(13, 9, rho.clone() * (c(2, 1) * t - th(3, 3)));
    m
}

/// `Σ nₖ Mₖ(w)` assembled term by term from the index form of the equations,
/// with parenthesised indices averaged over their permutations. Used to
/// cross-check [`assemble_m1`] and the rotated matrices.
pub fn assemble_index_form<T: Scalar>(s: &GradState<T>, n: &Vec3<T>) -> Matrix<T> {
    let c = |a: i64, b: i64| T::from_ratio(a, b);
    let rho = s.rho.clone();
    let th = &s.theta;
    let t = s.temperature();
    let tn = mat_vec(th, n);
    let ttn = mat_vec(th, &tn);
    let qn = dot(&s.q, n);
    let mut m = Matrix::identity(13).scale(&dot(&s.u, n));
    let mut add = |r: usize, col: usize, v: T| {
        let cur = m[(r, col)].clone();
        m[(r, col)] = cur + v;
    };
    for i in 0..3 {
        add(0, 1 + i, rho.clone() * n[i].clone());
        add(1 + i, 0, tn[i].clone() / rho.clone());
        for k in 0..3 {
            add(1 + i, theta_col(i, k), n[k].clone());
        }
    }
    for i in 0..3 {
        for j in i..3 {
            let r = theta_col(i, j);
            add(r, 1 + j, tn[i].clone());
            add(r, 1 + i, tn[j].clone());
            add(r, 10 + i, c(2, 5) * n[j].clone() / rho.clone());
            add(r, 10 + j, c(2, 5) * n[i].clone() / rho.clone());
            if i == j {
                for k in 0..3 {
                    add(r, 10 + k, c(2, 5) * n[k].clone() / rho.clone());
                }
            }
        }
    }
    for i in 0..3 {
        let r = 10 + i;
        add(r, 0, -(ttn[i].clone() - c(2, 1) * t.clone() * tn[i].clone() + t.clone() * t.clone() * n[i].clone()));
        for k in 0..3 {
            add(r, 1 + k, c(7, 5) * s.q[i].clone() * n[k].clone());
            add(r, 1 + k, c(2, 5) * s.q[k].clone() * n[i].clone());
        }
        add(r, 1 + i, c(7, 5) * qn.clone());
        for j in 0..3 {
            for k in 0..3 {
                add(r, theta_col(j, k), -rho.clone() * th[i][k].clone() * n[j].clone());
            }
            add(r, theta_col(j, j), c(7, 6) * rho.clone() * tn[i].clone());
            add(r, theta_col(j, j), -c(2, 3) * rho.clone() * t.clone() * n[i].clone());
        }
        for k in 0..3 {
            add(r, theta_col(i, k), c(2, 1) * rho.clone() * t.clone() * n[k].clone());
        }
    }
    m
}

fn rotate_grad<T: Scalar>(s: &GradState<T>, g: &Tensor3<T>) -> Result<GradState<T>> {
    let w = rotation::rotation_matrix(g).mul_vec(&s.to_vector());
    GradState::from_vector(&w)
}

/// `Mₖ(w) = R⁻¹ M₁(Rw) R` with `R` built from the axis permutation taking `e_k` to `e₁`.
pub fn assemble_mk<T: Scalar>(s: &GradState<T>, k: usize) -> Result<Matrix<T>> {
    let g = rotation::axis_permutation::<T>(k)?;
    let m1 = assemble_m1(&rotate_grad(s, &g)?);
    Ok(rotation::conjugate(&g, &m1))
}

/// Right-hand sides: `−(ρθ/μ)(θᵢⱼ − δᵢⱼθ)` and `−(2/3)(ρθ/μ)qᵢ`.
pub fn source_grad13<T: Scalar>(s: &GradState<T>, p: &SourceParams<T>) -> Vec<T> {
    let t = s.temperature();
    let rate = s.rho.clone() * t.clone() / p.mu.clone();
    let mut out = vec![T::zero(); 13];
    for i in 0..3 {
        for j in i..3 {
            let dev = if i == j { s.theta[i][j].clone() - t.clone() } else { s.theta[i][j].clone() };
            out[theta_col(i, j)] = -rate.clone() * dev;
        }
        out[10 + i] = -T::from_ratio(2, 3) * rate.clone() * s.q[i].clone();
    }
    out
}

pub fn equilibrium_state<T: Scalar>(rho: T, u: Vec3<T>, theta: T) -> Result<GradState<T>> {
    GradState::new(rho, u, scaled_identity3(&theta), zeros3())
}

/// Gaussian state with `Θ = θI` plus `θ₁₂` off the diagonal, `q = 0`.
pub fn gaussian_offdiag_state<T: Scalar>(rho: T, u: Vec3<T>, theta: T, theta12: T) -> Result<GradState<T>> {
    if theta12.abs() >= theta {
        return Err(Error::InvalidState(format!(
            "|θ₁₂| = {} must be below θ = {theta} for a positive definite Θ",
            theta12.abs()
        )));
    }
    let mut t = scaled_identity3(&theta);
    t[0][1] = theta12.clone();
    t[1][0] = theta12;
    GradState::new(rho, u, t, zeros3())
}

/// `r(x) = 25x⁴ − 165x³ + (257 + 48τ²)x² + (8τ² − 105)x − 28τ²`, `τ = θ₁₂/θ`.
pub fn gaussian_r<T: Scalar>(tau: &T) -> Polynomial<T> {
    let c = |n: i64| T::int(n);
    let t2 = tau.clone() * tau.clone();
    Polynomial::new(vec![
        -c(28) * t2.clone(),
        c(8) * t2.clone() - c(105),
        c(257) + c(48) * t2,
        c(-165),
        c(25),
    ])
}

/// `q(λ) = (λ−u₁)[5(λ−u₁)² − 7θ]·r((λ−u₁)²/θ)` for a Gaussian off-diagonal state.
pub fn gaussian_q<T: Scalar>(s: &GradState<T>) -> Polynomial<T> {
    let t = s.temperature();
    let tau = s.theta[0][1].clone() / t.clone();
    let x = Polynomial::new(vec![-s.u[0].clone(), T::one()]);
    let x2_over_t = (&x * &x).scale(&(T::one() / t.clone()));
    let r = gaussian_r(&tau);
    let r_of = r.coeffs().iter().rev().fold(Polynomial::zero(), |acc, c| {
        &(&acc * &x2_over_t) + &Polynomial::constant(c.clone())
    });
    let cubic = &x * &(&(&x * &x).scale(&T::int(5)) - &Polynomial::constant(T::int(7) * t));
    &cubic * &r_of
}

/// Result of evaluating `q(M₁)` against the closed form
/// `(56θ₁₂³/(ρθ²))(ρθ E₁₀,₄ − E₁₀,₁₃)`.
///
/// The `θ⁻²` follows from `r` being written in `x/θ` and `τ = θ₁₂/θ`; a
/// prefactor of `θ²` only agrees with it at `θ = 1`.
#[derive(Clone, Debug)]
pub struct NondiagCertificate<T> {
    pub q_of_m: Matrix<T>,
    pub expected: Matrix<T>,
    pub matches: bool,
    /// Frobenius norm of the difference.
    pub residual: f64,
}

pub fn nondiag_certificate<T: Scalar>(s: &GradState<T>, tol: f64) -> Result<NondiagCertificate<T>> {
    let t12 = s.theta[0][1].clone();
    if t12.is_zero() {
        return Err(Error::InvalidInput("certificate needs θ₁₂ ≠ 0".into()));
    }
    let q_of_m = crate::analysis::evaluate_poly_at_matrix(&gaussian_q(s), &assemble_m1(s));
    let t = s.temperature();
    let coef = T::int(56) * t12.clone() * t12.clone() * t12 / (s.rho.clone() * t.clone() * t.clone());
    let mut expected = Matrix::zeros(13);
    expected[(9, 3)] = coef.clone() * s.rho.clone() * t;
    expected[(9, 12)] = -coef;
    let diff = &q_of_m - &expected;
    let residual = diff.frobenius_norm();
    let matches = if T::EXACT { diff.is_zero() } else { residual <= tol * expected.frobenius_norm() };
    Ok(NondiagCertificate { q_of_m, expected, matches, residual })
}
