//! The modified 13-moment system: coefficient matrices, sources, the
//! anisotropy invariants η₁, η₂ and the factored characteristic polynomial.
//!
//! There is no closed matrix table for the s-equation rows. They were
//! derived from the moment closure itself (see `tests/kinetic.rs` for the
//! quadrature oracle) and are checked against the factored characteristic
//! polynomial and the two annihilation identities.

use crate::analysis::{self, DiagOptions, DiagReport};
use crate::error::{Error, Result};
use crate::grad13::SourceParams;
use crate::matrix::Matrix;
use crate::poly::Polynomial;
use crate::rotation;
use crate::scalar::Scalar;
use crate::state::{dot, inverse3, mat_vec, theta_col, trace, ModState, Tensor3, Vec3};

/// Denominator of the prefactor `θ₁₁^{13/2}/5⁹`.
pub const PREFACTOR_DEN: i64 = 1_953_125;

/// Default `δ` for the sufficient condition `η₂ < δ`.
pub const DEFAULT_DELTA: f64 = 0.095;

fn theta_inverse<T: Scalar>(theta: &Tensor3<T>) -> Result<Tensor3<T>> {
    inverse3(theta).ok_or_else(|| Error::InvalidState("temperature tensor is singular".into()))
}

/// `Σ nₖ M̃ₖ(w̃)` for an arbitrary (not necessarily unit) direction `n`.
/// The matrix is linear in `n`.
pub fn assemble_mtilde_dir<T: Scalar>(st: &ModState<T>, n: &Vec3<T>) -> Result<Matrix<T>> {
    let c = |a: i64, b: i64| T::from_ratio(a, b);
    let rho = st.rho.clone();
    let th = &st.theta;
    let s = &st.s;
    let ti = theta_inverse(th)?;
    let a = mat_vec(&ti, s);
    let eta = dot(s, &a);
    let tn = mat_vec(th, n);
    let sn = dot(s, n);

    let mut m = Matrix::identity(13).scale(&dot(&st.u, n));
    let mut add = |r: usize, col: usize, v: T| {
        let cur = m[(r, col)].clone();
        m[(r, col)] = cur + v;
    };

    for i in 0..3 {
        add(0, 1 + i, rho.clone() * n[i].clone());
        add(1 + i, 0, tn[i].clone() / rho.clone());
        for d in 0..3 {
            add(1 + i, theta_col(i, d), n[d].clone());
        }
    }

    // θ_ij rows: the three symmetrised terms averaged over index placements
    let w = c(2, 5) / rho.clone();
    for i in 0..3 {
        for j in i..3 {
            let r = theta_col(i, j);
            add(r, 1 + j, tn[i].clone());
            add(r, 1 + i, tn[j].clone());
            for d in 0..3 {
                add(r, theta_col(j, d), w.clone() * s[i].clone() * n[d].clone());
                add(r, theta_col(i, d), w.clone() * s[j].clone() * n[d].clone());
            }
            add(r, theta_col(i, j), w.clone() * sn.clone());
            for d in 0..3 {
                add(r, 10 + d, w.clone() * th[i][j].clone() * n[d].clone());
            }
            add(r, 10 + j, w.clone() * tn[i].clone());
            add(r, 10 + i, w.clone() * tn[j].clone());
        }
    }

    let k = -c(2, 25) / rho.clone();
    for j in 0..3 {
        let r = 10 + j;
        // velocity gradients
        for d in 0..3 {
            add(r, 1 + d, s[j].clone() * n[d].clone());
        }
        add(r, 1 + j, sn.clone());
        // temperature gradients; sums over (i, k) hit the shared θ column twice
        for d in 0..3 {
            add(r, theta_col(j, d), rho.clone() * n[d].clone());
            add(r, theta_col(j, d), k.clone() * c(2, 1) * eta.clone() * n[d].clone());
        }
        for i in 0..3 {
            for l in 0..3 {
                let col = theta_col(i, l);
                add(r, col, c(1, 2) * rho.clone() * tn[j].clone() * ti[i][l].clone());
                add(r, col, k.clone() * s[j].clone() * sn.clone() * ti[i][l].clone());
                add(r, col, k.clone() * c(4, 1) * s[j].clone() * a[i].clone() * n[l].clone());
            }
            add(r, theta_col(j, i), k.clone() * c(2, 1) * sn.clone() * a[i].clone());
        }
        // flux gradients
        for d in 0..3 {
            add(r, 10 + d, k.clone() * c(7, 1) * s[j].clone() * n[d].clone());
            add(r, 10 + d, k.clone() * c(2, 1) * tn[j].clone() * a[d].clone());
        }
        add(r, 10 + j, k.clone() * c(2, 1) * sn.clone());
    }
    Ok(m)
}

/// `M̃ₖ(w̃)`, `k ∈ {1, 2, 3}`. `k = 1` is assembled directly; the others
/// through `R⁻¹ M̃₁(Rw̃) R` with the axis permutation taking `e_k` to `e₁`.
pub fn assemble_mtilde<T: Scalar>(st: &ModState<T>, k: usize) -> Result<Matrix<T>> {
    let g = rotation::axis_permutation::<T>(k)?;
    let e1 = [T::one(), T::zero(), T::zero()];
    if k == 1 {
        return assemble_mtilde_dir(st, &e1);
    }
    let m1 = assemble_mtilde_dir(&rotate_state(st, &g)?, &e1)?;
    Ok(rotation::conjugate(&g, &m1))
}

/// `w̃' = R(G) w̃`.
pub fn rotate_state<T: Scalar>(st: &ModState<T>, g: &Tensor3<T>) -> Result<ModState<T>> {
    ModState::from_vector(&rotation::rotation_matrix(g).mul_vec(&st.to_vector()))
}

/// Relaxation sources. Momentum and mass are conserved; the temperature
/// tensor relaxes as in Grad's system and
/// `Q̃_j = −(ρθ/μ)[(71/30)s_j − (3/10)θ(tr(Θ⁻¹)s_j + 2(Θ⁻¹s)_j) − (1/15)tr(Θ⁻¹)(Θs)_j]`.
pub fn source_mod13<T: Scalar>(st: &ModState<T>, p: &SourceParams<T>) -> Result<Vec<T>> {
    let c = |a: i64, b: i64| T::from_ratio(a, b);
    let t = st.temperature();
    let rate = st.rho.clone() * t.clone() / p.mu.clone();
    let ti = theta_inverse(&st.theta)?;
    let tr_inv = trace(&ti);
    let a = mat_vec(&ti, &st.s);
    let ts = mat_vec(&st.theta, &st.s);
    let mut out = vec![T::zero(); 13];
    for i in 0..3 {
        for j in i..3 {
            let dev = if i == j { st.theta[i][j].clone() - t.clone() } else { st.theta[i][j].clone() };
            out[theta_col(i, j)] = -rate.clone() * dev;
        }
        let sym = (tr_inv.clone() * st.s[i].clone() + c(2, 1) * a[i].clone()) / c(3, 1);
        let bracket = c(71, 30) * st.s[i].clone() - c(9, 10) * t.clone() * sym
            - c(1, 15) * tr_inv.clone() * ts[i].clone();
        out[10 + i] = -rate.clone() * bracket;
    }
    Ok(out)
}

/// Heat flux carried by the modified phase density: `q = (2Θs + tr(Θ)s)/5`.
pub fn s_to_q<T: Scalar>(theta: &Tensor3<T>, s: &Vec3<T>) -> Vec3<T> {
    let ts = mat_vec(theta, s);
    let tr = trace(theta);
    std::array::from_fn(|j| (T::int(2) * ts[j].clone() + tr.clone() * s[j].clone()) / T::int(5))
}

/// `η₁ = s₁²/(ρ²θ₁₁)` and `η₂ = sᵀΘ⁻¹s/ρ²`.
#[derive(Clone, Debug, PartialEq)]
pub struct EtaPair<T> {
    pub eta1: T,
    pub eta2: T,
}

impl<T: Scalar> EtaPair<T> {
    pub fn as_f64(&self) -> EtaPair<f64> {
        EtaPair { eta1: self.eta1.as_f64(), eta2: self.eta2.as_f64() }
    }
}

pub fn eta_invariants<T: Scalar>(st: &ModState<T>) -> Result<EtaPair<T>> {
    let r2 = st.rho.clone() * st.rho.clone();
    let eta1 = st.s[0].clone() * st.s[0].clone() / (r2.clone() * st.theta[0][0].clone());
    let ti = theta_inverse(&st.theta)?;
    let eta2 = dot(&st.s, &mat_vec(&ti, &st.s)) / r2;
    Ok(EtaPair { eta1, eta2 })
}

/// Outcome of comparing `θ₁₁⁻¹s₁²` with `sᵀΘ⁻¹s`.
#[derive(Clone, Debug, PartialEq)]
pub struct AnisotropyCheck<T> {
    pub lhs: T,
    pub rhs: T,
    pub holds: bool,
    pub equality: bool,
    /// `k` with `s = k(θ₁₁, θ₁₂, θ₁₃)` when equality holds.
    pub k: Option<T>,
}

/// `θ₁₁⁻¹s₁² ≤ sᵀΘ⁻¹s`, with equality exactly when `s` is parallel to the
/// first column of `Θ`. For floats, equality means `rhs − lhs ≤ tol·rhs`.
pub fn anisotropy_inequality<T: Scalar>(theta: &Tensor3<T>, s: &Vec3<T>, tol: f64) -> Result<AnisotropyCheck<T>> {
    if !crate::state::is_spd(theta) {
        return Err(Error::InvalidState("temperature tensor is not positive definite".into()));
    }
    let lhs = s[0].clone() * s[0].clone() / theta[0][0].clone();
    let rhs = dot(s, &mat_vec(&theta_inverse(theta)?, s));
    let gap = rhs.clone() - lhs.clone();
    let equality = if T::EXACT { gap.is_zero() } else { gap.as_f64() <= tol * rhs.as_f64().abs() };
    let holds = equality || gap.gt_zero();
    let k = equality.then(|| s[0].clone() / theta[0][0].clone());
    Ok(AnisotropyCheck { lhs, rhs, holds, equality, k })
}

fn ip<T: Scalar>(c: &[i64]) -> Polynomial<T> {
    Polynomial::from_ints(c)
}

fn zeta_pow<T: Scalar>(k: usize) -> Polynomial<T> {
    Polynomial::monomial(T::one(), k)
}

/// The four blocks `(p₁₁, p₁₂, p₂₁, p₂₂)` in `ζ`, with `e = sign(s₁)√η₁`.
pub fn p_blocks<T: Scalar>(e: &T) -> [Polynomial<T>; 4] {
    let n1 = e.clone() * e.clone();
    let e3 = n1.clone() * e.clone();
    let sc = |p: Polynomial<T>, v: T| p.scale(&v);
    let i = |v: i64| T::int(v);

    let p11 = &(&sc(&zeta_pow(2) * &ip(&[-7, 0, 5]), i(25)) + &sc(zeta_pow(3), i(-130) * e.clone()))
        + &sc(ip(&[7, 0, 6]), i(4) * n1.clone());
    let p12 = sc(zeta_pow(2), i(8));

    let p21 = &(&(&(&sc(&zeta_pow(3) * &ip(&[-105, 0, 257, 0, -165, 0, 25]), i(625))
        + &sc(&zeta_pow(2) * &ip(&[-105, 0, 144, 0, -311, 0, 110]), i(-250) * e.clone()))
        + &sc(&zeta_pow(1) * &ip(&[105, 0, -209, 0, 447, 0, 111]), i(100) * n1.clone()))
        + &sc(ip(&[105, 0, 282, 0, 697, 0, 18]), i(-40) * e3))
        + &sc(&zeta_pow(1) * &ip(&[63, 0, 16]), i(96) * n1.clone() * n1.clone());

    let inner = &(&sc(&zeta_pow(2) * &ip(&[3, 0, -73, 0, 23]), i(25))
        + &sc(&zeta_pow(1) * &ip(&[-18, 0, 67, 0, 27]), i(-10) * e.clone()))
        + &sc(ip(&[-7, 0, 48]), i(12) * n1);
    let p22 = sc(&zeta_pow(1) * &inner, i(8));
    [p11, p12, p21, p22]
}

/// `A = p₁₁ + η₂p₁₂` (degree 4).
pub fn factor_a<T: Scalar>(e: &T, eta2: &T) -> Polynomial<T> {
    let [p11, p12, _, _] = p_blocks(e);
    &p11 + &p12.scale(eta2)
}

/// `B = p₂₁ + η₂p₂₂` (degree 9).
pub fn factor_b<T: Scalar>(e: &T, eta2: &T) -> Polynomial<T> {
    let [_, _, p21, p22] = p_blocks(e);
    &p21 + &p22.scale(eta2)
}

/// `det(λI − M̃₁) = θ₁₁^{13/2}/1953125 · A(ζ)·B(ζ)`, `ζ = (λ − u₁)/√θ₁₁`.
#[derive(Clone, Debug)]
pub struct FactoredCharpoly<T> {
    pub a: Polynomial<T>,
    pub b: Polynomial<T>,
    pub sqrt_theta11: T,
    pub u1: T,
    /// Signed `√η₁`.
    pub e: T,
    pub eta: EtaPair<T>,
}

impl<T: Scalar> FactoredCharpoly<T> {
    /// `θ₁₁^{13/2}/1953125`.
    pub fn prefactor(&self) -> T {
        (0..13).fold(T::one(), |acc, _| acc * self.sqrt_theta11.clone()) / T::int(PREFACTOR_DEN)
    }

    /// `A·B` in `ζ`.
    pub fn product(&self) -> Polynomial<T> {
        &self.a * &self.b
    }

    /// The full product rewritten in `λ`; monic.
    pub fn in_lambda(&self) -> Polynomial<T> {
        let inv = T::one() / self.sqrt_theta11.clone();
        let shift = -self.u1.clone() * inv.clone();
        self.product().compose_affine(&inv, &shift).scale(&self.prefactor())
    }
}

fn exact_sqrt<T: Scalar>(x: &T, what: &str) -> Result<T> {
    x.sqrt().ok_or_else(|| Error::NotRepresentable(format!("√{what} = √({x}) is not in the scalar type")))
}

/// Factors for the state in direction `x₁`. For rationals this needs
/// `√θ₁₁` and `√η₁` to be rational.
pub fn factored_charpoly<T: Scalar>(st: &ModState<T>) -> Result<FactoredCharpoly<T>> {
    let eta = eta_invariants(st)?;
    let sqrt_theta11 = exact_sqrt(&st.theta[0][0], "θ₁₁")?;
    let mut e = exact_sqrt(&eta.eta1, "η₁")?;
    if st.s[0] < T::zero() {
        e = -e;
    }
    Ok(FactoredCharpoly {
        a: factor_a(&e, &eta.eta2),
        b: factor_b(&e, &eta.eta2),
        sqrt_theta11,
        u1: st.u[0].clone(),
        e,
        eta,
    })
}

/// The `s₁ = 0` polynomials: `p₁ = 25(5ζ²−7) + 8η₂`,
/// `p₂ = 25(5ζ²−7)(5ζ⁴−26ζ²+15) + 8η₂(23ζ⁴−73ζ²+3)` and `q = ζp₁p₂`.
#[derive(Clone, Debug, PartialEq)]
pub struct S1ZeroPolys<T> {
    pub p1: Polynomial<T>,
    pub p2: Polynomial<T>,
    pub q: Polynomial<T>,
}

pub fn case_s1_zero_polys<T: Scalar>(eta2: &T) -> S1ZeroPolys<T> {
    let e8 = T::int(8) * eta2.clone();
    let base = ip::<T>(&[-175, 0, 125]);
    let p1 = &base + &Polynomial::constant(e8.clone());
    let p2 = &(&base * &ip(&[15, 0, -26, 0, 5])) + &ip(&[3, 0, -73, 0, 23]).scale(&e8);
    let q = &zeta_pow(1) * &(&p1 * &p2);
    S1ZeroPolys { p1, p2, q }
}

/// `p̃₂(z)` with `p₂(ζ) = p̃₂(ζ²)`.
pub fn p2_tilde<T: Scalar>(eta2: &T) -> Polynomial<T> {
    let e8 = T::int(8) * eta2.clone();
    &(&ip::<T>(&[-175, 125]) * &ip(&[15, -26, 5])) + &ip(&[3, -73, 23]).scale(&e8)
}

/// The root `(175 − 8η₂)/125` of `p̃₁(z)`.
pub fn p1_tilde_root<T: Scalar>(eta2: &T) -> T {
    (T::int(175) - T::int(8) * eta2.clone()) / T::int(125)
}

/// Closed form of `p̃₂` at the root of `p̃₁`:
/// `8η₂(1152η₂² − 3400η₂ − 664375)/15625`.
pub fn s1_zero_remainder<T: Scalar>(eta2: &T) -> T {
    let e = eta2.clone();
    T::int(8) * e.clone() * (T::int(1152) * e.clone() * e.clone() - T::int(3400) * e - T::int(664375))
        / T::int(15625)
}

/// Residuals of the two annihilation identities. A check that does not apply
/// to the state is `None`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct AnnihilationReport {
    /// `q((M̃₁ − u₁I)/√θ₁₁)` when `s₁ = 0`.
    pub q_residual: Option<f64>,
    pub q_holds: Option<bool>,
    /// `B((M̃₁ − u₁I)/√θ₁₁)` when `s ∥ Θe₁`.
    pub b_residual: Option<f64>,
    pub b_holds: Option<bool>,
}

impl AnnihilationReport {
    pub fn all_hold(&self) -> bool {
        self.q_holds.unwrap_or(true) && self.b_holds.unwrap_or(true)
    }
}

/// Evaluates whichever identities apply to the state. `tol` is the float
/// tolerance for both the case selection and the relative residual.
pub fn annihilation_checks<T: Scalar>(st: &ModState<T>, tol: f64) -> Result<AnnihilationReport> {
    let sqrt_theta11 = exact_sqrt(&st.theta[0][0], "θ₁₁")?;
    let m = assemble_mtilde(st, 1)?;
    let x = (&m - &Matrix::identity(13).scale(&st.u[0])).scale(&(T::one() / sqrt_theta11));
    let eta = eta_invariants(st)?;
    let mut out = AnnihilationReport::default();

    let s1_zero = st.s[0].is_negligible(tol * st.s.iter().map(|v| v.as_f64().abs()).fold(0.0, f64::max));
    if s1_zero {
        let q = case_s1_zero_polys(&eta.eta2).q;
        let r = analysis::annihilates(&q, &x, tol);
        out.q_residual = Some(r.residual);
        out.q_holds = Some(r.annihilates);
    }
    let parallel = anisotropy_inequality(&st.theta, &st.s, tol)?.equality;
    if parallel {
        let mut e = exact_sqrt(&eta.eta1, "η₁")?;
        if st.s[0] < T::zero() {
            e = -e;
        }
        let b = factor_b(&e, &eta.eta2);
        let r = analysis::annihilates(&b, &x, tol);
        out.b_residual = Some(r.residual);
        out.b_holds = Some(r.annihilates);
    }
    Ok(out)
}

/// Configuration of [`is_hyperbolic`].
#[derive(Clone, Debug)]
pub struct HyperbolicOptions {
    pub delta: f64,
    pub diag: DiagOptions,
}

impl Default for HyperbolicOptions {
    fn default() -> Self {
        Self { delta: DEFAULT_DELTA, diag: DiagOptions::default() }
    }
}

#[derive(Clone, Debug)]
pub struct HyperbolicReport {
    /// Real diagonalizability of `M̃₁`.
    pub report: DiagReport,
    pub eta: EtaPair<f64>,
    /// The sufficient condition `η₂ < δ`, which covers every direction.
    pub within_proven_region: bool,
}

impl HyperbolicReport {
    pub fn hyperbolic(&self) -> bool {
        self.report.diagonalizable
    }
}

/// Decides real diagonalizability of `M̃₁(w̃)` and reports the direction-free
/// sufficient condition `η₂ < δ` alongside.
pub fn is_hyperbolic<T: Scalar>(st: &ModState<T>, opts: &HyperbolicOptions) -> Result<HyperbolicReport> {
    let m = assemble_mtilde(st, 1)?;
    let report = analysis::is_real_diagonalizable(&m, &opts.diag)?;
    let eta = eta_invariants(st)?.as_f64();
    let within_proven_region = eta.eta2 < opts.delta;
    Ok(HyperbolicReport { report, eta, within_proven_region })
}
