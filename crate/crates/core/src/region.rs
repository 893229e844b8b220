//! The hyperbolicity region of the modified system in the `(η₁, η₂)` plane.
//!
//! All float routines take `e = +√η₁`: flipping the sign of `e` maps the roots
//! `ζ ↦ −ζ`, which changes neither the imaginary parts nor multiplicities.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::mod13::{case_s1_zero_polys, factor_a, factor_b};
use crate::poly::{resultant, Polynomial};
use crate::roots::{self, certify_distinct_real, derivative_resultant_from_roots};
use crate::scalar::Scalar;
use crate::Rational;

pub const DEFAULT_IMAG_TOL: f64 = 1e-8;
/// Relative size below which `r(η₁, η₂)` counts as zero.
pub const DEFAULT_R_ZERO_TOL: f64 = 1e-9;
pub const DEFAULT_BISECTION_TOL: f64 = 1e-4;
/// Backward-error bound passed to the root finder.
const ROOT_TOL: f64 = 1e-8;

/// Constant in `res(A, B) = C·η₁³(η₁ − η₂)⁵·r(η₁, η₂)`.
pub const RESULTANT_CONSTANT: i64 = -1_003_520_000_000_000;

/// Coefficients of `r(η₁, η₂)` as `(c, power of η₁, power of η₂)`.
pub const R_TERMS: [(i64, u32, u32); 21] = [
    (6519382474752, 5, 0),
    (7205633261568, 4, 1),
    (-1047028571136000, 4, 0),
    (2877437509632, 3, 2),
    (71846341632000, 3, 1),
    (6117273120960000, 3, 0),
    (488268103680, 2, 3),
    (14075065958400, 2, 2),
    (-32261927040000, 2, 1),
    (-12991498038500000, 2, 0),
    (31436439552, 1, 4),
    (74226585600, 1, 3),
    (-29723348160000, 1, 2),
    (-84800409000000, 1, 1),
    (12363509395312500, 1, 0),
    (668860416, 0, 5),
    (-13801881600, 0, 4),
    (-707492160000, 0, 3),
    (13556709000000, 0, 2),
    (188918353125000, 0, 1),
    (-3277351494140625, 0, 0),
];

fn check_eta(eta1: f64, eta2: f64) -> Result<()> {
    if !(eta1.is_finite() && eta2.is_finite()) || eta1 < 0.0 || eta1 > eta2 {
        return Err(Error::InvalidInput(format!("need 0 ≤ η₁ ≤ η₂, got η₁ = {eta1}, η₂ = {eta2}")));
    }
    Ok(())
}

fn pow<T: Scalar>(x: &T, k: u32) -> T {
    (0..k).fold(T::one(), |acc, _| acc * x.clone())
}

/// `r(η₁, η₂)`.
pub fn r_eta<T: Scalar>(eta1: &T, eta2: &T) -> T {
    R_TERMS
        .iter()
        .fold(T::zero(), |acc, &(c, a, b)| acc + T::int(c) * pow(eta1, a) * pow(eta2, b))
}

/// `Σ |c|·η₁^a·η₂^b`, the scale against which `r` is compared with zero.
pub fn r_eta_scale(eta1: f64, eta2: f64) -> f64 {
    R_TERMS.iter().map(|&(c, a, b)| (c as f64).abs() * eta1.powi(a as i32) * eta2.powi(b as i32)).sum()
}

/// Right-hand side `C·η₁³(η₁ − η₂)⁵·r(η₁, η₂)` with `η₁ = e²`.
pub fn factor_resultant_closed_form<T: Scalar>(e: &T, eta2: &T) -> T {
    let eta1 = e.clone() * e.clone();
    T::int(RESULTANT_CONSTANT) * pow(&eta1, 3) * pow(&(eta1.clone() - eta2.clone()), 5) * r_eta(&eta1, eta2)
}

/// The two factors `A`, `B` at `e = √η₁`.
pub fn factors(eta1: f64, eta2: f64) -> Result<(Polynomial<f64>, Polynomial<f64>)> {
    check_eta(eta1, eta2)?;
    let e = eta1.sqrt();
    Ok((factor_a(&e, &eta2), factor_b(&e, &eta2)))
}

fn factor_roots(eta1: f64, eta2: f64) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
    let (a, b) = factors(eta1, eta2)?;
    Ok((with_zero_roots(&a)?, with_zero_roots(&b)?))
}

/// All roots including exact zeros, which the root finder strips.
fn with_zero_roots(p: &Polynomial<f64>) -> Result<Vec<Complex64>> {
    let mut rs = roots::roots(p, ROOT_TOL)?.roots;
    let n = p.degree().unwrap_or(0);
    rs.resize(n, Complex64::new(0.0, 0.0));
    Ok(rs)
}

/// `𝕴(η₁, η₂)`: the largest `|Im ζ|` over the roots of `A·B`.
pub fn max_imag(eta1: f64, eta2: f64) -> Result<f64> {
    let (ra, rb) = factor_roots(eta1, eta2)?;
    Ok(ra.iter().chain(&rb).map(|z| z.im.abs()).fold(0.0, f64::max))
}

fn on_diagonal(eta1: f64, eta2: f64) -> bool {
    (eta2 - eta1).abs() <= 1e-14 * eta2.abs()
}

/// `ℛ(η₁, η₂) = res(p̃, p̃')` with `p̃ = A·B`, from the roots of the two
/// factors. Identically zero on the edges `η₁ = 0` and `η₁ = η₂`, where the
/// factors share a root.
pub fn multiplicity_resultant(eta1: f64, eta2: f64) -> Result<f64> {
    check_eta(eta1, eta2)?;
    if eta1 == 0.0 || on_diagonal(eta1, eta2) {
        return Ok(0.0);
    }
    let (a, b) = factors(eta1, eta2)?;
    let (ra, rb) = factor_roots(eta1, eta2)?;
    let all: Vec<Complex64> = ra.into_iter().chain(rb).collect();
    Ok(derivative_resultant_from_roots(a.leading().unwrap() * b.leading().unwrap(), &all))
}

/// Exact `ℛ` from the Sylvester determinant at `η₁ = e²`.
pub fn multiplicity_resultant_exact(e: &Rational, eta2: &Rational) -> Result<Rational> {
    let p = &factor_a(e, eta2) * &factor_b(e, eta2);
    resultant(&p, &p.derivative())
}

/// `res(p, p')`: Sylvester determinant for exact types, root-product form for floats.
pub fn derivative_resultant<T: Scalar>(p: &Polynomial<T>) -> Result<T> {
    if T::EXACT {
        return resultant(p, &p.derivative());
    }
    let pf = p.as_f64();
    let rs = with_zero_roots(&pf)?;
    Ok(T::from_float(derivative_resultant_from_roots(*pf.leading().unwrap(), &rs)))
}

/// `res(q, q')` on the edge `η₁ = 0`, `q = ζp₁p₂`.
pub fn edge_q_resultant<T: Scalar>(eta2: &T) -> Result<T> {
    derivative_resultant(&case_s1_zero_polys(eta2).q)
}

/// `res(q̃, q̃')` on the edge `η₁ = η₂ = e²`, `q̃ = B`.
pub fn edge_qtilde_resultant<T: Scalar>(e: &T) -> Result<T> {
    let eta = e.clone() * e.clone();
    derivative_resultant(&factor_b(e, &eta))
}

/// Which polynomial has to be squarefree at a point for `M̃₁` to be diagonalizable.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Candidate {
    /// `ζ(5ζ² − 7)(5ζ⁴ − 26ζ² + 15)`.
    Origin,
    /// `q = ζp₁p₂`.
    S1Zero,
    /// `q̃ = B`.
    Diagonal,
    /// `p̃ = A·B`.
    Interior,
}

pub fn candidate(eta1: f64, eta2: f64) -> Candidate {
    match (eta1 == 0.0, on_diagonal(eta1, eta2)) {
        (true, true) => Candidate::Origin,
        (true, false) => Candidate::S1Zero,
        (false, true) => Candidate::Diagonal,
        (false, false) => Candidate::Interior,
    }
}

#[derive(Clone, Debug)]
pub struct ScanOptions {
    pub imag_tol: f64,
    pub r_zero_tol: f64,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self { imag_tol: DEFAULT_IMAG_TOL, r_zero_tol: DEFAULT_R_ZERO_TOL }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RegionSample {
    pub eta1: f64,
    pub eta2: f64,
    pub max_imag: f64,
    /// `res(m, m')` for the candidate minimal polynomial `m`.
    pub resultant: f64,
    pub hyperbolic: bool,
}

/// Evaluates one point. Hyperbolic means all roots real and the candidate
/// minimal polynomial squarefree.
///
/// Squarefreeness is certified by sign alternation rather than by a root
/// separation threshold: two roots of `B` near `ζ ≈ 0.4√η₁` are distinct
/// but only about `η₁²` apart. In the interior the factors are certified
/// separately and their common roots are excluded through `r(η₁, η₂) ≠ 0`.
pub fn sample(eta1: f64, eta2: f64, opts: &ScanOptions) -> Result<RegionSample> {
    check_eta(eta1, eta2)?;
    let (a, b) = factors(eta1, eta2)?;
    let (ra, rb) = factor_roots(eta1, eta2)?;
    let max_imag = ra.iter().chain(&rb).map(|z| z.im.abs()).fold(0.0, f64::max);
    let (m_lc, m_roots, collision) = match candidate(eta1, eta2) {
        Candidate::Origin => {
            let m = Polynomial::from_ints(&[0, -105, 0, 257, 0, -165, 0, 25]);
            let rs = with_zero_roots(&m)?;
            let c = !certify_distinct_real(&m, &rs);
            (*m.leading().unwrap(), rs, c)
        }
        Candidate::S1Zero => {
            let q = case_s1_zero_polys(&eta2).q;
            let rs = with_zero_roots(&q)?;
            let c = !certify_distinct_real(&q, &rs);
            (*q.leading().unwrap(), rs, c)
        }
        Candidate::Diagonal => {
            let c = !certify_distinct_real(&b, &rb);
            (*b.leading().unwrap(), rb.clone(), c)
        }
        Candidate::Interior => {
            let cross = r_eta(&eta1, &eta2).abs() <= opts.r_zero_tol * r_eta_scale(eta1, eta2);
            let c = !certify_distinct_real(&a, &ra) || !certify_distinct_real(&b, &rb) || cross;
            let all: Vec<Complex64> = ra.iter().chain(&rb).copied().collect();
            (a.leading().unwrap() * b.leading().unwrap(), all, c)
        }
    };
    let resultant = derivative_resultant_from_roots(m_lc, &m_roots);
    let hyperbolic = max_imag <= opts.imag_tol && !collision;
    Ok(RegionSample { eta1, eta2, max_imag, resultant, hyperbolic })
}

#[derive(Clone, Debug, PartialEq)]
pub struct GridSample {
    pub i1: usize,
    pub i2: usize,
    pub sample: RegionSample,
}

#[derive(Clone, Debug)]
pub struct RegionGrid {
    pub eta1_max: f64,
    pub eta2_max: f64,
    pub n1: usize,
    pub n2: usize,
    /// Samples with `η₁ ≤ η₂`, ordered by `(i1, i2)`.
    pub samples: Vec<GridSample>,
}

fn grid_value(max: f64, n: usize, i: usize) -> f64 {
    if n <= 1 {
        0.0
    } else {
        max * i as f64 / (n - 1) as f64
    }
}

/// Samples the triangle `0 ≤ η₁ ≤ η₂` on an `n1 × n2` grid over
/// `[0, eta1_max] × [0, eta2_max]`. A single point on an axis sits at zero.
/// Points are evaluated in parallel; the output order is fixed.
pub fn scan_grid(eta1_max: f64, eta2_max: f64, n1: usize, n2: usize, opts: &ScanOptions) -> Result<RegionGrid> {
    if n1 == 0 || n2 == 0 {
        return Err(Error::InvalidInput("grid needs at least one point per axis".into()));
    }
    if !(eta1_max >= 0.0 && eta2_max >= 0.0 && eta1_max.is_finite() && eta2_max.is_finite()) {
        return Err(Error::InvalidInput("scan box must be finite and nonnegative".into()));
    }
    let points: Vec<(usize, usize, f64, f64)> = (0..n1)
        .flat_map(|i1| (0..n2).map(move |i2| (i1, i2)))
        .map(|(i1, i2)| (i1, i2, grid_value(eta1_max, n1, i1), grid_value(eta2_max, n2, i2)))
        .filter(|&(_, _, e1, e2)| e1 <= e2)
        .collect();
    let samples = points
        .into_par_iter()
        .map(|(i1, i2, e1, e2)| Ok(GridSample { i1, i2, sample: sample(e1, e2, opts)? }))
        .collect::<Result<Vec<_>>>()?;
    Ok(RegionGrid { eta1_max, eta2_max, n1, n2, samples })
}

/// First `η₂ ≥ η₁` on the vertical line through `η₁` where `𝕴` exceeds
/// `imag_tol`, located to `tol` by stepping and bisection. `None` when the
/// line starts outside the region or never leaves it below `eta2_hi`.
pub fn boundary_on_line(eta1: f64, eta2_hi: f64, imag_tol: f64, tol: f64) -> Result<Option<f64>> {
    let outside = |e2: f64| max_imag(eta1, e2).map(|v| v > imag_tol);
    if outside(eta1)? {
        return Ok(None);
    }
    let step = (tol * 8.0).max(1e-4);
    let mut lo = eta1;
    loop {
        let hi = (lo + step).min(eta2_hi);
        if outside(hi)? {
            let mut hi = hi;
            while hi - lo > tol / 4.0 {
                let mid = 0.5 * (lo + hi);
                if outside(mid)? {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            return Ok(Some(hi));
        }
        if hi >= eta2_hi {
            return Ok(None);
        }
        lo = hi;
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DeltaEstimate {
    /// Lowest `η₂` on the boundary of the region.
    pub delta: f64,
    /// Where that minimum sits.
    pub eta1_at_min: f64,
    /// `res(q, q') > 0` at every sample on `(0, δ̃)` along `η₁ = 0`.
    pub s1_zero_edge_positive: bool,
    /// `res(q̃, q̃') > 0` at every sample on `(0, δ̃)` along `η₁ = η₂`.
    pub diagonal_edge_positive: bool,
}

const LINE_ETA1_MAX: f64 = 0.1;
const LINE_ETA2_MAX: f64 = 0.3;
const EDGE_SAMPLES: usize = 100;

/// Estimates `δ̃`, the height of the lowest point of the region's boundary.
///
/// Boundary heights are found on vertical lines `η₁ = const` by stepping and
/// bisection on `𝕴`; the minimum over lines is refined by golden-section
/// search. The two edges are then sampled, and a sign change of the edge
/// resultant below the estimate would lower it.
pub fn estimate_delta_max(tol: f64) -> Result<DeltaEstimate> {
    if !(tol > 0.0 && tol < 0.01) {
        return Err(Error::InvalidInput(format!("bisection tolerance must lie in (0, 0.01), got {tol}")));
    }
    let imag_tol = DEFAULT_IMAG_TOL;
    let height = |e1: f64| boundary_on_line(e1, LINE_ETA2_MAX, imag_tol, tol);
    let lines = 20;
    let coarse: Vec<(f64, Option<f64>)> = (0..=lines)
        .into_par_iter()
        .map(|k| {
            let e1 = LINE_ETA1_MAX * k as f64 / lines as f64;
            height(e1).map(|h| (e1, h))
        })
        .collect::<Result<_>>()?;
    let (best_k, (mut best_e1, best_h)) = coarse
        .iter()
        .enumerate()
        .filter_map(|(k, (e1, h))| h.map(|h| (k, (*e1, h))))
        .min_by(|a, b| a.1 .1.total_cmp(&b.1 .1))
        .ok_or_else(|| Error::Bracket("no vertical line crosses the region boundary".into()))?;
    let mut best = best_h;

    // golden-section refinement between the neighbouring lines
    let width = LINE_ETA1_MAX / lines as f64;
    let (mut a, mut b) = (
        (best_k as f64 - 1.0).max(0.0) * width,
        ((best_k + 1) as f64 * width).min(LINE_ETA1_MAX),
    );
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let eval = |e1: f64| -> Result<f64> { Ok(height(e1)?.unwrap_or(f64::INFINITY)) };
    let (mut x1, mut x2) = (b - g * (b - a), a + g * (b - a));
    let (mut f1, mut f2) = (eval(x1)?, eval(x2)?);
    while b - a > tol {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = eval(x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = eval(x2)?;
        }
    }
    for (x, f) in [(x1, f1), (x2, f2)] {
        if f < best {
            best = f;
            best_e1 = x;
        }
    }

    // edge checks
    let mut s1_zero_edge_positive = true;
    let mut diagonal_edge_positive = true;
    for k in 1..=EDGE_SAMPLES {
        let t = best * k as f64 / (EDGE_SAMPLES + 1) as f64;
        if edge_q_resultant(&t)? <= 0.0 {
            s1_zero_edge_positive = false;
            best = best.min(t);
        }
        if edge_qtilde_resultant(&t.sqrt())? <= 0.0 {
            diagonal_edge_positive = false;
            best = best.min(t);
        }
    }
    Ok(DeltaEstimate { delta: best, eta1_at_min: best_e1, s1_zero_edge_positive, diagonal_edge_positive })
}

/// `C_hyp = √(32δ/(225π))`.
pub fn c_hyp(delta_max: f64) -> f64 {
    (32.0 * delta_max / (225.0 * std::f64::consts::PI)).sqrt()
}

/// First-order Chapman–Enskog fields:
/// `θ⁽¹⁾ᵢⱼ = −(2μ/ρ)(½(∂ᵢvⱼ + ∂ⱼvᵢ) − ⅓δᵢⱼ ∂ₖvₖ)` and `s⁽¹⁾ = −(15μ/(4θ))∇θ`.
/// `grad_u[i][j]` is `∂vⱼ/∂xᵢ`.
pub fn ns_fourier_first_order(
    mu: f64,
    rho: f64,
    theta: f64,
    grad_u: &[[f64; 3]; 3],
    grad_theta: &[f64; 3],
) -> Result<([[f64; 3]; 3], [f64; 3])> {
    if !(mu > 0.0 && rho > 0.0 && theta > 0.0) {
        return Err(Error::InvalidInput("μ, ρ and θ must be positive".into()));
    }
    let div = grad_u[0][0] + grad_u[1][1] + grad_u[2][2];
    let th1 = std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            let iso = if i == j { div / 3.0 } else { 0.0 };
            -(2.0 * mu / rho) * (0.5 * (grad_u[i][j] + grad_u[j][i]) - iso)
        })
    });
    let s1 = grad_theta.map(|g| -(15.0 * mu / (4.0 * theta)) * g);
    Ok((th1, s1))
}

#[derive(Clone, Debug, PartialEq)]
pub struct CriterionInput {
    pub grad_theta_norm: f64,
    pub theta: f64,
    pub l_mfp: f64,
    pub delta_max: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CriterionResult {
    pub c_hyp: f64,
    pub satisfied: bool,
}

/// `|∇θ| < C_hyp·θ/l_mfp`.
pub fn hyperbolicity_criterion(input: &CriterionInput) -> Result<CriterionResult> {
    let CriterionInput { grad_theta_norm, theta, l_mfp, delta_max } = *input;
    if !(grad_theta_norm >= 0.0 && grad_theta_norm.is_finite()) {
        return Err(Error::InvalidInput(format!("|∇θ| must be finite and nonnegative, got {grad_theta_norm}")));
    }
    if !(theta > 0.0 && l_mfp > 0.0 && delta_max > 0.0) {
        return Err(Error::InvalidInput("θ, l_mfp and δ_max must be positive".into()));
    }
    let c = c_hyp(delta_max);
    Ok(CriterionResult { c_hyp: c, satisfied: grad_theta_norm < c * theta / l_mfp })
}
