//! Characteristic polynomials, polynomial-of-matrix evaluation and the
//! real-diagonalizability decision.
//!
//! A matrix is real diagonalizable iff its characteristic polynomial has
//! only real roots and the squarefree part of that polynomial annihilates
//! the matrix. Exact scalars turn both tests into certificates (Sturm count
//! and an exactly zero matrix).


use crate::error::Result;
use crate::matrix::Matrix;
use crate::poly::Polynomial;
use crate::roots::{self, RootSet};
use crate::scalar::Scalar;

/// Monic `det(λI − A)`: Faddeev–LeVerrier for exact types, Hessenberg
/// reduction plus the Hyman recurrence for floats.
pub fn characteristic_polynomial<T: Scalar>(a: &Matrix<T>) -> Polynomial<T> {
    if T::EXACT {
        faddeev_leverrier(a)
    } else {
        hessenberg_charpoly(a)
    }
}

pub fn faddeev_leverrier<T: Scalar>(a: &Matrix<T>) -> Polynomial<T> {
    let n = a.dim();
    let mut c = vec![T::zero(); n + 1];
    c[n] = T::one();
    let mut m = Matrix::zeros(n);
    for k in 1..=n {
        m = &(a * &m) + &Matrix::identity(n).scale(&c[n + 1 - k]);
        c[n - k] = -(a * &m).trace() / T::int(k as i64);
    }
    Polynomial::new(c)
}

/// Reduces to upper Hessenberg form by stabilized elementary similarities.
pub fn hessenberg<T: Scalar>(a: &Matrix<T>) -> Matrix<T> {
    let n = a.dim();
    let mut h = a.clone();
    for m in 1..n.saturating_sub(1) {
        let mut piv = m;
        for j in m..n {
            if h[(j, m - 1)].as_f64().abs() > h[(piv, m - 1)].as_f64().abs() {
                piv = j;
            }
        }
        if piv != m {
            h.swap_rows(piv, m);
            for r in 0..n {
                let tmp = h[(r, piv)].clone();
                h[(r, piv)] = h[(r, m)].clone();
                h[(r, m)] = tmp;
            }
        }
        let x = h[(m, m - 1)].clone();
        if x.is_zero() {
            continue;
        }
        for i in m + 1..n {
            let y = h[(i, m - 1)].clone() / x.clone();
            if y.is_zero() {
                continue;
            }
            for j in m - 1..n {
                let v = h[(i, j)].clone() - y.clone() * h[(m, j)].clone();
                h[(i, j)] = v;
            }
            h[(i, m - 1)] = T::zero();
            for r in 0..n {
                let v = h[(r, m)].clone() + y.clone() * h[(r, i)].clone();
                h[(r, m)] = v;
            }
        }
    }
    h
}

pub fn hessenberg_charpoly<T: Scalar>(a: &Matrix<T>) -> Polynomial<T> {
    let h = hessenberg(a);
    let n = h.dim();
    let mut p: Vec<Polynomial<T>> = vec![Polynomial::one()];
    for k in 0..n {
        let lin = Polynomial::new(vec![-h[(k, k)].clone(), T::one()]);
        let mut pk = &lin * &p[k];
        let mut sub = T::one();
        for i in (0..k).rev() {
            sub = sub * h[(i + 1, i)].clone();
            let coef = h[(i, k)].clone() * sub.clone();
            if !coef.is_zero() {
                pk = &pk - &p[i].scale(&coef);
            }
        }
        p.push(pk);
    }
    p.pop().unwrap()
}

/// Horner evaluation of `q(A)`.
pub fn evaluate_poly_at_matrix<T: Scalar>(q: &Polynomial<T>, a: &Matrix<T>) -> Matrix<T> {
    let n = a.dim();
    q.coeffs().iter().rev().fold(Matrix::zeros(n), |acc, c| {
        &(&acc * a) + &Matrix::identity(n).scale(c)
    })
}

/// Outcome of [`annihilates`]: the decision and the relative residual.
#[derive(Clone, Debug, PartialEq)]
pub struct Annihilation {
    pub annihilates: bool,
    pub residual: f64,
}

/// Exact mode: `q(A) == 0`. Float mode: after scaling `A` by its spectral
/// radius estimate `s` and `q` by its largest coefficient, the residual
/// `‖q̂(Â)‖_F / Σ|q̂ₖ|‖Â‖_Fᵏ` must not exceed `tol`.
pub fn annihilates<T: Scalar>(q: &Polynomial<T>, a: &Matrix<T>, tol: f64) -> Annihilation {
    if T::EXACT {
        let r = evaluate_poly_at_matrix(q, a);
        let scale = a.frobenius_norm().max(1.0).powi(q.degree().unwrap_or(0) as i32)
            * q.max_abs_coeff().max(f64::MIN_POSITIVE);
        return Annihilation { annihilates: r.is_zero(), residual: r.frobenius_norm() / scale };
    }
    let af = a.as_f64();
    let s = eigenvalues(&af)
        .map(|r| r.spectral_radius())
        .unwrap_or(0.0)
        .max(af.frobenius_norm() * f64::EPSILON)
        .max(f64::MIN_POSITIVE);
    let a_hat = af.scale(&(1.0 / s));
    let mut scaled: Vec<f64> =
        q.coeffs().iter().enumerate().map(|(k, c)| c.as_f64() * s.powi(k as i32)).collect();
    let big = scaled.iter().map(|c| c.abs()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    scaled.iter_mut().for_each(|c| *c /= big);
    let q_hat = Polynomial::new(scaled);
    let r = evaluate_poly_at_matrix(&q_hat, &a_hat);
    let norm_a = a_hat.frobenius_norm();
    let denom = q_hat
        .coeffs()
        .iter()
        .enumerate()
        .map(|(k, c)| c.abs() * norm_a.powi(k as i32))
        .sum::<f64>()
        .max(f64::MIN_POSITIVE);
    let residual = r.frobenius_norm() / denom;
    Annihilation { annihilates: residual <= tol, residual }
}

/// Numerical spectrum via the real Schur form.
pub fn eigenvalues<T: Scalar>(a: &Matrix<T>) -> Result<RootSet> {
    let n = a.dim();
    if n == 0 {
        return Ok(RootSet { roots: Vec::new(), tolerance: 0.0 });
    }
    let roots = roots::schur_eigenvalues(a.to_nalgebra())?;
    Ok(RootSet { roots, tolerance: 1e-8 })
}

#[derive(Clone, Debug)]
pub struct DiagOptions {
    /// Realness: `max |Im λ| ≤ imag_tol·max(1, spectral radius)`.
    pub imag_tol: f64,
    /// Float mode: eigenvalues within this relative distance are one root of the squarefree part.
    pub cluster_tol: f64,
    /// Float mode: relative Frobenius residual allowed for the annihilation test.
    pub annihilation_tol: f64,
}

impl Default for DiagOptions {
    fn default() -> Self {
        Self { imag_tol: 1e-8, cluster_tol: 1e-6, annihilation_tol: 1e-8 }
    }
}

impl DiagOptions {
    pub fn with_imag_tol(tol: f64) -> Self {
        Self { imag_tol: tol, ..Self::default() }
    }
}

#[derive(Clone, Debug)]
pub struct DiagReport {
    pub eigenvalues: RootSet,
    pub all_real: bool,
    pub diagonalizable: bool,
    /// Relative residual of the squarefree part evaluated at the matrix.
    pub annihilation_residual: f64,
    /// Squarefree part of the characteristic polynomial, as used in the test.
    pub annihilator: Polynomial<f64>,
    /// True when computed in exact arithmetic.
    pub certified: bool,
    pub witness: Option<String>,
}

pub fn is_real_diagonalizable<T: Scalar>(a: &Matrix<T>, opts: &DiagOptions) -> Result<DiagReport> {
    let mut eig = eigenvalues(a)?;
    eig.tolerance = opts.imag_tol;
    let (sf, all_real) = if T::EXACT {
        let cp = faddeev_leverrier(a);
        let sf = cp.squarefree_part();
        let real = sf.sturm_count() == sf.degree().unwrap_or(0);
        (sf, real)
    } else {
        let centres = roots::cluster(&eig.roots, opts.cluster_tol);
        let sf = roots::real_poly_from_roots(&centres).map(|c| T::from_float(*c));
        (sf, eig.all_real())
    };
    let ann = annihilates(&sf, a, opts.annihilation_tol);
    let witness = if !all_real {
        Some(format!("non-real eigenvalues, max |Im| = {:e}", eig.max_imag()))
    } else if !ann.annihilates {
        Some(format!("m(A) != 0, relative residual {:e}", ann.residual))
    } else {
        None
    };
    Ok(DiagReport {
        eigenvalues: eig,
        all_real,
        diagonalizable: all_real && ann.annihilates,
        annihilation_residual: ann.residual,
        annihilator: sf.as_f64(),
        certified: T::EXACT,
        witness,
    })
}
