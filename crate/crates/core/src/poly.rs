//! Dense univariate polynomials, Sylvester matrices and resultants.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::roots::{self, RootSet};
use crate::scalar::Scalar;

/// Coefficients in ascending degree; trailing zeros are stripped, so the
/// zero polynomial has no coefficients and `degree() == None`.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> Polynomial<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    /// Integer coefficients, ascending.
    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| T::int(c)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    pub fn one() -> Self {
        Self::constant(T::one())
    }

    /// The indeterminate `x`.
    pub fn x() -> Self {
        Self::new(vec![T::zero(), T::one()])
    }

    pub fn monomial(c: T, k: usize) -> Self {
        let mut v = vec![T::zero(); k];
        v.push(c);
        Self::new(v)
    }

    /// `∏ (x − r)` over the given roots.
    pub fn from_roots(roots: &[T]) -> Self {
        roots.iter().fold(Self::one(), |acc, r| {
            &acc * &Self::new(vec![-r.clone(), T::one()])
        })
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).cloned().unwrap_or_else(T::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Option<&T> {
        self.coeffs.last()
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Polynomial<U> {
        Polynomial::new(self.coeffs.iter().map(f).collect())
    }

    pub fn as_f64(&self) -> Polynomial<f64> {
        self.map(|c| c.as_f64())
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.as_f64().abs()).fold(0.0, f64::max)
    }

    pub fn eval(&self, x: &T) -> T {
        self.coeffs.iter().rev().fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c.as_f64())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.clone() * T::int(k as i64))
                .collect(),
        )
    }

    pub fn scale(&self, s: &T) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.clone() * s.clone()).collect())
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(), |acc, _| &acc * self)
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(lc) => {
                let inv = T::one() / lc.clone();
                self.scale(&inv)
            }
            None => Self::zero(),
        }
    }

    /// `p(a·x + b)`.
    pub fn compose_affine(&self, a: &T, b: &T) -> Self {
        let lin = Self::new(vec![b.clone(), a.clone()]);
        self.coeffs
            .iter()
            .rev()
            .fold(Self::zero(), |acc, c| &(&acc * &lin) + &Self::constant(c.clone()))
    }

    /// Euclidean division. Panics on a zero divisor.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lc = d.leading().unwrap().clone();
        let mut r = self.coeffs.clone();
        let Some(rd) = self.degree().filter(|&n| n >= dd) else {
            return (Self::zero(), self.clone());
        };
        let mut q = vec![T::zero(); rd - dd + 1];
        for k in (0..=rd - dd).rev() {
            let f = r[k + dd].clone() / lc.clone();
            for (j, dc) in d.coeffs.iter().enumerate() {
                r[k + j] = r[k + j].clone() - f.clone() * dc.clone();
            }
            // the cancelled slot is set explicitly so float noise cannot leave a stray leading term
            r[k + dd] = T::zero();
            q[k] = f;
        }
        r.truncate(dd);
        (Self::new(q), Self::new(r))
    }

    /// Monic gcd by the Euclidean algorithm. Reliable for exact types only;
    /// float remainders are never exactly zero.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Polynomial with the same roots, each simple, and the same leading
    /// coefficient. Exact types use `p / gcd(p, p')`; floats cluster the
    /// numerical roots (relative radius `1e-6`) and rebuild the product.
    pub fn squarefree_part(&self) -> Self {
        assert!(!self.is_zero(), "squarefree part of the zero polynomial");
        if self.degree() == Some(0) {
            return self.clone();
        }
        let lc = self.leading().unwrap().clone();
        if T::EXACT {
            let g = self.gcd(&self.derivative());
            let (q, _) = self.div_rem(&g);
            return q.monic().scale(&lc);
        }
        let rs = match roots::roots(&self.as_f64(), 1e-9) {
            Ok(r) => r,
            Err(_) => return self.clone(),
        };
        let centers = roots::cluster(&rs.roots, 1e-6);
        let m = roots::real_poly_from_roots(&centers);
        m.map(|c| T::from_float(*c)).scale(&lc)
    }

    pub fn roots(&self, tol: f64) -> Result<RootSet> {
        roots::roots(&self.as_f64(), tol)
    }

    /// Float mode: tests each factor of the root-product form of
    /// `res(p, p')`, i.e. whether two roots satisfy
    /// `|rᵢ − rⱼ|² ≤ tol·max(1, |rᵢ|, |rⱼ|)²`.
    /// Exact mode: `res(p, p') == 0`.
    pub fn has_multiple_roots(&self, tol: f64) -> bool {
        let Some(n) = self.degree() else { return true };
        if n == 0 {
            return false;
        }
        if T::EXACT {
            return resultant(self, &self.derivative()).map(|r| r.is_zero()).unwrap_or(true);
        }
        match self.roots(tol) {
            Ok(rs) => roots::min_relative_separation(&rs.roots).powi(2) <= tol,
            Err(_) => true,
        }
    }

    /// Number of distinct real roots by a Sturm sequence. Exact types only.
    pub fn sturm_count(&self) -> usize {
        assert!(T::EXACT, "Sturm counts need exact arithmetic");
        if self.degree().unwrap_or(0) == 0 {
            return 0;
        }
        let mut chain = vec![self.clone(), self.derivative()];
        loop {
            let n = chain.len();
            let (_, r) = chain[n - 2].div_rem(&chain[n - 1]);
            if r.is_zero() {
                break;
            }
            chain.push(-&r);
        }
        let variations = |signs: Vec<bool>| signs.windows(2).filter(|w| w[0] != w[1]).count();
        let at_pos: Vec<bool> =
            chain.iter().map(|p| p.leading().unwrap().gt_zero()).collect();
        let at_neg: Vec<bool> = chain
            .iter()
            .map(|p| p.leading().unwrap().gt_zero() == (p.degree().unwrap() % 2 == 0))
            .collect();
        variations(at_neg) - variations(at_pos)
    }
}

/// Sylvester matrix with `deg q` rows of `p` followed by `deg p` rows of `q`,
/// coefficients written leading-first.
pub fn sylvester_matrix<T: Scalar>(p: &Polynomial<T>, q: &Polynomial<T>) -> Result<Matrix<T>> {
    let (m, n) = match (p.degree(), q.degree()) {
        (Some(m), Some(n)) if m + n > 0 => (m, n),
        (Some(_), Some(_)) => return Err(Error::InvalidInput("both polynomials are constant".into())),
        _ => return Err(Error::InvalidInput("zero polynomial in Sylvester matrix".into())),
    };
    let size = m + n;
    let mut s = Matrix::zeros(size);
    for r in 0..n {
        for (k, c) in p.coeffs().iter().rev().enumerate() {
            s[(r, r + k)] = c.clone();
        }
    }
    for r in 0..m {
        for (k, c) in q.coeffs().iter().rev().enumerate() {
            s[(n + r, r + k)] = c.clone();
        }
    }
    Ok(s)
}

pub fn resultant<T: Scalar>(p: &Polynomial<T>, q: &Polynomial<T>) -> Result<T> {
    Ok(sylvester_matrix(p, q)?.determinant())
}

impl<T: Scalar> Add for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn add(self, rhs: &Polynomial<T>) -> Polynomial<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl<T: Scalar> Sub for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn sub(self, rhs: &Polynomial<T>) -> Polynomial<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl<T: Scalar> Mul for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn mul(self, rhs: &Polynomial<T>) -> Polynomial<T> {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Polynomial::new(out)
    }
}

impl<T: Scalar> Neg for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn neg(self) -> Polynomial<T> {
        Polynomial::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

macro_rules! forward_owned {
    ($($tr:ident $f:ident),*) => {$(
        impl<T: Scalar> $tr for Polynomial<T> {
            type Output = Polynomial<T>;
            fn $f(self, rhs: Polynomial<T>) -> Polynomial<T> {
                (&self).$f(&rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl<T: Scalar> fmt::Display for Polynomial<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})x")?,
                _ => write!(f, "({c})x^{k}")?,
            }
        }
        Ok(())
    }
}
