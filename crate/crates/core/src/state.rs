//! Macroscopic states and the 3×3 tensor helpers they need.
//!
//! Both 13-moment systems use the variable ordering
//! `(ρ, u₁, u₂, u₃, θ₁₁, θ₂₂, θ₃₃, θ₁₂, θ₁₃, θ₂₃, f₁, f₂, f₃)` where `f` is the
//! heat flux `q` (Grad) or the modified flux `s`.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub type Vec3<T> = [T; 3];
pub type Tensor3<T> = [[T; 3]; 3];

/// Index pairs of the six stored components of a symmetric tensor.
pub const SYM_PAIRS: [(usize, usize); 6] = [(0, 0), (1, 1), (2, 2), (0, 1), (0, 2), (1, 2)];

/// Column of `θ_ij` in the state vector (either index order).
pub fn theta_col(i: usize, j: usize) -> usize {
    let (a, b) = if i <= j { (i, j) } else { (j, i) };
    4 + SYM_PAIRS.iter().position(|&p| p == (a, b)).expect("indices below 3")
}

pub fn vec3<T: Scalar>(v: [f64; 3]) -> Vec3<T> {
    v.map(T::from_float)
}

pub fn tensor3<T: Scalar>(t: [[f64; 3]; 3]) -> Tensor3<T> {
    t.map(|r| r.map(T::from_float))
}

pub fn zeros3<T: Scalar>() -> Vec3<T> {
    std::array::from_fn(|_| T::zero())
}

pub fn identity3<T: Scalar>() -> Tensor3<T> {
    std::array::from_fn(|i| std::array::from_fn(|j| if i == j { T::one() } else { T::zero() }))
}

pub fn scaled_identity3<T: Scalar>(s: &T) -> Tensor3<T> {
    std::array::from_fn(|i| std::array::from_fn(|j| if i == j { s.clone() } else { T::zero() }))
}

pub fn dot<T: Scalar>(a: &Vec3<T>, b: &Vec3<T>) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

pub fn mat_vec<T: Scalar>(m: &Tensor3<T>, v: &Vec3<T>) -> Vec3<T> {
    std::array::from_fn(|i| dot(&m[i], v))
}

pub fn mat_mul<T: Scalar>(a: &Tensor3<T>, b: &Tensor3<T>) -> Tensor3<T> {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| (0..3).fold(T::zero(), |acc, k| acc + a[i][k].clone() * b[k][j].clone()))
    })
}

pub fn transpose<T: Scalar>(a: &Tensor3<T>) -> Tensor3<T> {
    std::array::from_fn(|i| std::array::from_fn(|j| a[j][i].clone()))
}

pub fn trace<T: Scalar>(a: &Tensor3<T>) -> T {
    a[0][0].clone() + a[1][1].clone() + a[2][2].clone()
}

pub fn det3<T: Scalar>(a: &Tensor3<T>) -> T {
    let m = |i: usize, j: usize| a[i][j].clone();
    m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0))
        + m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0))
}

/// Inverse by the adjugate; `None` when singular.
pub fn inverse3<T: Scalar>(a: &Tensor3<T>) -> Option<Tensor3<T>> {
    let d = det3(a);
    if d.is_zero() {
        return None;
    }
    let m = |i: usize, j: usize| a[i % 3][j % 3].clone();
    Some(std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            // cofactor of (j, i), cyclic form
            (m(j + 1, i + 1) * m(j + 2, i + 2) - m(j + 1, i + 2) * m(j + 2, i + 1)) / d.clone()
        })
    }))
}

pub fn is_symmetric<T: Scalar>(a: &Tensor3<T>) -> bool {
    (0..3).all(|i| (0..3).all(|j| a[i][j] == a[j][i]))
}

/// Positive definiteness by leading principal minors (exact sign tests for rationals).
pub fn is_spd<T: Scalar>(a: &Tensor3<T>) -> bool {
    let m1 = a[0][0].clone();
    let m2 = a[0][0].clone() * a[1][1].clone() - a[0][1].clone() * a[1][0].clone();
    is_symmetric(a) && m1.gt_zero() && m2.gt_zero() && det3(a).gt_zero()
}

fn validate<T: Scalar>(rho: &T, theta: &Tensor3<T>) -> Result<()> {
    if !rho.gt_zero() {
        return Err(Error::InvalidState(format!("density must be positive, got {rho}")));
    }
    if !is_symmetric(theta) {
        return Err(Error::InvalidState("temperature tensor is not symmetric".into()));
    }
    if !is_spd(theta) {
        return Err(Error::InvalidState("temperature tensor is not positive definite".into()));
    }
    Ok(())
}

fn pack<T: Scalar>(rho: &T, u: &Vec3<T>, theta: &Tensor3<T>, f: &Vec3<T>) -> Vec<T> {
    let mut w = Vec::with_capacity(13);
    w.push(rho.clone());
    w.extend(u.iter().cloned());
    w.extend(SYM_PAIRS.iter().map(|&(i, j)| theta[i][j].clone()));
    w.extend(f.iter().cloned());
    w
}

fn unpack<T: Scalar>(w: &[T]) -> Result<(T, Vec3<T>, Tensor3<T>, Vec3<T>)> {
    if w.len() != 13 {
        return Err(Error::InvalidInput(format!("state vector needs 13 entries, got {}", w.len())));
    }
    let mut theta = identity3::<T>();
    for (k, &(i, j)) in SYM_PAIRS.iter().enumerate() {
        theta[i][j] = w[4 + k].clone();
        theta[j][i] = w[4 + k].clone();
    }
    Ok((
        w[0].clone(),
        [w[1].clone(), w[2].clone(), w[3].clone()],
        theta,
        [w[10].clone(), w[11].clone(), w[12].clone()],
    ))
}

/// State of Grad's 13-moment system.
#[derive(Clone, Debug, PartialEq)]
pub struct GradState<T> {
    pub rho: T,
    pub u: Vec3<T>,
    pub theta: Tensor3<T>,
    pub q: Vec3<T>,
}

impl<T: Scalar> GradState<T> {
    pub fn new(rho: T, u: Vec3<T>, theta: Tensor3<T>, q: Vec3<T>) -> Result<Self> {
        validate(&rho, &theta)?;
        Ok(Self { rho, u, theta, q })
    }

    pub fn to_vector(&self) -> Vec<T> {
        pack(&self.rho, &self.u, &self.theta, &self.q)
    }

    pub fn from_vector(w: &[T]) -> Result<Self> {
        let (rho, u, theta, q) = unpack(w)?;
        Self::new(rho, u, theta, q)
    }

    /// `θ = tr Θ / 3`.
    pub fn temperature(&self) -> T {
        trace(&self.theta) / T::int(3)
    }
}

/// State of the modified 13-moment system.
#[derive(Clone, Debug, PartialEq)]
pub struct ModState<T> {
    pub rho: T,
    pub u: Vec3<T>,
    pub theta: Tensor3<T>,
    pub s: Vec3<T>,
}

impl<T: Scalar> ModState<T> {
    pub fn new(rho: T, u: Vec3<T>, theta: Tensor3<T>, s: Vec3<T>) -> Result<Self> {
        validate(&rho, &theta)?;
        Ok(Self { rho, u, theta, s })
    }

    pub fn to_vector(&self) -> Vec<T> {
        pack(&self.rho, &self.u, &self.theta, &self.s)
    }

    pub fn from_vector(w: &[T]) -> Result<Self> {
        let (rho, u, theta, s) = unpack(w)?;
        Self::new(rho, u, theta, s)
    }

    pub fn temperature(&self) -> T {
        trace(&self.theta) / T::int(3)
    }

    /// Equilibrium: `Θ = θI`, `s = 0`.
    pub fn equilibrium(rho: T, u: Vec3<T>, theta: T) -> Result<Self> {
        Self::new(rho, u, scaled_identity3(&theta), zeros3())
    }
}

/// State of the one-dimensional reduction `(ρ, u₁, θ₁₁, θ₂₂, q₁)`, with
/// `θ₃₃ = θ₂₂` and all transverse quantities zero.
#[derive(Clone, Debug, PartialEq)]
pub struct GradState1D<T> {
    pub rho: T,
    pub u1: T,
    pub theta11: T,
    pub theta22: T,
    pub q1: T,
}

impl<T: Scalar> GradState1D<T> {
    pub fn new(rho: T, u1: T, theta11: T, theta22: T, q1: T) -> Result<Self> {
        if !rho.gt_zero() || !theta11.gt_zero() || !theta22.gt_zero() {
            return Err(Error::InvalidState("ρ, θ₁₁ and θ₂₂ must be positive".into()));
        }
        Ok(Self { rho, u1, theta11, theta22, q1 })
    }

    pub fn temperature(&self) -> T {
        (self.theta11.clone() + T::int(2) * self.theta22.clone()) / T::int(3)
    }

    pub fn to_vector(&self) -> Vec<T> {
        vec![self.rho.clone(), self.u1.clone(), self.theta11.clone(), self.theta22.clone(), self.q1.clone()]
    }
}
