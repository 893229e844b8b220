//! Rotations of the 13-component state.
//!
//! For an orthogonal `G`, the rotated state has `ρ' = ρ`, `u' = Gu`,
//! `Θ' = GΘGᵀ` and `f' = Gf`. The map is linear in `w`, so it is a 13×13
//! matrix `R(G)` with `R(G)⁻¹ = R(Gᵀ)`. If the first row of `G` is the unit
//! direction `n`, then `Σ nₖMₖ(w) = R⁻¹ M₁(Rw) R`.

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::Scalar;
use crate::state::{Tensor3, SYM_PAIRS};

/// `R(G)` acting on the state vector.
pub fn rotation_matrix<T: Scalar>(g: &Tensor3<T>) -> Matrix<T> {
    let mut r = Matrix::zeros(13);
    r[(0, 0)] = T::one();
    for a in 0..3 {
        for i in 0..3 {
            r[(1 + a, 1 + i)] = g[a][i].clone();
            r[(10 + a, 10 + i)] = g[a][i].clone();
        }
    }
    for (p, &(a, b)) in SYM_PAIRS.iter().enumerate() {
        for (q, &(i, j)) in SYM_PAIRS.iter().enumerate() {
            let mut v = g[a][i].clone() * g[b][j].clone();
            if i != j {
                v = v + g[a][j].clone() * g[b][i].clone();
            }
            r[(4 + p, 4 + q)] = v;
        }
    }
    r
}

/// Cyclic axis permutation whose first row is `e_k` (`k` in 1..=3).
pub fn axis_permutation<T: Scalar>(k: usize) -> Result<Tensor3<T>> {
    if !(1..=3).contains(&k) {
        return Err(Error::InvalidInput(format!("axis index must be 1, 2 or 3, got {k}")));
    }
    Ok(std::array::from_fn(|row| {
        std::array::from_fn(|col| if col == (k - 1 + row) % 3 { T::one() } else { T::zero() })
    }))
}

/// Orthogonal `G` with first row `n`, completed by Gram–Schmidt from the
/// coordinate axes least aligned with `n`. `n = e₁` gives the identity.
pub fn complete_basis(n: [f64; 3]) -> Result<Tensor3<f64>> {
    let norm = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
    if (norm - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidInput(format!("direction must be a unit vector, |n| = {norm}")));
    }
    let mut basis = vec![n];
    let mut axes = [0usize, 1, 2];
    axes.sort_by(|&a, &b| n[a].abs().total_cmp(&n[b].abs()));
    // keep natural order among the two seeds so e₁ completes to (e₂, e₃)
    let (mut s1, mut s2) = (axes[0], axes[1]);
    if s1 > s2 {
        std::mem::swap(&mut s1, &mut s2);
    }
    for seed in [s1, s2] {
        let mut v = [0.0; 3];
        v[seed] = 1.0;
        for b in &basis {
            let d = v[0] * b[0] + v[1] * b[1] + v[2] * b[2];
            for k in 0..3 {
                v[k] -= d * b[k];
            }
        }
        let len = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        basis.push(v.map(|x| x / len));
    }
    // right-handed, so the third row is the cross product of the first two
    let (a, b) = (basis[0], basis[1]);
    basis[2] = [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]];
    Ok([basis[0], basis[1], basis[2]])
}

/// `R` for the unit direction `n`.
pub fn rotation_for_direction(n: [f64; 3]) -> Result<Matrix<f64>> {
    Ok(rotation_matrix(&complete_basis(n)?))
}

/// `R⁻¹ M R`, where `R⁻¹ = R(Gᵀ)`.
pub fn conjugate<T: Scalar>(g: &Tensor3<T>, m: &Matrix<T>) -> Matrix<T> {
    let r = rotation_matrix(g);
    let r_inv = rotation_matrix(&crate::state::transpose(g));
    &(&r_inv * m) * &r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    #[test]
    fn e1_completes_to_identity() {
        let g = complete_basis([1.0, 0.0, 0.0]).unwrap();
        assert_eq!(g, [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]);
        assert_eq!(rotation_matrix(&g), Matrix::identity(13));
    }

    #[test]
    fn non_unit_rejected() {
        assert!(complete_basis([1.0, 1.0, 0.0]).is_err());
        assert!(axis_permutation::<f64>(4).is_err());
    }

    #[test]
    fn inverse_is_transpose_rotation() {
        let g = complete_basis([0.6, 0.0, 0.8]).unwrap();
        let r = rotation_matrix(&g);
        let r_inv = rotation_matrix(&crate::state::transpose(&g));
        let prod = &r * &r_inv;
        assert!((&prod - &Matrix::identity(13)).max_abs() < 1e-14);
    }

    #[test]
    fn permutations_are_orthogonal() {
        for k in 1..=3 {
            let g: Tensor3<Rational> = axis_permutation(k).unwrap();
            assert_eq!(g[0][k - 1], Rational::int(1));
            assert_eq!(crate::state::mat_mul(&g, &crate::state::transpose(&g)), crate::state::identity3());
            let r = rotation_matrix(&g);
            assert_eq!(&r * &rotation_matrix(&crate::state::transpose(&g)), Matrix::identity(13));
        }
    }
}
