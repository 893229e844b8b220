//! Numerical roots of float polynomials.
//!
//! Roots come from the eigenvalues of the balanced companion matrix (real
//! Schur form) and are then polished by Aberth–Ehrlich iterations. The
//! polished set is kept only if it lowers the worst backward error.

use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::poly::Polynomial;

const SCHUR_ITER_PER_ROW: usize = 60;
const ABERTH_MAX_ITER: usize = 60;

#[derive(Clone, Debug, PartialEq)]
pub struct RootSet {
    pub roots: Vec<Complex64>,
    /// Relative tolerance used for realness and multiplicity classification.
    pub tolerance: f64,
}

impl RootSet {
    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn max_imag(&self) -> f64 {
        self.roots.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }

    pub fn spectral_radius(&self) -> f64 {
        self.roots.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Real when every imaginary part is within `tolerance·max(1, radius)`.
    pub fn all_real(&self) -> bool {
        self.max_imag() <= self.tolerance * self.spectral_radius().max(1.0)
    }

    /// Roots ordered by real part, then imaginary part.
    pub fn sorted(&self) -> Vec<Complex64> {
        let mut v = self.roots.clone();
        v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        v
    }

    /// Multiset comparison: every root pairs with a distinct root of `other`
    /// within `tol·max(1, |z|)`.
    pub fn matches(&self, other: &[Complex64], tol: f64) -> bool {
        multiset_match(&self.roots, other, tol)
    }
}

pub fn multiset_match(a: &[Complex64], b: &[Complex64], tol: f64) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut used = vec![false; b.len()];
    let mut order: Vec<usize> = (0..a.len()).collect();
    order.sort_by(|&i, &j| a[i].re.total_cmp(&a[j].re));
    for i in order {
        let best = (0..b.len())
            .filter(|&j| !used[j])
            .min_by(|&x, &y| (a[i] - b[x]).norm().total_cmp(&(a[i] - b[y]).norm()));
        match best {
            Some(j) if (a[i] - b[j]).norm() <= tol * a[i].norm().max(1.0) => used[j] = true,
            _ => return false,
        }
    }
    true
}

/// All complex roots with multiplicity.
pub fn roots(p: &Polynomial<f64>, tol: f64) -> Result<RootSet> {
    let n = match p.degree() {
        Some(n) if n >= 1 => n,
        _ => return Err(Error::InvalidInput("roots of a constant polynomial".into())),
    };
    if p.coeffs().iter().any(|c| !c.is_finite()) {
        return Err(Error::InvalidInput("non-finite polynomial coefficient".into()));
    }
    let zeros = p.coeffs().iter().take_while(|c| **c == 0.0).count();
    let mut out = vec![Complex64::new(0.0, 0.0); zeros];
    let reduced = Polynomial::new(p.coeffs()[zeros..].to_vec());
    let m = n - zeros;
    if m > 0 {
        let lc = *reduced.leading().unwrap();
        let c: Vec<f64> = reduced.coeffs().iter().map(|x| x / lc).collect();
        let mut comp = DMatrix::<f64>::zeros(m, m);
        for i in 1..m {
            comp[(i, i - 1)] = 1.0;
        }
        for i in 0..m {
            comp[(i, m - 1)] = -c[i];
        }
        let eig = schur_eigenvalues(comp)?;
        out.extend(polish(&reduced, eig));
    }
    let worst = out.iter().map(|&z| backward_error(p, z)).fold(0.0, f64::max);
    if !(worst <= tol) {
        return Err(Error::NoConvergence { iterations: ABERTH_MAX_ITER });
    }
    Ok(RootSet { roots: out, tolerance: tol })
}

/// Eigenvalues of a dense real matrix from its real Schur form, after
/// balancing. The QR iteration in nalgebra has no exceptional shifts and can
/// stall on spectra symmetric about the origin; a stalled attempt is retried
/// on `A + σI` for a few fixed `σ` and the shift is removed afterwards.
pub(crate) fn schur_eigenvalues(mut a: DMatrix<f64>) -> Result<Vec<Complex64>> {
    let n = a.nrows();
    if n == 0 {
        return Ok(Vec::new());
    }
    balance(&mut a);
    let max_iter = SCHUR_ITER_PER_ROW * n;
    let scale = a.iter().map(|x| x.abs()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    for &frac in &[0.0, 0.1, -0.23, 0.37, -0.61, 1.3] {
        let sigma = frac * scale;
        let shifted = &a + DMatrix::<f64>::identity(n, n) * sigma;
        if let Some(s) = Schur::try_new(shifted, f64::EPSILON, max_iter) {
            let (_, t) = s.unpack();
            return Ok(quasi_triangular_eigenvalues(&t).into_iter().map(|z| z - sigma).collect());
        }
    }
    Err(Error::NoConvergence { iterations: max_iter })
}

/// Eigenvalues of a real Schur factor. 2×2 blocks are solved directly;
/// nalgebra's own routine can return a NaN imaginary part when a block's
/// discriminant rounds to a tiny negative number.
fn quasi_triangular_eigenvalues(t: &DMatrix<f64>) -> Vec<Complex64> {
    let n = t.nrows();
    let mut out = Vec::with_capacity(n);
    let mut i = 0;
    while i < n {
        if i + 1 < n && t[(i + 1, i)] != 0.0 {
            let (a, b, c, d) = (t[(i, i)], t[(i, i + 1)], t[(i + 1, i)], t[(i + 1, i + 1)]);
            let mid = 0.5 * (a + d);
            let half = 0.5 * (a - d);
            let disc = half * half + b * c;
            if disc >= 0.0 {
                let r = disc.sqrt();
                // avoid cancellation in the smaller root
                let big = mid + r.copysign(mid);
                let small = if big != 0.0 { (a * d - b * c) / big } else { mid - r.copysign(mid) };
                out.push(Complex64::new(big, 0.0));
                out.push(Complex64::new(small, 0.0));
            } else {
                let im = (-disc).sqrt();
                out.push(Complex64::new(mid, im));
                out.push(Complex64::new(mid, -im));
            }
            i += 2;
        } else {
            out.push(Complex64::new(t[(i, i)], 0.0));
            i += 1;
        }
    }
    out
}

/// `|p(z)| / Σ|cₖ||z|ᵏ`.
pub fn backward_error(p: &Polynomial<f64>, z: Complex64) -> f64 {
    let r = z.norm();
    let scale = p.coeffs().iter().rev().fold(0.0, |acc, c| acc * r + c.abs());
    if scale == 0.0 {
        return 0.0;
    }
    p.eval_complex(z).norm() / scale
}

fn polish(p: &Polynomial<f64>, start: Vec<Complex64>) -> Vec<Complex64> {
    let dp = p.derivative();
    let before = start.iter().map(|&z| backward_error(p, z)).fold(0.0, f64::max);
    let mut z = start.clone();
    for _ in 0..ABERTH_MAX_ITER {
        let mut moved = 0.0f64;
        for i in 0..z.len() {
            let f = p.eval_complex(z[i]);
            if f.norm() == 0.0 {
                continue;
            }
            let ratio = f / dp.eval_complex(z[i]);
            let repulsion: Complex64 = (0..z.len())
                .filter(|&j| j != i && z[j] != z[i])
                .map(|j| 1.0 / (z[i] - z[j]))
                .sum();
            let step = ratio / (1.0 - ratio * repulsion);
            if !step.re.is_finite() || !step.im.is_finite() {
                return start;
            }
            z[i] -= step;
            moved = moved.max(step.norm() / z[i].norm().max(1.0));
        }
        if moved < 4.0 * f64::EPSILON {
            break;
        }
    }
    let after = z.iter().map(|&w| backward_error(p, w)).fold(0.0, f64::max);
    if after < before { z } else { start }
}

/// Parlett–Reinsch diagonal balancing by powers of two.
fn balance(a: &mut DMatrix<f64>) {
    const RADIX: f64 = 2.0;
    let n = a.nrows();
    let mut done = false;
    while !done {
        done = true;
        for i in 0..n {
            let (mut c, mut r) = (0.0, 0.0);
            for j in (0..n).filter(|&j| j != i) {
                c += a[(j, i)].abs();
                r += a[(i, j)].abs();
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            while c < r / RADIX {
                f *= RADIX;
                c *= RADIX * RADIX;
            }
            while c > r * RADIX {
                f /= RADIX;
                c /= RADIX * RADIX;
            }
            if (c + r) / f < 0.95 * s {
                done = false;
                for j in 0..n {
                    a[(i, j)] /= f;
                    a[(j, i)] *= f;
                }
            }
        }
    }
}

/// Greedy clustering: a root joins the first cluster whose centre is within
/// `rel·max(1, |z|)`. Returns cluster centres.
pub fn cluster(roots: &[Complex64], rel: f64) -> Vec<Complex64> {
    let mut centres: Vec<(Complex64, usize)> = Vec::new();
    let mut sorted = roots.to_vec();
    sorted.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    for z in sorted {
        match centres.iter_mut().find(|(c, _)| (*c - z).norm() <= rel * z.norm().max(1.0)) {
            Some((c, k)) => {
                *c = (*c * (*k as f64) + z) / (*k as f64 + 1.0);
                *k += 1;
            }
            None => centres.push((z, 1)),
        }
    }
    centres.into_iter().map(|(c, _)| c).collect()
}

/// Real part of `∏ (x − z)`; exact when the set is closed under conjugation.
pub fn real_poly_from_roots(roots: &[Complex64]) -> Polynomial<f64> {
    let mut c = vec![Complex64::new(1.0, 0.0)];
    for &z in roots {
        let mut next = vec![Complex64::new(0.0, 0.0); c.len() + 1];
        for (k, ck) in c.iter().enumerate() {
            next[k + 1] += ck;
            next[k] -= ck * z;
        }
        c = next;
    }
    Polynomial::new(c.iter().map(|z| z.re).collect())
}

/// `min |rᵢ − rⱼ| / max(1, |rᵢ|, |rⱼ|)`; infinite for fewer than two roots.
pub fn min_relative_separation(roots: &[Complex64]) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..roots.len() {
        for j in i + 1..roots.len() {
            let d = (roots[i] - roots[j]).norm() / roots[i].norm().max(roots[j].norm()).max(1.0);
            best = best.min(d);
        }
    }
    best
}

/// Horner value of `p(x)` and a bound on its rounding error,
/// `γ₂ₙ·Σ|cᵢ||x|ⁱ` with `γₖ = ku/(1 − ku)`.
pub fn eval_with_bound(p: &Polynomial<f64>, x: f64) -> (f64, f64) {
    let n = p.coeffs().len();
    let u = f64::EPSILON / 2.0;
    let k = 2.0 * n as f64 * u;
    let gamma = k / (1.0 - k);
    let (mut v, mut s) = (0.0, 0.0);
    for c in p.coeffs().iter().rev() {
        v = v * x + c;
        s = s * x.abs() + c.abs();
    }
    (v, gamma * s)
}

/// Certifies that `p` has `deg p` distinct real roots. The approximate roots
/// only pick the test points: one left of all roots, one between each
/// consecutive pair, one to the right. If `p` has a strictly alternating,
/// rounding-safe sign at those points, each of the `deg p` gaps holds a root.
pub fn certify_distinct_real(p: &Polynomial<f64>, approx: &[Complex64]) -> bool {
    let Some(n) = p.degree() else { return false };
    if approx.len() != n {
        return false;
    }
    if n == 0 {
        return true;
    }
    let mut xs: Vec<f64> = approx.iter().map(|z| z.re).collect();
    xs.sort_by(f64::total_cmp);
    let pad = 1.0 + xs.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let mut points = Vec::with_capacity(n + 1);
    points.push(xs[0] - pad);
    points.extend(xs.windows(2).map(|w| 0.5 * (w[0] + w[1])));
    points.push(xs[n - 1] + pad);
    let mut prev = 0.0;
    for (k, &x) in points.iter().enumerate() {
        let (v, err) = eval_with_bound(p, x);
        if v.abs() <= err {
            return false;
        }
        if k > 0 && v.signum() == prev {
            return false;
        }
        prev = v.signum();
    }
    true
}

/// `res(p, p')` from the roots of `p`:
/// `(−1)^{n(n−1)/2} lc^{2n−1} ∏_{i<j} (rᵢ − rⱼ)²`.
pub fn derivative_resultant_from_roots(lc: f64, roots: &[Complex64]) -> f64 {
    let n = roots.len();
    if n == 0 {
        return 1.0;
    }
    let mut prod = Complex64::new(1.0, 0.0);
    for i in 0..n {
        for j in i + 1..n {
            let d = roots[i] - roots[j];
            prod *= d * d;
        }
    }
    let sign = if (n * (n - 1) / 2) % 2 == 0 { 1.0 } else { -1.0 };
    sign * lc.powi(2 * n as i32 - 1) * prod.re
}
