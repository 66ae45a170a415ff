//! Exact rational scalars, dense matrices, and the polynomial/spectral
//! primitives the rest of the engine consumes.

mod matrix;
mod poly;
mod rational;

pub use matrix::{RatMatrix, Rref};
pub use poly::Polynomial;
pub use rational::{ParseRationalError, Rational};

use crate::quadratic_space::Subspace;

/// Monic polynomial of least degree annihilating `m`.
///
/// Found by stacking the flattened powers I, m, m², … and stopping at the
/// first linear dependence.
///
/// # Panics
/// Panics if `m` is not square.
pub fn minimal_polynomial(m: &RatMatrix) -> Polynomial {
    assert_eq!(m.rows(), m.cols(), "minimal_polynomial needs a square matrix");
    let n = m.rows();
    let mut powers: Vec<Vec<Rational>> = vec![RatMatrix::identity(n).into_entries()];
    let mut current = RatMatrix::identity(n);
    loop {
        current = &current * m;
        let flat = current.clone().into_entries();
        // Solve sum_i c_i * powers[i] = flat; the first consistent system
        // gives the minimal dependence.
        let k = powers.len();
        let mut sys = RatMatrix::zero(n * n, k);
        for (i, p) in powers.iter().enumerate() {
            for (r, v) in p.iter().enumerate() {
                sys.set(r, i, v.clone());
            }
        }
        if let Some(coeffs) = sys.solve(&flat) {
            // m^k = sum c_i m^i, so the polynomial is x^k - sum c_i x^i.
            let mut cs: Vec<Rational> = coeffs.into_iter().map(|c| -c).collect();
            cs.push(Rational::one());
            return Polynomial::new(cs);
        }
        powers.push(flat);
        assert!(
            powers.len() <= n + 1,
            "dependence must occur by degree n (Cayley-Hamilton)"
        );
    }
}

/// Characteristic polynomial via the Faddeev–LeVerrier recurrence (exact).
///
/// # Panics
/// Panics if `m` is not square.
pub fn characteristic_polynomial(m: &RatMatrix) -> Polynomial {
    assert_eq!(m.rows(), m.cols(), "characteristic_polynomial needs a square matrix");
    let n = m.rows();
    // coefficients of x^n + c_{n-1} x^{n-1} + ... + c_0
    let mut coeffs = vec![Rational::zero(); n + 1];
    coeffs[n] = Rational::one();
    let mut aux = RatMatrix::identity(n);
    for k in 1..=n {
        aux = m * &aux;
        let c = -(aux.trace() / Rational::from_i64(k as i64));
        coeffs[n - k] = c.clone();
        for i in 0..n {
            let v = aux.get(i, i) + &c;
            aux.set(i, i, v);
        }
    }
    Polynomial::new(coeffs)
}

/// Exact exponential of a nilpotent matrix scaled by `t`: the finite sum
/// Σ tᵏ nᵏ / k!.
///
/// Returns an error if `n` is not nilpotent (detected via n^dim ≠ 0).
pub fn nilpotent_exp(n: &RatMatrix, t: &Rational) -> Result<RatMatrix, LinalgError> {
    if n.rows() != n.cols() {
        return Err(LinalgError::NotSquare { rows: n.rows(), cols: n.cols() });
    }
    let dim = n.rows();
    let mut result = RatMatrix::identity(dim);
    let mut term = RatMatrix::identity(dim);
    let mut factorial = Rational::one();
    for k in 1..=dim {
        term = &term * n;
        if term.is_zero() {
            return Ok(result);
        }
        factorial *= Rational::from_i64(k as i64);
        let scale = t.pow(k as u32) / factorial.clone();
        result = &result + &term.scale(&scale);
    }
    // term = n^dim survived all dim multiplications: not nilpotent.
    Err(LinalgError::NotNilpotent)
}

/// Fitting decomposition of a square matrix: (ker xⁿ, im xⁿ).
///
/// Both parts are invariant under every matrix commuting with `x`, and their
/// dimensions sum to n.
///
/// # Panics
/// Panics if `x` is not square.
pub fn fitting_split(x: &RatMatrix) -> (Subspace, Subspace) {
    assert_eq!(x.rows(), x.cols(), "fitting_split needs a square matrix");
    let n = x.rows();
    let xn = x.pow(n as u32);
    let kernel = xn.kernel_basis();
    let image = Subspace::from_rows(n, xn.transpose());
    (kernel, image)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinalgError {
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not nilpotent")]
    NotNilpotent,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_i64(n)
    }

    fn m(rows: &[&[i64]]) -> RatMatrix {
        RatMatrix::from_i64_rows(rows)
    }

    /// Infinitesimal generator of the worked one-parameter subgroup of
    /// SO(2,2): columns read N e1 = e2+e4, N e2 = -(e1+e3), N e3 = -(e2+e4),
    /// N e4 = e1+e3.
    fn big_n() -> RatMatrix {
        m(&[
            &[0, -1, 0, 1],
            &[1, 0, -1, 0],
            &[0, -1, 0, 1],
            &[1, 0, -1, 0],
        ])
    }

    #[test]
    fn minpoly_identity() {
        let p = minimal_polynomial(&RatMatrix::identity(3));
        assert_eq!(p, Polynomial::new(vec![q(-1), q(1)]));
    }

    #[test]
    fn minpoly_nilpotent_generator_is_x_squared() {
        let n = big_n();
        assert!((&n * &n).is_zero());
        let p = minimal_polynomial(&n);
        assert_eq!(p, Polynomial::new(vec![q(0), q(0), q(1)]));
    }

    #[test]
    fn minpoly_idempotent_diag() {
        let d = m(&[&[0, 0, 0], &[0, 0, 0], &[0, 0, 1]]);
        let p = minimal_polynomial(&d);
        assert_eq!(p, Polynomial::new(vec![q(0), q(-1), q(1)]));
    }

    #[test]
    fn charpoly_matches_minpoly_degree_on_companion() {
        let c = m(&[&[0, -1], &[1, 0]]);
        let cp = characteristic_polynomial(&c);
        assert_eq!(cp, Polynomial::new(vec![q(1), q(0), q(1)]));
        assert_eq!(minimal_polynomial(&c), cp);
    }

    #[test]
    fn nilpotent_exp_zero_is_identity() {
        let z = RatMatrix::zero(3, 3);
        assert_eq!(nilpotent_exp(&z, &q(7)).unwrap(), RatMatrix::identity(3));
    }

    #[test]
    fn nilpotent_exp_reproduces_group_element_pattern() {
        // exp(t N) at t = 1: identity plus N because N² = 0.
        let n = big_n();
        let h = nilpotent_exp(&n, &q(1)).unwrap();
        assert_eq!(h, &RatMatrix::identity(4) + &n);
    }

    #[test]
    fn nilpotent_exp_inverse_at_negated_parameter() {
        let n = big_n();
        let h = nilpotent_exp(&n, &q(1)).unwrap();
        let hinv = nilpotent_exp(&n, &q(-1)).unwrap();
        assert_eq!(&h * &hinv, RatMatrix::identity(4));
    }

    #[test]
    fn nilpotent_exp_rejects_invertible() {
        assert_eq!(
            nilpotent_exp(&RatMatrix::identity(2), &q(1)),
            Err(LinalgError::NotNilpotent)
        );
    }

    #[test]
    fn fitting_split_idempotent_diag() {
        let d = m(&[&[0, 0, 0], &[0, 0, 0], &[0, 0, 1]]);
        let (ker, im) = fitting_split(&d);
        assert_eq!(ker, Subspace::from_i64_rows(3, &[&[1, 0, 0], &[0, 1, 0]]));
        assert_eq!(im, Subspace::from_i64_rows(3, &[&[0, 0, 1]]));
    }

    #[test]
    fn fitting_split_nilpotent_has_no_split() {
        let n = big_n();
        let (ker, im) = fitting_split(&n);
        assert_eq!(ker.dim(), 4);
        assert_eq!(im.dim(), 0);
    }

    #[test]
    fn fitting_split_invertible_has_no_kernel() {
        let (ker, im) = fitting_split(&RatMatrix::identity(3));
        assert_eq!(ker.dim(), 0);
        assert_eq!(im.dim(), 3);
    }
}
