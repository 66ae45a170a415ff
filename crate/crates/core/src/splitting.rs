//! Shared idempotent search over a commutant algebra. Both the orthogonal
//! decomposition (self-adjoint commutant) and the module-level split check
//! (full commutant) funnel through here; only the basis differs.
//!
//! Stages: every basis element, pairwise sums, and symmetrized pairwise
//! products are tried first, deterministically; then seeded random integer
//! combinations. Each candidate is tested directly for idempotency and then
//! through its minimal polynomial: any factorization into two coprime parts
//! c₁·c₂ yields, via Bezout a·c₁ + b·c₂ = 1, the projector (b·c₂)(X) onto
//! ker c₁(X) along ker c₂(X). A factor xᵏ in the minimal polynomial makes
//! this the Fitting split, so that case needs no separate stage.

use crate::exact_linalg::{minimal_polynomial, Polynomial, RatMatrix, Rational};
use crate::quadratic_space::Subspace;
use crate::rng::SplitMix64;

/// A successful split: a nontrivial idempotent from the algebra spanned by
/// the searched basis, with its image and kernel.
#[derive(Clone, Debug)]
pub(crate) struct SplitWitness {
    pub projector: RatMatrix,
    pub image: Subspace,
    pub kernel: Subspace,
}

/// Deterministic candidate pool followed by `random_rounds` seeded
/// combinations with coefficients in -4..=4.
pub(crate) fn candidates(basis: &[RatMatrix], seed: u64, random_rounds: u32) -> Vec<RatMatrix> {
    let mut out = Vec::new();
    for x in basis {
        out.push(x.clone());
    }
    for (i, x) in basis.iter().enumerate() {
        for y in &basis[i + 1..] {
            out.push(x + y);
        }
    }
    let half = Rational::new(1, 2);
    for (i, x) in basis.iter().enumerate() {
        for y in &basis[i + 1..] {
            out.push((&(x * y) + &(y * x)).scale(&half));
        }
    }
    let mut rng = SplitMix64::new(seed);
    for _ in 0..random_rounds {
        let mut combo: Option<RatMatrix> = None;
        for x in basis {
            let c = Rational::from_i64(rng.int_in(-4, 4));
            let term = x.scale(&c);
            combo = Some(match combo {
                None => term,
                Some(acc) => &acc + &term,
            });
        }
        if let Some(m) = combo {
            out.push(m);
        }
    }
    out
}

/// Nontrivial idempotent in the unital algebra generated by `x`, if the
/// minimal polynomial of `x` splits into coprime parts.
pub(crate) fn nontrivial_idempotent(x: &RatMatrix) -> Option<RatMatrix> {
    let n = x.rows();
    let id = RatMatrix::identity(n);
    if &(x * x) == x {
        if !x.is_zero() && *x != id {
            return Some(x.clone());
        }
        return None;
    }
    let p = minimal_polynomial(x);
    let parts = coprime_factors(&p);
    if parts.len() < 2 {
        return None;
    }
    let c1 = parts[0].clone();
    let mut c2 = Polynomial::one();
    for part in &parts[1..] {
        c2 = &c2 * part;
    }
    let (g, _, b) = Polynomial::extended_gcd(&c1, &c2);
    debug_assert_eq!(g, Polynomial::one());
    // (b·c₂)(x) is 1 on ker c₁(x) and 0 on ker c₂(x).
    let proj = (&b * &c2).eval_matrix(x);
    debug_assert_eq!(&proj * &proj, proj);
    if proj.is_zero() || proj == id {
        return None;
    }
    Some(proj)
}

/// Pairwise-coprime nonconstant factors of `p` with multiplicity: each
/// rational root λ contributes (x−λ)^m, the rootless remainder of each
/// squarefree factor contributes itself to the m-th power.
fn coprime_factors(p: &Polynomial) -> Vec<Polynomial> {
    let mut out = Vec::new();
    for (f, m) in p.squarefree_decomposition() {
        let mut rest = f.clone();
        for root in f.rational_roots() {
            let lin = Polynomial::new(vec![-&root, Rational::one()]);
            rest = rest.exact_div(&lin).expect("roots divide a squarefree factor once");
            out.push(lin.pow(m));
        }
        if !rest.is_constant() {
            out.push(rest.pow(m));
        }
    }
    out
}

/// First nontrivial idempotent found over the candidate pool, with its
/// image and kernel. None after exhausting all stages.
pub(crate) fn find_split(
    basis: &[RatMatrix],
    seed: u64,
    random_rounds: u32,
) -> Option<SplitWitness> {
    if basis.is_empty() {
        return None;
    }
    let n = basis[0].rows();
    for cand in candidates(basis, seed, random_rounds) {
        if let Some(projector) = nontrivial_idempotent(&cand) {
            let image = Subspace::from_rows(n, projector.transpose());
            let kernel = projector.kernel_basis();
            return Some(SplitWitness { projector, image, kernel });
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> RatMatrix {
        RatMatrix::from_i64_rows(rows)
    }

    #[test]
    fn direct_idempotent_is_found() {
        let p = m(&[&[1, 0], &[0, 0]]);
        let basis = vec![RatMatrix::identity(2), p.clone()];
        let w = find_split(&basis, 0, 0).unwrap();
        assert_eq!(w.projector, p);
        assert_eq!(w.image.dim(), 1);
        assert_eq!(w.kernel.dim(), 1);
    }

    #[test]
    fn split_through_minimal_polynomial() {
        // diag(1,1,2) is not idempotent; min poly (x-1)(x-2) is coprime-split.
        let x = m(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 2]]);
        let w = find_split(&[x], 0, 0).unwrap();
        let p = &w.projector;
        assert_eq!(&(p * p), p);
        assert_eq!(w.image.dim() + w.kernel.dim(), 3);
        assert!(w.image.dim() == 1 || w.image.dim() == 2);
    }

    #[test]
    fn fitting_case_through_x_power_factor() {
        // diag(0,0,3): min poly x(x-3) = x·(x-3); projector onto im x^n.
        let x = m(&[&[0, 0, 0], &[0, 0, 0], &[0, 0, 3]]);
        let w = find_split(&[x], 0, 0).unwrap();
        assert_eq!(w.image.dim() + w.kernel.dim(), 3);
    }

    #[test]
    fn irreducible_rotation_yields_nothing() {
        // min poly x²+1 has a single irreducible factor: no split, even with
        // random rounds.
        let j = m(&[&[0, -1], &[1, 0]]);
        let basis = vec![RatMatrix::identity(2), j];
        assert!(find_split(&basis, 0, 32).is_none());
    }

    #[test]
    fn nilpotent_yields_nothing() {
        let n = m(&[&[0, 1], &[0, 0]]);
        assert!(find_split(&[n], 0, 8).is_none());
    }

    #[test]
    fn search_is_deterministic() {
        let a = m(&[&[1, 0, 0], &[0, 2, 0], &[0, 0, 3]]);
        let b = m(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 0]]);
        let basis = vec![RatMatrix::identity(3), a, b];
        let w1 = find_split(&basis, 9, 16).unwrap();
        let w2 = find_split(&basis, 9, 16).unwrap();
        assert_eq!(w1.projector, w2.projector);
    }

    #[test]
    fn mixed_root_and_irreducible_factors() {
        // Block diag(J, 2I): min poly (x²+1)(x-2); splits into the rotation
        // plane and the scaled line.
        let x = m(&[&[0, -1, 0], &[1, 0, 0], &[0, 0, 2]]);
        let w = find_split(&[x], 0, 0).unwrap();
        let dims = (w.image.dim(), w.kernel.dim());
        assert!(dims == (1, 2) || dims == (2, 1));
    }
}
