//! Subspaces in canonical form and exact bilinear-form computations:
//! signatures, orthogonal complements, radicals, and bases adapted to
//! degenerate restrictions.

use crate::exact_linalg::{RatMatrix, Rational, Rref};

/// Linear subspace of Q^n, stored as the reduced row echelon basis so that
/// equal subspaces compare equal entrywise.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    basis: RatMatrix,
}

impl Subspace {
    /// Span of the rows of `m`, canonicalized. Zero rows are dropped.
    pub fn from_rows(ambient: usize, m: RatMatrix) -> Self {
        assert_eq!(m.cols(), ambient, "row length must match ambient dimension");
        let Rref { reduced, rank, .. } = m.rref();
        let rows: Vec<Vec<Rational>> = (0..rank).map(|r| reduced.row(r)).collect();
        Subspace {
            ambient,
            basis: RatMatrix::from_rows_allowing_empty(rows, ambient),
        }
    }

    pub fn from_vectors(ambient: usize, vectors: Vec<Vec<Rational>>) -> Self {
        Subspace::from_rows(ambient, RatMatrix::from_rows_allowing_empty(vectors, ambient))
    }

    pub fn from_i64_rows(ambient: usize, rows: &[&[i64]]) -> Self {
        if rows.is_empty() {
            return Subspace::zero(ambient);
        }
        Subspace::from_rows(ambient, RatMatrix::from_i64_rows(rows))
    }

    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: RatMatrix::zero(0, ambient),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: RatMatrix::identity(ambient),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient
    }

    /// Canonical basis, one vector per row (dim × ambient).
    pub fn basis(&self) -> &RatMatrix {
        &self.basis
    }

    pub fn basis_vector(&self, i: usize) -> Vec<Rational> {
        self.basis.row(i)
    }

    /// Coordinates of `v` in the canonical basis, if `v` lies in the span.
    pub fn coords_of(&self, v: &[Rational]) -> Option<Vec<Rational>> {
        assert_eq!(v.len(), self.ambient, "vector length must match ambient");
        self.basis.transpose().solve(v)
    }

    /// Ambient vector with the given coordinates in the canonical basis.
    pub fn from_coords(&self, coords: &[Rational]) -> Vec<Rational> {
        self.basis.transpose().mul_vec(coords)
    }

    pub fn contains_vector(&self, v: &[Rational]) -> bool {
        self.coords_of(v).is_some()
    }

    pub fn contains(&self, other: &Subspace) -> bool {
        assert_eq!(self.ambient, other.ambient, "ambient mismatch");
        if other.is_zero() {
            return true;
        }
        self.basis.vstack(&other.basis).rank() == self.dim()
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient, "ambient mismatch");
        Subspace::from_rows(self.ambient, self.basis.vstack(&other.basis))
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient, "ambient mismatch");
        if self.is_zero() || other.is_zero() {
            return Subspace::zero(self.ambient);
        }
        // Solve aᵀA = bᵀB: kernel of [Aᵀ | -Bᵀ]. Each kernel vector's a-part
        // maps to one intersection vector, injectively.
        let k = self.dim();
        let combined = self.basis.transpose().hstack(&-&other.basis.transpose());
        let ker = combined.kernel_basis();
        let mut vectors = Vec::with_capacity(ker.dim());
        for i in 0..ker.dim() {
            let ab = ker.basis_vector(i);
            let a = &ab[..k];
            vectors.push(self.basis.transpose().mul_vec(a));
        }
        Subspace::from_vectors(self.ambient, vectors)
    }

    /// Matrix of `op` in the canonical basis, if the span is invariant.
    /// Column i holds the coordinates of op(bᵢ).
    pub fn restrict_operator(&self, op: &RatMatrix) -> Option<RatMatrix> {
        assert_eq!(op.cols(), self.ambient, "operator size must match ambient");
        let k = self.dim();
        let mut out = RatMatrix::zero(k, k);
        for i in 0..k {
            let image = op.mul_vec(&self.basis_vector(i));
            let coords = self.coords_of(&image)?;
            for (j, c) in coords.into_iter().enumerate() {
                out.set(j, i, c);
            }
        }
        Some(out)
    }
}

impl std::fmt::Debug for Subspace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Subspace(dim {} of {}) {:?}", self.dim(), self.ambient, self.basis)
    }
}

/// Signature of a symmetric bilinear form: counts of positive, negative,
/// and zero entries in any congruence diagonalization.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Signature {
    pub plus: usize,
    pub minus: usize,
    pub zero: usize,
}

/// Symmetric congruence diagonalization: returns (p, d) with p·m·pᵀ = d
/// diagonal. Rows of p are the diagonalizing basis. Zero diagonal blocks
/// with off-diagonal pairing are resolved by adding the partner row (the
/// u+v trick, valid away from characteristic 2).
pub fn congruence_diagonalize(m: &RatMatrix) -> (RatMatrix, RatMatrix) {
    assert!(m.is_symmetric(), "congruence diagonalization needs a symmetric matrix");
    let n = m.rows();
    let mut d = m.clone();
    let mut p = RatMatrix::identity(n);
    for k in 0..n {
        if d.get(k, k).is_zero() {
            if let Some(l) = ((k + 1)..n).find(|&l| !d.get(l, l).is_zero()) {
                swap_sym(&mut d, k, l);
                swap_row(&mut p, k, l);
            } else if let Some(l) = ((k + 1)..n).find(|&l| !d.get(k, l).is_zero()) {
                add_sym(&mut d, k, l);
                add_row(&mut p, k, l);
            } else {
                continue;
            }
        }
        let pivot = d.get(k, k).clone();
        for r in (k + 1)..n {
            if !d.get(r, k).is_zero() {
                let f = d.get(r, k) / &pivot;
                sub_scaled_sym(&mut d, r, k, &f);
                sub_scaled_row(&mut p, r, k, &f);
            }
        }
    }
    (p, d)
}

/// Signature of an arbitrary symmetric matrix (degenerate allowed).
pub fn signature_of_symmetric(m: &RatMatrix) -> Signature {
    let (_, d) = congruence_diagonalize(m);
    let mut sig = Signature { plus: 0, minus: 0, zero: 0 };
    for i in 0..d.rows() {
        match d.get(i, i).signum() {
            1 => sig.plus += 1,
            -1 => sig.minus += 1,
            _ => sig.zero += 1,
        }
    }
    sig
}

fn swap_row(m: &mut RatMatrix, a: usize, b: usize) {
    for c in 0..m.cols() {
        let va = m.get(a, c).clone();
        let vb = m.get(b, c).clone();
        m.set(a, c, vb);
        m.set(b, c, va);
    }
}

fn swap_sym(m: &mut RatMatrix, a: usize, b: usize) {
    swap_row(m, a, b);
    for r in 0..m.rows() {
        let va = m.get(r, a).clone();
        let vb = m.get(r, b).clone();
        m.set(r, a, vb);
        m.set(r, b, va);
    }
}

fn add_row(m: &mut RatMatrix, dst: usize, src: usize) {
    for c in 0..m.cols() {
        let v = m.get(dst, c) + m.get(src, c);
        m.set(dst, c, v);
    }
}

fn add_sym(m: &mut RatMatrix, dst: usize, src: usize) {
    add_row(m, dst, src);
    for r in 0..m.rows() {
        let v = m.get(r, dst) + m.get(r, src);
        m.set(r, dst, v);
    }
}

fn sub_scaled_row(m: &mut RatMatrix, dst: usize, src: usize, f: &Rational) {
    for c in 0..m.cols() {
        let v = m.get(dst, c) - &(m.get(src, c) * f);
        m.set(dst, c, v);
    }
}

fn sub_scaled_sym(m: &mut RatMatrix, dst: usize, src: usize, f: &Rational) {
    sub_scaled_row(m, dst, src, f);
    for r in 0..m.rows() {
        let v = m.get(r, dst) - &(m.get(r, src) * f);
        m.set(r, dst, v);
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SpaceError {
    #[error("inner product matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("inner product matrix is not symmetric")]
    NotSymmetric,
    #[error("inner product is degenerate on the whole space")]
    Degenerate,
}

/// Q^n equipped with a nondegenerate symmetric bilinear form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticSpace {
    gram: RatMatrix,
}

/// Basis rows adapted to a subspace with isotropic radical: first the
/// radical vectors u₁…u_r, then middle vectors diagonalizing the
/// nondegenerate part, then dual vectors w₁…w_r from the ambient space with
/// ⟨uᵢ,w_j⟩ = δᵢⱼ and all other pairings zero. The combined Gram is
/// [[0,0,I],[0,A,0],[I,0,0]] with A = diag(middle_diagonal).
#[derive(Clone, Debug)]
pub struct AdaptedBasis {
    pub rows: RatMatrix,
    pub radical_dim: usize,
    pub middle_diagonal: Vec<Rational>,
}

impl QuadraticSpace {
    pub fn new(gram: RatMatrix) -> Result<Self, SpaceError> {
        if gram.rows() != gram.cols() {
            return Err(SpaceError::NotSquare { rows: gram.rows(), cols: gram.cols() });
        }
        if !gram.is_symmetric() {
            return Err(SpaceError::NotSymmetric);
        }
        if gram.det().is_zero() {
            return Err(SpaceError::Degenerate);
        }
        Ok(QuadraticSpace { gram })
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &RatMatrix {
        &self.gram
    }

    pub fn inner(&self, u: &[Rational], v: &[Rational]) -> Rational {
        let gv = self.gram.mul_vec(v);
        u.iter().zip(&gv).fold(Rational::zero(), |acc, (a, b)| acc + a * b)
    }

    /// Gram matrix of the form restricted to the subspace, in its canonical
    /// basis: B·G·Bᵀ.
    pub fn restrict_form(&self, s: &Subspace) -> RatMatrix {
        assert_eq!(s.ambient_dim(), self.dim(), "ambient mismatch");
        let b = s.basis();
        &(b * &self.gram) * &b.transpose()
    }

    pub fn signature(&self) -> Signature {
        signature_of_symmetric(&self.gram)
    }

    pub fn signature_of(&self, s: &Subspace) -> Signature {
        signature_of_symmetric(&self.restrict_form(s))
    }

    /// {x : ⟨s, x⟩ = 0 for all s in the subspace}.
    pub fn orth_complement(&self, s: &Subspace) -> Subspace {
        assert_eq!(s.ambient_dim(), self.dim(), "ambient mismatch");
        (s.basis() * &self.gram).kernel_basis()
    }

    /// s ∩ s⊥: the kernel of the restricted form.
    pub fn radical(&self, s: &Subspace) -> Subspace {
        s.intersect(&self.orth_complement(s))
    }

    pub fn is_nondegenerate_on(&self, s: &Subspace) -> bool {
        s.is_zero() || !self.restrict_form(s).det().is_zero()
    }

    pub fn is_totally_isotropic(&self, s: &Subspace) -> bool {
        self.restrict_form(s).is_zero()
    }

    /// Adapted basis for a subspace whose radical is to be paired off
    /// hyperbolically with duals drawn from the ambient space.
    ///
    /// The rows span s + span{w₁…w_r}, a nondegenerate enlargement of s.
    pub fn adapted_basis(&self, s: &Subspace) -> AdaptedBasis {
        let n = self.dim();
        let radical = self.radical(s);
        let r = radical.dim();

        // Complement of the radical inside s, picked greedily from the
        // canonical basis of s.
        let mut span_so_far = radical.clone();
        let mut complement_rows: Vec<Vec<Rational>> = Vec::new();
        for i in 0..s.dim() {
            let v = s.basis_vector(i);
            let candidate = span_so_far.sum(&Subspace::from_vectors(n, vec![v.clone()]));
            if candidate.dim() > span_so_far.dim() {
                complement_rows.push(v);
                span_so_far = candidate;
            }
        }
        let complement = RatMatrix::from_rows_allowing_empty(complement_rows, n);

        // Diagonalize the (nondegenerate) form on the complement.
        let form = &(&complement * &self.gram) * &complement.transpose();
        let (p, d) = congruence_diagonalize(&form);
        let middle = &p * &complement;
        let middle_diagonal: Vec<Rational> = (0..d.rows()).map(|i| d.get(i, i).clone()).collect();
        assert!(
            middle_diagonal.iter().all(|x| !x.is_zero()),
            "complement of the radical must carry a nondegenerate form"
        );

        // Duals: solve ⟨uᵢ, z_j⟩ = δᵢⱼ, ⟨mₖ, z_j⟩ = 0, then correct
        // w_j = z_j − Σₗ c_{jl} uₗ with c = ½ (⟨zᵢ,z_j⟩) to kill the
        // pairings among the duals themselves.
        let mut z_vectors: Vec<Vec<Rational>> = Vec::with_capacity(r);
        if r > 0 {
            let stacked = radical.basis().vstack(&middle);
            let sys = &stacked * &self.gram;
            for j in 0..r {
                let mut rhs = vec![Rational::zero(); stacked.rows()];
                rhs[j] = Rational::one();
                let z = sys
                    .solve(&rhs)
                    .expect("ambient nondegeneracy makes the dual system solvable");
                z_vectors.push(z);
            }
        }
        let c: Vec<Vec<Rational>> = (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| {
                        self.inner(&z_vectors[i], &z_vectors[j]) / Rational::from_i64(2)
                    })
                    .collect()
            })
            .collect();
        let mut w_rows: Vec<Vec<Rational>> = Vec::with_capacity(r);
        for j in 0..r {
            let mut w = z_vectors[j].clone();
            for l in 0..r {
                let u = radical.basis_vector(l);
                for (wi, ui) in w.iter_mut().zip(&u) {
                    *wi -= &c[j][l] * ui;
                }
            }
            w_rows.push(w);
        }

        let mut rows: Vec<Vec<Rational>> = Vec::with_capacity(s.dim() + r);
        for i in 0..r {
            rows.push(radical.basis_vector(i));
        }
        for i in 0..middle.rows() {
            rows.push(middle.row(i));
        }
        rows.extend(w_rows);
        AdaptedBasis {
            rows: RatMatrix::from_rows_allowing_empty(rows, n),
            radical_dim: r,
            middle_diagonal,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_i64(n)
    }

    fn diag(entries: &[i64]) -> RatMatrix {
        RatMatrix::diagonal(&entries.iter().map(|&v| q(v)).collect::<Vec<_>>())
    }

    fn space(entries: &[i64]) -> QuadraticSpace {
        QuadraticSpace::new(diag(entries)).unwrap()
    }

    fn sub(ambient: usize, rows: &[&[i64]]) -> Subspace {
        Subspace::from_i64_rows(ambient, rows)
    }

    #[test]
    fn canonical_form_identifies_equal_spans() {
        let a = sub(3, &[&[1, 1, 0], &[1, -1, 0]]);
        let b = sub(3, &[&[1, 0, 0], &[0, 1, 0]]);
        assert_eq!(a, b);
        assert_ne!(a, sub(3, &[&[1, 0, 0], &[0, 0, 1]]));
    }

    #[test]
    fn sum_and_intersection() {
        let a = sub(3, &[&[1, 0, 0], &[0, 1, 0]]);
        let b = sub(3, &[&[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(a.sum(&b), Subspace::full(3));
        assert_eq!(a.intersect(&b), sub(3, &[&[0, 1, 0]]));
        assert_eq!(a.intersect(&sub(3, &[&[0, 0, 1]])), Subspace::zero(3));
    }

    #[test]
    fn intersection_dimension_formula() {
        let a = sub(4, &[&[1, 0, 0, 0], &[0, 1, 1, 0], &[0, 0, 0, 1]]);
        let b = sub(4, &[&[1, 1, 1, 0], &[0, 0, 1, 1]]);
        let i = a.intersect(&b);
        let s = a.sum(&b);
        assert_eq!(i.dim() + s.dim(), a.dim() + b.dim());
        assert!(a.contains(&i) && b.contains(&i));
    }

    #[test]
    fn coords_round_trip() {
        let a = sub(3, &[&[1, 2, 0], &[0, 0, 3]]);
        let v = vec![q(2), q(4), q(6)];
        let c = a.coords_of(&v).unwrap();
        assert_eq!(a.from_coords(&c), v);
        assert!(a.coords_of(&[q(0), q(1), q(0)]).is_none());
    }

    #[test]
    fn restrict_operator_on_invariant_plane() {
        // Rotation generator acting on the plane span{e1, e2} inside Q³.
        let op = RatMatrix::from_i64_rows(&[&[0, -1, 0], &[1, 0, 0], &[0, 0, 0]]);
        let plane = sub(3, &[&[1, 0, 0], &[0, 1, 0]]);
        let restricted = plane.restrict_operator(&op).unwrap();
        assert_eq!(restricted, RatMatrix::from_i64_rows(&[&[0, -1], &[1, 0]]));
        let line = sub(3, &[&[1, 0, 0]]);
        assert!(line.restrict_operator(&op).is_none());
    }

    #[test]
    fn signature_of_split_form() {
        assert_eq!(
            space(&[1, 1, -1, -1]).signature(),
            Signature { plus: 2, minus: 2, zero: 0 }
        );
    }

    #[test]
    fn signature_of_hyperbolic_plane() {
        let g = RatMatrix::from_i64_rows(&[&[0, 1], &[1, 0]]);
        assert_eq!(
            signature_of_symmetric(&g),
            Signature { plus: 1, minus: 1, zero: 0 }
        );
        let (p, d) = congruence_diagonalize(&g);
        assert_eq!(&(&p * &g) * &p.transpose(), d);
    }

    #[test]
    fn congruence_relation_holds_on_degenerate_input() {
        let g = RatMatrix::from_i64_rows(&[&[0, 0, 1], &[0, 0, 0], &[1, 0, 0]]);
        let (p, d) = congruence_diagonalize(&g);
        assert_eq!(&(&p * &g) * &p.transpose(), d);
        assert_eq!(
            signature_of_symmetric(&g),
            Signature { plus: 1, minus: 1, zero: 1 }
        );
    }

    #[test]
    fn orth_complement_of_isotropic_line() {
        let qs = space(&[1, 1, -1, -1]);
        let line = sub(4, &[&[1, 0, 1, 0]]);
        let comp = qs.orth_complement(&line);
        assert_eq!(comp, sub(4, &[&[1, 0, 1, 0], &[0, 1, 0, 0], &[0, 0, 0, 1]]));
        assert!(comp.contains(&line));
        assert!(qs.is_totally_isotropic(&line));
    }

    #[test]
    fn radical_of_degenerate_plane() {
        let qs = space(&[1, 1, -1, -1]);
        let plane = sub(4, &[&[1, 0, 1, 0], &[0, 1, 0, 0]]);
        assert_eq!(qs.radical(&plane), sub(4, &[&[1, 0, 1, 0]]));
        assert!(!qs.is_nondegenerate_on(&plane));
        assert!(qs.is_nondegenerate_on(&sub(4, &[&[0, 1, 0, 0]])));
    }

    #[test]
    fn orth_complement_involution_and_dimension() {
        let qs = space(&[1, 1, -1, -1]);
        let s = sub(4, &[&[1, 2, 3, 4], &[0, 1, 0, 1]]);
        let c = qs.orth_complement(&s);
        assert_eq!(c.dim(), 4 - s.dim());
        assert_eq!(qs.orth_complement(&c), s);
    }

    #[test]
    fn rejects_bad_inner_products() {
        assert_eq!(
            QuadraticSpace::new(RatMatrix::from_i64_rows(&[&[0, 1], &[0, 0]])),
            Err(SpaceError::NotSymmetric)
        );
        assert_eq!(
            QuadraticSpace::new(diag(&[1, 0])),
            Err(SpaceError::Degenerate)
        );
    }

    #[test]
    fn adapted_basis_of_isotropic_line() {
        let qs = space(&[1, 1, -1]);
        let line = sub(3, &[&[1, 0, 1]]);
        let ab = qs.adapted_basis(&line);
        assert_eq!(ab.radical_dim, 1);
        assert!(ab.middle_diagonal.is_empty());
        let g = &(&ab.rows * qs.gram()) * &ab.rows.transpose();
        assert_eq!(g, RatMatrix::from_i64_rows(&[&[0, 1], &[1, 0]]));
    }

    #[test]
    fn adapted_basis_of_degenerate_plane() {
        let qs = space(&[1, 1, -1, -1]);
        let plane = sub(4, &[&[1, 0, 1, 0], &[0, 1, 0, 0]]);
        let ab = qs.adapted_basis(&plane);
        assert_eq!(ab.radical_dim, 1);
        assert_eq!(ab.middle_diagonal, vec![q(1)]);
        let g = &(&ab.rows * qs.gram()) * &ab.rows.transpose();
        assert_eq!(
            g,
            RatMatrix::from_i64_rows(&[&[0, 0, 1], &[0, 1, 0], &[1, 0, 0]])
        );
    }

    #[test]
    fn adapted_basis_of_nondegenerate_subspace_has_no_duals() {
        let qs = space(&[1, 1, -1]);
        let s = sub(3, &[&[1, 0, 0], &[0, 0, 1]]);
        let ab = qs.adapted_basis(&s);
        assert_eq!(ab.radical_dim, 0);
        assert_eq!(ab.rows.rows(), 2);
        assert_eq!(ab.middle_diagonal, vec![q(1), q(-1)]);
    }
}
