//! Matrix groups and Lie-algebra generators acting on a quadratic space:
//! validation of the form constraints, fixed/moved subspaces, commutant
//! solvers, and the factorization induced by an invariant splitting.

use crate::exact_linalg::{RatMatrix, Rational};
use crate::quadratic_space::{QuadraticSpace, SpaceError, Subspace};

/// Whether a generator matrix is a group element (preserves the form) or an
/// infinitesimal generator (skew-adjoint for the form).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GeneratorKind {
    Group,
    Infinitesimal,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub kind: GeneratorKind,
    pub matrix: RatMatrix,
}

impl Generator {
    pub fn group(matrix: RatMatrix) -> Self {
        Generator { kind: GeneratorKind::Group, matrix }
    }

    pub fn infinitesimal(matrix: RatMatrix) -> Self {
        Generator { kind: GeneratorKind::Infinitesimal, matrix }
    }

    /// The displacement g − I for group elements, n itself for
    /// infinitesimal generators. Kernels are fixed vectors, images span the
    /// moved directions, for both kinds.
    pub fn displacement(&self) -> RatMatrix {
        match self.kind {
            GeneratorKind::Group => {
                &self.matrix - &RatMatrix::identity(self.matrix.rows())
            }
            GeneratorKind::Infinitesimal => self.matrix.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ActionError {
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error("generator {index} is {rows}x{cols}, expected {dim}x{dim}")]
    WrongSize { index: usize, rows: usize, cols: usize, dim: usize },
    #[error("generator {index} does not preserve the inner product")]
    NotFormPreserving { index: usize },
    #[error("generator {index} is not skew-adjoint for the inner product")]
    NotSkewAdjoint { index: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RestrictError {
    #[error("subspace is not invariant under generator {index}")]
    NotInvariant { index: usize },
    #[error("inner product degenerates on the subspace")]
    Degenerate,
}

/// A finite set of generators acting on a quadratic space. Group elements g
/// must satisfy gᵀGg = G; infinitesimal generators n must satisfy
/// nᵀG + Gn = 0. The two kinds can be mixed, and no generators at all is
/// allowed (everything is then fixed).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Representation {
    space: QuadraticSpace,
    generators: Vec<Generator>,
}

impl Representation {
    pub fn new(space: QuadraticSpace, generators: Vec<Generator>) -> Result<Self, ActionError> {
        let dim = space.dim();
        let g = space.gram();
        for (index, gen) in generators.iter().enumerate() {
            let m = &gen.matrix;
            if m.rows() != dim || m.cols() != dim {
                return Err(ActionError::WrongSize {
                    index,
                    rows: m.rows(),
                    cols: m.cols(),
                    dim,
                });
            }
            match gen.kind {
                GeneratorKind::Group => {
                    if &(&m.transpose() * g) * m != *g {
                        return Err(ActionError::NotFormPreserving { index });
                    }
                }
                GeneratorKind::Infinitesimal => {
                    if !(&(&m.transpose() * g) + &(g * m)).is_zero() {
                        return Err(ActionError::NotSkewAdjoint { index });
                    }
                }
            }
        }
        Ok(Representation { space, generators })
    }

    pub fn from_gram(gram: RatMatrix, generators: Vec<Generator>) -> Result<Self, ActionError> {
        Representation::new(QuadraticSpace::new(gram)?, generators)
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn space(&self) -> &QuadraticSpace {
        &self.space
    }

    pub fn gram(&self) -> &RatMatrix {
        self.space.gram()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    /// Common kernel of all displacements: vectors every generator leaves
    /// in place. The full space when there are no generators.
    pub fn fixed_space(&self) -> Subspace {
        let n = self.dim();
        if self.generators.is_empty() {
            return Subspace::full(n);
        }
        let mut stacked = self.generators[0].displacement();
        for gen in &self.generators[1..] {
            stacked = stacked.vstack(&gen.displacement());
        }
        stacked.kernel_basis()
    }

    /// Span of the images of all displacements: every direction some
    /// generator actually moves. Dual to the fixed space through the form.
    pub fn moved_span(&self) -> Subspace {
        let n = self.dim();
        let mut rows = RatMatrix::zero(0, n);
        for gen in &self.generators {
            rows = rows.vstack(&gen.displacement().transpose());
        }
        Subspace::from_rows(n, rows)
    }

    pub fn is_invariant(&self, s: &Subspace) -> bool {
        self.generators.iter().all(|gen| {
            (0..s.dim()).all(|i| s.contains_vector(&gen.matrix.mul_vec(&s.basis_vector(i))))
        })
    }

    /// The action on an invariant subspace, in its canonical basis.
    pub fn restrict_to(&self, s: &Subspace) -> Result<Representation, RestrictError> {
        let form = self.space.restrict_form(s);
        let space = QuadraticSpace::new(form).map_err(|_| RestrictError::Degenerate)?;
        let mut generators = Vec::with_capacity(self.generators.len());
        for (index, gen) in self.generators.iter().enumerate() {
            let matrix = s
                .restrict_operator(&gen.matrix)
                .ok_or(RestrictError::NotInvariant { index })?;
            generators.push(Generator { kind: gen.kind, matrix });
        }
        Ok(Representation { space, generators })
    }

    /// Basis of {X : Xa = aX for every generator a}, canonically ordered.
    pub fn commutant_basis(&self) -> Vec<RatMatrix> {
        self.commutant_with(false)
    }

    /// Basis of the commutant restricted to form-self-adjoint matrices
    /// (GX = XᵀG). Exactly the commuting maps whose kernels and images are
    /// orthogonal complements of each other.
    pub fn selfadjoint_commutant_basis(&self) -> Vec<RatMatrix> {
        self.commutant_with(true)
    }

    fn commutant_with(&self, selfadjoint: bool) -> Vec<RatMatrix> {
        let n = self.dim();
        let nn = n * n;
        let mut rows: Vec<Vec<Rational>> = Vec::new();
        // Xa = aX, one equation per entry (i,j) per generator.
        for gen in &self.generators {
            let a = &gen.matrix;
            for i in 0..n {
                for j in 0..n {
                    let mut row = vec![Rational::zero(); nn];
                    for q in 0..n {
                        row[i * n + q] += a.get(q, j).clone();
                    }
                    for p in 0..n {
                        row[p * n + j] -= a.get(i, p).clone();
                    }
                    rows.push(row);
                }
            }
        }
        if selfadjoint {
            let g = self.gram();
            for i in 0..n {
                for j in 0..n {
                    let mut row = vec![Rational::zero(); nn];
                    for p in 0..n {
                        row[p * n + j] += g.get(i, p).clone();
                        row[p * n + i] -= g.get(p, j).clone();
                    }
                    rows.push(row);
                }
            }
        }
        let system = RatMatrix::from_rows_allowing_empty(rows, nn);
        let kernel = system.kernel_basis();
        (0..kernel.dim())
            .map(|i| RatMatrix::new(n, n, kernel.basis_vector(i)))
            .collect()
    }
}

/// One factor of the induced splitting: the generators act as themselves on
/// the summand and as the identity (group kind) or zero (infinitesimal
/// kind) on every other summand, written in ambient coordinates.
#[derive(Clone, Debug)]
pub struct Factor {
    pub summand: Subspace,
    pub generators: Vec<Generator>,
}

/// The factorization of the acting group induced by a direct-sum splitting
/// into invariant summands.
#[derive(Clone, Debug)]
pub struct FactorDecomposition {
    pub ambient_dim: usize,
    pub factors: Vec<Factor>,
}

impl FactorDecomposition {
    /// Builds the induced factorization. `parts` must be invariant and span
    /// the space directly; each generator is block-diagonal over them.
    pub fn from_parts(rep: &Representation, parts: &[Subspace]) -> FactorDecomposition {
        let n = rep.dim();
        let total: usize = parts.iter().map(Subspace::dim).sum();
        assert_eq!(total, n, "parts must span the whole space");
        let mut basis_rows = RatMatrix::zero(0, n);
        for p in parts {
            basis_rows = basis_rows.vstack(p.basis());
        }
        let c = basis_rows.transpose();
        let c_inv = c.inverse().expect("parts must be independent");

        let offsets: Vec<usize> = parts
            .iter()
            .scan(0, |acc, p| {
                let start = *acc;
                *acc += p.dim();
                Some(start)
            })
            .collect();

        let mut factors: Vec<Factor> = parts
            .iter()
            .map(|p| Factor { summand: p.clone(), generators: Vec::new() })
            .collect();

        for gen in rep.generators() {
            let adapted = &(&c_inv * &gen.matrix) * &c;
            for (idx, part) in parts.iter().enumerate() {
                let (start, len) = (offsets[idx], part.dim());
                let mut masked = match gen.kind {
                    GeneratorKind::Group => RatMatrix::identity(n),
                    GeneratorKind::Infinitesimal => RatMatrix::zero(n, n),
                };
                for r in 0..len {
                    for col in 0..len {
                        masked.set(start + r, start + col, adapted.get(start + r, start + col).clone());
                    }
                }
                // Everything outside the diagonal blocks must vanish, or the
                // splitting was not invariant.
                for r in 0..n {
                    for col in 0..n {
                        let in_same_block = offsets.iter().zip(parts).any(|(&o, p)| {
                            (o..o + p.dim()).contains(&r) && (o..o + p.dim()).contains(&col)
                        });
                        if !in_same_block {
                            assert!(
                                adapted.get(r, col).is_zero(),
                                "generator is not block diagonal over the parts"
                            );
                        }
                    }
                }
                let matrix = &(&c * &masked) * &c_inv;
                factors[idx].generators.push(Generator { kind: gen.kind, matrix });
            }
        }
        FactorDecomposition { ambient_dim: n, factors }
    }

    /// Compares two factorizations factor by factor, in order. Infinitesimal
    /// parts are compared by linear span; group parts by the linear span of
    /// words of length at most 3 in the generators (identity included),
    /// which is a bounded proxy for equality of the generated groups.
    pub fn factors_equal(&self, other: &FactorDecomposition) -> bool {
        if self.ambient_dim != other.ambient_dim || self.factors.len() != other.factors.len() {
            return false;
        }
        self.factors.iter().zip(&other.factors).all(|(a, b)| a.matches(b))
    }
}

impl Factor {
    /// Single-pair version of [`FactorDecomposition::factors_equal`], with
    /// the same bounded-word caveat for group generators.
    pub fn matches(&self, other: &Factor) -> bool {
        factor_span(self, GeneratorKind::Infinitesimal)
            == factor_span(other, GeneratorKind::Infinitesimal)
            && factor_word_span(self) == factor_word_span(other)
    }
}

fn factor_span(f: &Factor, kind: GeneratorKind) -> Subspace {
    let nn = f.summand.ambient_dim() * f.summand.ambient_dim();
    let vectors: Vec<Vec<Rational>> = f
        .generators
        .iter()
        .filter(|g| g.kind == kind)
        .map(|g| g.matrix.clone().into_entries())
        .collect();
    Subspace::from_vectors(nn, vectors)
}

fn factor_word_span(f: &Factor) -> Subspace {
    let n = f.summand.ambient_dim();
    let group_gens: Vec<&RatMatrix> = f
        .generators
        .iter()
        .filter(|g| g.kind == GeneratorKind::Group)
        .map(|g| &g.matrix)
        .collect();
    let mut words: Vec<RatMatrix> = vec![RatMatrix::identity(n)];
    let mut frontier: Vec<RatMatrix> = vec![RatMatrix::identity(n)];
    for _ in 0..3 {
        let mut next = Vec::new();
        for w in &frontier {
            for g in &group_gens {
                next.push(w * *g);
            }
        }
        words.extend(next.iter().cloned());
        frontier = next;
    }
    Subspace::from_vectors(n * n, words.into_iter().map(RatMatrix::into_entries).collect())
}
