//! Comparing rival decompositions: summand matching through moved-span
//! pivoting, exact isometry construction with isotropic corrections, factor
//! comparison, and the final uniqueness verdicts, including the mixing
//! construction that manufactures a second inequivalent decomposition when
//! two summands are module-decomposable.

use crate::derham_decompose::{self, DecompositionReport, SummandKind};
use crate::exact_linalg::{RatMatrix, Rational};
use crate::holonomy_action::{FactorDecomposition, Representation};
use crate::phi_analysis::{ModuleVerdict, PhiStatus, PhiVerdict};
use crate::quadratic_space::Subspace;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Identical,
    EquivalentUpToIsometry,
    Distinct,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UniquenessVerdict {
    /// Condition Φ holds, so the decomposition is unique up to reordering.
    /// `certified` carries the flavour of the Φ evidence.
    UniqueUpToOrder { certified: bool },
    /// Exactly one summand with nonzero fixed space is module-decomposable;
    /// everything else is rigid.
    UniqueOneBadFactor { summand_index: usize },
    /// A second, inequivalent decomposition was constructed and verified.
    NonuniqueWitnessed { witness: Vec<Subspace> },
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MatchError {
    #[error("summand {index} of the {side} decomposition has no counterpart: {reason}")]
    Unmatched { side: &'static str, index: usize, reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IsometryError {
    #[error("pairing preconditions violated: {reason}")]
    BadPairing { reason: String },
    #[error(
        "no correction in the isotropic fixed part restores the pairings for summand pair \
         ({a_index}, {b_index}); the decompositions are genuinely inequivalent"
    )]
    CorrectionUnsolvable { a_index: usize, b_index: usize },
}

/// Exact distance-preserving change of decompositions. Construction always
/// verifies matrixᵀ·gram·matrix = gram; holding an instance is proof.
#[derive(Clone, Debug)]
pub struct IsometryMap {
    pub matrix: RatMatrix,
    pub block_structure: Vec<String>,
}

impl IsometryMap {
    pub fn new(gram: &RatMatrix, matrix: RatMatrix, block_structure: Vec<String>) -> Self {
        let pulled_back = &(&matrix.transpose() * gram) * &matrix;
        assert_eq!(&pulled_back, gram, "map does not preserve the form");
        IsometryMap { matrix, block_structure }
    }
}

#[derive(Clone, Debug)]
pub struct ComparisonReport {
    /// Pairing (index in a, index in b) over nontrivial summands; None when
    /// no consistent pairing exists.
    pub matching: Option<Vec<(usize, usize)>>,
    pub counts_equal: (bool, bool),
    pub dims_equal: Vec<bool>,
    pub moved_spans_equal: Vec<bool>,
    pub subspace_identical: Vec<bool>,
    pub isometry: Option<IsometryMap>,
    pub factors_equal: Vec<bool>,
    pub verdict: Verdict,
    pub notes: Vec<String>,
}

/// Pairs the summands of two decompositions: fixed_zero summands must agree
/// exactly, fixed_isotropic summands are pivoted on a nonzero intersection
/// of moved spans.
pub fn match_summands(
    rep: &Representation,
    a: &DecompositionReport,
    b: &DecompositionReport,
) -> Result<Vec<(usize, usize)>, MatchError> {
    debug_assert_eq!(rep.dim(), a.trivial_part.subspace.ambient_dim());
    debug_assert_eq!(rep.dim(), b.trivial_part.subspace.ambient_dim());
    let mut used = vec![false; b.summands.len()];
    let mut pairs = Vec::with_capacity(a.summands.len());
    for (i, s) in a.summands.iter().enumerate() {
        let found = match s.kind {
            SummandKind::FixedZero => (0..b.summands.len()).find(|&j| {
                !used[j]
                    && b.summands[j].kind == SummandKind::FixedZero
                    && b.summands[j].subspace == s.subspace
            }),
            SummandKind::FixedIsotropic => (0..b.summands.len()).find(|&j| {
                !used[j]
                    && b.summands[j].kind == SummandKind::FixedIsotropic
                    && !s.moved_span_local.intersect(&b.summands[j].moved_span_local).is_zero()
            }),
            SummandKind::TrivialFlat => None,
        };
        match found {
            Some(j) => {
                used[j] = true;
                pairs.push((i, j));
            }
            None => {
                let reason = match s.kind {
                    SummandKind::FixedZero => "no identical fixed_zero summand on the other side",
                    _ => "no summand with intersecting moved span on the other side",
                };
                return Err(MatchError::Unmatched { side: "first", index: i, reason: reason.into() });
            }
        }
    }
    if let Some(j) = used.iter().position(|&u| !u) {
        return Err(MatchError::Unmatched {
            side: "second",
            index: j,
            reason: "left over after all first-side summands were paired".into(),
        });
    }
    Ok(pairs)
}

/// Distance-preserving map carrying each part of decomposition `a` onto its
/// partner in decomposition `b`: the trivial parts are identified through
/// the fixed space, fixed_zero summands are equal and map identically, and
/// each fixed_isotropic summand is projected onto its partner and then
/// corrected inside the partner's isotropic fixed part until every Gram
/// pairing is restored.
pub fn build_isometry(
    rep: &Representation,
    a: &DecompositionReport,
    b: &DecompositionReport,
    pairing: &[(usize, usize)],
) -> Result<IsometryMap, IsometryError> {
    let n = rep.dim();
    let space = rep.space();
    let gram = rep.gram();

    let mut source_rows = RatMatrix::zero(0, n);
    let mut target_rows = RatMatrix::zero(0, n);
    let mut blocks = Vec::new();

    let dim_triv_a = a.trivial_part.subspace.dim();
    let dim_triv_b = b.trivial_part.subspace.dim();
    if dim_triv_a != dim_triv_b {
        return Err(IsometryError::BadPairing {
            reason: format!("trivial parts have dimensions {dim_triv_a} and {dim_triv_b}"),
        });
    }
    if dim_triv_a > 0 {
        let fixed = rep.fixed_space();
        let radical = space.radical(&fixed);
        let decomp = b.trivial_part.subspace.basis().vstack(radical.basis());
        if decomp.rows() != fixed.dim() {
            return Err(IsometryError::BadPairing {
                reason: "target trivial part plus the fixed radical does not tile the fixed space"
                    .into(),
            });
        }
        let decomp_t = decomp.transpose();
        for r in 0..dim_triv_a {
            let x = a.trivial_part.subspace.basis_vector(r);
            let Some(coords) = decomp_t.solve(&x) else {
                return Err(IsometryError::BadPairing {
                    reason: "source trivial part does not lie in the fixed space".into(),
                });
            };
            let mut image = vec![Rational::zero(); n];
            for (k, coeff) in coords.iter().take(dim_triv_b).enumerate() {
                let row = b.trivial_part.subspace.basis_vector(k);
                for c in 0..n {
                    image[c] += coeff * &row[c];
                }
            }
            source_rows = source_rows.vstack(&RatMatrix::from_rows(vec![x]));
            target_rows = target_rows.vstack(&RatMatrix::from_rows(vec![image]));
        }
        blocks.push(format!("trivial part dim {dim_triv_a}: projected along the fixed radical"));
    }

    let b_stack = {
        let mut m = b.trivial_part.subspace.basis().clone();
        for s in &b.summands {
            m = m.vstack(s.subspace.basis());
        }
        m
    };
    if b_stack.rows() != n {
        return Err(IsometryError::BadPairing {
            reason: "second decomposition does not span the space".into(),
        });
    }
    let b_coords = b_stack
        .transpose()
        .inverse()
        .ok_or_else(|| IsometryError::BadPairing {
            reason: "second decomposition is degenerate".into(),
        })?;
    let offset_of = |j: usize| -> usize {
        dim_triv_b + b.summands[..j].iter().map(|s| s.subspace.dim()).sum::<usize>()
    };

    for &(i, j) in pairing {
        let sa = &a.summands[i];
        let sb = &b.summands[j];
        let d = sa.subspace.dim();
        if d != sb.subspace.dim() {
            return Err(IsometryError::BadPairing {
                reason: format!("pair ({i}, {j}) has dimensions {d} and {}", sb.subspace.dim()),
            });
        }
        if sa.kind == SummandKind::FixedZero {
            source_rows = source_rows.vstack(sa.subspace.basis());
            target_rows = target_rows.vstack(sb.subspace.basis());
            blocks.push(format!("summand {i} → {j}: identical fixed_zero parts"));
            continue;
        }

        let start = offset_of(j);
        let mut raw = Vec::with_capacity(d);
        for r in 0..d {
            let x = sa.subspace.basis_vector(r);
            let coords = b_coords.mul_vec(&x);
            let mut y = vec![Rational::zero(); n];
            for k in 0..sb.subspace.dim() {
                let row = sb.subspace.basis_vector(k);
                for c in 0..n {
                    y[c] += &coords[start + k] * &row[c];
                }
            }
            raw.push(y);
        }

        let inner = |u: &[Rational], v: &[Rational]| space.inner(u, v);
        let fixed_b = &sb.fixed_subspace;
        let r_dim = fixed_b.dim();
        let a_vecs: Vec<Vec<Rational>> = (0..d).map(|r| sa.subspace.basis_vector(r)).collect();
        let mut gamma = vec![vec![Rational::zero(); d]; d];
        for s in 0..d {
            for t in 0..d {
                gamma[s][t] = &inner(&a_vecs[s], &a_vecs[t]) - &inner(&raw[s], &raw[t]);
            }
        }

        let corrections: Vec<Vec<Rational>> = if r_dim == 0 {
            if gamma.iter().any(|row| row.iter().any(|g| !g.is_zero())) {
                return Err(IsometryError::CorrectionUnsolvable { a_index: i, b_index: j });
            }
            vec![vec![]; d]
        } else {
            let u_vecs: Vec<Vec<Rational>> = (0..r_dim).map(|l| fixed_b.basis_vector(l)).collect();
            let mut rows = Vec::new();
            let mut rhs = Vec::new();
            for s in 0..d {
                for t in s..d {
                    let mut row = vec![Rational::zero(); d * r_dim];
                    for l in 0..r_dim {
                        row[s * r_dim + l] += inner(&u_vecs[l], &raw[t]);
                        row[t * r_dim + l] += inner(&u_vecs[l], &raw[s]);
                    }
                    rows.push(row);
                    rhs.push(gamma[s][t].clone());
                }
            }
            let system = RatMatrix::from_rows(rows);
            let Some(sol) = system.solve(&rhs) else {
                return Err(IsometryError::CorrectionUnsolvable { a_index: i, b_index: j });
            };
            (0..d).map(|s| sol[s * r_dim..(s + 1) * r_dim].to_vec()).collect()
        };

        for s in 0..d {
            let mut z = raw[s].clone();
            for (l, c) in corrections[s].iter().enumerate() {
                let u = fixed_b.basis_vector(l);
                for k in 0..n {
                    z[k] += c * &u[k];
                }
            }
            source_rows = source_rows.vstack(&RatMatrix::from_rows(vec![a_vecs[s].clone()]));
            target_rows = target_rows.vstack(&RatMatrix::from_rows(vec![z]));
        }
        blocks.push(format!(
            "summand {i} → {j}: projected and corrected inside a {r_dim}-dimensional isotropic \
             fixed part"
        ));
    }

    let source_inv = source_rows
        .transpose()
        .inverse()
        .ok_or_else(|| IsometryError::BadPairing {
            reason: "first decomposition does not span the space".into(),
        })?;
    let matrix = &target_rows.transpose() * &source_inv;

    let pulled_back = &(&matrix.transpose() * gram) * &matrix;
    if &pulled_back != gram {
        return Err(IsometryError::CorrectionUnsolvable {
            a_index: usize::MAX,
            b_index: usize::MAX,
        });
    }
    Ok(IsometryMap::new(gram, matrix, blocks))
}

/// Per-pair factor comparison after aligning the second factorization with
/// the pairing. Entry k corresponds to pairing[k].
pub fn factors_equal(
    rep: &Representation,
    fa: &FactorDecomposition,
    fb: &FactorDecomposition,
    pairing: &[(usize, usize)],
) -> Vec<bool> {
    debug_assert_eq!(fa.ambient_dim, rep.dim());
    debug_assert_eq!(fb.ambient_dim, rep.dim());
    pairing
        .iter()
        .map(|&(i, j)| match (fa.factors.get(i), fb.factors.get(j)) {
            (Some(x), Some(y)) => x.matches(y),
            _ => false,
        })
        .collect()
}

/// Full comparison of two decompositions: counts, per-pair dimensions and
/// moved spans, subspace identity, and an isometry attempt when the
/// subspaces differ.
pub fn compare(
    rep: &Representation,
    a: &DecompositionReport,
    b: &DecompositionReport,
) -> ComparisonReport {
    let mut notes = Vec::new();
    let counts_equal = (a.p1 == b.p1, a.p2 == b.p2);
    let pairing = match match_summands(rep, a, b) {
        Ok(p) => p,
        Err(e) => {
            notes.push(e.to_string());
            return ComparisonReport {
                matching: None,
                counts_equal,
                dims_equal: Vec::new(),
                moved_spans_equal: Vec::new(),
                subspace_identical: Vec::new(),
                isometry: None,
                factors_equal: Vec::new(),
                verdict: Verdict::Distinct,
                notes,
            };
        }
    };

    let dims_equal: Vec<bool> = pairing
        .iter()
        .map(|&(i, j)| a.summands[i].subspace.dim() == b.summands[j].subspace.dim())
        .collect();
    let moved_spans_equal: Vec<bool> = pairing
        .iter()
        .map(|&(i, j)| a.summands[i].moved_span_local == b.summands[j].moved_span_local)
        .collect();
    let subspace_identical: Vec<bool> = pairing
        .iter()
        .map(|&(i, j)| a.summands[i].subspace == b.summands[j].subspace)
        .collect();
    let trivial_identical = a.trivial_part.subspace == b.trivial_part.subspace;

    let factor_flags = {
        let fa = FactorDecomposition::from_parts(rep, &a.all_parts());
        let fb = FactorDecomposition::from_parts(rep, &b.all_parts());
        let shift_a = usize::from(!a.trivial_part.subspace.is_zero());
        let shift_b = usize::from(!b.trivial_part.subspace.is_zero());
        let factor_pairing: Vec<(usize, usize)> =
            pairing.iter().map(|&(i, j)| (i + shift_a, j + shift_b)).collect();
        factors_equal(rep, &fa, &fb, &factor_pairing)
    };

    let all_identical = trivial_identical && subspace_identical.iter().all(|&x| x);
    let (verdict, isometry) = if all_identical {
        (Verdict::Identical, None)
    } else if dims_equal.iter().all(|&x| x) && moved_spans_equal.iter().all(|&x| x) {
        match build_isometry(rep, a, b, &pairing) {
            Ok(map) => (Verdict::EquivalentUpToIsometry, Some(map)),
            Err(e) => {
                notes.push(e.to_string());
                (Verdict::Distinct, None)
            }
        }
    } else {
        notes.push("per-pair dimensions or moved spans differ".into());
        (Verdict::Distinct, None)
    };

    ComparisonReport {
        matching: Some(pairing),
        counts_equal,
        dims_equal,
        moved_spans_equal,
        subspace_identical,
        isometry,
        factors_equal: factor_flags,
        verdict,
        notes,
    }
}

/// Replaces summands i and j by their mixed variants: each basis vector of
/// one is shifted into the other's isotropic fixed part through the pairing
/// with a fixed isotropic reference vector, the adjoint shift going the
/// opposite way with opposite sign. The construction keeps invariance,
/// orthogonality, and all Gram pairings, but moves the subspaces.
fn mix_witness(
    rep: &Representation,
    report: &DecompositionReport,
    i: usize,
    j: usize,
) -> Option<Vec<Subspace>> {
    let n = rep.dim();
    let space = rep.space();
    let a = &report.summands[i];
    let b = &report.summands[j];
    if a.fixed_subspace.is_zero() || b.fixed_subspace.is_zero() {
        return None;
    }
    let v = a.fixed_subspace.basis_vector(0);
    let u = b.fixed_subspace.basis_vector(0);

    let shift = |part: &Subspace, reference: &[Rational], direction: &[Rational], sign: i64| {
        let rows: Vec<Vec<Rational>> = (0..part.dim())
            .map(|r| {
                let x = part.basis_vector(r);
                let factor = &space.inner(&x, reference) * &Rational::from_i64(sign);
                let mut out = x;
                for k in 0..direction.len() {
                    out[k] += &factor * &direction[k];
                }
                out
            })
            .collect();
        Subspace::from_vectors(part.ambient_dim(), rows)
    };

    let a_mixed = shift(&a.subspace, &v, &u, 1);
    let b_mixed = shift(&b.subspace, &u, &v, -1);
    if a_mixed == a.subspace && b_mixed == b.subspace {
        return None;
    }

    let mut parts = Vec::new();
    if !report.trivial_part.subspace.is_zero() {
        parts.push(report.trivial_part.subspace.clone());
    }
    for (k, s) in report.summands.iter().enumerate() {
        parts.push(if k == i {
            a_mixed.clone()
        } else if k == j {
            b_mixed.clone()
        } else {
            s.subspace.clone()
        });
    }
    let total: usize = parts.iter().map(Subspace::dim).sum();
    if total != n {
        return None;
    }
    if derham_decompose::verify_decomposition(rep, &parts).all_passed() {
        Some(parts)
    } else {
        None
    }
}

/// Final verdict per Theorems 3.11 and 4.3, with the mixing construction
/// manufacturing an explicit witness when two or more summands are module-
/// decomposable.
pub fn uniqueness_verdict(
    rep: &Representation,
    report: &DecompositionReport,
    phi: &PhiVerdict,
) -> UniquenessVerdict {
    match phi.status {
        PhiStatus::SatisfiedCertified => UniquenessVerdict::UniqueUpToOrder { certified: true },
        PhiStatus::SatisfiedProbabilistic => {
            UniquenessVerdict::UniqueUpToOrder { certified: false }
        }
        PhiStatus::Inconclusive => UniquenessVerdict::Unknown,
        PhiStatus::Violated => {
            let bad: Vec<usize> = phi
                .witnesses
                .iter()
                .filter(|w| w.verdict == ModuleVerdict::Decomposable)
                .map(|w| w.summand_index)
                .collect();
            match bad.as_slice() {
                [] => UniquenessVerdict::Unknown,
                [only] => UniquenessVerdict::UniqueOneBadFactor { summand_index: *only },
                [first, second, ..] => match mix_witness(rep, report, *first, *second) {
                    Some(witness) => UniquenessVerdict::NonuniqueWitnessed { witness },
                    None => UniquenessVerdict::Unknown,
                },
            }
        }
    }
}
