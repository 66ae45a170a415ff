//! The decomposition pipeline: pull out the maximal nondegenerate trivial
//! part, then split what remains recursively into orthogonal indecomposable
//! invariant summands and classify each by its restricted fixed space.

use crate::exact_linalg::RatMatrix;
use crate::holonomy_action::Representation;
use crate::quadratic_space::{congruence_diagonalize, Signature, Subspace};
use crate::rng::fnv1a;
use crate::splitting;

/// Random combinations tried per node before declaring a summand
/// indecomposable with the probabilistic flag.
pub const SPLIT_ROUNDS: u32 = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SummandKind {
    /// Trivial action, nondegenerate form: the flat part.
    TrivialFlat,
    /// Restricted fixed space is zero.
    FixedZero,
    /// Restricted fixed space is nonzero and totally isotropic.
    FixedIsotropic,
}

impl SummandKind {
    fn sort_rank(self) -> u8 {
        match self {
            SummandKind::TrivialFlat => 0,
            SummandKind::FixedZero => 1,
            SummandKind::FixedIsotropic => 2,
        }
    }
}

/// How confident the engine is that a summand admits no further orthogonal
/// invariant splitting.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Indecomposability {
    /// The self-adjoint commutant is one-dimensional: scalars only, so no
    /// nontrivial self-adjoint idempotent can exist.
    Certified,
    /// The staged search (deterministic candidates plus `retries` random
    /// combinations) found nothing; a rational split may still exist.
    Probabilistic { retries: u32 },
    /// No claim made (used for externally supplied parts that the search
    /// can actually split).
    NotClaimed,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Summand {
    pub subspace: Subspace,
    pub kind: SummandKind,
    pub signature: Signature,
    pub fixed_dim: usize,
    /// Fixed space of the restricted action, in ambient coordinates.
    pub fixed_subspace: Subspace,
    /// Moved span of the restricted action, in ambient coordinates.
    pub moved_span_local: Subspace,
    pub indecomposability: Indecomposability,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompositionReport {
    pub seed: u64,
    /// The flat part M⁰ (possibly zero-dimensional).
    pub trivial_part: Summand,
    /// Nontrivial summands, canonically sorted.
    pub summands: Vec<Summand>,
    /// Count of fixed_zero summands.
    pub p1: usize,
    /// Count of fixed_isotropic summands.
    pub p2: usize,
    /// Ambient projector used at each split, in recursion order. Each is a
    /// self-adjoint idempotent commuting with all generators.
    pub certificates: Vec<RatMatrix>,
}

impl DecompositionReport {
    /// Trivial part (when nonzero) followed by the summand subspaces.
    pub fn all_parts(&self) -> Vec<Subspace> {
        let mut parts = Vec::with_capacity(self.summands.len() + 1);
        if !self.trivial_part.subspace.is_zero() {
            parts.push(self.trivial_part.subspace.clone());
        }
        parts.extend(self.summands.iter().map(|s| s.subspace.clone()));
        parts
    }

    pub fn nontrivial_parts(&self) -> Vec<Subspace> {
        self.summands.iter().map(|s| s.subspace.clone()).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidityCheck {
    pub clause: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidityReport {
    pub checks: Vec<ValidityCheck>,
}

impl ValidityReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DecomposeError {
    #[error("chosen trivial part is not contained in the fixed space")]
    TrivialPartNotFixed,
    #[error("chosen trivial part carries a degenerate form")]
    TrivialPartDegenerate,
    #[error("chosen trivial part is not maximal: nondegenerate fixed vectors remain outside it")]
    TrivialPartNotMaximal,
    #[error("part {index} has a fixed space that is neither zero, totally isotropic, nor the whole part")]
    UnclassifiablePart { index: usize },
    #[error("part {index} is not invariant")]
    PartNotInvariant { index: usize },
    #[error("part {index} carries a degenerate form")]
    PartDegenerate { index: usize },
}

/// Splits the fixed space into a maximal nondegenerate piece m0 and its
/// orthogonal complement w. The fixed vectors left inside w form exactly
/// the radical of the fixed space, which is totally isotropic.
pub fn split_trivial_part(rep: &Representation) -> (Subspace, Subspace) {
    let fixed = rep.fixed_space();
    let n = rep.dim();
    if fixed.is_zero() {
        return (Subspace::zero(n), Subspace::full(n));
    }
    let form = rep.space().restrict_form(&fixed);
    let (p, d) = congruence_diagonalize(&form);
    let diagonal_basis = &p * fixed.basis();
    let rows: Vec<Vec<_>> = (0..d.rows())
        .filter(|&i| !d.get(i, i).is_zero())
        .map(|i| diagonal_basis.row(i))
        .collect();
    let m0 = Subspace::from_vectors(n, rows);
    let w = rep.space().orth_complement(&m0);
    (m0, w)
}

/// One orthogonal split of the whole representation, if the staged search
/// finds a nontrivial self-adjoint commutant idempotent. Returns the two
/// parts (image first) and the projector. The caller must already have
/// extracted the trivial part: the fixed space must be zero or totally
/// isotropic.
pub fn orthogonal_split_once(rep: &Representation) -> Option<(Subspace, Subspace, RatMatrix)> {
    let fixed = rep.fixed_space();
    assert!(
        fixed.is_zero() || rep.space().is_totally_isotropic(&fixed),
        "extract the trivial part before splitting"
    );
    let basis = rep.selfadjoint_commutant_basis();
    let witness = splitting::find_split(&basis, 0, SPLIT_ROUNDS)?;
    Some((witness.image, witness.kernel, witness.projector))
}

/// Full pipeline: trivial part, recursive orthogonal splitting, canonical
/// classification and ordering. Deterministic for a fixed seed.
pub fn decompose(rep: &Representation, seed: u64) -> DecompositionReport {
    let (m0, w) = split_trivial_part(rep);
    run_pipeline(rep, m0, w, seed)
}

/// Same pipeline but with a caller-chosen maximal nondegenerate trivial
/// part. Different choices give isometric decompositions.
pub fn decompose_with_trivial_part(
    rep: &Representation,
    m0: &Subspace,
    seed: u64,
) -> Result<DecompositionReport, DecomposeError> {
    let fixed = rep.fixed_space();
    if !fixed.contains(m0) {
        return Err(DecomposeError::TrivialPartNotFixed);
    }
    if !rep.space().is_nondegenerate_on(m0) {
        return Err(DecomposeError::TrivialPartDegenerate);
    }
    let w = rep.space().orth_complement(m0);
    let leftover_fixed = fixed.intersect(&w);
    if !rep.space().is_totally_isotropic(&leftover_fixed) {
        return Err(DecomposeError::TrivialPartNotMaximal);
    }
    Ok(run_pipeline(rep, m0.clone(), w, seed))
}

fn run_pipeline(rep: &Representation, m0: Subspace, w: Subspace, seed: u64) -> DecompositionReport {
    let trivial_part = trivial_summand(rep, &m0);
    let mut certificates = Vec::new();
    let mut leaves: Vec<Summand> = Vec::new();
    if !w.is_zero() {
        recurse(rep, &w, seed, &mut certificates, &mut leaves);
    }
    leaves.sort_by_key(summand_sort_key);
    let p1 = leaves.iter().filter(|s| s.kind == SummandKind::FixedZero).count();
    let p2 = leaves.iter().filter(|s| s.kind == SummandKind::FixedIsotropic).count();
    DecompositionReport {
        seed,
        trivial_part,
        summands: leaves,
        p1,
        p2,
        certificates,
    }
}

fn recurse(
    rep: &Representation,
    node: &Subspace,
    seed: u64,
    certificates: &mut Vec<RatMatrix>,
    leaves: &mut Vec<Summand>,
) {
    let node_rep = rep
        .restrict_to(node)
        .expect("pipeline nodes are invariant and nondegenerate");
    let basis = node_rep.selfadjoint_commutant_basis();
    let node_seed = fnv1a(&subspace_bytes(node)) ^ seed;
    match splitting::find_split(&basis, node_seed, SPLIT_ROUNDS) {
        Some(witness) => {
            certificates.push(lift_projector(rep, node, &witness.projector));
            let u = to_ambient(node, &witness.image);
            let v = to_ambient(node, &witness.kernel);
            let (first, second) = if subspace_sort_key(&u) <= subspace_sort_key(&v) {
                (u, v)
            } else {
                (v, u)
            };
            recurse(rep, &first, seed, certificates, leaves);
            recurse(rep, &second, seed, certificates, leaves);
        }
        None => {
            let indecomposability = if basis.len() == 1 {
                Indecomposability::Certified
            } else {
                Indecomposability::Probabilistic { retries: SPLIT_ROUNDS }
            };
            leaves.push(classify_leaf(rep, node, &node_rep, indecomposability));
        }
    }
}

fn classify_leaf(
    rep: &Representation,
    node: &Subspace,
    node_rep: &Representation,
    indecomposability: Indecomposability,
) -> Summand {
    let fixed_subspace = to_ambient(node, &node_rep.fixed_space());
    let moved_span_local = to_ambient(node, &node_rep.moved_span());
    let kind = if fixed_subspace.is_zero() {
        SummandKind::FixedZero
    } else {
        assert!(
            rep.space().is_totally_isotropic(&fixed_subspace),
            "after trivial-part extraction a leaf's fixed space is isotropic"
        );
        SummandKind::FixedIsotropic
    };
    Summand {
        subspace: node.clone(),
        kind,
        signature: node_rep.space().signature(),
        fixed_dim: fixed_subspace.dim(),
        fixed_subspace,
        moved_span_local,
        indecomposability,
    }
}

fn trivial_summand(rep: &Representation, m0: &Subspace) -> Summand {
    let signature = if m0.is_zero() {
        Signature { plus: 0, minus: 0, zero: 0 }
    } else {
        rep.space().signature_of(m0)
    };
    Summand {
        subspace: m0.clone(),
        kind: SummandKind::TrivialFlat,
        signature,
        fixed_dim: m0.dim(),
        fixed_subspace: m0.clone(),
        moved_span_local: Subspace::zero(rep.dim()),
        indecomposability: Indecomposability::Certified,
    }
}

/// Subspace of the node's coordinate space, mapped back to ambient
/// coordinates through the node's canonical basis.
fn to_ambient(node: &Subspace, local: &Subspace) -> Subspace {
    Subspace::from_rows(node.ambient_dim(), local.basis() * node.basis())
}

/// Lifts a projector living on an invariant nondegenerate subspace to an
/// ambient matrix: the same map on the subspace, zero on its orthogonal
/// complement. Self-adjointness and commutation survive the lift.
fn lift_projector(rep: &Representation, node: &Subspace, local: &RatMatrix) -> RatMatrix {
    let b = node.basis();
    let g = rep.gram();
    let form = &(b * g) * &b.transpose();
    let form_inv = form.inverse().expect("node form is nondegenerate");
    &(&(&b.transpose() * local) * &form_inv) * &(b * g)
}

fn subspace_bytes(s: &Subspace) -> Vec<u8> {
    let mut out = Vec::new();
    out.extend_from_slice(&(s.dim() as u64).to_le_bytes());
    for i in 0..s.dim() {
        for v in s.basis_vector(i) {
            out.extend_from_slice(format!("{v};").as_bytes());
        }
    }
    out
}

fn subspace_sort_key(s: &Subspace) -> (usize, Vec<crate::exact_linalg::Rational>) {
    let mut flat = Vec::new();
    for i in 0..s.dim() {
        flat.extend(s.basis_vector(i));
    }
    (s.dim(), flat)
}

fn summand_sort_key(s: &Summand) -> (u8, usize, Vec<crate::exact_linalg::Rational>) {
    let (dim, flat) = subspace_sort_key(&s.subspace);
    (s.kind.sort_rank(), dim, flat)
}

/// Builds a report out of externally supplied parts: parts lying entirely
/// inside the fixed space with nondegenerate form are merged into the
/// trivial slot, the rest are classified like pipeline leaves. Parts that
/// the split search can break are marked NotClaimed rather than rejected.
pub fn report_for_parts(
    rep: &Representation,
    parts: &[Subspace],
    seed: u64,
) -> Result<DecompositionReport, DecomposeError> {
    let n = rep.dim();
    let fixed = rep.fixed_space();
    let mut trivial = Subspace::zero(n);
    let mut leaves = Vec::new();
    for (index, part) in parts.iter().enumerate() {
        if !rep.is_invariant(part) {
            return Err(DecomposeError::PartNotInvariant { index });
        }
        if !rep.space().is_nondegenerate_on(part) {
            return Err(DecomposeError::PartDegenerate { index });
        }
        if fixed.contains(part) {
            trivial = trivial.sum(part);
            continue;
        }
        let part_rep = rep.restrict_to(part).expect("validated above");
        let fixed_subspace = to_ambient(part, &part_rep.fixed_space());
        if !fixed_subspace.is_zero() && !rep.space().is_totally_isotropic(&fixed_subspace) {
            return Err(DecomposeError::UnclassifiablePart { index });
        }
        let basis = part_rep.selfadjoint_commutant_basis();
        let part_seed = fnv1a(&subspace_bytes(part)) ^ seed;
        let indecomposability = if basis.len() == 1 {
            Indecomposability::Certified
        } else if splitting::find_split(&basis, part_seed, SPLIT_ROUNDS).is_none() {
            Indecomposability::Probabilistic { retries: SPLIT_ROUNDS }
        } else {
            Indecomposability::NotClaimed
        };
        leaves.push(classify_leaf(rep, part, &part_rep, indecomposability));
    }
    leaves.sort_by_key(summand_sort_key);
    let p1 = leaves.iter().filter(|s| s.kind == SummandKind::FixedZero).count();
    let p2 = leaves.iter().filter(|s| s.kind == SummandKind::FixedIsotropic).count();
    Ok(DecompositionReport {
        seed,
        trivial_part: trivial_summand(rep, &trivial),
        summands: leaves,
        p1,
        p2,
        certificates: Vec::new(),
    })
}

/// Clause-by-clause validity checks for a claimed decomposition.
pub fn verify_decomposition(rep: &Representation, parts: &[Subspace]) -> ValidityReport {
    let n = rep.dim();
    let space = rep.space();
    let mut checks = Vec::new();

    let bad_invariance: Vec<usize> = parts
        .iter()
        .enumerate()
        .filter(|(_, p)| !rep.is_invariant(p))
        .map(|(i, _)| i)
        .collect();
    checks.push(ValidityCheck {
        clause: "each part is invariant under every generator".into(),
        passed: bad_invariance.is_empty(),
        detail: if bad_invariance.is_empty() {
            format!("{} parts checked", parts.len())
        } else {
            format!("non-invariant parts: {bad_invariance:?}")
        },
    });

    let mut bad_orth = Vec::new();
    for i in 0..parts.len() {
        for j in (i + 1)..parts.len() {
            let cross = &(parts[i].basis() * space.gram()) * &parts[j].basis().transpose();
            if !cross.is_zero() {
                bad_orth.push((i, j));
            }
        }
    }
    checks.push(ValidityCheck {
        clause: "parts are pairwise orthogonal".into(),
        passed: bad_orth.is_empty(),
        detail: if bad_orth.is_empty() {
            "all cross Gram blocks vanish".into()
        } else {
            format!("nonzero pairings: {bad_orth:?}")
        },
    });

    let bad_degenerate: Vec<usize> = parts
        .iter()
        .enumerate()
        .filter(|(_, p)| !space.is_nondegenerate_on(p))
        .map(|(i, _)| i)
        .collect();
    checks.push(ValidityCheck {
        clause: "each part carries a nondegenerate form".into(),
        passed: bad_degenerate.is_empty(),
        detail: if bad_degenerate.is_empty() {
            "all restricted determinants nonzero".into()
        } else {
            format!("degenerate parts: {bad_degenerate:?}")
        },
    });

    let total_dim: usize = parts.iter().map(Subspace::dim).sum();
    let joint = parts
        .iter()
        .fold(Subspace::zero(n), |acc, p| acc.sum(p));
    checks.push(ValidityCheck {
        clause: "parts span the ambient space".into(),
        passed: joint.is_full(),
        detail: format!("joint span has dimension {} of {}", joint.dim(), n),
    });
    checks.push(ValidityCheck {
        clause: "parts are pairwise disjoint".into(),
        passed: joint.dim() == total_dim,
        detail: format!("dimension sum {} vs joint span {}", total_dim, joint.dim()),
    });

    let fixed = rep.fixed_space();
    let mut split_found = Vec::new();
    let mut verdicts = Vec::new();
    for (i, part) in parts.iter().enumerate() {
        if fixed.contains(part) {
            verdicts.push(format!("part {i}: trivial action, skipped"));
            continue;
        }
        match rep.restrict_to(part) {
            Ok(part_rep) => {
                let basis = part_rep.selfadjoint_commutant_basis();
                if basis.len() == 1 {
                    verdicts.push(format!("part {i}: indecomposable (certified)"));
                } else if splitting::find_split(&basis, 0, SPLIT_ROUNDS).is_none() {
                    verdicts.push(format!("part {i}: indecomposable (probabilistic)"));
                } else {
                    verdicts.push(format!("part {i}: splits further"));
                    split_found.push(i);
                }
            }
            Err(_) => verdicts.push(format!("part {i}: not restrictable, see other clauses")),
        }
    }
    checks.push(ValidityCheck {
        clause: "per-part indecomposability".into(),
        passed: split_found.is_empty(),
        detail: verdicts.join("; "),
    });

    let forcing_applicable = !parts.is_empty()
        && fixed.contains(&parts[0])
        && space.is_nondegenerate_on(&parts[0])
        && (1..parts.len()).all(|j| {
            (&(parts[0].basis() * space.gram()) * &parts[j].basis().transpose()).is_zero()
        });
    checks.push(ValidityCheck {
        clause: "trivial leading part forces full orthogonality".into(),
        passed: !forcing_applicable || bad_orth.is_empty(),
        detail: if forcing_applicable {
            "hypotheses hold; orthogonality conclusion checked".into()
        } else {
            "hypotheses not applicable".into()
        },
    });

    ValidityReport { checks }
}
