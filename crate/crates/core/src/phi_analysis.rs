//! Condition Φ: every indecomposable nondegenerate invariant subspace with
//! nonzero fixed part must admit no invariant direct-sum splitting at all,
//! orthogonal or not. The check runs module-level indecomposability (full
//! commutant, no self-adjointness constraint) over the summands of a
//! computed decomposition, which is the sufficient criterion the source
//! theorem reduces to.

use crate::derham_decompose::{DecompositionReport, SummandKind};
use crate::exact_linalg::{Polynomial, RatMatrix};
use crate::holonomy_action::Representation;
use crate::oracle;
use crate::quadratic_space::Subspace;
use crate::splitting;

/// Random combinations tried in the module-level idempotent search. Twice
/// the orthogonal pipeline's budget because nothing here is repeated per
/// recursion node.
pub const MODULE_SPLIT_ROUNDS: u32 = 64;

/// Clean primes required before the finite-field ladder counts as evidence.
const LADDER_PRIMES: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ModuleVerdict {
    IndecomposableCertified,
    IndecomposableProbabilistic,
    Decomposable,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PhiStatus {
    SatisfiedCertified,
    SatisfiedProbabilistic,
    Violated,
    /// Reserved for callers that want to express "not decided"; the checker
    /// itself always lands on one of the other three.
    Inconclusive,
}

/// Per-summand evidence gathered by [`phi_check`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SummandPhi {
    pub summand_index: usize,
    pub neutral_signature: bool,
    pub verdict: ModuleVerdict,
    /// Nontrivial idempotent in the summand's own coordinates, present
    /// exactly when the verdict is decomposable.
    pub splitting_idempotent: Option<RatMatrix>,
    /// Complementary totally isotropic invariant pair in ambient
    /// coordinates, when one was found.
    pub isotropic_pair: Option<(Subspace, Subspace)>,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiVerdict {
    pub status: PhiStatus,
    pub witnesses: Vec<SummandPhi>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PhiError {
    #[error("the report does not belong to this representation: {reason}")]
    MismatchedReport { reason: String },
    #[error("isotropic_pair_split requires a module-decomposable representation")]
    NotDecomposable,
}

/// Whether f is a power of a single polynomial that the engine can certify
/// irreducible over the rationals.
fn power_of_certified_irreducible(f: &Polynomial) -> bool {
    if f.is_constant() {
        return false;
    }
    let s = f.squarefree_part().monic();
    if s.is_irreducible_over_rationals() != Some(true) {
        return false;
    }
    if !f.degree().is_multiple_of(s.degree()) {
        return false;
    }
    let k = (f.degree() / s.degree()) as u32;
    s.pow(k) == f.monic()
}

/// Searches the full commutant for a nontrivial idempotent. Decomposable
/// returns a re-verified witness; otherwise certification needs the
/// commutant to be scalars, or the three-part ladder: every commutant basis
/// element with a power-of-one-irreducible minimal polynomial, the random
/// search exhausted, and three clean primes from the exhaustive
/// finite-field oracle.
pub fn module_indecomposable(rep: &Representation) -> (ModuleVerdict, Option<RatMatrix>) {
    let basis = rep.commutant_basis();
    if let Some(witness) = splitting::find_split(&basis, 0, MODULE_SPLIT_ROUNDS) {
        let p = witness.projector;
        assert_eq!(&(&p * &p), &p);
        for g in rep.generators() {
            assert_eq!(&g.matrix * &p, &p * &g.matrix);
        }
        let rank = p.rank();
        assert!(rank > 0 && rank < rep.dim());
        return (ModuleVerdict::Decomposable, Some(p));
    }
    if basis.len() == 1 {
        return (ModuleVerdict::IndecomposableCertified, None);
    }
    let structure_ok = basis
        .iter()
        .map(crate::exact_linalg::minimal_polynomial)
        .all(|f| power_of_certified_irreducible(&f));
    if structure_ok {
        let evidence = oracle::modular_indecomposability_evidence(rep, LADDER_PRIMES);
        if evidence.complete {
            return (ModuleVerdict::IndecomposableCertified, None);
        }
    }
    (ModuleVerdict::IndecomposableProbabilistic, None)
}

/// Complementary pair of totally isotropic invariant subspaces, when the
/// idempotent family contains one. Errors unless the representation is
/// module-decomposable in the first place.
pub fn isotropic_pair_split(rep: &Representation) -> Result<Option<(Subspace, Subspace)>, PhiError> {
    let basis = rep.commutant_basis();
    let Some(witness) = splitting::find_split(&basis, 0, MODULE_SPLIT_ROUNDS) else {
        return Err(PhiError::NotDecomposable);
    };
    let space = rep.space();
    let pair_of = |im: &Subspace, ker: &Subspace| -> Option<(Subspace, Subspace)> {
        if space.is_totally_isotropic(im) && space.is_totally_isotropic(ker) {
            Some((im.clone(), ker.clone()))
        } else {
            None
        }
    };
    if let Some(pair) = pair_of(&witness.image, &witness.kernel) {
        return Ok(Some(pair));
    }
    for candidate in splitting::candidates(&basis, 0, MODULE_SPLIT_ROUNDS) {
        let Some(p) = splitting::nontrivial_idempotent(&candidate) else {
            continue;
        };
        let image = Subspace::from_rows(rep.dim(), p.transpose());
        let kernel = p.kernel_basis();
        if let Some(pair) = pair_of(&image, &kernel) {
            return Ok(Some(pair));
        }
    }
    Ok(None)
}

/// One flag per summand: true when the summand has a nonzero (necessarily
/// totally isotropic) fixed space and neutral signature, the only shape a
/// module-decomposable indecomposable summand can have. False means the
/// summand is Φ-safe without any search.
pub fn neutral_signature_screen(report: &DecompositionReport) -> Vec<bool> {
    report
        .summands
        .iter()
        .map(|s| s.kind == SummandKind::FixedIsotropic && s.signature.plus == s.signature.minus)
        .collect()
}

/// Runs the sufficient Φ criterion over a decomposition's summands.
pub fn phi_check(rep: &Representation, report: &DecompositionReport) -> Result<PhiVerdict, PhiError> {
    check_report_matches(rep, report)?;
    let screen = neutral_signature_screen(report);
    let mut witnesses = Vec::new();
    let mut any_decomposable = false;
    let mut any_probabilistic = false;
    for (index, summand) in report.summands.iter().enumerate() {
        if summand.kind != SummandKind::FixedIsotropic {
            continue;
        }
        if !screen[index] {
            witnesses.push(SummandPhi {
                summand_index: index,
                neutral_signature: false,
                verdict: ModuleVerdict::IndecomposableCertified,
                splitting_idempotent: None,
                isotropic_pair: None,
                note: "non-neutral signature rules out any invariant splitting".into(),
            });
            continue;
        }
        let part_rep = rep
            .restrict_to(&summand.subspace)
            .map_err(|e| PhiError::MismatchedReport { reason: e.to_string() })?;
        let (verdict, idempotent) = module_indecomposable(&part_rep);
        let (note, pair): (String, _) = match verdict {
            ModuleVerdict::Decomposable => {
                any_decomposable = true;
                let pair = isotropic_pair_split(&part_rep)
                    .expect("decomposable was just established")
                    .map(|(u1, u2)| {
                        (to_ambient(&summand.subspace, &u1), to_ambient(&summand.subspace, &u2))
                    });
                let note = match &pair {
                    Some(_) => "splits into two totally isotropic invariant subspaces".into(),
                    None => "invariant splitting found, no totally isotropic pair among candidates"
                        .into(),
                };
                (note, pair)
            }
            ModuleVerdict::IndecomposableProbabilistic => {
                any_probabilistic = true;
                ("no splitting found; certification conditions not met".into(), None)
            }
            ModuleVerdict::IndecomposableCertified => (
                "commutant structure and finite-field ladder certify indecomposability".into(),
                None,
            ),
        };
        witnesses.push(SummandPhi {
            summand_index: index,
            neutral_signature: true,
            verdict,
            splitting_idempotent: idempotent,
            isotropic_pair: pair,
            note,
        });
    }
    let status = if any_decomposable {
        PhiStatus::Violated
    } else if any_probabilistic {
        PhiStatus::SatisfiedProbabilistic
    } else {
        PhiStatus::SatisfiedCertified
    };
    Ok(PhiVerdict { status, witnesses })
}

fn check_report_matches(rep: &Representation, report: &DecompositionReport) -> Result<(), PhiError> {
    let n = rep.dim();
    if report.trivial_part.subspace.ambient_dim() != n {
        return Err(PhiError::MismatchedReport {
            reason: format!(
                "report ambient dimension {} vs representation dimension {}",
                report.trivial_part.subspace.ambient_dim(),
                n
            ),
        });
    }
    let parts = report.all_parts();
    let total: usize = parts.iter().map(Subspace::dim).sum();
    if total != n {
        return Err(PhiError::MismatchedReport {
            reason: format!("parts cover dimension {total} of {n}"),
        });
    }
    for (i, part) in parts.iter().enumerate() {
        if !rep.is_invariant(part) {
            return Err(PhiError::MismatchedReport {
                reason: format!("part {i} is not invariant under this representation"),
            });
        }
    }
    Ok(())
}

fn to_ambient(node: &Subspace, local: &Subspace) -> Subspace {
    Subspace::from_rows(node.ambient_dim(), local.basis() * node.basis())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::derham_decompose::decompose;
    use crate::holonomy_action::Generator;

    fn m(rows: &[&[i64]]) -> RatMatrix {
        RatMatrix::from_i64_rows(rows)
    }

    fn rotation_plane() -> Representation {
        Representation::from_gram(
            RatMatrix::identity(2),
            vec![Generator::group(m(&[&[0, -1], &[1, 0]]))],
        )
        .unwrap()
    }

    fn rotation_in_three() -> Representation {
        Representation::from_gram(
            RatMatrix::identity(3),
            vec![Generator::group(m(&[&[0, -1, 0], &[1, 0, 0], &[0, 0, 1]]))],
        )
        .unwrap()
    }

    fn wu_rep() -> Representation {
        Representation::from_gram(
            m(&[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, -1, 0], &[0, 0, 0, -1]]),
            vec![Generator::infinitesimal(m(&[
                &[0, -1, 0, 1],
                &[1, 0, -1, 0],
                &[0, -1, 0, 1],
                &[1, 0, -1, 0],
            ]))],
        )
        .unwrap()
    }

    fn null_rotation() -> Representation {
        Representation::from_gram(
            m(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, -1]]),
            vec![Generator::infinitesimal(m(&[&[0, 1, 0], &[-1, 0, 1], &[0, 1, 0]]))],
        )
        .unwrap()
    }

    #[test]
    fn rotation_plane_is_certified_module_indecomposable() {
        let (verdict, witness) = module_indecomposable(&rotation_plane());
        assert_eq!(verdict, ModuleVerdict::IndecomposableCertified);
        assert!(witness.is_none());
    }

    #[test]
    fn wu_action_is_module_decomposable_with_verified_witness() {
        let rep = wu_rep();
        let (verdict, witness) = module_indecomposable(&rep);
        assert_eq!(verdict, ModuleVerdict::Decomposable);
        let p = witness.unwrap();
        assert_eq!(&(&p * &p), &p);
        for g in rep.generators() {
            assert_eq!(&g.matrix * &p, &p * &g.matrix);
        }
    }

    #[test]
    fn identity_action_splits_trivially() {
        let rep = Representation::from_gram(RatMatrix::identity(2), vec![]).unwrap();
        let (verdict, witness) = module_indecomposable(&rep);
        assert_eq!(verdict, ModuleVerdict::Decomposable);
        assert!(witness.is_some());
    }

    #[test]
    fn wu_isotropic_pair_matches_the_derived_planes() {
        let rep = wu_rep();
        let pair = isotropic_pair_split(&rep).unwrap().unwrap();
        let plus = Subspace::from_i64_rows(4, &[&[1, 0, 0, 1], &[0, 1, 1, 0]]);
        let minus = Subspace::from_i64_rows(4, &[&[1, 0, 0, -1], &[0, 1, -1, 0]]);
        assert!(
            (pair.0 == plus && pair.1 == minus) || (pair.0 == minus && pair.1 == plus),
            "unexpected pair {:?}",
            pair
        );
        let space = rep.space();
        assert!(space.is_totally_isotropic(&pair.0));
        assert!(space.is_totally_isotropic(&pair.1));
        assert!(rep.is_invariant(&pair.0));
        assert!(rep.is_invariant(&pair.1));
        assert_eq!(pair.0.sum(&pair.1).dim(), 4);
        assert_eq!(pair.0.intersect(&pair.1).dim(), 0);
    }

    #[test]
    fn definite_identity_action_has_no_isotropic_pair() {
        let rep = Representation::from_gram(RatMatrix::identity(2), vec![]).unwrap();
        assert_eq!(isotropic_pair_split(&rep), Ok(None));
    }

    #[test]
    fn pair_split_requires_decomposability() {
        assert_eq!(isotropic_pair_split(&rotation_plane()), Err(PhiError::NotDecomposable));
    }

    #[test]
    fn rotation_instance_satisfies_phi_vacuously() {
        let rep = rotation_in_three();
        let report = decompose(&rep, 0);
        let verdict = phi_check(&rep, &report).unwrap();
        assert_eq!(verdict.status, PhiStatus::SatisfiedCertified);
        assert!(verdict.witnesses.is_empty());
    }

    #[test]
    fn wu_instance_violates_phi() {
        let rep = wu_rep();
        let report = decompose(&rep, 0);
        let verdict = phi_check(&rep, &report).unwrap();
        assert_eq!(verdict.status, PhiStatus::Violated);
        assert_eq!(verdict.witnesses.len(), 1);
        let w = &verdict.witnesses[0];
        assert_eq!(w.verdict, ModuleVerdict::Decomposable);
        assert!(w.neutral_signature);
        assert!(w.splitting_idempotent.is_some());
        let (u1, u2) = w.isotropic_pair.as_ref().unwrap();
        let space = rep.space();
        assert!(space.is_totally_isotropic(u1));
        assert!(space.is_totally_isotropic(u2));
    }

    #[test]
    fn non_neutral_summand_is_phi_safe_without_search() {
        let rep = null_rotation();
        let report = decompose(&rep, 0);
        assert_eq!(report.summands.len(), 1);
        assert_eq!(neutral_signature_screen(&report), vec![false]);
        let verdict = phi_check(&rep, &report).unwrap();
        assert_eq!(verdict.status, PhiStatus::SatisfiedCertified);
        assert_eq!(verdict.witnesses.len(), 1);
        assert_eq!(verdict.witnesses[0].verdict, ModuleVerdict::IndecomposableCertified);
        assert!(!verdict.witnesses[0].neutral_signature);
    }

    #[test]
    fn mismatched_report_is_rejected() {
        let rep = wu_rep();
        let other = decompose(&rotation_in_three(), 0);
        assert!(matches!(
            phi_check(&rep, &other),
            Err(PhiError::MismatchedReport { .. })
        ));
    }

    #[test]
    fn neutral_screen_flags_only_isotropic_neutral_summands() {
        let report = decompose(&wu_rep(), 0);
        assert_eq!(neutral_signature_screen(&report), vec![true]);
        let rotation = decompose(&rotation_in_three(), 0);
        assert_eq!(neutral_signature_screen(&rotation), vec![false]);
    }
}
