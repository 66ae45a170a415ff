//! Cross-module properties: algebra-kernel laws under proptest, and the
//! geometric identities (duality, conservation, adapted-basis shape) over
//! the built-in corpus plus seeded random representations.

use derham_core::corpus;
use derham_core::derham_decompose::decompose;
use derham_core::exact_linalg::{
    characteristic_polynomial, fitting_split, minimal_polynomial, nilpotent_exp,
};
use derham_core::quadratic_space::signature_of_symmetric;
use derham_core::rng::SplitMix64;
use derham_core::{GeneratorKind, RatMatrix, Rational, Subspace};
use proptest::prelude::*;

fn small_matrix(rows: usize, cols: usize) -> impl Strategy<Value = RatMatrix> {
    prop::collection::vec(-4i64..=4, rows * cols).prop_map(move |v| {
        RatMatrix::new(rows, cols, v.into_iter().map(Rational::from_i64).collect())
    })
}

fn any_small_matrix() -> impl Strategy<Value = RatMatrix> {
    (1usize..=5, 1usize..=5).prop_flat_map(|(r, c)| small_matrix(r, c))
}

fn square_matrix() -> impl Strategy<Value = RatMatrix> {
    (1usize..=4).prop_flat_map(|n| small_matrix(n, n))
}

proptest! {
    #[test]
    fn rref_is_idempotent(m in any_small_matrix()) {
        let once = m.rref().reduced;
        let twice = once.rref().reduced;
        prop_assert_eq!(&twice, &once);
    }

    #[test]
    fn rank_plus_nullity_is_the_column_count(m in any_small_matrix()) {
        prop_assert_eq!(m.kernel_basis().dim() + m.rank(), m.cols());
    }

    #[test]
    fn minimal_polynomial_divides_characteristic(m in square_matrix()) {
        let min = minimal_polynomial(&m);
        let ch = characteristic_polynomial(&m);
        prop_assert!(ch.exact_div(&min).is_some());
        prop_assert!(min.eval_matrix(&m).is_zero());
    }

    #[test]
    fn fitting_parts_are_complementary(m in square_matrix()) {
        let (kernel_part, image_part) = fitting_split(&m);
        prop_assert_eq!(kernel_part.dim() + image_part.dim(), m.rows());
        let joint = kernel_part.basis().vstack(image_part.basis());
        prop_assert_eq!(joint.rank(), m.rows());
    }
}

fn corpus_nilpotents() -> Vec<RatMatrix> {
    [corpus::wu_factor(), corpus::null_rotation()]
        .iter()
        .map(|inst| inst.rep.generators()[0].matrix.clone())
        .collect()
}

#[test]
fn nilpotent_exp_is_a_one_parameter_homomorphism() {
    let mut rng = SplitMix64::new(0x0e_50);
    for n in corpus_nilpotents() {
        for _ in 0..50 {
            let t = Rational::new(rng.int_in(-9, 9), rng.int_in(1, 9));
            let s = Rational::new(rng.int_in(-9, 9), rng.int_in(1, 9));
            let et = nilpotent_exp(&n, &t).unwrap();
            let es = nilpotent_exp(&n, &s).unwrap();
            let ets = nilpotent_exp(&n, &(&t + &s)).unwrap();
            assert_eq!(&et * &es, ets);
        }
    }
}

#[test]
fn nilpotent_exp_lands_in_the_orthogonal_group() {
    let mut rng = SplitMix64::new(0x0e_51);
    for (inst, n) in [corpus::wu_factor(), corpus::null_rotation()]
        .into_iter()
        .zip(corpus_nilpotents())
    {
        let gram = inst.rep.gram();
        for _ in 0..20 {
            let t = Rational::new(rng.int_in(-9, 9), rng.int_in(1, 9));
            let q = nilpotent_exp(&n, &t).unwrap();
            assert_eq!(&(&(&q.transpose() * gram) * &q), gram);
        }
    }
}

#[test]
fn fixed_space_is_the_orthogonal_complement_of_the_moved_span() {
    for inst in corpus::all() {
        let fixed = inst.rep.fixed_space();
        let moved = inst.rep.moved_span();
        assert_eq!(fixed, inst.rep.space().orth_complement(&moved), "{}", inst.name);
        assert!(inst.rep.is_invariant(&fixed));
        assert!(inst.rep.is_invariant(&moved));
    }
    for seed in 0..60u64 {
        let dim = 2 + (seed % 5) as usize;
        let rep = corpus::random_representation(seed, dim, 3);
        let fixed = rep.fixed_space();
        let moved = rep.moved_span();
        assert_eq!(fixed, rep.space().orth_complement(&moved), "seed {seed}");
        assert!(rep.is_invariant(&fixed), "seed {seed}");
        assert!(rep.is_invariant(&moved), "seed {seed}");
    }
}

fn flatten(m: &RatMatrix) -> Vec<Rational> {
    m.entries().to_vec()
}

#[test]
fn commutant_contains_identity_and_its_selfadjoint_part() {
    for inst in corpus::all() {
        let n = inst.rep.dim();
        let basis = inst.rep.commutant_basis();
        let stacked = RatMatrix::from_rows(basis.iter().map(flatten).collect());
        assert_eq!(stacked.rank(), basis.len());

        let with_identity = stacked.vstack(&RatMatrix::from_rows(vec![flatten(
            &RatMatrix::identity(n),
        )]));
        assert_eq!(with_identity.rank(), basis.len(), "{}: identity commutes", inst.name);

        for sa in inst.rep.selfadjoint_commutant_basis() {
            let extended = stacked.vstack(&RatMatrix::from_rows(vec![flatten(&sa)]));
            assert_eq!(extended.rank(), basis.len(), "{}: selfadjoint inside", inst.name);
        }
    }
}

#[test]
fn moved_span_absorbs_random_generator_words() {
    let mut rng = SplitMix64::new(0x30_7d);
    for inst in corpus::all() {
        let n = inst.rep.dim();
        let moved = inst.rep.moved_span();
        let mut group_elements: Vec<RatMatrix> = Vec::new();
        for gen in inst.rep.generators() {
            match gen.kind {
                GeneratorKind::Group => group_elements.push(gen.matrix.clone()),
                GeneratorKind::Infinitesimal => {
                    for t in [Rational::one(), Rational::new(-1, 2)] {
                        if let Ok(q) = nilpotent_exp(&gen.matrix, &t) {
                            group_elements.push(q);
                        }
                    }
                }
            }
        }
        if group_elements.is_empty() {
            continue;
        }
        for _ in 0..20 {
            let len = 1 + rng.index(3);
            let mut word = RatMatrix::identity(n);
            for _ in 0..len {
                word = &word * &group_elements[rng.index(group_elements.len())];
            }
            let displaced = &word - &RatMatrix::identity(n);
            for c in 0..n {
                assert!(
                    moved.contains_vector(&displaced.col(c)),
                    "{}: word displacement escapes the moved span",
                    inst.name
                );
            }
        }
    }
}

fn random_shear_product(rng: &mut SplitMix64, dim: usize) -> RatMatrix {
    let mut m = RatMatrix::identity(dim);
    if dim < 2 {
        return m;
    }
    for _ in 0..2 * dim {
        let i = rng.index(dim);
        let mut j = rng.index(dim);
        while j == i {
            j = rng.index(dim);
        }
        let c = Rational::from_i64(rng.int_in(-3, 3));
        for col in 0..dim {
            let v = m.get(i, col) + &(&c * m.get(j, col));
            m.set(i, col, v);
        }
    }
    m
}

#[test]
fn signature_is_a_congruence_invariant() {
    let mut rng = SplitMix64::new(0x51_6e);
    for inst in corpus::all() {
        let gram = inst.rep.gram();
        let expected = signature_of_symmetric(gram);
        for _ in 0..20 {
            let s = random_shear_product(&mut rng, gram.rows());
            let congruent = &(&s.transpose() * gram) * &s;
            assert_eq!(signature_of_symmetric(&congruent), expected, "{}", inst.name);
        }
    }
}

#[test]
fn double_complement_returns_the_subspace() {
    let mut rng = SplitMix64::new(0xdc_01);
    for seed in 0..40u64 {
        let dim = 2 + (seed % 5) as usize;
        let rep = corpus::random_representation(seed, dim, 1);
        let space = rep.space();
        let k = 1 + rng.index(dim);
        let rows: Vec<Vec<Rational>> = (0..k)
            .map(|_| (0..dim).map(|_| Rational::from_i64(rng.int_in(-3, 3))).collect())
            .collect();
        let s = Subspace::from_vectors(dim, rows);
        let complement = space.orth_complement(&s);
        assert_eq!(complement.dim(), dim - s.dim());
        assert_eq!(space.orth_complement(&complement), s);
        let radical = space.radical(&s);
        assert!(s.contains(&radical));
        assert!(complement.contains(&radical));
    }
}

#[test]
fn adapted_basis_gram_has_the_split_block_shape() {
    let mut rng = SplitMix64::new(0xab_a5);
    for seed in 0..40u64 {
        let dim = 2 + (seed % 5) as usize;
        let rep = corpus::random_representation(seed, dim, 1);
        let space = rep.space();
        let k = 1 + rng.index(dim);
        let rows: Vec<Vec<Rational>> = (0..k)
            .map(|_| (0..dim).map(|_| Rational::from_i64(rng.int_in(-3, 3))).collect())
            .collect();
        let s = Subspace::from_vectors(dim, rows);
        if s.is_zero() {
            continue;
        }
        let ab = space.adapted_basis(&s);
        let r = ab.radical_dim;
        let mid = ab.rows.rows() - 2 * r;
        let gram = &(&ab.rows * space.gram()) * &ab.rows.transpose();
        for i in 0..gram.rows() {
            for j in 0..gram.cols() {
                let delta_pair = (i < r && j >= r + mid && j - (r + mid) == i)
                    || (j < r && i >= r + mid && i - (r + mid) == j);
                let expected = if delta_pair {
                    Rational::one()
                } else if i >= r && i < r + mid && i == j {
                    ab.middle_diagonal[i - r].clone()
                } else {
                    Rational::zero()
                };
                assert_eq!(gram.get(i, j), &expected, "entry ({i},{j}) of seed {seed}");
            }
        }
    }
}

#[test]
fn decomposition_reports_conserve_the_signature() {
    for inst in corpus::all() {
        let report = decompose(&inst.rep, 0);
        let ambient = inst.rep.space().signature();
        let mut plus = 0;
        let mut minus = 0;
        for part in report.all_parts() {
            let sig = inst.rep.space().signature_of(&part);
            assert_eq!(sig.zero, 0, "{}", inst.name);
            plus += sig.plus;
            minus += sig.minus;
        }
        assert_eq!((plus, minus), (ambient.plus, ambient.minus), "{}", inst.name);
    }
}

#[test]
fn decomposition_reports_are_orthogonal_spanning_and_nondegenerate() {
    for inst in corpus::all() {
        let report = decompose(&inst.rep, 0);
        let parts = report.all_parts();
        let mut stacked = RatMatrix::zero(0, inst.rep.dim());
        for part in &parts {
            stacked = stacked.vstack(part.basis());
            assert!(inst.rep.space().is_nondegenerate_on(part), "{}", inst.name);
        }
        assert_eq!(stacked.rank(), inst.rep.dim(), "{}", inst.name);
        for i in 0..parts.len() {
            for j in (i + 1)..parts.len() {
                let cross =
                    &(parts[i].basis() * inst.rep.gram()) * &parts[j].basis().transpose();
                assert!(cross.is_zero(), "{}: parts {i} and {j} not orthogonal", inst.name);
            }
        }
    }
}

#[test]
fn certificates_hold_across_the_corpus() {
    for inst in corpus::all() {
        let report = decompose(&inst.rep, 0);
        let gram = inst.rep.gram();
        for p in &report.certificates {
            assert_eq!(&(p * p), p, "{}", inst.name);
            for gen in inst.rep.generators() {
                assert_eq!(&gen.matrix * p, p * &gen.matrix, "{}", inst.name);
            }
            assert_eq!(&(gram * p), &(&p.transpose() * gram), "{}", inst.name);
        }
    }
}

#[test]
fn decompose_is_reproducible() {
    for inst in corpus::all() {
        for seed in [0u64, 1, 17] {
            let a = decompose(&inst.rep, seed);
            let b = decompose(&inst.rep, seed);
            assert_eq!(a, b, "{} seed {seed}", inst.name);
        }
    }
}
