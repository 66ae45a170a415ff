//! Built-in instances: the SO(2,2) one-parameter family with its rival
//! decompositions, and a small suite covering every verdict branch of the
//! pipeline. Also the seeded random-representation generator used by the
//! duality and stability test batteries.

use crate::derham_decompose::SummandKind;
use crate::exact_linalg::{RatMatrix, Rational};
use crate::holonomy_action::{Generator, Representation};
use crate::phi_analysis::PhiStatus;
use crate::quadratic_space::Subspace;
use crate::rng::SplitMix64;
use crate::uniqueness::UniquenessVerdict;

/// Coarse uniqueness expectation, payload-free so it can be recorded before
/// the engine runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExpectedUniqueness {
    UniqueUpToOrder,
    UniqueOneBadFactor,
    NonuniqueWitnessed,
}

impl ExpectedUniqueness {
    pub fn matches(&self, v: &UniquenessVerdict) -> bool {
        matches!(
            (self, v),
            (ExpectedUniqueness::UniqueUpToOrder, UniquenessVerdict::UniqueUpToOrder { .. })
                | (
                    ExpectedUniqueness::UniqueOneBadFactor,
                    UniquenessVerdict::UniqueOneBadFactor { .. }
                )
                | (
                    ExpectedUniqueness::NonuniqueWitnessed,
                    UniquenessVerdict::NonuniqueWitnessed { .. }
                )
        )
    }
}

#[derive(Clone, Debug)]
pub struct Expected {
    /// Canonically sorted kinds of the nontrivial summands.
    pub summand_kinds: Vec<SummandKind>,
    /// (fixed_zero count, fixed_isotropic count).
    pub counts: (usize, usize),
    pub trivial_dim: usize,
    pub phi: PhiStatus,
    pub uniqueness: ExpectedUniqueness,
}

#[derive(Clone, Debug)]
pub struct CorpusInstance {
    pub name: String,
    pub rep: Representation,
    pub known_decompositions: Vec<(String, Vec<Subspace>)>,
    pub expected: Expected,
}

fn m(rows: &[&[i64]]) -> RatMatrix {
    RatMatrix::from_i64_rows(rows)
}

fn sub(ambient: usize, rows: &[&[i64]]) -> Subspace {
    Subspace::from_i64_rows(ambient, rows)
}

/// The generator with fixed space span{e1+e3, e2+e4}: sends e1 to e2+e4,
/// e2 to −(e1+e3), e3 to −(e2+e4), e4 to e1+e3.
fn wu_matrix() -> RatMatrix {
    m(&[&[0, -1, 0, 1], &[1, 0, -1, 0], &[0, -1, 0, 1], &[1, 0, -1, 0]])
}

/// Direct sum with `other` placed in the trailing coordinates.
fn block_diag(a: &RatMatrix, b: &RatMatrix) -> RatMatrix {
    let n = a.rows() + b.rows();
    let mut out = RatMatrix::zero(n, n);
    for r in 0..a.rows() {
        for c in 0..a.cols() {
            out.set(r, c, a.get(r, c).clone());
        }
    }
    for r in 0..b.rows() {
        for c in 0..b.cols() {
            out.set(a.rows() + r, a.cols() + c, b.get(r, c).clone());
        }
    }
    out
}

/// Signature (2,2) space with a single skew-adjoint generator whose fixed
/// space is totally isotropic and whose module splits without splitting
/// orthogonally.
pub fn wu_factor() -> CorpusInstance {
    let gram = m(&[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, -1, 0], &[0, 0, 0, -1]]);
    let rep = Representation::from_gram(gram, vec![Generator::infinitesimal(wu_matrix())]).unwrap();
    CorpusInstance {
        name: "wu-factor".into(),
        rep,
        known_decompositions: vec![(
            "single-block".into(),
            vec![Subspace::full(4)],
        )],
        expected: Expected {
            summand_kinds: vec![SummandKind::FixedIsotropic],
            counts: (0, 1),
            trivial_dim: 0,
            phi: PhiStatus::Violated,
            uniqueness: ExpectedUniqueness::UniqueOneBadFactor,
        },
    }
}

/// Two commuting copies of the wu generator on an eight-dimensional
/// (4,4) space. Carries both the coordinate decomposition E/F and the
/// mixed decomposition W1/W2, which share no summand.
pub fn wu_product() -> CorpusInstance {
    let gram = block_diag(
        &m(&[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, -1, 0], &[0, 0, 0, -1]]),
        &m(&[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, -1, 0], &[0, 0, 0, -1]]),
    );
    let n = wu_matrix();
    let zero = RatMatrix::zero(4, 4);
    let rep = Representation::from_gram(
        gram,
        vec![
            Generator::infinitesimal(block_diag(&n, &zero)),
            Generator::infinitesimal(block_diag(&zero, &n)),
        ],
    )
    .unwrap();
    let e_block = sub(8, &[
        &[1, 0, 0, 0, 0, 0, 0, 0],
        &[0, 1, 0, 0, 0, 0, 0, 0],
        &[0, 0, 1, 0, 0, 0, 0, 0],
        &[0, 0, 0, 1, 0, 0, 0, 0],
    ]);
    let f_block = sub(8, &[
        &[0, 0, 0, 0, 1, 0, 0, 0],
        &[0, 0, 0, 0, 0, 1, 0, 0],
        &[0, 0, 0, 0, 0, 0, 1, 0],
        &[0, 0, 0, 0, 0, 0, 0, 1],
    ]);
    // W1 tilts the E block into the F fixed line f1+f3; W2 tilts back with
    // the opposite sign so that all cross pairings cancel.
    let w1 = sub(8, &[
        &[1, 0, 0, 0, -1, 0, -1, 0],
        &[0, 1, 0, 0, 0, 0, 0, 0],
        &[0, 0, 1, 0, 1, 0, 1, 0],
        &[0, 0, 0, 1, 0, 0, 0, 0],
    ]);
    let w2 = sub(8, &[
        &[1, 0, 1, 0, 1, 0, 0, 0],
        &[0, 0, 0, 0, 0, 1, 0, 0],
        &[-1, 0, -1, 0, 0, 0, 1, 0],
        &[0, 0, 0, 0, 0, 0, 0, 1],
    ]);
    CorpusInstance {
        name: "wu-product".into(),
        rep,
        known_decompositions: vec![
            ("coordinate-blocks".into(), vec![e_block, f_block]),
            ("mixed-blocks".into(), vec![w1, w2]),
        ],
        expected: Expected {
            summand_kinds: vec![SummandKind::FixedIsotropic, SummandKind::FixedIsotropic],
            counts: (0, 2),
            trivial_dim: 0,
            phi: PhiStatus::Violated,
            uniqueness: ExpectedUniqueness::NonuniqueWitnessed,
        },
    }
}

/// Euclidean 3-space with a quarter-turn about the z-axis: one fixed line,
/// one rigid rotation plane.
pub fn definite_rotation() -> CorpusInstance {
    let rep = Representation::from_gram(
        RatMatrix::identity(3),
        vec![Generator::group(m(&[&[0, -1, 0], &[1, 0, 0], &[0, 0, 1]]))],
    )
    .unwrap();
    CorpusInstance {
        name: "definite-rotation".into(),
        rep,
        known_decompositions: vec![(
            "axis-plane".into(),
            vec![sub(3, &[&[0, 0, 1]]), sub(3, &[&[1, 0, 0], &[0, 1, 0]])],
        )],
        expected: Expected {
            summand_kinds: vec![SummandKind::FixedZero],
            counts: (1, 0),
            trivial_dim: 1,
            phi: PhiStatus::SatisfiedCertified,
            uniqueness: ExpectedUniqueness::UniqueUpToOrder,
        },
    }
}

/// wu_factor orthogonally joined with an irreducible definite rotation
/// plane: exactly one summand is module-decomposable with nonzero fixed
/// space, the branch where the factorization is still unique.
pub fn wu_plus_plane() -> CorpusInstance {
    let gram = block_diag(
        &m(&[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, -1, 0], &[0, 0, 0, -1]]),
        &RatMatrix::identity(2),
    );
    let gen = block_diag(&wu_matrix(), &m(&[&[0, -1], &[1, 0]]));
    let rep = Representation::from_gram(gram, vec![Generator::infinitesimal(gen)]).unwrap();
    CorpusInstance {
        name: "wu-plus-plane".into(),
        rep,
        known_decompositions: vec![(
            "blocks".into(),
            vec![
                sub(6, &[
                    &[1, 0, 0, 0, 0, 0],
                    &[0, 1, 0, 0, 0, 0],
                    &[0, 0, 1, 0, 0, 0],
                    &[0, 0, 0, 1, 0, 0],
                ]),
                sub(6, &[&[0, 0, 0, 0, 1, 0], &[0, 0, 0, 0, 0, 1]]),
            ],
        )],
        expected: Expected {
            summand_kinds: vec![SummandKind::FixedZero, SummandKind::FixedIsotropic],
            counts: (1, 1),
            trivial_dim: 0,
            phi: PhiStatus::Violated,
            uniqueness: ExpectedUniqueness::UniqueOneBadFactor,
        },
    }
}

/// wu_factor orthogonally joined with a fixed definite line. The fixed
/// space is span{e1+e3, e2+e4, e5}, so the trivial part can be chosen as
/// span{e5} or tilted into the isotropic directions; both choices are
/// isometric.
pub fn wu_plus_line() -> CorpusInstance {
    let gram = block_diag(
        &m(&[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, -1, 0], &[0, 0, 0, -1]]),
        &RatMatrix::identity(1),
    );
    let gen = block_diag(&wu_matrix(), &RatMatrix::zero(1, 1));
    let rep = Representation::from_gram(gram, vec![Generator::infinitesimal(gen)]).unwrap();
    let straight = vec![
        sub(5, &[&[0, 0, 0, 0, 1]]),
        sub(5, &[
            &[1, 0, 0, 0, 0],
            &[0, 1, 0, 0, 0],
            &[0, 0, 1, 0, 0],
            &[0, 0, 0, 1, 0],
        ]),
    ];
    // Tilted trivial part u' = e5 + (e1+e3); its orthogonal complement is
    // spanned by e1 − u', e2, e3 + u', e4 and is still invariant.
    let tilted = vec![
        sub(5, &[&[1, 0, 1, 0, 1]]),
        sub(5, &[
            &[0, 0, -1, 0, -1],
            &[0, 1, 0, 0, 0],
            &[1, 0, 2, 0, 1],
            &[0, 0, 0, 1, 0],
        ]),
    ];
    CorpusInstance {
        name: "wu-plus-line".into(),
        rep,
        known_decompositions: vec![
            ("straight-axis".into(), straight),
            ("tilted-axis".into(), tilted),
        ],
        expected: Expected {
            summand_kinds: vec![SummandKind::FixedIsotropic],
            counts: (0, 1),
            trivial_dim: 1,
            phi: PhiStatus::Violated,
            uniqueness: ExpectedUniqueness::UniqueOneBadFactor,
        },
    }
}

/// Hyperbolic plane with no generators at all: the whole space is fixed,
/// nondegenerate, and becomes the trivial part even though every
/// coordinate vector is isotropic.
pub fn hyperbolic_trivial() -> CorpusInstance {
    let rep =
        Representation::from_gram(m(&[&[0, 1], &[1, 0]]), vec![]).unwrap();
    CorpusInstance {
        name: "hyperbolic-trivial".into(),
        rep,
        known_decompositions: vec![("whole".into(), vec![Subspace::full(2)])],
        expected: Expected {
            summand_kinds: vec![],
            counts: (0, 0),
            trivial_dim: 2,
            phi: PhiStatus::SatisfiedCertified,
            uniqueness: ExpectedUniqueness::UniqueUpToOrder,
        },
    }
}

/// Lorentzian null rotation: the fixed space span{e1+e3} is isotropic and
/// the whole space is an indecomposable summand of non-neutral signature,
/// so Condition Φ holds by the signature screen alone.
pub fn null_rotation() -> CorpusInstance {
    let rep = Representation::from_gram(
        m(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, -1]]),
        vec![Generator::infinitesimal(m(&[&[0, 1, 0], &[-1, 0, 1], &[0, 1, 0]]))],
    )
    .unwrap();
    CorpusInstance {
        name: "null-rotation".into(),
        rep,
        known_decompositions: vec![("whole".into(), vec![Subspace::full(3)])],
        expected: Expected {
            summand_kinds: vec![SummandKind::FixedIsotropic],
            counts: (0, 1),
            trivial_dim: 0,
            phi: PhiStatus::SatisfiedCertified,
            uniqueness: ExpectedUniqueness::UniqueUpToOrder,
        },
    }
}

/// The verdict-branch suite: definite certified, one-bad-factor, isometry
/// branch, degenerate-fixed handling, and the signature-screen case.
pub fn phi_suite() -> Vec<CorpusInstance> {
    vec![
        definite_rotation(),
        wu_plus_plane(),
        wu_plus_line(),
        hyperbolic_trivial(),
        null_rotation(),
    ]
}

/// Every built-in instance.
pub fn all() -> Vec<CorpusInstance> {
    let mut v = vec![wu_factor(), wu_product()];
    v.extend(phi_suite());
    v
}

/// Seeded random orthogonal representation: a random nondegenerate diagonal
/// form conjugated by a random unimodular matrix, with 1 to `max_gens`
/// generators of mixed kind. Infinitesimal generators are G⁻¹K for skew K;
/// group generators are Cayley transforms of such.
pub fn random_representation(seed: u64, dim: usize, max_gens: usize) -> Representation {
    assert!(dim >= 1 && max_gens >= 1);
    let mut rng = SplitMix64::new(seed);
    loop {
        if let Some(rep) = try_random_representation(&mut rng, dim, max_gens) {
            return rep;
        }
    }
}

fn try_random_representation(
    rng: &mut SplitMix64,
    dim: usize,
    max_gens: usize,
) -> Option<Representation> {
    let mut diag = Vec::with_capacity(dim);
    for _ in 0..dim {
        let v = loop {
            let v = rng.int_in(-2, 2);
            if v != 0 {
                break v;
            }
        };
        diag.push(Rational::from_i64(v));
    }
    let d = RatMatrix::diagonal(&diag);
    let s = random_unimodular(rng, dim);
    let gram = &(&s.transpose() * &d) * &s;
    let gram_inv = gram.inverse().expect("congruent to a nondegenerate form");

    let n_gens = 1 + rng.index(max_gens);
    let mut gens = Vec::with_capacity(n_gens);
    for _ in 0..n_gens {
        let k = random_skew(rng, dim);
        let x = &gram_inv * &k;
        if rng.index(2) == 0 {
            gens.push(Generator::infinitesimal(x));
        } else {
            let id = RatMatrix::identity(dim);
            let denom = {
                let mut m = id.clone();
                for r in 0..dim {
                    for c in 0..dim {
                        let v = m.get(r, c) - x.get(r, c);
                        m.set(r, c, v);
                    }
                }
                m
            };
            let inv = denom.inverse()?;
            let mut numer = id;
            for r in 0..dim {
                for c in 0..dim {
                    let v = numer.get(r, c) + x.get(r, c);
                    numer.set(r, c, v);
                }
            }
            gens.push(Generator::group(&numer * &inv));
        }
    }
    Representation::from_gram(gram, gens).ok()
}

/// Product of random integer elementary shears; always determinant ±1.
fn random_unimodular(rng: &mut SplitMix64, dim: usize) -> RatMatrix {
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
        let c = Rational::from_i64(rng.int_in(-2, 2));
        for col in 0..dim {
            let v = m.get(i, col) + &(&c * m.get(j, col));
            m.set(i, col, v);
        }
    }
    m
}

fn random_skew(rng: &mut SplitMix64, dim: usize) -> RatMatrix {
    let mut k = RatMatrix::zero(dim, dim);
    for r in 0..dim {
        for c in (r + 1)..dim {
            let v = Rational::from_i64(rng.int_in(-2, 2));
            k.set(r, c, v.clone());
            k.set(c, r, -v);
        }
    }
    k
}
