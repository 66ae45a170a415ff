//! Brute-force evidence over small prime fields. Everything here is an
//! independent reimplementation on u64 arithmetic so that agreement with the
//! rational engine actually means something.
//!
//! The two searches are exhaustive where the rational side is randomized:
//! every idempotent in the reduced commutant, every invariant subspace of a
//! given dimension. Reduction preserves idempotents, so a rational splitting
//! witness must show up mod every valid prime; the converse direction is
//! deliberately weak evidence and is reported as such.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::derham_decompose::{DecompositionReport, Indecomposability};
use crate::exact_linalg::{RatMatrix, Rational};
use crate::holonomy_action::Representation;

/// Default crosscheck primes. Small enough to enumerate, away from the
/// characteristic-2 and -3 quirks of symmetric forms.
pub const DEFAULT_PRIMES: [u64; 3] = [5, 7, 11];

/// Primes the certification ladder may draw evidence from.
const PRIME_LADDER: [u64; 23] = [
    5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
];

/// Hard cap on any enumeration: p^d combinations or k-subspace counts.
const SEARCH_BOUND: u128 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("reduction mod {prime} is invalid: {reason}")]
    InvalidReduction { prime: u64, reason: String },
    #[error("search space of about {size} candidates exceeds the 10^7 bound")]
    BoundExceeded { size: u128 },
}

/// Dense matrix over the integers mod a fixed prime.
#[derive(Clone, PartialEq, Eq)]
pub struct ModMatrix {
    prime: u64,
    rows: usize,
    cols: usize,
    entries: Vec<u64>,
}

impl std::fmt::Debug for ModMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "ModMatrix mod {} {}x{}", self.prime, self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", &self.entries[r * self.cols..(r + 1) * self.cols])?;
        }
        Ok(())
    }
}

impl ModMatrix {
    pub fn zero(prime: u64, rows: usize, cols: usize) -> Self {
        assert!(prime > 1 && prime < (1 << 16), "prime out of the supported range");
        ModMatrix { prime, rows, cols, entries: vec![0; rows * cols] }
    }

    pub fn identity(prime: u64, n: usize) -> Self {
        let mut m = ModMatrix::zero(prime, n, n);
        for i in 0..n {
            m.entries[i * n + i] = 1;
        }
        m
    }

    pub fn from_rows(prime: u64, rows: Vec<Vec<u64>>, cols: usize) -> Self {
        let mut entries = Vec::with_capacity(rows.len() * cols);
        let n_rows = rows.len();
        for row in rows {
            assert_eq!(row.len(), cols);
            entries.extend(row.into_iter().map(|v| v % prime));
        }
        ModMatrix { prime, rows: n_rows, cols, entries }
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        self.entries[r * self.cols + c] = v % self.prime;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&v| v == 0)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows)
                .all(|r| (0..self.cols).all(|c| self.get(r, c) == u64::from(r == c)))
    }

    pub fn transpose(&self) -> Self {
        let mut out = ModMatrix::zero(self.prime, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c));
            }
        }
        out
    }

    /// Entries stay below the prime and primes stay below 2^16, so plain
    /// u64 accumulation cannot overflow.
    pub fn mul(&self, other: &ModMatrix) -> ModMatrix {
        assert_eq!(self.cols, other.rows);
        assert_eq!(self.prime, other.prime);
        let p = self.prime;
        let mut out = ModMatrix::zero(self.prime, self.rows, other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let mut acc = 0u64;
                for k in 0..self.cols {
                    acc += self.get(r, k) * other.get(k, c);
                }
                out.entries[r * other.cols + c] = acc % p;
            }
        }
        out
    }

    fn add_scaled_assign(&mut self, other: &ModMatrix, scale: u64) {
        let p = self.prime;
        for (a, &b) in self.entries.iter_mut().zip(&other.entries) {
            *a = (*a + b * scale) % p;
        }
    }

    /// In-place row reduction; returns pivot columns.
    fn rref_in_place(&mut self) -> Vec<usize> {
        let p = self.prime;
        let mut pivots = Vec::new();
        let mut lead = 0;
        for col in 0..self.cols {
            let Some(pivot_row) = (lead..self.rows).find(|&r| self.get(r, col) != 0) else {
                continue;
            };
            for c in 0..self.cols {
                let tmp = self.get(lead, c);
                self.set(lead, c, self.get(pivot_row, c));
                self.set(pivot_row, c, tmp);
            }
            let inv = inv_mod(self.get(lead, col), p);
            for c in 0..self.cols {
                let v = mul_mod(self.get(lead, c), inv, p);
                self.set(lead, c, v);
            }
            for r in 0..self.rows {
                if r != lead && self.get(r, col) != 0 {
                    let factor = self.get(r, col);
                    for c in 0..self.cols {
                        let v = sub_mod(self.get(r, c), mul_mod(factor, self.get(lead, c), p), p);
                        self.set(r, c, v);
                    }
                }
            }
            pivots.push(col);
            lead += 1;
            if lead == self.rows {
                break;
            }
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut work = self.clone();
        work.rref_in_place().len()
    }

    /// Basis of the right kernel, one coefficient vector per free column.
    pub fn kernel_basis(&self) -> Vec<Vec<u64>> {
        let p = self.prime;
        let mut work = self.clone();
        let pivots = work.rref_in_place();
        let pivot_of_col: Vec<Option<usize>> = (0..self.cols)
            .map(|c| pivots.iter().position(|&pc| pc == c))
            .collect();
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_of_col[free].is_some() {
                continue;
            }
            let mut v = vec![0u64; self.cols];
            v[free] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = neg_mod(work.get(r, free), p);
            }
            basis.push(v);
        }
        basis
    }
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    (a % p) * (b % p) % p
}

fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    (a + p - b % p) % p
}

fn neg_mod(a: u64, p: u64) -> u64 {
    (p - a % p) % p
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let mut result = 1u64;
    let mut base = a % p;
    let mut exp = p - 2;
    while exp > 0 {
        if exp & 1 == 1 {
            result = mul_mod(result, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    result
}

fn reduce_rational(x: &Rational, p: u64) -> Option<u64> {
    let pb = BigInt::from(p);
    let den = x.denom().mod_floor(&pb).to_u64()?;
    if den == 0 {
        return None;
    }
    let num = x.numer().mod_floor(&pb).to_u64()?;
    Some(mul_mod(num, inv_mod(den, p), p))
}

fn reduce_matrix(m: &RatMatrix, p: u64) -> Option<ModMatrix> {
    let mut out = ModMatrix::zero(p, m.rows(), m.cols());
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            out.set(r, c, reduce_rational(m.get(r, c), p)?);
        }
    }
    Some(out)
}

/// A representation pushed down to a prime field.
#[derive(Clone, Debug)]
pub struct FieldReduction {
    pub prime: u64,
    pub gram: ModMatrix,
    pub reduced_generators: Vec<ModMatrix>,
    pub valid: bool,
    pub invalid_reason: Option<String>,
}

pub fn reduce(rep: &Representation, p: u64) -> FieldReduction {
    let invalid = |reason: &str| FieldReduction {
        prime: p,
        gram: ModMatrix::zero(p, 0, 0),
        reduced_generators: Vec::new(),
        valid: false,
        invalid_reason: Some(reason.to_string()),
    };
    let Some(gram) = reduce_matrix(rep.gram(), p) else {
        return invalid("a Gram entry has a denominator divisible by the prime");
    };
    if gram.rank() < rep.dim() {
        return invalid("the Gram determinant vanishes mod the prime");
    }
    let mut reduced_generators = Vec::new();
    for g in rep.generators() {
        let Some(m) = reduce_matrix(&g.matrix, p) else {
            return invalid("a generator entry has a denominator divisible by the prime");
        };
        reduced_generators.push(m);
    }
    FieldReduction { prime: p, gram, reduced_generators, valid: true, invalid_reason: None }
}

/// Basis of {X : X commutes with every generator}, optionally intersected
/// with the self-adjoint condition GX = XᵀG, over the prime field.
fn commutant_basis_mod_p(red: &FieldReduction, n: usize, self_adjoint: bool) -> Vec<ModMatrix> {
    let p = red.prime;
    let unknowns = n * n;
    let mut rows: Vec<Vec<u64>> = Vec::new();
    for a in &red.reduced_generators {
        for i in 0..n {
            for j in 0..n {
                let mut row = vec![0u64; unknowns];
                for q in 0..n {
                    row[i * n + q] = (row[i * n + q] + a.get(q, j)) % p;
                }
                for pp in 0..n {
                    row[pp * n + j] = sub_mod(row[pp * n + j], a.get(i, pp), p);
                }
                rows.push(row);
            }
        }
    }
    if self_adjoint {
        for i in 0..n {
            for j in 0..n {
                let mut row = vec![0u64; unknowns];
                for pp in 0..n {
                    row[pp * n + j] = (row[pp * n + j] + red.gram.get(i, pp)) % p;
                    row[pp * n + i] = sub_mod(row[pp * n + i], red.gram.get(pp, j), p);
                }
                rows.push(row);
            }
        }
    }
    let system = if rows.is_empty() {
        ModMatrix::zero(p, 0, unknowns)
    } else {
        ModMatrix::from_rows(p, rows, unknowns)
    };
    system
        .kernel_basis()
        .into_iter()
        .map(|flat| {
            let mut m = ModMatrix::zero(p, n, n);
            for i in 0..n {
                for j in 0..n {
                    m.set(i, j, flat[i * n + j]);
                }
            }
            m
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct IdempotentCount {
    pub prime: u64,
    pub commutant_dim: usize,
    /// All idempotents found, including 0 and the identity.
    pub total: u64,
    pub nontrivial: u64,
    pub witnesses: Vec<ModMatrix>,
}

/// Walks every element of the reduced (self-adjoint) commutant and counts
/// the idempotents. Exhaustive, hence the hard p^d bound.
pub fn enumerate_idempotents_mod_p(
    rep: &Representation,
    p: u64,
    self_adjoint: bool,
) -> Result<IdempotentCount, OracleError> {
    let red = reduce(rep, p);
    if !red.valid {
        return Err(OracleError::InvalidReduction {
            prime: p,
            reason: red.invalid_reason.unwrap_or_default(),
        });
    }
    let n = rep.dim();
    let basis = commutant_basis_mod_p(&red, n, self_adjoint);
    let d = basis.len();
    let size = u128::from(p).checked_pow(d as u32).unwrap_or(u128::MAX);
    if size > SEARCH_BOUND {
        return Err(OracleError::BoundExceeded { size });
    }
    let mut total = 0u64;
    let mut nontrivial = 0u64;
    let mut witnesses = Vec::new();
    let mut digits = vec![0u64; d];
    loop {
        let mut x = ModMatrix::zero(p, n, n);
        for (k, &c) in digits.iter().enumerate() {
            if c != 0 {
                x.add_scaled_assign(&basis[k], c);
            }
        }
        if x.mul(&x) == x {
            total += 1;
            if !x.is_zero() && !x.is_identity() {
                nontrivial += 1;
                witnesses.push(x);
            }
        }
        let mut k = 0;
        loop {
            if k == d {
                return Ok(IdempotentCount { prime: p, commutant_dim: d, total, nontrivial, witnesses });
            }
            digits[k] += 1;
            if digits[k] < p {
                break;
            }
            digits[k] = 0;
            k += 1;
        }
    }
}

#[derive(Clone, Debug)]
pub struct InvariantSubspace {
    pub basis: ModMatrix,
    pub isotropic: bool,
    pub nondegenerate: bool,
}

fn gaussian_binomial(n: usize, k: usize, p: u64) -> u128 {
    let mut num = 1u128;
    let mut den = 1u128;
    let pb = u128::from(p);
    for i in 0..k {
        num = num.saturating_mul(pb.saturating_pow((n - i) as u32).saturating_sub(1));
        den = den.saturating_mul(pb.saturating_pow((i + 1) as u32).saturating_sub(1));
    }
    num / den
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut all = Vec::new();
    let mut current = Vec::with_capacity(k);
    fn go(start: usize, n: usize, k: usize, current: &mut Vec<usize>, all: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            all.push(current.clone());
            return;
        }
        for i in start..n {
            current.push(i);
            go(i + 1, n, k, current, all);
            current.pop();
        }
    }
    go(0, n, k, &mut current, &mut all);
    all
}

/// Row vector reduced against an RREF basis; zero remainder means membership.
fn reduces_to_zero(row: &[u64], basis: &ModMatrix) -> bool {
    let p = basis.prime;
    let mut v = row.to_vec();
    for r in 0..basis.rows {
        let pivot_col = (0..basis.cols).find(|&c| basis.get(r, c) != 0);
        if let Some(pc) = pivot_col {
            let factor = v[pc];
            if factor != 0 {
                for c in 0..basis.cols {
                    v[c] = sub_mod(v[c], mul_mod(factor, basis.get(r, c), p), p);
                }
            }
        }
    }
    v.iter().all(|&x| x == 0)
}

/// Exhaustive walk of the k-dimensional subspaces over the prime field,
/// keeping those invariant under every reduced generator.
pub fn enumerate_invariant_subspaces_mod_p(
    rep: &Representation,
    p: u64,
    k: usize,
) -> Result<Vec<InvariantSubspace>, OracleError> {
    let red = reduce(rep, p);
    if !red.valid {
        return Err(OracleError::InvalidReduction {
            prime: p,
            reason: red.invalid_reason.unwrap_or_default(),
        });
    }
    let n = rep.dim();
    assert!(k <= n, "subspace dimension exceeds the ambient dimension");
    let size = gaussian_binomial(n, k, p);
    if size > SEARCH_BOUND {
        return Err(OracleError::BoundExceeded { size });
    }
    let transposed: Vec<ModMatrix> = red.reduced_generators.iter().map(ModMatrix::transpose).collect();
    let mut found = Vec::new();
    for pivots in combinations(n, k) {
        let is_pivot: Vec<bool> = (0..n).map(|c| pivots.contains(&c)).collect();
        let mut free_slots = Vec::new();
        for (r, &pc) in pivots.iter().enumerate() {
            for c in (pc + 1)..n {
                if !is_pivot[c] {
                    free_slots.push((r, c));
                }
            }
        }
        let mut digits = vec![0u64; free_slots.len()];
        'odometer: loop {
            let mut basis = ModMatrix::zero(p, k, n);
            for (r, &pc) in pivots.iter().enumerate() {
                basis.set(r, pc, 1);
            }
            for (&(r, c), &v) in free_slots.iter().zip(&digits) {
                basis.set(r, c, v);
            }
            let invariant = transposed.iter().all(|mt| {
                let image = basis.mul(mt);
                (0..k).all(|r| {
                    let row: Vec<u64> = (0..n).map(|c| image.get(r, c)).collect();
                    reduces_to_zero(&row, &basis)
                })
            });
            if invariant {
                let form = basis.mul(&red.gram).mul(&basis.transpose());
                let isotropic = form.is_zero();
                let nondegenerate = form.rank() == k;
                found.push(InvariantSubspace { basis, isotropic, nondegenerate });
            }
            let mut i = 0;
            loop {
                if i == digits.len() {
                    break 'odometer;
                }
                digits[i] += 1;
                if digits[i] < p {
                    break;
                }
                digits[i] = 0;
                i += 1;
            }
        }
    }
    Ok(found)
}

/// Evidence gathered while walking the prime ladder for one representation:
/// primes where the reduced commutant carries no nontrivial idempotent at
/// all (clean) versus primes where it does (dirty, which over a finite field
/// says nothing about the rationals).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModularEvidence {
    pub clean_primes: Vec<u64>,
    pub dirty_primes: Vec<u64>,
    /// True when the requested number of clean primes was reached.
    pub complete: bool,
}

pub fn modular_indecomposability_evidence(rep: &Representation, wanted: usize) -> ModularEvidence {
    let mut clean = Vec::new();
    let mut dirty = Vec::new();
    for &p in &PRIME_LADDER {
        if clean.len() >= wanted {
            break;
        }
        match enumerate_idempotents_mod_p(rep, p, false) {
            Ok(count) => {
                if count.nontrivial == 0 {
                    clean.push(p);
                } else {
                    dirty.push(p);
                }
            }
            Err(_) => continue,
        }
    }
    let complete = clean.len() >= wanted;
    ModularEvidence { clean_primes: clean, dirty_primes: dirty, complete }
}

#[derive(Clone, Debug)]
pub struct PrimeEvidence {
    pub prime: u64,
    pub valid: bool,
    /// Whether every rational splitting certificate reduced to a mod-p
    /// idempotent (None when there are no certificates or the reduction of
    /// some certificate has a denominator divisible by the prime).
    pub certificates_reduce_to_idempotents: Option<bool>,
    /// Nontrivial self-adjoint idempotents in the reduced ambient commutant
    /// (None when the reduction is invalid or the search is out of bounds).
    pub nontrivial_selfadjoint: Option<u64>,
    /// Same for the full commutant.
    pub nontrivial_full: Option<u64>,
    pub note: String,
}

#[derive(Clone, Debug)]
pub struct CrosscheckReport {
    pub evidence: Vec<PrimeEvidence>,
    /// A rational witness failed to reduce to an idempotent, or a rational
    /// splitting left no trace at some valid prime. Reduction preserves
    /// idempotents, so either event disproves the rational arithmetic.
    pub soundness_violation: bool,
    /// Probabilistically indecomposable summand with mod-p splittings at
    /// every valid prime: worth a human look, not a verdict.
    pub needs_manual_review: bool,
    pub notes: Vec<String>,
}

pub fn crosscheck(
    rep: &Representation,
    report: &DecompositionReport,
    primes: &[u64],
) -> CrosscheckReport {
    let mut evidence = Vec::new();
    let mut notes = Vec::new();
    let mut soundness_violation = false;
    let mut valid_primes = Vec::new();

    for &p in primes {
        let red = reduce(rep, p);
        if !red.valid {
            evidence.push(PrimeEvidence {
                prime: p,
                valid: false,
                certificates_reduce_to_idempotents: None,
                nontrivial_selfadjoint: None,
                nontrivial_full: None,
                note: red.invalid_reason.unwrap_or_default(),
            });
            continue;
        }
        valid_primes.push(p);

        let cert_check = if report.certificates.is_empty() {
            None
        } else {
            let mut all_ok = Some(true);
            for cert in &report.certificates {
                match reduce_matrix(cert, p) {
                    Some(c) => {
                        if c.mul(&c) != c {
                            all_ok = Some(false);
                        }
                    }
                    None => {
                        if all_ok == Some(true) {
                            all_ok = None;
                        }
                    }
                }
            }
            all_ok
        };
        if cert_check == Some(false) {
            soundness_violation = true;
            notes.push(format!(
                "a splitting certificate does not reduce to an idempotent mod {p}"
            ));
        }

        let sa = enumerate_idempotents_mod_p(rep, p, true).ok();
        let full = enumerate_idempotents_mod_p(rep, p, false).ok();
        let sa_count = sa.as_ref().map(|c| c.nontrivial);
        let full_count = full.as_ref().map(|c| c.nontrivial);

        if !report.certificates.is_empty() {
            if let Some(0) = sa_count {
                soundness_violation = true;
                notes.push(format!(
                    "rational splitting exists but no self-adjoint idempotent survives mod {p}"
                ));
            }
        }

        evidence.push(PrimeEvidence {
            prime: p,
            valid: true,
            certificates_reduce_to_idempotents: cert_check,
            nontrivial_selfadjoint: sa_count,
            nontrivial_full: full_count,
            note: String::new(),
        });
    }

    let mut needs_manual_review = false;
    for (i, summand) in report.summands.iter().enumerate() {
        if !matches!(summand.indecomposability, Indecomposability::Probabilistic { .. }) {
            continue;
        }
        let Ok(part_rep) = rep.restrict_to(&summand.subspace) else {
            continue;
        };
        let mut checked = 0usize;
        let mut split_everywhere = true;
        for &p in &valid_primes {
            match enumerate_idempotents_mod_p(&part_rep, p, true) {
                Ok(count) => {
                    checked += 1;
                    if count.nontrivial == 0 {
                        split_everywhere = false;
                    }
                }
                Err(_) => continue,
            }
        }
        if checked > 0 && split_everywhere {
            needs_manual_review = true;
            notes.push(format!(
                "summand {i} is only probabilistically indecomposable yet splits mod every checked prime; \
                 finite-field splittings do not lift, flagging for review"
            ));
        }
    }

    CrosscheckReport { evidence, soundness_violation, needs_manual_review, notes }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::derham_decompose::decompose;
    use crate::holonomy_action::Generator;

    fn m(rows: &[&[i64]]) -> RatMatrix {
        RatMatrix::from_i64_rows(rows)
    }

    fn identity_rep(dim: usize) -> Representation {
        Representation::from_gram(RatMatrix::identity(dim), vec![]).unwrap()
    }

    fn rotation_plane() -> Representation {
        Representation::from_gram(
            RatMatrix::identity(2),
            vec![Generator::group(m(&[&[0, -1], &[1, 0]]))],
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

    #[test]
    fn identity_rep_idempotents_mod_3() {
        let count = enumerate_idempotents_mod_p(&identity_rep(2), 3, false).unwrap();
        assert_eq!(count.commutant_dim, 4);
        assert_eq!(count.total, 14);
        assert_eq!(count.nontrivial, 12);
        assert!(count.total >= 4);
    }

    #[test]
    fn rotation_plane_has_only_trivial_idempotents_mod_7() {
        let count = enumerate_idempotents_mod_p(&rotation_plane(), 7, false).unwrap();
        assert_eq!(count.commutant_dim, 2);
        assert_eq!(count.total, 2);
        assert_eq!(count.nontrivial, 0);
    }

    #[test]
    fn rotation_plane_splits_mod_5_but_not_rationally() {
        let count = enumerate_idempotents_mod_p(&rotation_plane(), 5, false).unwrap();
        assert!(count.nontrivial > 0);
        for w in &count.witnesses {
            assert_eq!(w.mul(w), *w);
        }
    }

    #[test]
    fn wu_splits_as_module_but_not_orthogonally_mod_5() {
        let full = enumerate_idempotents_mod_p(&wu_rep(), 5, false).unwrap();
        assert!(full.nontrivial > 0);
        let sa = enumerate_idempotents_mod_p(&wu_rep(), 5, true).unwrap();
        assert_eq!(sa.nontrivial, 0);
    }

    #[test]
    fn idempotent_bound_is_enforced() {
        let err = enumerate_idempotents_mod_p(&identity_rep(3), 7, false).unwrap_err();
        assert!(matches!(err, OracleError::BoundExceeded { .. }));
    }

    #[test]
    fn invalid_reduction_is_reported() {
        let rep = Representation::from_gram(
            RatMatrix::from_rows(vec![
                vec![Rational::new(1, 5), Rational::zero()],
                vec![Rational::zero(), Rational::one()],
            ]),
            vec![],
        )
        .unwrap();
        let err = enumerate_idempotents_mod_p(&rep, 5, false).unwrap_err();
        assert!(matches!(err, OracleError::InvalidReduction { prime: 5, .. }));
    }

    #[test]
    fn wu_invariant_planes_mod_5_include_the_named_spans() {
        let spaces = enumerate_invariant_subspaces_mod_p(&wu_rep(), 5, 2).unwrap();
        let expected = [
            ModMatrix::from_rows(5, vec![vec![1, 0, 1, 0], vec![0, 1, 0, 1]], 4),
            ModMatrix::from_rows(5, vec![vec![1, 0, 0, 1], vec![0, 1, 1, 0]], 4),
            ModMatrix::from_rows(5, vec![vec![1, 0, 0, 4], vec![0, 1, 4, 0]], 4),
        ];
        for want in &expected {
            let hit = spaces.iter().find(|s| &s.basis == want);
            assert!(hit.is_some(), "missing invariant plane {want:?}");
            assert!(hit.unwrap().isotropic);
        }
    }

    #[test]
    fn identity_rep_lines_mod_3() {
        let lines = enumerate_invariant_subspaces_mod_p(&identity_rep(2), 3, 1).unwrap();
        assert_eq!(lines.len(), 4);
    }

    #[test]
    fn rotation_plane_has_no_invariant_lines_mod_7() {
        let lines = enumerate_invariant_subspaces_mod_p(&rotation_plane(), 7, 1).unwrap();
        assert!(lines.is_empty());
    }

    #[test]
    fn grassmannian_bound_is_enforced() {
        let err = enumerate_invariant_subspaces_mod_p(&identity_rep(12), 5, 6).unwrap_err();
        assert!(matches!(err, OracleError::BoundExceeded { .. }));
    }

    #[test]
    fn ladder_finds_clean_primes_for_the_rotation_plane() {
        let ev = modular_indecomposability_evidence(&rotation_plane(), 3);
        assert!(ev.complete);
        assert_eq!(ev.clean_primes, vec![7, 11, 19]);
        assert!(ev.dirty_primes.contains(&5));
        assert!(ev.dirty_primes.contains(&13));
    }

    #[test]
    fn ladder_never_certifies_the_wu_module() {
        let ev = modular_indecomposability_evidence(&wu_rep(), 3);
        assert!(!ev.complete);
        assert!(ev.clean_primes.is_empty());
    }

    #[test]
    fn crosscheck_agreement_on_the_corpus_seeds() {
        for rep in [identity_rep(2), rotation_plane(), wu_rep()] {
            let report = decompose(&rep, 0);
            let check = crosscheck(&rep, &report, &DEFAULT_PRIMES);
            assert!(!check.soundness_violation, "{:?}", check.notes);
            assert!(!check.needs_manual_review, "{:?}", check.notes);
        }
    }

    #[test]
    fn crosscheck_sees_rational_witnesses_mod_every_prime() {
        let j = m(&[&[0, -1], &[1, 0]]);
        let mut gen = RatMatrix::zero(4, 4);
        for i in 0..2 {
            for k in 0..2 {
                gen.set(i, k, j.get(i, k).clone());
                gen.set(2 + i, 2 + k, j.get(i, k).clone());
            }
        }
        let rep =
            Representation::from_gram(RatMatrix::identity(4), vec![Generator::group(gen)]).unwrap();
        let report = decompose(&rep, 0);
        assert!(!report.certificates.is_empty());
        let check = crosscheck(&rep, &report, &DEFAULT_PRIMES);
        assert!(!check.soundness_violation);
        for ev in &check.evidence {
            assert!(ev.valid);
            assert_eq!(ev.certificates_reduce_to_idempotents, Some(true));
            assert!(ev.nontrivial_selfadjoint.unwrap() > 0);
        }
    }
}
