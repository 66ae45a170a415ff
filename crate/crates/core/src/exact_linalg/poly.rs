use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{RatMatrix, Rational};

/// Polynomial over the rationals, coefficients stored lowest degree first.
/// The zero polynomial has an empty coefficient vector.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    coeffs: Vec<Rational>,
}

impl Polynomial {
    /// Builds from coefficients c0 + c1 x + c2 x² + …, trimming high zeros.
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Rational::is_zero) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Polynomial::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Polynomial::new(vec![c])
    }

    /// The monomial x.
    pub fn x() -> Self {
        Polynomial::new(vec![Rational::zero(), Rational::one()])
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Polynomial::new(coeffs.iter().map(|&c| Rational::from_i64(c)).collect())
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading_coeff(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn monic(&self) -> Polynomial {
        if self.is_zero() {
            return Polynomial::zero();
        }
        let lead = self.leading_coeff();
        self.scale(&lead.recip())
    }

    pub fn scale(&self, s: &Rational) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }

    /// Evaluates at a square matrix by Horner's rule.
    pub fn eval_matrix(&self, m: &RatMatrix) -> RatMatrix {
        assert_eq!(m.rows(), m.cols(), "matrix argument must be square");
        let n = m.rows();
        let mut acc = RatMatrix::zero(n, n);
        for c in self.coeffs.iter().rev() {
            acc = &acc * m;
            for i in 0..n {
                let v = acc.get(i, i) + c;
                acc.set(i, i, v);
            }
        }
        acc
    }

    pub fn derivative(&self) -> Polynomial {
        if self.coeffs.len() <= 1 {
            return Polynomial::zero();
        }
        Polynomial::new(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| c * &Rational::from_i64((i + 1) as i64))
                .collect(),
        )
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        let mut acc = Polynomial::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Quotient and remainder of self / divisor.
    ///
    /// # Panics
    /// Panics if `divisor` is zero.
    pub fn div_rem(&self, divisor: &Polynomial) -> (Polynomial, Polynomial) {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let d = divisor.degree();
        let lead_inv = divisor.leading_coeff().recip();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Rational::zero(); self.coeffs.len().saturating_sub(d)];
        while rem.len() > d && !rem.is_empty() {
            let k = rem.len() - 1 - d;
            let factor = rem.last().unwrap() * &lead_inv;
            if !factor.is_zero() {
                for (i, c) in divisor.coeffs.iter().enumerate() {
                    let v = &rem[k + i] - &(c * &factor);
                    rem[k + i] = v;
                }
            }
            quot[k] = factor;
            rem.pop();
        }
        (Polynomial::new(quot), Polynomial::new(rem))
    }

    /// Quotient when the division is exact, None otherwise.
    pub fn exact_div(&self, divisor: &Polynomial) -> Option<Polynomial> {
        let (q, r) = self.div_rem(divisor);
        r.is_zero().then_some(q)
    }

    /// Monic greatest common divisor.
    pub fn gcd(a: &Polynomial, b: &Polynomial) -> Polynomial {
        let mut x = a.clone();
        let mut y = b.clone();
        while !y.is_zero() {
            let (_, r) = x.div_rem(&y);
            x = y;
            y = r.monic(); // normalizing keeps coefficient growth in check
        }
        x.monic()
    }

    /// Extended Euclid: returns (g, s, t) with s·a + t·b = g and g monic.
    pub fn extended_gcd(a: &Polynomial, b: &Polynomial) -> (Polynomial, Polynomial, Polynomial) {
        let mut r0 = a.clone();
        let mut r1 = b.clone();
        let mut s0 = Polynomial::one();
        let mut s1 = Polynomial::zero();
        let mut t0 = Polynomial::zero();
        let mut t1 = Polynomial::one();
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s = &s0 - &(&q * &s1);
            let t = &t0 - &(&q * &t1);
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
            t0 = t1;
            t1 = t;
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = r0.leading_coeff().recip();
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }

    /// Product of the distinct irreducible factors: self / gcd(self, self').
    pub fn squarefree_part(&self) -> Polynomial {
        if self.is_zero() || self.is_constant() {
            return self.monic();
        }
        let g = Polynomial::gcd(self, &self.derivative());
        self.exact_div(&g)
            .expect("gcd divides the polynomial")
            .monic()
    }

    /// Yun's squarefree decomposition: pairwise-coprime squarefree factors
    /// with multiplicities, whose product with multiplicity is the monic
    /// version of self. Constant input yields an empty list.
    pub fn squarefree_decomposition(&self) -> Vec<(Polynomial, u32)> {
        let f = self.monic();
        if f.is_constant() {
            return Vec::new();
        }
        let df = f.derivative();
        let a0 = Polynomial::gcd(&f, &df);
        let mut b = f.exact_div(&a0).expect("gcd divides f");
        let c = df.exact_div(&a0).expect("gcd divides f'");
        let mut d = &c - &b.derivative();
        let mut out = Vec::new();
        let mut i: u32 = 1;
        while !b.is_constant() {
            let ai = Polynomial::gcd(&b, &d);
            let b_next = b.exact_div(&ai).expect("factor divides b");
            let c_next = d.exact_div(&ai).expect("factor divides d");
            d = &c_next - &b_next.derivative();
            if !ai.is_constant() {
                out.push((ai, i));
            }
            b = b_next;
            i += 1;
        }
        out
    }

    /// All rational roots, each listed once, ascending.
    ///
    /// Complete whenever the cleared-denominator coefficients admit divisor
    /// enumeration within the trial bound; see `rational_roots_complete`.
    pub fn rational_roots(&self) -> Vec<Rational> {
        self.rational_roots_impl().0
    }

    /// Rational roots plus a completeness flag. When the flag is false the
    /// leading or trailing coefficient was too large to enumerate divisors
    /// exhaustively, so roots may be missing.
    pub fn rational_roots_complete(&self) -> (Vec<Rational>, bool) {
        self.rational_roots_impl()
    }

    fn rational_roots_impl(&self) -> (Vec<Rational>, bool) {
        if self.is_zero() || self.is_constant() {
            return (Vec::new(), true);
        }
        let mut roots = Vec::new();
        // Strip the root at zero first.
        let mut low = 0;
        while self.coeff(low).is_zero() {
            low += 1;
        }
        if low > 0 {
            roots.push(Rational::zero());
        }
        let reduced = Polynomial::new(self.coeffs[low..].to_vec());
        if reduced.is_constant() {
            return (roots, true);
        }
        // Clear denominators to a primitive integer polynomial.
        let mut denom_lcm = BigInt::one();
        for c in reduced.coeffs() {
            denom_lcm = denom_lcm.lcm(c.denom());
        }
        let ints: Vec<BigInt> = reduced
            .coeffs()
            .iter()
            .map(|c| c.numer() * &denom_lcm / c.denom())
            .collect();
        let a0 = ints.first().unwrap().abs();
        let an = ints.last().unwrap().abs();
        let (p_divs, p_complete) = divisors(&a0);
        let (q_divs, q_complete) = divisors(&an);
        for p in &p_divs {
            for q in &q_divs {
                for sign in [1i64, -1] {
                    let cand = Rational::from_bigint(p * sign) / Rational::from_bigint(q.clone());
                    if reduced.eval(&cand).is_zero() && !roots.contains(&cand) {
                        roots.push(cand);
                    }
                }
            }
        }
        roots.sort();
        (roots, p_complete && q_complete)
    }

    /// Irreducibility over the rationals, when decidable by elementary
    /// means: Some(true)/Some(false) for degree 1, for degree 2 via the
    /// discriminant, and for degree 3 via complete rational root search.
    /// None for constants, degree ≥ 4, or when root search was incomplete.
    pub fn is_irreducible_over_rationals(&self) -> Option<bool> {
        match self.degree() {
            0 => None,
            1 => Some(true),
            2 => {
                let m = self.monic();
                let b = m.coeff(1);
                let c = m.coeff(0);
                let disc = &b * &b - Rational::from_i64(4) * c;
                if disc.is_negative() {
                    return Some(true);
                }
                Some(!is_perfect_square(&disc))
            }
            3 => {
                let (roots, complete) = self.rational_roots_complete();
                if !roots.is_empty() {
                    return Some(false);
                }
                complete.then_some(true)
            }
            _ => None,
        }
    }
}

/// Positive divisors of |n|, with a completeness flag. Trial division stops
/// at 10⁷, so numbers with larger paired divisors report incomplete.
fn divisors(n: &BigInt) -> (Vec<BigInt>, bool) {
    if n.is_zero() {
        // Every integer divides 0; callers strip zero roots first, so this
        // only happens for polynomials that are identically handled above.
        return (vec![BigInt::one()], true);
    }
    let n = n.abs();
    let mut small = Vec::new();
    let mut large = Vec::new();
    let bound: u64 = 10_000_000;
    let mut i = BigInt::one();
    let mut complete = false;
    loop {
        if &i * &i > n {
            complete = true;
            break;
        }
        if i.to_u64().is_none_or(|v| v > bound) {
            break;
        }
        if (&n % &i).is_zero() {
            small.push(i.clone());
            let co = &n / &i;
            if co != i {
                large.push(co);
            }
        }
        i += 1;
    }
    small.extend(large.into_iter().rev());
    (small, complete)
}

fn is_perfect_square(q: &Rational) -> bool {
    if q.is_negative() {
        return false;
    }
    let n = q.numer();
    let d = q.denom();
    let sn = n.sqrt();
    let sd = d.sqrt();
    &sn * &sn == *n && &sd * &sd == *d
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*x")?,
                _ => write!(f, "{c}*x^{i}")?,
            }
            first = false;
        }
        Ok(())
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }
}
