//! Exact arithmetic for the ground ring `Z[h,t]` and for Laurent polynomials
//! in `q` used by graded ranks.
//!
//! `h` has degree 2 and `t` degree 4, matching the grading in which the dot
//! reduction `X^2 = hX + t` is homogeneous.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num::bigint::BigInt;
use num::traits::{One, Zero};
use serde::{Deserialize, Serialize};

/// An element of `Z[h,t]`, stored sparsely with no zero terms.
#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct GroundElem {
    // (h exponent, t exponent) -> coefficient, lexicographic term order
    terms: BTreeMap<(u32, u32), BigInt>,
}

impl GroundElem {
    pub fn zero() -> Self {
        GroundElem { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        GroundElem::monomial(0, 0, 1)
    }

    pub fn h() -> Self {
        GroundElem::monomial(1, 0, 1)
    }

    pub fn t() -> Self {
        GroundElem::monomial(0, 1, 1)
    }

    pub fn int(n: i64) -> Self {
        GroundElem::monomial(0, 0, n)
    }

    pub fn monomial(h_exp: u32, t_exp: u32, coeff: i64) -> Self {
        let mut terms = BTreeMap::new();
        if coeff != 0 {
            terms.insert((h_exp, t_exp), BigInt::from(coeff));
        }
        GroundElem { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self.terms.get(&(0, 0)).map(|c| c.is_one()).unwrap_or(false)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &BigInt)> {
        self.terms.iter()
    }

    pub fn coeff(&self, h_exp: u32, t_exp: u32) -> BigInt {
        self.terms.get(&(h_exp, t_exp)).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Constant term, if the element is a constant; `None` otherwise.
    pub fn as_int(&self) -> Option<BigInt> {
        if self.terms.is_empty() {
            return Some(BigInt::zero());
        }
        if self.terms.len() == 1 {
            if let Some(c) = self.terms.get(&(0, 0)) {
                return Some(c.clone());
            }
        }
        None
    }

    fn insert_term(&mut self, key: (u32, u32), coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(key) {
            Entry::Vacant(e) => {
                e.insert(coeff);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scale(&self, n: i64) -> Self {
        self.scale_big(&BigInt::from(n))
    }

    pub fn scale_big(&self, n: &BigInt) -> Self {
        if n.is_zero() {
            return GroundElem::zero();
        }
        GroundElem {
            terms: self.terms.iter().map(|(k, c)| (*k, c * n)).collect(),
        }
    }

    /// `deg h = 2`, `deg t = 4`. Returns the common degree if homogeneous.
    pub fn homogeneous_degree(&self) -> Option<i64> {
        let mut deg = None;
        for ((he, te), _) in &self.terms {
            let d = 2 * (*he as i64) + 4 * (*te as i64);
            match deg {
                None => deg = Some(d),
                Some(e) if e == d => {}
                Some(_) => return None,
            }
        }
        deg
    }

    /// Substitute numeric values for `h` and `t`.
    pub fn eval_at(&self, h: i64, t: i64) -> BigInt {
        let (h, t) = (BigInt::from(h), BigInt::from(t));
        let mut acc = BigInt::zero();
        for ((he, te), c) in &self.terms {
            acc += c * num::pow::pow(h.clone(), *he as usize) * num::pow::pow(t.clone(), *te as usize);
        }
        acc
    }

    pub fn specialize(&self, sp: Specialization) -> GroundElem {
        match sp {
            Specialization::Generic => self.clone(),
            Specialization::H0T0 => {
                let mut out = GroundElem::zero();
                if let Some(c) = self.terms.get(&(0, 0)) {
                    out.insert_term((0, 0), c.clone());
                }
                out
            }
            Specialization::Custom { h, t } => GroundElem::int(0) + GroundElem::monomial(0, 0, 1).scale_big(&self.eval_at(h, t)),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "terms": self
                .terms
                .iter()
                .map(|((he, te), c)| serde_json::json!({"h": he, "t": te, "c": c.to_string()}))
                .collect::<Vec<_>>()
        })
    }
}

impl Add for GroundElem {
    type Output = GroundElem;
    fn add(mut self, rhs: GroundElem) -> GroundElem {
        for (k, c) in rhs.terms {
            self.insert_term(k, c);
        }
        self
    }
}

impl AddAssign for GroundElem {
    fn add_assign(&mut self, rhs: GroundElem) {
        for (k, c) in rhs.terms {
            self.insert_term(k, c);
        }
    }
}

impl Sub for GroundElem {
    type Output = GroundElem;
    fn sub(self, rhs: GroundElem) -> GroundElem {
        self + (-rhs)
    }
}

impl Neg for GroundElem {
    type Output = GroundElem;
    fn neg(self) -> GroundElem {
        GroundElem {
            terms: self.terms.into_iter().map(|(k, c)| (k, -c)).collect(),
        }
    }
}

impl Mul for GroundElem {
    type Output = GroundElem;
    fn mul(self, rhs: GroundElem) -> GroundElem {
        (&self).mul(&rhs)
    }
}

impl Mul for &GroundElem {
    type Output = GroundElem;
    fn mul(self, rhs: &GroundElem) -> GroundElem {
        let mut out = GroundElem::zero();
        for ((h1, t1), c1) in &self.terms {
            for ((h2, t2), c2) in &rhs.terms {
                out.insert_term((h1 + h2, t1 + t2), c1 * c2);
            }
        }
        out
    }
}

impl fmt::Display for GroundElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for ((he, te), c) in &self.terms {
            let mono = match (he, te) {
                (0, 0) => String::new(),
                (h, 0) if *h == 1 => "h".into(),
                (h, 0) => format!("h^{h}"),
                (0, t) if *t == 1 => "t".into(),
                (0, t) => format!("t^{t}"),
                (h, t) => {
                    let hp = if *h == 1 { "h".into() } else { format!("h^{h}") };
                    let tp = if *t == 1 { "t".into() } else { format!("t^{t}") };
                    format!("{hp}*{tp}")
                }
            };
            let sign = if c.sign() == num::bigint::Sign::Minus { "-" } else { "+" };
            let abs = c.magnitude();
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {sign} ")?;
            }
            if mono.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{abs}*{mono}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for GroundElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Ground-ring specializations accepted by the CLI and the extended algebras.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Specialization {
    Generic,
    H0T0,
    Custom { h: i64, t: i64 },
}

/// A Laurent polynomial in `q` with integer coefficients.
#[derive(Clone, PartialEq, Eq, Default, Hash)]
pub struct LaurentQ {
    terms: BTreeMap<i64, BigInt>,
}

impl LaurentQ {
    pub fn zero() -> Self {
        LaurentQ { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        LaurentQ::monomial(0, 1)
    }

    pub fn monomial(q_exp: i64, coeff: i64) -> Self {
        let mut terms = BTreeMap::new();
        if coeff != 0 {
            terms.insert(q_exp, BigInt::from(coeff));
        }
        LaurentQ { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&i64, &BigInt)> {
        self.terms.iter()
    }

    pub fn coeff(&self, q_exp: i64) -> BigInt {
        self.terms.get(&q_exp).cloned().unwrap_or_else(BigInt::zero)
    }

    fn insert_term(&mut self, key: i64, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(key) {
            Entry::Vacant(e) => {
                e.insert(coeff);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// `q + q^{-1}`.
    pub fn circle() -> Self {
        LaurentQ::monomial(1, 1) + LaurentQ::monomial(-1, 1)
    }

    /// `(q + q^{-1})^ell`, the graded rank of an `ell`-loop state space.
    pub fn binomial_power(ell: u32) -> Self {
        let mut acc = LaurentQ::one();
        for _ in 0..ell {
            acc = &acc * &LaurentQ::circle();
        }
        acc
    }

    /// Multiply by `q^d` (an upward degree shift by `d`).
    pub fn shifted(&self, d: i64) -> Self {
        LaurentQ {
            terms: self.terms.iter().map(|(e, c)| (e + d, c.clone())).collect(),
        }
    }

    pub fn eval_at_one(&self) -> BigInt {
        self.terms.values().cloned().sum()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "terms": self
                .terms
                .iter()
                .map(|(e, c)| serde_json::json!({"q": e, "c": c.to_string()}))
                .collect::<Vec<_>>()
        })
    }
}

impl Add for LaurentQ {
    type Output = LaurentQ;
    fn add(mut self, rhs: LaurentQ) -> LaurentQ {
        for (k, c) in rhs.terms {
            self.insert_term(k, c);
        }
        self
    }
}

impl AddAssign for LaurentQ {
    fn add_assign(&mut self, rhs: LaurentQ) {
        for (k, c) in rhs.terms {
            self.insert_term(k, c);
        }
    }
}

impl Sub for LaurentQ {
    type Output = LaurentQ;
    fn sub(self, rhs: LaurentQ) -> LaurentQ {
        self + (-rhs)
    }
}

impl Neg for LaurentQ {
    type Output = LaurentQ;
    fn neg(self) -> LaurentQ {
        LaurentQ {
            terms: self.terms.into_iter().map(|(k, c)| (k, -c)).collect(),
        }
    }
}

impl Mul for &LaurentQ {
    type Output = LaurentQ;
    fn mul(self, rhs: &LaurentQ) -> LaurentQ {
        let mut out = LaurentQ::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.insert_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

impl fmt::Display for LaurentQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            let sign = if c.sign() == num::bigint::Sign::Minus { "-" } else { "+" };
            let abs = c.magnitude();
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {sign} ")?;
            }
            match e {
                0 => write!(f, "{abs}")?,
                1 if abs.is_one() => write!(f, "q")?,
                1 => write!(f, "{abs}q")?,
                e if abs.is_one() => write!(f, "q^{e}")?,
                e => write!(f, "{abs}q^{e}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn rand_elem(rng: &mut impl Rng) -> GroundElem {
        let mut e = GroundElem::zero();
        for _ in 0..rng.gen_range(0..5) {
            e += GroundElem::monomial(rng.gen_range(0..4), rng.gen_range(0..3), rng.gen_range(-5..=5));
        }
        e
    }

    #[test]
    fn additive_identity_and_products() {
        let ht = GroundElem::h() * GroundElem::t();
        assert_eq!(ht.clone() + GroundElem::zero(), ht);
        assert_eq!(GroundElem::h() * GroundElem::h(), GroundElem::monomial(2, 0, 1));
    }

    #[test]
    fn ring_axioms_randomized() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        for _ in 0..200 {
            let a = rand_elem(&mut rng);
            let b = rand_elem(&mut rng);
            let c = rand_elem(&mut rng);
            assert_eq!((a.clone() + b.clone()) + c.clone(), a.clone() + (b.clone() + c.clone()));
            assert_eq!(&a * &b, &b * &a);
            assert_eq!(&a * &(b.clone() + c.clone()), (&a * &b) + (&a * &c));
        }
    }

    #[test]
    fn dot_reduction_is_homogeneous() {
        // X^2 = hX + t with deg X = 2: both sides homogeneous of degree 4.
        let rhs = GroundElem::h() + GroundElem::t();
        assert!(rhs.homogeneous_degree().is_none());
        assert_eq!(GroundElem::t().homogeneous_degree(), Some(4));
        assert_eq!(GroundElem::h().homogeneous_degree(), Some(2));
    }

    #[test]
    fn laurent_binomial_powers() {
        assert_eq!(LaurentQ::binomial_power(0), LaurentQ::one());
        assert_eq!(LaurentQ::binomial_power(1), LaurentQ::circle());
        let sq = LaurentQ::monomial(2, 1) + LaurentQ::monomial(0, 2) + LaurentQ::monomial(-2, 1);
        assert_eq!(LaurentQ::binomial_power(2), sq);
        for ell in 0..8u32 {
            assert_eq!(LaurentQ::binomial_power(ell).eval_at_one(), BigInt::from(1 << ell));
        }
    }
}
