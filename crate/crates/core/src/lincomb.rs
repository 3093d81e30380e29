//! Exact rational linear combinations of words and polynomials in `T`
//! with such combinations as coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::words::{CompositeWord, Letter, Word};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `"p/q"`, always with an explicit denominator.
pub fn rat_to_string(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn parse_rat(s: &str) -> Result<Rational> {
    let bad = || Error::Parse {
        input: s.to_string(),
        position: 0,
        message: "expected rational p/q".into(),
    };
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(n, d))
}

/// Term types a [`LinComb`] can range over.
pub trait Term: Clone + Ord + Hash + fmt::Debug + fmt::Display + FromStr<Err = Error> {
    fn unit() -> Self;
    fn weight(&self) -> usize;
    fn concat(&self, other: &Self) -> Self;
}

impl Term for Word {
    fn unit() -> Self {
        Word::empty()
    }
    fn weight(&self) -> usize {
        Word::weight(self)
    }
    fn concat(&self, other: &Self) -> Self {
        Word::concat(self, other)
    }
}

impl Term for CompositeWord {
    fn unit() -> Self {
        CompositeWord::empty()
    }
    fn weight(&self) -> usize {
        CompositeWord::weight(self)
    }
    fn concat(&self, other: &Self) -> Self {
        CompositeWord::concat(self, other)
    }
}

/// Finite formal sum with exact rational coefficients. Zero coefficients
/// are never stored; iteration is in canonical term order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinComb<W: Term> {
    terms: BTreeMap<W, Rational>,
}

impl<W: Term> Default for LinComb<W> {
    fn default() -> Self {
        LinComb {
            terms: BTreeMap::new(),
        }
    }
}

impl<W: Term> LinComb<W> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::single(W::unit())
    }

    pub fn single(w: W) -> Self {
        Self::term(w, Rational::one())
    }

    pub fn term(w: W, c: Rational) -> Self {
        let mut out = Self::zero();
        out.add_term(w, c);
        out
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (W, Rational)>) -> Self {
        let mut out = Self::zero();
        for (w, c) in terms {
            out.add_term(w, c);
        }
        out
    }

    /// Sum of words with coefficient one each.
    pub fn sum_of(words: impl IntoIterator<Item = W>) -> Self {
        Self::from_terms(words.into_iter().map(|w| (w, Rational::one())))
    }

    pub fn add_term(&mut self, w: W, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Self, c: &Rational) {
        if c.is_zero() {
            return;
        }
        for (w, x) in &other.terms {
            self.add_term(w.clone(), x * c);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: &W) -> Rational {
        self.terms.get(w).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&W, &Rational)> {
        self.terms.iter()
    }

    pub fn words(&self) -> impl Iterator<Item = &W> {
        self.terms.keys()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LinComb {
            terms: self.terms.iter().map(|(w, x)| (w.clone(), x * c)).collect(),
        }
    }

    /// Common weight of all terms; `None` if mixed or empty.
    pub fn homogeneous_weight(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(|w| w.weight());
        let first = it.next()?;
        it.all(|x| x == first).then_some(first)
    }

    /// Bilinear extension of a word-level product.
    pub fn product_lift<F>(&self, other: &Self, mut f: F) -> Self
    where
        F: FnMut(&W, &W) -> Self,
    {
        let mut out = Self::zero();
        for (u, cu) in &self.terms {
            for (v, cv) in &other.terms {
                out.add_scaled(&f(u, v), &(cu * cv));
            }
        }
        out
    }

    /// Plain concatenation extended bilinearly.
    pub fn concat(&self, other: &Self) -> Self {
        self.product_lift(other, |u, v| Self::single(u.concat(v)))
    }

    pub fn map_words<V: Term>(&self, mut f: impl FnMut(&W) -> V) -> LinComb<V> {
        LinComb::from_terms(self.terms.iter().map(|(w, c)| (f(w), c.clone())))
    }

    pub fn try_map_words<V: Term>(&self, mut f: impl FnMut(&W) -> Result<V>) -> Result<LinComb<V>> {
        let mut out = LinComb::zero();
        for (w, c) in &self.terms {
            out.add_term(f(w)?, c.clone());
        }
        Ok(out)
    }

    /// Sum of absolute values of coefficients.
    pub fn mass(&self) -> Rational {
        self.terms.values().map(|c| c.abs()).sum()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(LinCombJson::from(self)).expect("serializable")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let raw: LinCombJson = serde_json::from_value(v.clone())
            .map_err(|e| Error::RepresentationMismatch(e.to_string()))?;
        let mut out = Self::zero();
        for t in raw.terms {
            let w: W = t
                .word
                .parse()
                .map_err(|e: Error| Error::RepresentationMismatch(e.to_string()))?;
            out.add_term(w, parse_rat(&t.coeff)?);
        }
        Ok(out)
    }
}

impl LinComb<Word> {
    pub fn to_composite(&self) -> Result<LinComb<CompositeWord>> {
        self.try_map_words(|w| w.to_composite())
    }

    /// Concatenation with junction flips `b⋆b = bc`, `c⋆c = cb`.
    pub fn star_concat(&self, other: &Self) -> Self {
        self.product_lift(other, |u, v| Self::single(star_concat_words(u, v)))
    }
}

impl LinComb<CompositeWord> {
    pub fn flatten(&self) -> LinComb<Word> {
        self.map_words(|w| w.flatten())
    }
}

impl<W: Term> std::ops::Add for &LinComb<W> {
    type Output = LinComb<W>;
    fn add(self, rhs: Self) -> LinComb<W> {
        let mut out = self.clone();
        out.add_scaled(rhs, &Rational::one());
        out
    }
}

impl<W: Term> std::ops::Sub for &LinComb<W> {
    type Output = LinComb<W>;
    fn sub(self, rhs: Self) -> LinComb<W> {
        let mut out = self.clone();
        out.add_scaled(rhs, &-Rational::one());
        out
    }
}

impl<W: Term> std::ops::Neg for &LinComb<W> {
    type Output = LinComb<W>;
    fn neg(self) -> LinComb<W> {
        self.scale(&-Rational::one())
    }
}

impl<W: Term> std::ops::AddAssign<&LinComb<W>> for LinComb<W> {
    fn add_assign(&mut self, rhs: &LinComb<W>) {
        self.add_scaled(rhs, &Rational::one());
    }
}

impl<W: Term> std::ops::SubAssign<&LinComb<W>> for LinComb<W> {
    fn sub_assign(&mut self, rhs: &LinComb<W>) {
        self.add_scaled(rhs, &-Rational::one());
    }
}

impl<W: Term> fmt::Display for LinComb<W> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if abs.is_one() {
                write!(f, "{w}")?;
            } else {
                write!(f, "{abs}*{w}")?;
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    word: String,
    coeff: String,
}

#[derive(Serialize, Deserialize)]
struct LinCombJson {
    terms: Vec<TermJson>,
}

impl<W: Term> From<&LinComb<W>> for LinCombJson {
    fn from(lc: &LinComb<W>) -> Self {
        LinCombJson {
            terms: lc
                .iter()
                .map(|(w, c)| TermJson {
                    word: w.to_string(),
                    coeff: rat_to_string(c),
                })
                .collect(),
        }
    }
}

/// `u ⋆ v`: plain concatenation, except that when the last letter of `u`
/// and the first letter of `v` are both `b` (or both `c`) the first letter
/// of `v` is flipped to the other one. The flip never cascades. All other
/// junctions, including `a⋆a`, concatenate plainly.
pub fn star_concat_words(u: &Word, v: &Word) -> Word {
    let mut letters = Vec::with_capacity(u.weight() + v.weight());
    letters.extend_from_slice(u.letters());
    let mut rest = v.letters().iter().copied();
    if let (Some(last), Some(first)) = (u.last(), v.first()) {
        rest.next();
        letters.push(match (last, first) {
            (Letter::B, Letter::B) => Letter::C,
            (Letter::C, Letter::C) => Letter::B,
            _ => first,
        });
    }
    letters.extend(rest);
    Word::new(letters)
}

/// The letter `d = a(b+c)` as a combination of words.
pub fn d_letter() -> LinComb<Word> {
    LinComb::sum_of([crate::words::w("ab"), crate::words::w("ac")])
}

/// `(cd)^{⋆n}`: `2^n` words of weight `3n`.
pub fn star_power_cd(n: usize) -> LinComb<Word> {
    assert!(n >= 1);
    let c = LinComb::single(crate::words::w("c"));
    let d = d_letter();
    let mut acc = LinComb::one();
    for _ in 0..n {
        acc = acc.star_concat(&c).star_concat(&d);
    }
    acc
}

/// Polynomial in `T` with combinations of words as coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TPoly<W: Term> {
    coeffs: Vec<LinComb<W>>,
}

impl<W: Term> Default for TPoly<W> {
    fn default() -> Self {
        TPoly { coeffs: Vec::new() }
    }
}

impl<W: Term> TPoly<W> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(x: LinComb<W>) -> Self {
        Self::from_coeffs(vec![x])
    }

    pub fn t() -> Self {
        Self::from_coeffs(vec![LinComb::zero(), LinComb::one()])
    }

    pub fn from_coeffs(mut coeffs: Vec<LinComb<W>>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        TPoly { coeffs }
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, k: usize) -> LinComb<W> {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn coeffs(&self) -> &[LinComb<W>] {
        &self.coeffs
    }

    pub fn constant_term(&self) -> LinComb<W> {
        self.coeff(0)
    }

    pub fn mul_t(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(LinComb::zero());
        coeffs.extend(self.coeffs.iter().cloned());
        TPoly { coeffs }
    }

    pub fn add_scaled(&mut self, other: &Self, c: &Rational) {
        if self.coeffs.len() < other.coeffs.len() {
            self.coeffs.resize(other.coeffs.len(), LinComb::zero());
        }
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            a.add_scaled(b, c);
        }
        let trimmed = std::mem::take(&mut self.coeffs);
        *self = Self::from_coeffs(trimmed);
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|x| x.scale(c)).collect())
    }

    /// Product of polynomials whose coefficients multiply with `f`.
    pub fn mul_with<F>(&self, other: &Self, mut f: F) -> Self
    where
        F: FnMut(&LinComb<W>, &LinComb<W>) -> LinComb<W>,
    {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![LinComb::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, p) in self.coeffs.iter().enumerate() {
            for (j, q) in other.coeffs.iter().enumerate() {
                let prod = f(p, q);
                coeffs[i + j] += &prod;
            }
        }
        Self::from_coeffs(coeffs)
    }

    pub fn map_coeffs<V: Term>(&self, mut f: impl FnMut(&LinComb<W>) -> LinComb<V>) -> TPoly<V> {
        TPoly::from_coeffs(self.coeffs.iter().map(&mut f).collect())
    }

    /// `{"degree_k": LinComb}` for every nonzero coefficient.
    pub fn to_json(&self) -> serde_json::Value {
        let mut map = serde_json::Map::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                map.insert(format!("degree_{k}"), c.to_json());
            }
        }
        serde_json::Value::Object(map)
    }
}

impl<W: Term> fmt::Display for TPoly<W> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})*T")?,
                _ => write!(f, "({c})*T^{k}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::{idx, w};

    #[test]
    fn add_scale_cancel() {
        let x = LinComb::term(w("ab"), int(2));
        let y = LinComb::term(w("ab"), int(-2));
        assert!((&x + &y).is_zero());
        let z = LinComb::from_terms([(w("ab"), int(2)), (w("ac"), int(4))]);
        assert_eq!(
            z.scale(&rat(1, 2)),
            LinComb::from_terms([(w("ab"), int(1)), (w("ac"), int(2))])
        );
    }

    #[test]
    fn product_lift_distributes() {
        let x = LinComb::sum_of([w("b"), w("c")]);
        let y = LinComb::single(w("c"));
        assert_eq!(x.concat(&y), LinComb::sum_of([w("bc"), w("cc")]));
    }

    #[test]
    fn star_concat_junctions() {
        let d = d_letter();
        let c = LinComb::single(w("c"));
        assert_eq!(d.star_concat(&c), LinComb::sum_of([w("abc"), w("acb")]));
        assert_eq!(star_concat_words(&w("cab"), &w("cab")), w("cabcab"));
        assert_eq!(star_concat_words(&w("cac"), &w("cac")), w("cacbac"));
        assert_eq!(star_concat_words(&w("b"), &w("bb")), w("bcb"));
        assert_eq!(star_concat_words(&w("aa"), &w("a")), w("aaa"));
        assert_eq!(star_concat_words(&Word::empty(), &w("c")), w("c"));
    }

    #[test]
    fn star_square_matches_index_sum() {
        // Both words for (cd)^{⋆1} then squared; indices (1̄,t1,1̄,t2) with t in {2, 2̄}.
        let sq = star_power_cd(2);
        let mut got: Vec<String> = sq
            .words()
            .map(|x| x.to_composite().unwrap().to_index().to_string())
            .collect();
        got.sort();
        let mut want = vec!["-1,2,-1,2", "-1,2,-1,-2", "-1,-2,-1,2", "-1,-2,-1,-2"];
        want.sort();
        assert_eq!(got, want);
    }

    #[test]
    fn star_power_small() {
        assert_eq!(star_power_cd(1), LinComb::sum_of([w("cab"), w("cac")]));
        let three = star_power_cd(3);
        assert_eq!(three.len(), 8);
        assert!(three.words().all(|x| x.is_admissible() && x.weight() == 9));
        assert!(three.iter().all(|(_, c)| c.is_one()));
        let _ = idx("1");
    }

    #[test]
    fn tpoly_trims_and_multiplies() {
        let p = TPoly::from_coeffs(vec![LinComb::single(w("c")), LinComb::zero()]);
        assert_eq!(p.degree(), Some(0));
        let q = p.mul_t();
        assert_eq!(q.degree(), Some(1));
        let prod = q.mul_with(&q, |a, b| a.concat(b));
        assert_eq!(prod.degree(), Some(2));
        assert_eq!(prod.coeff(2), LinComb::single(w("cc")));
    }

    #[test]
    fn json_round_trip_and_mismatch() {
        let x = LinComb::from_terms([(w("acc"), int(1)), (w("ab"), rat(-3, 2))]);
        let j = x.to_json();
        assert_eq!(
            j.to_string(),
            r#"{"terms":[{"word":"ab","coeff":"-3/2"},{"word":"acc","coeff":"1/1"}]}"#
        );
        assert_eq!(LinComb::<Word>::from_json(&j).unwrap(), x);
        let comp = LinComb::single("g2g1".parse::<CompositeWord>().unwrap()).to_json();
        assert!(matches!(
            LinComb::<Word>::from_json(&comp),
            Err(Error::RepresentationMismatch(_))
        ));
    }
}
