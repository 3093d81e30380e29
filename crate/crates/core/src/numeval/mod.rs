//! High-precision evaluation of `Z(w)` for admissible words.
//!
//! The path `[0,1]` is split at a rational point `p`. The lower piece of
//! each factorization is a nested power series in `p`; the upper piece is
//! pulled back by `t -> 1-t` to a series in `1-p` over the letters
//! `{a, b, c, e}` with `e = dt/(2-t)`. Coefficients of every series that
//! arises are bounded by 1 in absolute value, which gives a geometric tail
//! bound.

pub mod constants;
pub mod oracle;
pub mod real;

use std::collections::HashMap;
use std::sync::Mutex;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lincomb::{rat, LinComb, Rational};
use crate::words::{CompositeWord, Letter, SignedIndex, Word};

pub use real::Real;

/// Letters of the evaluator's internal alphabet.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ILetter {
    A,
    B,
    C,
    E,
}

impl ILetter {
    fn from_letter(l: Letter) -> ILetter {
        match l {
            Letter::A => ILetter::A,
            Letter::B => ILetter::B,
            Letter::C => ILetter::C,
        }
    }

    /// Image under `t -> 1-t`, up to sign.
    pub fn dual(self) -> ILetter {
        match self {
            ILetter::A => ILetter::B,
            ILetter::B => ILetter::A,
            ILetter::C => ILetter::E,
            ILetter::E => ILetter::C,
        }
    }

    // ω = dt/(σ - t) for σ = 1, -1, 2.
    fn singularity(self) -> Option<i64> {
        match self {
            ILetter::A => None,
            ILetter::B => Some(1),
            ILetter::C => Some(-1),
            ILetter::E => Some(2),
        }
    }

    fn flips_sign_under_dual(self) -> bool {
        matches!(self, ILetter::C | ILetter::E)
    }
}

/// `(sign, ψ(reverse(w)))` with `I_[0,1](w) = sign · I_[0,1](ψ(reverse(w)))`.
pub fn dual_word(w: &[ILetter]) -> (i32, Vec<ILetter>) {
    let flips = w.iter().filter(|l| l.flips_sign_under_dual()).count();
    let sign = if flips % 2 == 0 { 1 } else { -1 };
    (sign, w.iter().rev().map(|l| l.dual()).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PrecisionContext {
    pub digits: u32,
    pub guard: u32,
    /// Split point `num/den`, strictly between 0 and 1.
    pub split: (u32, u32),
}

const MAX_TERMS: usize = 200_000;

impl PrecisionContext {
    pub fn new(digits: u32) -> Self {
        PrecisionContext {
            digits,
            guard: 10,
            split: (1, 2),
        }
    }

    pub fn with_split(mut self, num: u32, den: u32) -> Self {
        assert!(0 < num && num < den, "split point must lie in (0,1)");
        self.split = (num, den);
        self
    }

    pub fn bits(&self) -> u32 {
        (((self.digits + self.guard) as f64) * std::f64::consts::LOG2_10).ceil() as u32 + 64
    }

    fn ratio(&self) -> f64 {
        let p = self.split.0 as f64 / self.split.1 as f64;
        p.max(1.0 - p)
    }

    /// Least `K` with `(K+1)^weight · r^K < 10^-(D+g)`, `r` the larger half-path ratio.
    pub fn terms(&self, weight: usize) -> Result<usize> {
        let target = -((self.digits + self.guard) as f64) * std::f64::consts::LN_10;
        let lr = self.ratio().ln();
        let mut k = 1usize;
        while (weight as f64) * ((k + 1) as f64).ln() + (k as f64) * lr >= target {
            k += 1;
            if k > MAX_TERMS {
                return Err(Error::Precision {
                    digits: self.digits,
                    terms: MAX_TERMS,
                });
            }
        }
        Ok(k)
    }
}

#[derive(Clone, Debug)]
pub struct EvalResult {
    pub value: Real,
    /// Bound on `|value - true value|`.
    pub bound: f64,
}

impl EvalResult {
    pub fn to_f64(&self) -> f64 {
        self.value.to_f64()
    }
}

// Values of I_[0,x](letters[j..]) for j = 0..=len, truncated at K terms.
fn suffix_series(letters: &[ILetter], x: &Real, k_max: usize) -> Vec<Real> {
    let bits = x.bits();
    let n = letters.len();
    let mut out = vec![Real::zero(bits); n + 1];
    out[n] = Real::one(bits);
    let mut d = vec![Real::zero(bits); k_max + 1];
    d[0] = Real::one(bits);
    for j in (0..n).rev() {
        match letters[j].singularity() {
            None => {
                assert!(d[0].is_zero(), "divergent inner integral");
                for (k, dk) in d.iter_mut().enumerate().skip(1) {
                    *dk = dk.div_u64(k as u64);
                }
            }
            Some(sigma) => {
                let q = x.div_int(&BigInt::from(sigma));
                let mut p = Real::zero(bits);
                let mut next = vec![Real::zero(bits); k_max + 1];
                for k in 0..k_max {
                    p = &(&q * &p) + &d[k];
                    next[k + 1] = (&q * &p).div_u64((k + 1) as u64);
                }
                d = next;
            }
        }
        let mut s = Real::zero(bits);
        for dk in &d {
            s += dk;
        }
        out[j] = s;
    }
    out
}

fn is_convergent(w: &[ILetter]) -> bool {
    w.is_empty() || (w[0] != ILetter::B && w[w.len() - 1] != ILetter::A)
}

/// Evaluator with a per-instance cache. Safe to share across threads.
pub struct Evaluator {
    ctx: PrecisionContext,
    cache: Mutex<HashMap<Vec<ILetter>, EvalResult>>,
}

impl Evaluator {
    pub fn new(ctx: PrecisionContext) -> Self {
        Evaluator {
            ctx,
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn ctx(&self) -> &PrecisionContext {
        &self.ctx
    }

    pub fn bits(&self) -> u32 {
        self.ctx.bits()
    }

    /// `I_[0,1]` of a convergent word over the internal alphabet.
    pub fn eval_extended(&self, w: &[ILetter]) -> Result<EvalResult> {
        if !is_convergent(w) {
            let s: String = w.iter().map(|l| format!("{l:?}").to_lowercase()).collect();
            return Err(Error::NotAdmissible(s));
        }
        if let Some(hit) = self.cache.lock().unwrap().get(w) {
            return Ok(hit.clone());
        }
        let res = self.compute(w)?;
        self.cache.lock().unwrap().insert(w.to_vec(), res.clone());
        Ok(res)
    }

    fn compute(&self, w: &[ILetter]) -> Result<EvalResult> {
        let bits = self.bits();
        let n = w.len();
        if n == 0 {
            return Ok(EvalResult {
                value: Real::one(bits),
                bound: 0.0,
            });
        }
        let k_max = self.ctx.terms(n)?;
        let (num, den) = self.ctx.split;
        let p = Real::from_ratio(&rat(num as i64, den as i64), bits);
        let q = Real::from_ratio(&rat((den - num) as i64, den as i64), bits);
        let pf = num as f64 / den as f64;
        let qf = 1.0 - pf;

        // Lower pieces: suffixes of w over [0,p].
        let lower = suffix_series(w, &p, k_max);
        // Upper pieces: prefix w[..j] becomes the suffix of the dual of w
        // starting at n - j.
        let (_, dual) = dual_word(w);
        let upper_raw = suffix_series(&dual, &q, k_max);

        let tail = |x: f64| x.powi(k_max as i32 + 1) / (1.0 - x);
        let (el, eu) = (tail(pf), tail(qf));
        let (ml, mu) = (1.0 / (1.0 - pf), 1.0 / (1.0 - qf));
        let rounding = 4.0 * (n as f64 + 1.0) * ((k_max + 2) as f64).powi(2) * 2f64.powi(-(bits as i32));

        let mut value = Real::zero(bits);
        let mut bound = 0.0;
        let mut flips = 0usize;
        for j in 0..=n {
            // prefix w[..j]
            let u = &upper_raw[n - j];
            let term = &lower[j] * u;
            if flips % 2 == 0 {
                value += &term;
            } else {
                value -= &term;
            }
            let (e_u, e_l) = (if j == 0 { 0.0 } else { eu }, if j == n { 0.0 } else { el });
            bound += mu * e_l + ml * e_u + e_u * e_l + rounding;
            if j < n && w[j].flips_sign_under_dual() {
                flips += 1;
            }
        }
        Ok(EvalResult { value, bound })
    }

    pub fn eval_word(&self, w: &Word) -> Result<EvalResult> {
        if !w.is_admissible() {
            return Err(Error::NotAdmissible(w.to_string()));
        }
        let letters: Vec<ILetter> = w.letters().iter().map(|&l| ILetter::from_letter(l)).collect();
        self.eval_extended(&letters)
    }

    pub fn eval_index(&self, k: &SignedIndex) -> Result<EvalResult> {
        if !k.is_convergent() {
            return Err(Error::Divergent(k.to_string()));
        }
        self.eval_word(&k.to_word()?.flatten())
    }

    pub fn eval_lincomb(&self, x: &LinComb<Word>) -> Result<EvalResult> {
        let bits = self.bits();
        let words: Vec<&Word> = x.words().collect();
        let vals: Vec<Result<EvalResult>> = words.par_iter().map(|w| self.eval_word(w)).collect();
        let mut value = Real::zero(bits);
        let mut bound = 0.0;
        for ((_, c), v) in x.iter().zip(vals) {
            let v = v?;
            value += &v.value.mul_ratio(c);
            let cf = rational_abs_f64(c);
            bound += cf * v.bound + 2f64.powi(-(bits as i32));
        }
        Ok(EvalResult { value, bound })
    }

    pub fn eval_composite(&self, x: &LinComb<CompositeWord>) -> Result<EvalResult> {
        self.eval_lincomb(&x.flatten())
    }

    /// `ζ(n)` for `n ≥ 2`.
    pub fn zeta(&self, n: usize) -> Result<EvalResult> {
        assert!(n >= 2);
        let mut letters = vec![Letter::A; n - 1];
        letters.push(Letter::B);
        self.eval_word(&Word::new(letters))
    }
}

pub(crate) fn rational_abs_f64(c: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    let a = c.abs();
    if a.is_zero() {
        return 0.0;
    }
    a.to_f64().unwrap_or(f64::MAX)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::{idx, w};

    fn close(a: &Real, b: &Real, tol: f64) -> bool {
        (a - b).abs().to_f64() < tol
    }

    #[test]
    fn small_values() {
        let ev = Evaluator::new(PrecisionContext::new(30));
        let bits = ev.bits();
        let pi = constants::pi(bits);
        let ln2 = constants::ln2(bits);
        let z2 = (&pi * &pi).div_u64(6);
        assert!(close(&ev.eval_word(&w("ab")).unwrap().value, &z2, 1e-28));
        assert!(close(&ev.eval_word(&w("c")).unwrap().value, &-&ln2, 1e-28));
        let half_ln2sq = (&ln2 * &ln2).div_u64(2);
        assert!(close(&ev.eval_word(&w("cc")).unwrap().value, &half_ln2sq, 1e-28));
        let z3 = constants::zeta3(bits);
        assert!(close(&ev.eval_index(&idx("3")).unwrap().value, &z3, 1e-28));
        let m = ev.eval_index(&idx("-2,1")).unwrap().value.mul_int(&BigInt::from(8));
        assert!(close(&m, &z3, 1e-27));
        let z2bar = ev.eval_index(&idx("-2")).unwrap().value;
        assert!(close(&z2bar, &(-&z2).div_u64(2), 1e-28));
    }

    #[test]
    fn rejects_bad_input() {
        let ev = Evaluator::new(PrecisionContext::new(20));
        assert!(matches!(ev.eval_word(&w("ba")), Err(Error::NotAdmissible(_))));
        assert!(matches!(ev.eval_index(&idx("1,2")), Err(Error::Divergent(_))));
        assert!(ev.eval_lincomb(&LinComb::zero()).unwrap().value.is_zero());
    }

    #[test]
    fn duality_self_test() {
        let ev = Evaluator::new(PrecisionContext::new(30));
        for s in ["ab", "c", "acb", "cab", "ccb", "aacc"] {
            let letters: Vec<ILetter> = w(s).letters().iter().map(|&l| ILetter::from_letter(l)).collect();
            let (sign, dual) = dual_word(&letters);
            let direct = ev.eval_extended(&letters).unwrap().value;
            let mut via = ev.eval_extended(&dual).unwrap().value;
            if sign < 0 {
                via = -&via;
            }
            assert!(close(&direct, &via, 1e-28), "{s}");
        }
    }

    #[test]
    fn split_point_consistency() {
        let half = Evaluator::new(PrecisionContext::new(30));
        let third = Evaluator::new(PrecisionContext::new(30).with_split(1, 3));
        for s in ["ab", "acc", "cab", "aabb", "cbcb", "accabb", "acacb"] {
            let x = half.eval_word(&w(s)).unwrap();
            let y = third.eval_word(&w(s)).unwrap();
            assert!((&x.value - &y.value).abs().to_f64() <= x.bound + y.bound + 1e-40, "{s}");
            assert!(x.bound < 1e-30);
        }
    }
}
