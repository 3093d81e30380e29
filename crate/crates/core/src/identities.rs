//! Exact checks of the cut identities on `(cd)^{⋆n}` and `(bd)^{⋆n}`, the
//! numeric side of `ζ({3}^n) = 8^n ζ({2̄,1}^n)`, and the partial-sum
//! sequences behind it.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::lincomb::{int, rat, LinComb, Rational};
use crate::numeval::{Evaluator, Real};
use crate::products::{bd_sequence, cd_sequence, cut_shuffle, cut_stuffle, delta, stuffle_words, SymLetter};
use crate::relations::ReducedTable;
use crate::words::{w, SignedIndex, Word};

/// `(ac²ab²)^{⌊n/2⌋} (ac²)^{n mod 2}`, the word of `ζ({2̄,1}^n)`.
pub fn rhs_word(n: usize) -> Word {
    assert!(n >= 1);
    w("accabb").repeat(n / 2).concat(&w("acc").repeat(n % 2))
}

/// Same shape with `b` and `c` swapped.
pub fn rhs_word_b(n: usize) -> Word {
    assert!(n >= 1);
    w("abbacc").repeat(n / 2).concat(&w("abb").repeat(n % 2))
}

/// `(a²(b+c))^n`.
pub fn d3_power(n: usize) -> LinComb<Word> {
    let d3 = LinComb::sum_of([w("aab"), w("aac")]);
    (0..n).fold(LinComb::one(), |acc, _| acc.concat(&d3))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ShuffleVariant {
    CLead,
    BLead,
}

impl std::fmt::Display for ShuffleVariant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ShuffleVariant::CLead => "c-lead",
            ShuffleVariant::BLead => "b-lead",
        })
    }
}

/// Outcome of one exact identity check.
#[derive(Clone, Debug)]
pub struct IdentityCheck {
    pub n: usize,
    /// Left side minus right side.
    pub residual: LinComb<Word>,
    /// Number of distinct words in the left side before cancellation.
    pub terms: usize,
}

impl IdentityCheck {
    pub fn holds(&self) -> bool {
        self.residual.is_zero()
    }
}

fn sign(k: usize) -> Rational {
    if k % 2 == 0 {
        int(1)
    } else {
        int(-1)
    }
}

// Σ_i s(i) f(i), terms computed in parallel and summed in index order.
fn alternating_sum<F>(len: usize, s: impl Fn(usize) -> Rational, f: F) -> Result<(LinComb<Word>, usize)>
where
    F: Fn(usize) -> Result<LinComb<Word>> + Sync,
{
    let parts: Vec<Result<LinComb<Word>>> = (0..=len).into_par_iter().map(&f).collect();
    let mut acc = LinComb::zero();
    let mut terms = 0;
    for (i, p) in parts.into_iter().enumerate() {
        let p = p?;
        terms += p.len();
        acc.add_scaled(&p, &s(i));
    }
    Ok((acc, terms))
}

/// `Σ_{i=0}^{2n} (-1)^i *_i((cd)^{⋆n}) = (-1)^n (a²(b+c))^n`.
pub fn check_stuffle_identity(n: usize) -> Result<IdentityCheck> {
    let seq = cd_sequence(n);
    let (lhs, terms) = alternating_sum(2 * n, sign, |i| cut_stuffle(i, &seq))?;
    let rhs = d3_power(n).scale(&sign(n));
    Ok(IdentityCheck {
        n,
        residual: &lhs - &rhs,
        terms,
    })
}

fn shuffle_side(n: usize, variant: ShuffleVariant) -> (Vec<SymLetter>, Word) {
    match variant {
        ShuffleVariant::CLead => (cd_sequence(n), rhs_word(n)),
        ShuffleVariant::BLead => (bd_sequence(n), rhs_word_b(n)),
    }
}

/// `Σ_{i=0}^{2n} (-1)^i ш_i(s) = (-2)^n r` with `(s, r)` the `(cd)`- or
/// `(bd)`-led pair.
pub fn check_shuffle_identity(n: usize, variant: ShuffleVariant) -> Result<IdentityCheck> {
    let (seq, r) = shuffle_side(n, variant);
    let (lhs, terms) = alternating_sum(2 * n, sign, |i| cut_shuffle(i, &seq))?;
    let coef = sign(n) * Rational::from_integer(BigInt::from(2).pow(n as u32));
    let rhs = LinComb::term(r, coef);
    Ok(IdentityCheck {
        n,
        residual: &lhs - &rhs,
        terms,
    })
}

/// `2^n r_n = (a²(b+c))^n + Σ_{i=0}^{2n} (-1)^{n-i} Δ_i((cd)^{⋆n})`, checked
/// directly through `Δ_i`. The residual is left minus right.
pub fn check_key_identity(n: usize) -> Result<IdentityCheck> {
    let seq = cd_sequence(n);
    let (sum, terms) = alternating_sum(2 * n, |i| sign(n + i), |i| delta(i, &seq))?;
    let two_n = Rational::from_integer(BigInt::from(2).pow(n as u32));
    let lhs = LinComb::term(rhs_word(n), two_n);
    let rhs = &d3_power(n) + &sum;
    Ok(IdentityCheck {
        n,
        residual: &lhs - &rhs,
        terms,
    })
}

/// Residual of the key identity rebuilt from the two separate checks. With
/// `S` and `T` the shuffle and stuffle residuals it equals `(-1)^{n+1}(S - T)`
/// (left minus right), so it must coincide with [`check_key_identity`].
pub fn key_residual_via_parts(n: usize) -> Result<LinComb<Word>> {
    let sh = check_shuffle_identity(n, ShuffleVariant::CLead)?;
    let st = check_stuffle_identity(n)?;
    Ok((&sh.residual - &st.residual).scale(&sign(n + 1)))
}

/// `|Z((a²b)^n) - 4^n Z((a²(b+c))^n)|`.
pub fn distribution_check(n: usize, ev: &Evaluator) -> Result<Real> {
    let z3 = ev.eval_word(&w("aab").repeat(n))?;
    let d = ev.eval_lincomb(&d3_power(n))?;
    let four = BigInt::from(4).pow(n as u32);
    Ok((&z3.value - &d.value.mul_int(&four)).abs())
}

/// `|ζ({3}^n) - 8^n ζ({2̄,1}^n)|`, both sides evaluated from their indices.
pub fn cube_identity_residual(n: usize, ev: &Evaluator) -> Result<Real> {
    let lhs = ev.eval_index(&SignedIndex::from_ints(&[3]).repeat(n))?;
    let rhs = ev.eval_index(&SignedIndex::from_ints(&[-2, 1]).repeat(n))?;
    let eight = BigInt::from(8).pow(n as u32);
    Ok((&lhs.value - &rhs.value.mul_int(&eight)).abs())
}

/// Residual coordinates of `2ζ(m,1) - mζ(m+1) + Σ_{j=1}^{m-2} ζ(j+1)ζ(m-j)`
/// after reducing every term over the basis of a weight-`m+1` table.
pub fn euler_residual(m: usize, table: &ReducedTable) -> Result<Vec<Rational>> {
    assert!(m >= 2 && table.weight == m + 1);
    let word = |ints: &[i32]| -> Result<Word> { Ok(SignedIndex::from_ints(ints).to_word()?.flatten()) };
    let mut x = LinComb::term(word(&[m as i32, 1])?, int(2));
    x.add_term(word(&[m as i32 + 1])?, -int(m as i64));
    for j in 1..=m.saturating_sub(2) {
        let u = word(&[j as i32 + 1])?;
        let v = word(&[(m - j) as i32])?;
        x.add_scaled(&stuffle_words(&u, &v)?, &int(1));
    }
    table.express(&x)
}

/// Polynomial in `t` with rational coefficients, truncated at a fixed
/// degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyT1 {
    coeffs: Vec<Rational>,
}

impl PolyT1 {
    pub fn zero(degree: usize) -> Self {
        PolyT1 {
            coeffs: vec![Rational::zero(); degree + 1],
        }
    }

    pub fn one(degree: usize) -> Self {
        let mut p = Self::zero(degree);
        p.coeffs[0] = Rational::one();
        p
    }

    pub fn degree_bound(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, i: usize) -> &Rational {
        &self.coeffs[i]
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn scale(&self, c: &Rational) -> Self {
        PolyT1 {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// Multiply by `t`, dropping the top coefficient.
    pub fn mul_t(&self) -> Self {
        let mut coeffs = vec![Rational::zero()];
        coeffs.extend_from_slice(&self.coeffs[..self.coeffs.len() - 1]);
        PolyT1 { coeffs }
    }

    pub fn add(&self, other: &Self) -> Self {
        PolyT1 {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(x, y)| x + y).collect(),
        }
    }
}

impl std::fmt::Display for PolyT1 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("{c}"),
                1 => format!("({c})t"),
                _ => format!("({c})t^{i}"),
            })
            .collect();
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

/// `a_n`, `ã_n` and `b_n` for `n = 1..=n_max`, index `n - 1` in each vector.
#[derive(Clone, Debug)]
pub struct PartialSumSequences {
    pub a: Vec<PolyT1>,
    pub a_tilde: Vec<PolyT1>,
    pub b: Vec<PolyT1>,
}

impl PartialSumSequences {
    /// First `n` with `a_n ≠ ã_n`, if any.
    pub fn first_mismatch(&self) -> Option<usize> {
        self.a.iter().zip(&self.a_tilde).position(|(x, y)| x != y).map(|i| i + 1)
    }
}

/// `a_1 = a_2 = 1`, `n(n+1)² a_{n+2} = n(2n+1) a_{n+1} + (n³ + (-1)^{n+1} t) a_n`.
fn recurrence(n_max: usize, degree: usize) -> Vec<PolyT1> {
    let mut a = vec![PolyT1::one(degree); n_max.min(2)];
    for n in 1..=n_max.saturating_sub(2) {
        let nn = n as i64;
        let prev = &a[n - 1];
        let cur = &a[n];
        let term = cur
            .scale(&int(nn * (2 * nn + 1)))
            .add(&prev.scale(&int(nn * nn * nn)))
            .add(&prev.mul_t().scale(&sign(n + 1)));
        a.push(term.scale(&rat(1, nn * (nn + 1) * (nn + 1))));
    }
    a
}

/// `ã_n = 1 + Σ_i t^i Σ_{n>l_1>k_1>…>l_i>k_i≥1} Π (-1)^{l_j} / (l_j² k_j)`.
fn nested_sums(n_max: usize, degree: usize) -> Vec<PolyT1> {
    // h[i][x]: chains of i pairs with top l below x.
    let mut h = vec![vec![Rational::zero(); n_max + 1]; degree + 1];
    h[0] = vec![Rational::one(); n_max + 1];
    for i in 1..=degree {
        // inner[l] = Σ_{k<l} h[i-1][k] / k
        let mut inner = Rational::zero();
        let mut acc = Rational::zero();
        for x in 1..=n_max {
            // step l = x - 1 enters the sum for h[i][x]
            let l = x - 1;
            if l >= 1 {
                let term = &inner * rat(1, (l * l) as i64) * sign(l);
                acc += term;
                inner += &h[i - 1][l] * rat(1, l as i64);
            }
            h[i][x] = acc.clone();
        }
    }
    (1..=n_max)
        .map(|n| PolyT1 {
            coeffs: (0..=degree).map(|i| h[i][n].clone()).collect(),
        })
        .collect()
}

/// `b_n = Π_{i=1}^n (1 + t/(8i³))`.
fn products(n_max: usize, degree: usize) -> Vec<PolyT1> {
    let mut out = Vec::with_capacity(n_max);
    let mut p = PolyT1::one(degree);
    for i in 1..=n_max {
        let i = i as i64;
        p = p.add(&p.mul_t().scale(&rat(1, 8 * i * i * i)));
        out.push(p.clone());
    }
    out
}

pub fn partial_sum_sequences(n_max: usize, degree: usize) -> PartialSumSequences {
    let (a, (a_tilde, b)) = rayon::join(
        || recurrence(n_max, degree),
        || rayon::join(|| nested_sums(n_max, degree), || products(n_max, degree)),
    );
    PartialSumSequences { a, a_tilde, b }
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    let v = r.abs().to_f64().unwrap_or(f64::MAX);
    if r.is_negative() {
        -v
    } else {
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeval::PrecisionContext;

    #[test]
    fn rhs_words() {
        assert_eq!(rhs_word(1), w("acc"));
        assert_eq!(rhs_word(2), w("accabb"));
        for n in 1..=4 {
            let idx = rhs_word(n).to_composite().unwrap().to_index();
            assert_eq!(idx, SignedIndex::from_ints(&[-2, 1]).repeat(n));
        }
    }

    #[test]
    fn first_cases() {
        // cd - c*d + d⋆c = -a²(b+c)
        let st = check_stuffle_identity(1).unwrap();
        assert!(st.holds());
        // cd - cшd + d⋆c = -2ac², and the b-led version gives -2ab²
        for v in [ShuffleVariant::CLead, ShuffleVariant::BLead] {
            assert!(check_shuffle_identity(1, v).unwrap().holds());
        }
        let seq = cd_sequence(1);
        let lhs = &(&cut_shuffle(0, &seq).unwrap() - &cut_shuffle(1, &seq).unwrap()) + &cut_shuffle(2, &seq).unwrap();
        assert_eq!(lhs, LinComb::term(w("acc"), int(-2)));
        assert!(check_key_identity(1).unwrap().holds());
    }

    #[test]
    fn up_to_three() {
        for n in 1..=3 {
            assert!(check_stuffle_identity(n).unwrap().holds(), "stuffle {n}");
            assert!(check_shuffle_identity(n, ShuffleVariant::CLead).unwrap().holds());
            assert!(check_shuffle_identity(n, ShuffleVariant::BLead).unwrap().holds());
            let key = check_key_identity(n).unwrap();
            assert!(key.holds(), "key {n}");
            assert_eq!(key_residual_via_parts(n).unwrap(), key.residual);
        }
    }

    #[test]
    fn recurrence_start() {
        let a = recurrence(4, 3);
        assert_eq!(a[2].coeffs(), &[int(1), rat(1, 4), int(0), int(0)]);
        let s = partial_sum_sequences(12, 3);
        assert_eq!(s.first_mismatch(), None);
        // t¹ coefficient of ã_n against the defining double sum
        let n = 7;
        let mut direct = Rational::zero();
        for l in 1..n {
            for k in 1..l {
                direct += sign(l) * rat(1, (l * l * k) as i64);
            }
        }
        assert_eq!(s.a_tilde[n - 1].coeff(1), &direct);
    }

    #[test]
    fn small_numerics() {
        let ev = Evaluator::new(PrecisionContext::new(30));
        assert!(distribution_check(1, &ev).unwrap().to_f64() < 1e-25);
        assert!(cube_identity_residual(1, &ev).unwrap().to_f64() < 1e-25);
    }
}
