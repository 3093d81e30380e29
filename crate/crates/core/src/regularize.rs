//! Shuffle and stuffle regularization: writing a word of `𝔄¹` as a
//! polynomial in `b` (resp. `β₁`) over admissible words, with `b ↦ T`.

use std::cell::RefCell;
use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lincomb::{int, LinComb, Rational, TPoly, Term};
use crate::numeval::{Evaluator, Real};
use crate::products::{shuffle, shuffle_lc, stuffle, stuffle_lc};
use crate::words::{CompositeLetter, CompositeWord, Letter, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RegKind {
    Shuffle,
    Stuffle,
}

impl std::fmt::Display for RegKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            RegKind::Shuffle => "shuffle",
            RegKind::Stuffle => "stuffle",
        })
    }
}

thread_local! {
    static SH_MEMO: RefCell<HashMap<Word, TPoly<Word>>> = RefCell::new(HashMap::new());
    static ST_MEMO: RefCell<HashMap<CompositeWord, TPoly<CompositeWord>>> = RefCell::new(HashMap::new());
}

// Shared peeling step: `lead` leading b / β₁ letters, `product` is that
// letter times `tail` under the kind's product.
fn peel<W: Term>(
    w: &W,
    lead: usize,
    tail: W,
    product: LinComb<W>,
    recurse: &mut dyn FnMut(&W) -> TPoly<W>,
) -> TPoly<W> {
    // x ∘ tail = k·w + (terms with fewer leading letters)
    let k = product.coeff(w);
    debug_assert_eq!(k, int(lead as i64));
    let mut acc = recurse(&tail).mul_t();
    for (t, c) in product.iter() {
        if t == w {
            continue;
        }
        acc.add_scaled(&recurse(t), &-c.clone());
    }
    acc.scale(&(Rational::one() / k))
}

/// Shuffle decomposition of a word not ending in `a`.
pub fn decompose_shuffle(w: &Word) -> Result<TPoly<Word>> {
    if w.last() == Some(Letter::A) {
        return Err(Error::EndsInA(w.to_string()));
    }
    Ok(decompose_shuffle_inner(w))
}

fn decompose_shuffle_inner(w: &Word) -> TPoly<Word> {
    let k = w.leading_b();
    if k == 0 {
        return TPoly::constant(LinComb::single(w.clone()));
    }
    if let Some(hit) = SH_MEMO.with(|m| m.borrow().get(w).cloned()) {
        return hit;
    }
    let tail = w.slice(1, w.weight());
    let product = shuffle(&Word::new(vec![Letter::B]), &tail);
    let out = peel(w, k, tail, product, &mut |t| decompose_shuffle_inner(t));
    SH_MEMO.with(|m| m.borrow_mut().insert(w.clone(), out.clone()));
    out
}

/// Stuffle decomposition of a composite word.
pub fn decompose_stuffle(w: &CompositeWord) -> TPoly<CompositeWord> {
    let k = w.leading_beta1();
    if k == 0 {
        return TPoly::constant(LinComb::single(w.clone()));
    }
    if let Some(hit) = ST_MEMO.with(|m| m.borrow().get(w).cloned()) {
        return hit;
    }
    let tail = w.tail();
    let product = stuffle(&CompositeWord::new(vec![CompositeLetter::beta(1)]), &tail);
    let out = peel(w, k, tail, product, &mut |t| decompose_stuffle(t));
    ST_MEMO.with(|m| m.borrow_mut().insert(w.clone(), out.clone()));
    out
}

/// Decomposition in letter form for either kind.
pub fn decompose(kind: RegKind, w: &Word) -> Result<TPoly<Word>> {
    match kind {
        RegKind::Shuffle => decompose_shuffle(w),
        RegKind::Stuffle => Ok(decompose_stuffle(&w.to_composite()?).map_coeffs(|c| c.flatten())),
    }
}

pub fn decompose_lc(kind: RegKind, x: &LinComb<Word>) -> Result<TPoly<Word>> {
    let mut acc = TPoly::zero();
    for (w, c) in x.iter() {
        acc.add_scaled(&decompose(kind, w)?, c);
    }
    Ok(acc)
}

/// `reg` at `T = 0`.
pub fn reg_at_zero(kind: RegKind, x: &LinComb<Word>) -> Result<LinComb<Word>> {
    let mut acc = LinComb::zero();
    for (w, c) in x.iter() {
        acc.add_scaled(&decompose(kind, w)?.constant_term(), c);
    }
    Ok(acc)
}

/// The kind's product on letter-form combinations.
pub fn product(kind: RegKind, x: &LinComb<Word>, y: &LinComb<Word>) -> Result<LinComb<Word>> {
    match kind {
        RegKind::Shuffle => Ok(shuffle_lc(x, y)),
        RegKind::Stuffle => Ok(stuffle_lc(&x.to_composite()?, &y.to_composite()?).flatten()),
    }
}

/// Substitute `T ↦ b` and expand with the kind's product.
pub fn substitute_b(kind: RegKind, p: &TPoly<Word>) -> Result<LinComb<Word>> {
    let b = LinComb::single(Word::new(vec![Letter::B]));
    let mut power = LinComb::one();
    let mut acc = LinComb::zero();
    for (j, coeff) in p.coeffs().iter().enumerate() {
        if j > 0 {
            power = product(kind, &power, &b)?;
        }
        if !coeff.is_zero() {
            acc += &product(kind, coeff, &power)?;
        }
    }
    Ok(acc)
}

/// Numeric value of each `T`-coefficient.
pub fn eval_tpoly(ev: &Evaluator, p: &TPoly<Word>) -> Result<Vec<Real>> {
    p.coeffs().iter().map(|c| Ok(ev.eval_lincomb(c)?.value)).collect()
}

/// Coefficients of `A(u) = exp(Σ_{n≥2} (-1)^n ζ(n) u^n / n)`.
#[derive(Clone, Debug)]
pub struct ASeries {
    pub coeffs: Vec<Real>,
}

impl ASeries {
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }
}

/// `zeta[n]` must hold `ζ(n)` for `2 ≤ n ≤ order`; entries 0 and 1 are ignored.
pub fn a_series(zeta: &[Real], order: usize, bits: u32) -> Result<ASeries> {
    if order >= 2 && zeta.len() <= order {
        return Err(Error::InsufficientOrder {
            have: zeta.len().saturating_sub(1),
            need: order,
        });
    }
    let log: Vec<Real> = (0..=order)
        .map(|n| {
            if n < 2 {
                Real::zero(bits)
            } else {
                let v = zeta[n].div_u64(n as u64);
                if n % 2 == 0 {
                    v
                } else {
                    -&v
                }
            }
        })
        .collect();
    // n A_n = Σ_{k=1}^n k L_k A_{n-k}
    let mut a = vec![Real::one(bits)];
    for n in 1..=order {
        let mut s = Real::zero(bits);
        for k in 1..=n {
            s += &(&log[k] * &a[n - k]).mul_int(&BigInt::from(k));
        }
        a.push(s.div_u64(n as u64));
    }
    Ok(ASeries { coeffs: a })
}

/// `ρ` on a real polynomial in `T` (coefficient `i` of `T^i`), from
/// `ρ(e^{Tu}) = A(u) e^{Tu}`: `ρ(T^m) = Σ_j m!/(m-j)! A_j T^{m-j}`.
pub fn rho_apply(a: &ASeries, p: &[Real]) -> Result<Vec<Real>> {
    let deg = p.len().saturating_sub(1);
    if deg > a.order() {
        return Err(Error::DegreeOverflow {
            have: a.order(),
            need: deg,
        });
    }
    let bits = a.coeffs[0].bits();
    let mut out = vec![Real::zero(bits); p.len()];
    for (m, pm) in p.iter().enumerate() {
        if pm.is_zero() {
            continue;
        }
        let mut falling = BigInt::one();
        for j in 0..=m {
            if j > 0 {
                falling *= BigInt::from(m - j + 1);
            }
            let term = (&a.coeffs[j] * pm).mul_int(&falling);
            out[m - j] += &term;
        }
    }
    Ok(out)
}

/// `Z^ш_w(T) - ρ(Z*_w(T))` coefficientwise, for `w` in `𝔄¹`.
pub fn rho_residual(ev: &Evaluator, w: &Word) -> Result<Vec<Real>> {
    let bits = ev.bits();
    let sh = eval_tpoly(ev, &decompose(RegKind::Shuffle, w)?)?;
    let st = eval_tpoly(ev, &decompose(RegKind::Stuffle, w)?)?;
    let order = st.len().max(2);
    let mut zeta = vec![Real::zero(bits); order + 1];
    for (n, z) in zeta.iter_mut().enumerate().skip(2) {
        *z = ev.zeta(n)?.value;
    }
    let a = a_series(&zeta, order, bits)?;
    let rho = rho_apply(&a, &st)?;
    let len = sh.len().max(rho.len());
    Ok((0..len)
        .map(|i| {
            let x = sh.get(i).cloned().unwrap_or_else(|| Real::zero(bits));
            let y = rho.get(i).cloned().unwrap_or_else(|| Real::zero(bits));
            &x - &y
        })
        .collect())
}
