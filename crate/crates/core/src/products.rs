//! Shuffle and stuffle products, the maltese operator, and the cut
//! operators on symbolic `(c, d)` sequences.
//!
//! Word-level products return integer multiplicities and are memoized per
//! thread on unordered word pairs (both products are commutative). The
//! caches are dropped wholesale once they hold too many terms, so results
//! never depend on cache state or thread count.

use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::lincomb::{LinComb, Rational};
use crate::words::{CompositeLetter, CompositeWord, Kind, Letter, Word};

type Counts<W> = HashMap<W, u64>;

const MEMO_TERM_LIMIT: usize = 3_000_000;

struct Memo<W> {
    map: HashMap<(W, W), Rc<Counts<W>>>,
    terms: usize,
}

impl<W: std::hash::Hash + Eq> Memo<W> {
    fn new() -> Self {
        Memo {
            map: HashMap::new(),
            terms: 0,
        }
    }

    fn insert(&mut self, key: (W, W), value: Rc<Counts<W>>) {
        if self.terms + value.len() > MEMO_TERM_LIMIT {
            self.map.clear();
            self.terms = 0;
        }
        self.terms += value.len();
        self.map.insert(key, value);
    }
}

thread_local! {
    static SHUFFLE_MEMO: RefCell<Memo<Word>> = RefCell::new(Memo::new());
    static STUFFLE_MEMO: RefCell<Memo<CompositeWord>> = RefCell::new(Memo::new());
}

fn accumulate<W: std::hash::Hash + Eq>(out: &mut Counts<W>, w: W, c: u64) {
    let e = out.entry(w).or_insert(0);
    *e = e.checked_add(c).expect("product multiplicity overflow");
}

fn counts_to_lincomb<W: crate::lincomb::Term>(counts: &Counts<W>) -> LinComb<W> {
    LinComb::from_terms(
        counts
            .iter()
            .map(|(w, &c)| (w.clone(), Rational::from_integer(BigInt::from(c)))),
    )
}

fn shuffle_counts(u: &Word, v: &Word) -> Rc<Counts<Word>> {
    if u.is_empty() || v.is_empty() {
        let w = if u.is_empty() { v } else { u };
        return Rc::new(HashMap::from([(w.clone(), 1)]));
    }
    let key = if u <= v {
        (u.clone(), v.clone())
    } else {
        (v.clone(), u.clone())
    };
    if let Some(hit) = SHUFFLE_MEMO.with(|m| m.borrow().map.get(&key).cloned()) {
        return hit;
    }
    // (x w1) ш (y w2) = x (w1 ш y w2) + y (x w1 ш w2)
    let mut out = Counts::new();
    let x = u.letters()[0];
    let left = shuffle_counts(&u.slice(1, u.weight()), v);
    for (w, &c) in left.iter() {
        accumulate(&mut out, w.prepend(x), c);
    }
    let y = v.letters()[0];
    let right = shuffle_counts(u, &v.slice(1, v.weight()));
    for (w, &c) in right.iter() {
        accumulate(&mut out, w.prepend(y), c);
    }
    let out = Rc::new(out);
    SHUFFLE_MEMO.with(|m| m.borrow_mut().insert(key, out.clone()));
    out
}

/// `u ш v`, the sum over all interleavings.
pub fn shuffle(u: &Word, v: &Word) -> LinComb<Word> {
    counts_to_lincomb(&shuffle_counts(u, v))
}

pub fn shuffle_lc(x: &LinComb<Word>, y: &LinComb<Word>) -> LinComb<Word> {
    x.product_lift(y, shuffle)
}

/// `✠_x(w)`: identity for `β` letters, toggles `β ↔ γ` throughout for `γ`.
pub fn maltese(x: CompositeLetter, w: &CompositeWord) -> CompositeWord {
    match x.kind {
        Kind::Beta => w.clone(),
        Kind::Gamma => w.toggled(),
    }
}

/// `[x, y]`: magnitudes add; `β` if the kinds agree, `γ` otherwise.
pub fn bracket(x: CompositeLetter, y: CompositeLetter) -> CompositeLetter {
    CompositeLetter {
        kind: if x.kind == y.kind {
            Kind::Beta
        } else {
            Kind::Gamma
        },
        magnitude: x.magnitude + y.magnitude,
    }
}

fn stuffle_counts(u: &CompositeWord, v: &CompositeWord) -> Rc<Counts<CompositeWord>> {
    if u.is_empty() || v.is_empty() {
        let w = if u.is_empty() { v } else { u };
        return Rc::new(HashMap::from([(w.clone(), 1)]));
    }
    let key = if u <= v {
        (u.clone(), v.clone())
    } else {
        (v.clone(), u.clone())
    };
    if let Some(hit) = STUFFLE_MEMO.with(|m| m.borrow().map.get(&key).cloned()) {
        return hit;
    }
    let x = u.letters()[0];
    let y = v.letters()[0];
    let w1 = maltese(x, &u.tail());
    let w2 = maltese(y, &v.tail());
    let z = bracket(x, y);

    let mut out = Counts::new();
    // x ✠_x(✠_x(w1) * y w2)
    for (w, &c) in stuffle_counts(&w1, v).iter() {
        accumulate(&mut out, maltese(x, w).prepend(x), c);
    }
    // y ✠_y(x w1 * ✠_y(w2))
    for (w, &c) in stuffle_counts(u, &w2).iter() {
        accumulate(&mut out, maltese(y, w).prepend(y), c);
    }
    // [x,y] ✠_[x,y](✠_x(w1) * ✠_y(w2))
    for (w, &c) in stuffle_counts(&w1, &w2).iter() {
        accumulate(&mut out, maltese(z, w).prepend(z), c);
    }
    let out = Rc::new(out);
    STUFFLE_MEMO.with(|m| m.borrow_mut().insert(key, out.clone()));
    out
}

/// `u * v` on composite words.
pub fn stuffle(u: &CompositeWord, v: &CompositeWord) -> LinComb<CompositeWord> {
    counts_to_lincomb(&stuffle_counts(u, v))
}

pub fn stuffle_lc(
    x: &LinComb<CompositeWord>,
    y: &LinComb<CompositeWord>,
) -> LinComb<CompositeWord> {
    x.product_lift(y, stuffle)
}

/// Stuffle of letter words, converting through composite form.
pub fn stuffle_words(u: &Word, v: &Word) -> Result<LinComb<Word>> {
    Ok(stuffle(&u.to_composite()?, &v.to_composite()?).flatten())
}

pub fn stuffle_flat_lc(x: &LinComb<Word>, y: &LinComb<Word>) -> Result<LinComb<Word>> {
    Ok(stuffle_lc(&x.to_composite()?, &y.to_composite()?).flatten())
}

/// Symbolic letters for the cut operators. `D` stands for `a(b+c)` and is
/// kept whole until after prefixes have been reversed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SymLetter {
    B,
    C,
    D,
}

impl SymLetter {
    pub fn expand(self) -> LinComb<Word> {
        match self {
            SymLetter::B => LinComb::single(Word::new(vec![Letter::B])),
            SymLetter::C => LinComb::single(Word::new(vec![Letter::C])),
            SymLetter::D => crate::lincomb::d_letter(),
        }
    }

    pub fn as_char(self) -> char {
        match self {
            SymLetter::B => 'b',
            SymLetter::C => 'c',
            SymLetter::D => 'd',
        }
    }
}

/// Left-to-right ⋆-concatenation of the expanded letters; `[]` gives `1`.
pub fn expand_seq(seq: &[SymLetter]) -> LinComb<Word> {
    seq.iter()
        .fold(LinComb::one(), |acc, l| acc.star_concat(&l.expand()))
}

pub fn seq_to_string(seq: &[SymLetter]) -> String {
    if seq.is_empty() {
        return "1".into();
    }
    seq.iter().map(|l| l.as_char()).collect()
}

/// `(c d)^n` as a symbolic sequence.
pub fn cd_sequence(n: usize) -> Vec<SymLetter> {
    [SymLetter::C, SymLetter::D].repeat(n)
}

/// `(b d)^n` as a symbolic sequence.
pub fn bd_sequence(n: usize) -> Vec<SymLetter> {
    [SymLetter::B, SymLetter::D].repeat(n)
}

/// Result of `Cut_i`: the (possibly reversed) prefix and the suffix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CutPair {
    pub left: Vec<SymLetter>,
    pub right: Vec<SymLetter>,
}

impl CutPair {
    pub fn left_expanded(&self) -> LinComb<Word> {
        expand_seq(&self.left)
    }

    pub fn right_expanded(&self) -> LinComb<Word> {
        expand_seq(&self.right)
    }
}

/// `Cut_i`: prefix of length `i` in order for odd `i`, reversed for even `i`.
pub fn cut(i: usize, seq: &[SymLetter]) -> Result<CutPair> {
    if i > seq.len() {
        return Err(Error::CutOutOfRange {
            position: i,
            len: seq.len(),
        });
    }
    let mut left = seq[..i].to_vec();
    if i % 2 == 0 {
        left.reverse();
    }
    Ok(CutPair {
        left,
        right: seq[i..].to_vec(),
    })
}

/// `ш_i = ш ∘ Cut_i`.
pub fn cut_shuffle(i: usize, seq: &[SymLetter]) -> Result<LinComb<Word>> {
    let pair = cut(i, seq)?;
    Ok(shuffle_lc(&pair.left_expanded(), &pair.right_expanded()))
}

/// `*_i = * ∘ Cut_i`, computed on composite forms and flattened back.
pub fn cut_stuffle(i: usize, seq: &[SymLetter]) -> Result<LinComb<Word>> {
    let pair = cut(i, seq)?;
    stuffle_flat_lc(&pair.left_expanded(), &pair.right_expanded())
}

/// `Δ_i = ш_i - *_i`.
pub fn delta(i: usize, seq: &[SymLetter]) -> Result<LinComb<Word>> {
    let pair = cut(i, seq)?;
    let left = pair.left_expanded();
    let right = pair.right_expanded();
    let sh = shuffle_lc(&left, &right);
    let st = stuffle_flat_lc(&left, &right)?;
    Ok(&sh - &st)
}

/// Total coefficient of a product, used for term-count checks.
pub fn total_mass<W: crate::lincomb::Term>(x: &LinComb<W>) -> Rational {
    x.iter().fold(Rational::zero(), |acc, (_, c)| acc + c)
}
