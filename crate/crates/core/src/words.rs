//! Letters, words, composite words and signed indices.
//!
//! The three letters encode the one-forms `a = dt/t`, `b = dt/(1-t)` and
//! `c = -dt/(1+t)`. A word `l1 l2 ... ln` stands for the iterated integral
//! over `1 > t1 > t2 > ... > tn > 0`, so the first letter is outermost.
//!
//! Composite letters `β_n = a^{n-1} b` and `γ_n = a^{n-1} c` give the
//! basis of words not ending in `a`. Signed indices are converted to
//! composite words by a toggle rule: the state starts at `β`, every barred
//! entry flips it, and each entry emits a letter of the current kind.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{parse_error, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    A,
    B,
    C,
}

impl Letter {
    pub const ALL: [Letter; 3] = [Letter::A, Letter::B, Letter::C];

    pub fn as_char(self) -> char {
        match self {
            Letter::A => 'a',
            Letter::B => 'b',
            Letter::C => 'c',
        }
    }

    pub fn from_char(ch: char) -> Option<Letter> {
        match ch {
            'a' => Some(Letter::A),
            'b' => Some(Letter::B),
            'c' => Some(Letter::C),
            _ => None,
        }
    }
}

/// A word over `{a, b, c}`. Ordered by weight, then lexicographically.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn new(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }

    pub fn weight(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> Option<Letter> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<Letter> {
        self.0.last().copied()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + other.0.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn prepend(&self, letter: Letter) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.push(letter);
        v.extend_from_slice(&self.0);
        Word(v)
    }

    pub fn push(&mut self, letter: Letter) {
        self.0.push(letter);
    }

    pub fn repeat(&self, n: usize) -> Word {
        Word(self.0.repeat(n))
    }

    pub fn slice(&self, start: usize, end: usize) -> Word {
        Word(self.0[start..end].to_vec())
    }

    /// Not beginning with `b` and not ending with `a`. The empty word counts.
    pub fn is_admissible(&self) -> bool {
        match (self.first(), self.last()) {
            (None, _) => true,
            (Some(first), Some(last)) => first != Letter::B && last != Letter::A,
            _ => unreachable!(),
        }
    }

    /// Member of the subalgebra generated by words not ending in `a`.
    pub fn is_in_a1(&self) -> bool {
        self.last() != Some(Letter::A)
    }

    /// Number of leading `b` letters.
    pub fn leading_b(&self) -> usize {
        self.0.iter().take_while(|&&l| l == Letter::B).count()
    }

    /// Greedy parse into composite letters; fails on words ending in `a`.
    pub fn to_composite(&self) -> Result<CompositeWord> {
        if !self.is_in_a1() {
            return Err(Error::EndsInA(self.to_string()));
        }
        let mut out = Vec::new();
        let mut run = 0u32;
        for &l in &self.0 {
            match l {
                Letter::A => run += 1,
                Letter::B => {
                    out.push(CompositeLetter::beta(run + 1));
                    run = 0;
                }
                Letter::C => {
                    out.push(CompositeLetter::gamma(run + 1));
                    run = 0;
                }
            }
        }
        Ok(CompositeWord(out))
    }

    /// Exponent shorthand for runs of `a`, e.g. `cacaca3ba2b`.
    pub fn compact(&self) -> String {
        if self.is_empty() {
            return "1".to_string();
        }
        let mut s = String::new();
        let mut run = 0usize;
        let flush = |s: &mut String, run: usize| match run {
            0 => {}
            1 => s.push('a'),
            n => {
                s.push('a');
                s.push_str(&n.to_string());
            }
        };
        for &l in &self.0 {
            if l == Letter::A {
                run += 1;
            } else {
                flush(&mut s, run);
                run = 0;
                s.push(l.as_char());
            }
        }
        flush(&mut s, run);
        s
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for l in &self.0 {
            write!(f, "{}", l.as_char())?;
        }
        Ok(())
    }
}

/// Accepts strings over `abc`; `""` and `"1"` denote the empty word.
impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Word> {
        if s == "1" {
            return Ok(Word::empty());
        }
        s.chars()
            .enumerate()
            .map(|(i, ch)| {
                Letter::from_char(ch)
                    .ok_or_else(|| parse_error(s, i, format!("unexpected {ch:?}, expected a, b or c")))
            })
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }
}

impl From<Vec<Letter>> for Word {
    fn from(v: Vec<Letter>) -> Self {
        Word(v)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    Beta,
    Gamma,
}

impl Kind {
    pub fn toggled(self) -> Kind {
        match self {
            Kind::Beta => Kind::Gamma,
            Kind::Gamma => Kind::Beta,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CompositeLetter {
    pub kind: Kind,
    pub magnitude: u32,
}

impl CompositeLetter {
    pub fn beta(magnitude: u32) -> Self {
        assert!(magnitude >= 1, "composite letters have magnitude >= 1");
        CompositeLetter {
            kind: Kind::Beta,
            magnitude,
        }
    }

    pub fn gamma(magnitude: u32) -> Self {
        assert!(magnitude >= 1, "composite letters have magnitude >= 1");
        CompositeLetter {
            kind: Kind::Gamma,
            magnitude,
        }
    }

    pub fn is_gamma(self) -> bool {
        self.kind == Kind::Gamma
    }

    pub fn toggled(self) -> Self {
        CompositeLetter {
            kind: self.kind.toggled(),
            magnitude: self.magnitude,
        }
    }

    pub fn flatten_into(self, out: &mut Vec<Letter>) {
        out.extend(std::iter::repeat_n(Letter::A, self.magnitude as usize - 1));
        out.push(match self.kind {
            Kind::Beta => Letter::B,
            Kind::Gamma => Letter::C,
        });
    }
}

impl fmt::Display for CompositeLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = match self.kind {
            Kind::Beta => 'b',
            Kind::Gamma => 'g',
        };
        write!(f, "{k}{}", self.magnitude)
    }
}

/// A word in composite letters; always flattens to a word not ending in `a`.
///
/// Ordered like its flattening so that both representations list terms in
/// the same canonical order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct CompositeWord(Vec<CompositeLetter>);

impl CompositeWord {
    pub fn empty() -> Self {
        CompositeWord(Vec::new())
    }

    pub fn new(letters: Vec<CompositeLetter>) -> Self {
        CompositeWord(letters)
    }

    pub fn letters(&self) -> &[CompositeLetter] {
        &self.0
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }

    pub fn weight(&self) -> usize {
        self.0.iter().map(|l| l.magnitude as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> Option<CompositeLetter> {
        self.0.first().copied()
    }

    pub fn tail(&self) -> CompositeWord {
        CompositeWord(self.0[1..].to_vec())
    }

    pub fn prepend(&self, letter: CompositeLetter) -> CompositeWord {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.push(letter);
        v.extend_from_slice(&self.0);
        CompositeWord(v)
    }

    pub fn concat(&self, other: &CompositeWord) -> CompositeWord {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        CompositeWord(v)
    }

    pub fn toggled(&self) -> CompositeWord {
        CompositeWord(self.0.iter().map(|l| l.toggled()).collect())
    }

    pub fn flatten(&self) -> Word {
        let mut v = Vec::with_capacity(self.weight());
        for l in &self.0 {
            l.flatten_into(&mut v);
        }
        Word(v)
    }

    /// Number of leading `β_1` letters.
    pub fn leading_beta1(&self) -> usize {
        self.0
            .iter()
            .take_while(|l| **l == CompositeLetter::beta(1))
            .count()
    }

    pub fn is_admissible(&self) -> bool {
        self.first().is_none_or(|l| l != CompositeLetter::beta(1))
    }

    /// Inverse of the toggle rule: entry `i` is barred iff the kind changes.
    pub fn to_index(&self) -> SignedIndex {
        let mut state = Kind::Beta;
        let entries = self
            .0
            .iter()
            .map(|l| {
                let negative = l.kind != state;
                state = l.kind;
                SignedEntry {
                    magnitude: l.magnitude,
                    negative,
                }
            })
            .collect();
        SignedIndex(entries)
    }
}

impl Ord for CompositeWord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight()
            .cmp(&other.weight())
            .then_with(|| self.flatten().cmp(&other.flatten()))
    }
}

impl PartialOrd for CompositeWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for CompositeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for l in &self.0 {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// Syntax: kind letter (`b` or `g`) followed by a positive magnitude, e.g. `g2g1`.
impl FromStr for CompositeWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<CompositeWord> {
        if s == "1" || s.is_empty() {
            return Ok(CompositeWord::empty());
        }
        let chars: Vec<char> = s.chars().collect();
        let mut out = Vec::new();
        let mut i = 0;
        while i < chars.len() {
            let kind = match chars[i] {
                'b' => Kind::Beta,
                'g' => Kind::Gamma,
                ch => return Err(parse_error(s, i, format!("unexpected {ch:?}, expected b or g"))),
            };
            let start = i + 1;
            let mut j = start;
            while j < chars.len() && chars[j].is_ascii_digit() {
                j += 1;
            }
            if j == start {
                return Err(parse_error(s, start, "expected magnitude"));
            }
            let digits: String = chars[start..j].iter().collect();
            let magnitude: u32 = digits
                .parse()
                .map_err(|_| parse_error(s, start, "magnitude out of range"))?;
            if magnitude == 0 {
                return Err(parse_error(s, start, "magnitude must be positive"));
            }
            out.push(CompositeLetter { kind, magnitude });
            i = j;
        }
        Ok(CompositeWord(out))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignedEntry {
    pub magnitude: u32,
    pub negative: bool,
}

impl SignedEntry {
    pub fn new(magnitude: u32, negative: bool) -> Self {
        SignedEntry {
            magnitude,
            negative,
        }
    }
}

/// Signed index `(s_1, ..., s_l)`; a bar (negative sign) marks `x_j = -1`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignedIndex(Vec<SignedEntry>);

impl SignedIndex {
    pub fn new(entries: Vec<SignedEntry>) -> Self {
        SignedIndex(entries)
    }

    /// From signed integers, negative meaning barred: `[-2, 1]` is `(2̄,1)`.
    pub fn from_ints(values: &[i32]) -> Self {
        SignedIndex(
            values
                .iter()
                .map(|&v| {
                    assert!(v != 0, "index entries are nonzero");
                    SignedEntry::new(v.unsigned_abs(), v < 0)
                })
                .collect(),
        )
    }

    pub fn entries(&self) -> &[SignedEntry] {
        &self.0
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }

    pub fn weight(&self) -> usize {
        self.0.iter().map(|e| e.magnitude as usize).sum()
    }

    pub fn is_convergent(&self) -> bool {
        match self.0.first() {
            None => true,
            Some(e) => e.magnitude >= 2 || e.negative,
        }
    }

    /// Toggle rule; the empty index has no word form.
    pub fn to_word(&self) -> Result<CompositeWord> {
        if self.0.is_empty() {
            return Err(Error::EmptyIndex);
        }
        let mut state = Kind::Beta;
        let letters = self
            .0
            .iter()
            .map(|e| {
                if e.negative {
                    state = state.toggled();
                }
                CompositeLetter {
                    kind: state,
                    magnitude: e.magnitude,
                }
            })
            .collect();
        Ok(CompositeWord(letters))
    }

    /// Human form with combining overlines, e.g. `2̄,1`.
    pub fn pretty(&self) -> String {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|e| {
                if e.negative {
                    let mut s = String::new();
                    for ch in e.magnitude.to_string().chars() {
                        s.push(ch);
                        s.push('\u{0304}');
                    }
                    s
                } else {
                    e.magnitude.to_string()
                }
            })
            .collect();
        parts.join(",")
    }

    pub fn repeat(&self, n: usize) -> SignedIndex {
        SignedIndex(self.0.repeat(n))
    }
}

impl fmt::Display for SignedIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|e| {
                if e.negative {
                    format!("-{}", e.magnitude)
                } else {
                    e.magnitude.to_string()
                }
            })
            .collect();
        f.write_str(&parts.join(","))
    }
}

/// Comma-separated nonzero integers, negative meaning barred.
impl FromStr for SignedIndex {
    type Err = Error;

    fn from_str(s: &str) -> Result<SignedIndex> {
        if s.trim().is_empty() {
            return Ok(SignedIndex::default());
        }
        let mut entries = Vec::new();
        let mut offset = 0;
        for part in s.split(',') {
            let trimmed = part.trim();
            let lead = part.len() - part.trim_start().len();
            let pos = offset + lead;
            let value: i64 = trimmed.parse().map_err(|_| {
                let bad = trimmed
                    .char_indices()
                    .find(|&(i, ch)| !(ch.is_ascii_digit() || (i == 0 && ch == '-')))
                    .map_or(0, |(i, _)| i);
                parse_error(s, pos + bad, format!("invalid entry {trimmed:?}"))
            })?;
            if value == 0 {
                return Err(parse_error(s, pos, "entries must be nonzero"));
            }
            let magnitude = u32::try_from(value.unsigned_abs())
                .map_err(|_| parse_error(s, pos, "entry out of range"))?;
            entries.push(SignedEntry::new(magnitude, value < 0));
            offset += part.len() + 1;
        }
        Ok(SignedIndex(entries))
    }
}

/// All admissible words of weight `n` in canonical (lexicographic) order.
pub fn enumerate_admissible(n: usize) -> Vec<Word> {
    assert!(n >= 1, "weight must be positive");
    if n == 1 {
        return vec![Word(vec![Letter::C])];
    }
    let first = [Letter::A, Letter::C];
    let middle = Letter::ALL;
    let last = [Letter::B, Letter::C];
    let alphabet = |pos: usize| -> &[Letter] {
        if pos == 0 {
            &first
        } else if pos == n - 1 {
            &last
        } else {
            &middle
        }
    };
    let mut digits = vec![0usize; n];
    let mut out = Vec::with_capacity(4 * 3usize.pow(n as u32 - 2));
    loop {
        out.push(Word(
            (0..n).map(|p| alphabet(p)[digits[p]]).collect(),
        ));
        let mut p = n;
        loop {
            if p == 0 {
                return out;
            }
            p -= 1;
            digits[p] += 1;
            if digits[p] < alphabet(p).len() {
                break;
            }
            digits[p] = 0;
        }
    }
}

/// All words of weight `n` not ending in `a`, in canonical order.
pub fn enumerate_a1(n: usize) -> Vec<Word> {
    let mut out = Vec::new();
    let mut digits = vec![0usize; n];
    loop {
        let w = Word(digits.iter().map(|&d| Letter::ALL[d]).collect());
        if w.is_in_a1() {
            out.push(w);
        }
        let mut p = n;
        loop {
            if p == 0 {
                return out;
            }
            p -= 1;
            digits[p] += 1;
            if digits[p] < 3 {
                break;
            }
            digits[p] = 0;
        }
    }
}

/// Convenience: parse a word literal, panicking on bad input.
pub fn w(s: &str) -> Word {
    s.parse().expect("valid word literal")
}

/// Convenience: parse a signed index literal, panicking on bad input.
pub fn idx(s: &str) -> SignedIndex {
    s.parse().expect("valid index literal")
}
