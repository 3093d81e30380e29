//! Double shuffle relations at fixed weight and their exact reduction to a
//! basis.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::lincomb::{rat_to_string, LinComb, Rational};
use crate::linalg::{bareiss_echelon, integer_row, primitive, rank, rref};
use crate::products::{shuffle, shuffle_lc, stuffle_lc, stuffle_words};
use crate::regularize::{reg_at_zero, RegKind};
use crate::words::{enumerate_a1, enumerate_admissible, SignedIndex, Word};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "source", rename_all = "snake_case")]
pub enum Provenance {
    /// `u ш v - u * v`.
    Fds { left: String, right: String },
    /// `reg_ш(b^m * w)`.
    RegShuffleOfStuffle { m: usize, word: String },
    /// `reg_*(b^m ш w - b^m * w)`.
    RegStuffleOfShuffle { m: usize, word: String },
    /// `reg(w1 ш w0 - w1 * w0)` with `w1` in `𝔄¹`.
    Cross { kind: RegKind, w1: String, w0: String },
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Fds { left, right } => write!(f, "fds({left}, {right})"),
            Provenance::RegShuffleOfStuffle { m, word } => write!(f, "reg_sh(b^{m} * {word})"),
            Provenance::RegStuffleOfShuffle { m, word } => write!(f, "reg_st(b^{m} sh {word} - b^{m} * {word})"),
            Provenance::Cross { kind, w1, w0 } => write!(f, "reg_{kind}({w1} sh {w0} - {w1} * {w0})"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Relation {
    pub combo: LinComb<Word>,
    pub provenance: Provenance,
}

impl Relation {
    pub fn to_json(&self) -> serde_json::Value {
        json!({"provenance": self.provenance, "combo": self.combo.to_json()})
    }
}

fn b_power(m: usize) -> Word {
    Word::new(vec![crate::words::Letter::B; m])
}

/// All finite double shuffle relations of weight `n`, one per unordered
/// pair of admissible words; zero combinations are dropped.
pub fn gen_fds(n: usize) -> Vec<Relation> {
    let mut pairs = Vec::new();
    for i in 1..=n / 2 {
        let left = enumerate_admissible(i);
        let right = enumerate_admissible(n - i);
        for (a, u) in left.iter().enumerate() {
            for (b, v) in right.iter().enumerate() {
                if i == n - i && b < a {
                    continue;
                }
                pairs.push((u.clone(), v.clone()));
            }
        }
    }
    pairs
        .par_iter()
        .map(|(u, v)| {
            let st = stuffle_words(u, v).expect("admissible words have composite form");
            Relation {
                combo: &shuffle(u, v) - &st,
                provenance: Provenance::Fds {
                    left: u.to_string(),
                    right: v.to_string(),
                },
            }
        })
        .filter(|r| !r.combo.is_zero())
        .collect()
}

/// Regularized relations for `1 ≤ m ≤ max_m` and admissible `w` of weight
/// `n - m`: `reg_ш(b^m * w)` and `reg_*(b^m ш w - b^m * w)`.
///
/// Both are computed from the difference `b^m ш w - b^m * w`. For the
/// shuffle kind this changes nothing since `reg_ш(b^m ш w) = 0`. For the
/// stuffle kind the `b^m * w` term is needed once `m ≥ 2`, because
/// `reg_*(b^m) ≠ 0` there; without it the relation is numerically false.
pub fn gen_eds(n: usize, max_m: usize) -> Result<Vec<Relation>> {
    let mut jobs = Vec::new();
    for m in 1..=max_m.min(n - 1) {
        for w in enumerate_admissible(n - m) {
            jobs.push((m, w.clone(), RegKind::Shuffle));
            jobs.push((m, w, RegKind::Stuffle));
        }
    }
    let out: Result<Vec<Option<Relation>>> = jobs
        .par_iter()
        .map(|(m, w, kind)| {
            let x = LinComb::single(b_power(*m));
            let y = LinComb::single(w.clone());
            let diff = &shuffle_lc(&x, &y) - &stuffle_lc(&x.to_composite()?, &y.to_composite()?).flatten();
            let word = w.to_string();
            let (combo, provenance) = match kind {
                RegKind::Shuffle => (
                    -&reg_at_zero(RegKind::Shuffle, &diff)?,
                    Provenance::RegShuffleOfStuffle { m: *m, word },
                ),
                RegKind::Stuffle => (
                    reg_at_zero(RegKind::Stuffle, &diff)?,
                    Provenance::RegStuffleOfShuffle { m: *m, word },
                ),
            };
            Ok((!combo.is_zero()).then_some(Relation { combo, provenance }))
        })
        .collect();
    Ok(out?.into_iter().flatten().collect())
}

/// `reg(w1 ш w0 - w1 * w0)` for both kinds, `w1` ranging over `𝔄¹` with a
/// leading `b` and `w0` over nonempty admissible words.
pub fn gen_cross_check(n: usize) -> Result<Vec<Relation>> {
    let mut jobs = Vec::new();
    for i in 1..n {
        for w1 in enumerate_a1(i).into_iter().filter(|w| w.leading_b() > 0) {
            for w0 in enumerate_admissible(n - i) {
                jobs.push((w1.clone(), w0.clone(), RegKind::Shuffle));
                jobs.push((w1.clone(), w0, RegKind::Stuffle));
            }
        }
    }
    let out: Result<Vec<Option<Relation>>> = jobs
        .par_iter()
        .map(|(w1, w0, kind)| {
            let x = LinComb::single(w1.clone());
            let y = LinComb::single(w0.clone());
            let diff = &shuffle_lc(&x, &y) - &stuffle_lc(&x.to_composite()?, &y.to_composite()?).flatten();
            let combo = reg_at_zero(*kind, &diff)?;
            Ok((!combo.is_zero()).then(|| Relation {
                combo,
                provenance: Provenance::Cross {
                    kind: *kind,
                    w1: w1.to_string(),
                    w0: w0.to_string(),
                },
            }))
        })
        .collect();
    Ok(out?.into_iter().flatten().collect())
}

/// FDS together with the regularized relations for every `m < n`.
pub fn gen_all(n: usize) -> Result<Vec<Relation>> {
    let mut rels = gen_fds(n);
    rels.extend(gen_eds(n, n - 1)?);
    Ok(rels)
}

/// Which basis to reduce to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BasisChoice {
    Default,
    Zlobin,
    Auto,
}

impl std::str::FromStr for BasisChoice {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "default" => Ok(BasisChoice::Default),
            "zlobin" => Ok(BasisChoice::Zlobin),
            "auto" => Ok(BasisChoice::Auto),
            _ => Err(format!("unknown basis {s:?} (expected default, zlobin or auto)")),
        }
    }
}

fn words_of(indices: &[&str]) -> Vec<Word> {
    indices
        .iter()
        .map(|s| {
            s.parse::<SignedIndex>()
                .and_then(|k| k.to_word())
                .map(|w| w.flatten())
                .expect("hardcoded basis index")
        })
        .collect()
}

/// The fixed bases used for the weight 2 to 5 tables.
pub fn default_basis(n: usize) -> Option<Vec<Word>> {
    let b: &[&str] = match n {
        2 => &["-2", "-1,1"],
        3 => &["-2,1", "-1,1,1", "-1,2"],
        4 => &["-2,1,1", "-2,2", "-1,2,1", "-1,1,2", "-1,1,1,1"],
        5 => &[
            "-1,-1,-1,2",
            "-2,1,-1,-1",
            "-1,1,-1,-2",
            "-2,1,1,1",
            "-1,-1,-1,1,1",
            "2,2,-1",
            "-1,1,-1,1,-1",
            "-1,-1,-1,-1,-1",
        ],
        _ => return None,
    };
    Some(words_of(b))
}

/// `ζ(b̄₁, b₂, …, b_r)` with every `b_j ∈ {1, 2}`, ordered by depth then
/// entries.
pub fn zlobin_basis(n: usize) -> Vec<Word> {
    fn comps(n: usize, acc: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if n == 0 {
            out.push(acc.clone());
            return;
        }
        for p in [1u32, 2] {
            if p as usize <= n {
                acc.push(p);
                comps(n - p as usize, acc, out);
                acc.pop();
            }
        }
    }
    let mut all = Vec::new();
    comps(n, &mut Vec::new(), &mut all);
    all.sort_by(|x, y| x.len().cmp(&y.len()).then(x.cmp(y)));
    all.into_iter()
        .map(|c| {
            let ints: Vec<i32> = c
                .iter()
                .enumerate()
                .map(|(i, &v)| if i == 0 { -(v as i32) } else { v as i32 })
                .collect();
            SignedIndex::from_ints(&ints).to_word().unwrap().flatten()
        })
        .collect()
}

fn depth(w: &Word) -> usize {
    w.to_composite().map(|c| c.depth()).unwrap_or(0)
}

// (depth, word) ordering for non-basis atoms.
fn atom_key(w: &Word) -> (usize, Word) {
    (depth(w), w.clone())
}

/// Basis found by elimination with the most preferred atoms placed last:
/// atoms with leading `γ₁` are preferred, then small depth.
pub fn auto_basis(n: usize, relations: &[Relation]) -> Vec<Word> {
    let mut atoms = enumerate_admissible(n);
    // least preferred first
    atoms.sort_by_key(|w| {
        let lead_c = w.first() == Some(crate::words::Letter::C);
        (lead_c, std::cmp::Reverse(depth(w)), std::cmp::Reverse(w.clone()))
    });
    let rows = matrix(relations, &atoms);
    let (_, pivots) = bareiss_echelon(rows, atoms.len());
    let mut free: Vec<Word> = (0..atoms.len())
        .filter(|c| !pivots.contains(c))
        .map(|c| atoms[c].clone())
        .collect();
    free.sort_by_key(atom_key);
    free
}

pub fn basis_for(choice: BasisChoice, n: usize, relations: &[Relation]) -> Result<Vec<Word>> {
    match choice {
        BasisChoice::Default => Ok(default_basis(n).unwrap_or_else(|| auto_basis(n, relations))),
        BasisChoice::Zlobin => Ok(zlobin_basis(n)),
        BasisChoice::Auto => Ok(auto_basis(n, relations)),
    }
}

/// Integer relation rows over `columns`, deduplicated up to scaling and
/// sorted.
pub fn matrix(relations: &[Relation], columns: &[Word]) -> Vec<Vec<BigInt>> {
    let pos: HashMap<&Word, usize> = columns.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let mut rows: Vec<Vec<BigInt>> = relations
        .iter()
        .filter_map(|r| {
            let mut row = vec![Rational::zero(); columns.len()];
            for (w, c) in r.combo.iter() {
                row[pos[w]] = c.clone();
            }
            primitive(&integer_row(&row))
        })
        .collect();
    rows.sort();
    rows.dedup();
    rows
}

/// Every weight-`n` atom written over a basis.
#[derive(Clone, Debug, PartialEq)]
pub struct ReducedTable {
    pub weight: usize,
    pub basis: Vec<Word>,
    pub rows: BTreeMap<Word, Vec<Rational>>,
}

pub fn index_string(w: &Word) -> String {
    w.to_composite().map(|c| c.to_index().to_string()).unwrap_or_else(|_| w.to_string())
}

pub fn index_pretty(w: &Word) -> String {
    w.to_composite().map(|c| c.to_index().pretty()).unwrap_or_else(|_| w.to_string())
}

/// Solve the relation system for every atom over `basis`.
pub fn solve(n: usize, relations: &[Relation], basis: &[Word]) -> Result<ReducedTable> {
    let atoms = enumerate_admissible(n);
    for b in basis {
        if b.weight() != n || !b.is_admissible() {
            return Err(Error::BadBasis(index_string(b), n));
        }
    }
    let mut others: Vec<Word> = atoms.iter().filter(|w| !basis.contains(w)).cloned().collect();
    others.sort_by_key(atom_key);
    let k = others.len();
    let mut columns = others.clone();
    columns.extend(basis.iter().cloned());

    let rows = matrix(relations, &columns);
    let (ech, pivots) = bareiss_echelon(rows, columns.len());
    let dependent: Vec<String> = pivots
        .iter()
        .filter(|&&c| c >= k)
        .map(|&c| index_string(&columns[c]))
        .collect();
    if !dependent.is_empty() {
        return Err(Error::BasisDependent(dependent));
    }
    let unresolved: Vec<String> = (0..k)
        .filter(|c| !pivots.contains(c))
        .map(|c| index_string(&columns[c]))
        .collect();
    if !unresolved.is_empty() {
        return Err(Error::InsufficientRelations(unresolved));
    }
    let reduced = rref(&ech, &pivots);
    let mut table = BTreeMap::new();
    for (row, &pc) in reduced.iter().zip(&pivots) {
        let coeffs: Vec<Rational> = row[k..].iter().map(|x| -x.clone()).collect();
        table.insert(columns[pc].clone(), coeffs);
    }
    for (i, b) in basis.iter().enumerate() {
        let mut unit = vec![Rational::zero(); basis.len()];
        unit[i] = Rational::one();
        table.insert(b.clone(), unit);
    }
    Ok(ReducedTable {
        weight: n,
        basis: basis.to_vec(),
        rows: table,
    })
}

impl ReducedTable {
    pub fn row(&self, w: &Word) -> Option<&Vec<Rational>> {
        self.rows.get(w)
    }

    /// Coordinates of a combination of weight-`n` atoms over the basis.
    pub fn express(&self, x: &LinComb<Word>) -> Result<Vec<Rational>> {
        let mut out = vec![Rational::zero(); self.basis.len()];
        for (w, c) in x.iter() {
            let row = self
                .rows
                .get(w)
                .ok_or_else(|| Error::NotAdmissible(w.to_string()))?;
            for (o, r) in out.iter_mut().zip(row) {
                *o += c * r;
            }
        }
        Ok(out)
    }

    /// Atoms in display order: depth, then word.
    pub fn ordered_atoms(&self) -> Vec<&Word> {
        let mut v: Vec<&Word> = self.rows.keys().collect();
        v.sort_by_key(|w| atom_key(w));
        v
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut rows = serde_json::Map::new();
        for w in self.ordered_atoms() {
            let r: Vec<String> = self.rows[w].iter().map(rat_to_string).collect();
            rows.insert(index_string(w), json!(r));
        }
        json!({
            "weight": self.weight,
            "basis": self.basis.iter().map(index_string).collect::<Vec<_>>(),
            "rows": rows,
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<ReducedTable> {
        let bad = |m: &str| Error::Fixture(m.to_string());
        let weight = v["weight"].as_u64().ok_or_else(|| bad("missing weight"))? as usize;
        let parse_index = |s: &str| -> Result<Word> {
            Ok(s.parse::<SignedIndex>()?.to_word()?.flatten())
        };
        let basis: Vec<Word> = v["basis"]
            .as_array()
            .ok_or_else(|| bad("missing basis"))?
            .iter()
            .map(|x| parse_index(x.as_str().unwrap_or("")))
            .collect::<Result<_>>()?;
        let mut rows = BTreeMap::new();
        for (k, vals) in v["rows"].as_object().ok_or_else(|| bad("missing rows"))? {
            let vals: Vec<Rational> = vals
                .as_array()
                .ok_or_else(|| bad("row is not an array"))?
                .iter()
                .map(|x| crate::lincomb::parse_rat(x.as_str().unwrap_or("")))
                .collect::<Result<_>>()?;
            if vals.len() != basis.len() {
                return Err(bad(&format!("row {k} has {} entries", vals.len())));
            }
            rows.insert(parse_index(k)?, vals);
        }
        Ok(ReducedTable { weight, basis, rows })
    }

    /// Aligned human-readable rows such as `ζ(3) = 8·ζ(2̄,1)`.
    pub fn to_human(&self) -> String {
        let labels: Vec<String> = if self.basis.len() <= 8 && self.weight >= 4 {
            (0..self.basis.len()).map(|i| ((b'A' + i as u8) as char).to_string()).collect()
        } else {
            self.basis.iter().map(|b| format!("ζ({})", index_pretty(b))).collect()
        };
        let mut out = String::new();
        if labels[0].len() == 1 {
            for (l, b) in labels.iter().zip(&self.basis) {
                out.push_str(&format!("{l} = ζ({})\n", index_pretty(b)));
            }
        }
        let atoms: Vec<&Word> = self
            .ordered_atoms()
            .into_iter()
            .filter(|w| !self.basis.contains(w))
            .collect();
        let lhs: Vec<String> = atoms.iter().map(|w| format!("ζ({})", index_pretty(w))).collect();
        let width = lhs.iter().map(|s| display_width(s)).max().unwrap_or(0);
        for (w, l) in atoms.iter().zip(lhs) {
            let mut terms = String::new();
            for (c, lab) in self.rows[*w].iter().zip(&labels) {
                if c.is_zero() {
                    continue;
                }
                let neg = c < &Rational::zero();
                let mag = if neg { -c.clone() } else { c.clone() };
                let coef = if mag.is_one() { String::new() } else { format!("{mag}") };
                let sep = if terms.is_empty() {
                    if neg { "-" } else { "" }.to_string()
                } else if neg {
                    " - ".into()
                } else {
                    " + ".into()
                };
                let mul = if coef.is_empty() { "" } else { "·" };
                terms.push_str(&format!("{sep}{coef}{mul}{lab}"));
            }
            if terms.is_empty() {
                terms.push('0');
            }
            let pad = width - display_width(&l);
            out.push_str(&format!("{l}{} = {terms}\n", " ".repeat(pad)));
        }
        out
    }
}

// Combining overlines take no column.
fn display_width(s: &str) -> usize {
    s.chars().filter(|&c| c != '\u{0304}').count()
}

/// Every non-integer coefficient of a table as `(atom, basis atom, value)`.
pub fn integrality_report(t: &ReducedTable) -> Vec<(String, String, String)> {
    let mut out = Vec::new();
    for w in t.ordered_atoms() {
        for (c, b) in t.rows[w].iter().zip(&t.basis) {
            if !c.is_integer() {
                out.push((index_string(w), index_string(b), rat_to_string(c)));
            }
        }
    }
    out
}

/// `(corank of FDS span, corank of FDS + regularized span)` in the atom space.
pub fn rank_profile(n: usize) -> Result<(usize, usize)> {
    let atoms = enumerate_admissible(n);
    let fds = gen_fds(n);
    let r1 = rank(matrix(&fds, &atoms), atoms.len());
    let mut all = fds;
    all.extend(gen_eds(n, n - 1)?);
    let r2 = rank(matrix(&all, &atoms), atoms.len());
    Ok((atoms.len() - r1, atoms.len() - r2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lincomb::int;
    use crate::words::idx;

    fn iw(s: &str) -> Word {
        idx(s).to_word().unwrap().flatten()
    }

    #[test]
    fn weight_two_fds() {
        let r = gen_fds(2);
        assert_eq!(r.len(), 1);
        // c ш c - c * c = 2cc - 2cb - ab
        let want = LinComb::from_terms([(iw("-1,1"), int(2)), (iw("-1,-1"), int(-2)), (iw("2"), int(-1))]);
        assert_eq!(r[0].combo, want);
    }

    #[test]
    fn weight_two_eds_example() {
        let r = gen_eds(2, 1).unwrap();
        // ζ(1̄,1̄) - ζ(2̄) - ζ(1̄,1) appears, up to sign
        let want = LinComb::from_terms([(iw("-1,-1"), int(1)), (iw("-2"), int(-1)), (iw("-1,1"), int(-1))]);
        assert!(r.iter().any(|x| x.combo == want || x.combo == -&want), "{r:?}");
    }

    #[test]
    fn weight_two_solve() {
        let rels = gen_all(2).unwrap();
        let t = solve(2, &rels, &default_basis(2).unwrap()).unwrap();
        assert_eq!(t.row(&iw("2")).unwrap(), &vec![int(-2), int(0)]);
        assert_eq!(t.row(&iw("-1,-1")).unwrap(), &vec![int(1), int(1)]);
        assert!(integrality_report(&t).is_empty());
        let json = t.to_json();
        assert_eq!(ReducedTable::from_json(&json).unwrap(), t);
    }

    #[test]
    fn solver_errors() {
        let fds = gen_fds(3);
        assert!(matches!(
            solve(3, &fds, &default_basis(3).unwrap()),
            Err(Error::InsufficientRelations(_))
        ));
        let rels = gen_all(2).unwrap();
        let bad = vec![iw("2"), iw("-2")];
        assert!(matches!(solve(2, &rels, &bad), Err(Error::BasisDependent(_))));
        assert!(matches!(solve(2, &rels, &[iw("3")]), Err(Error::BadBasis(..))));
    }

    #[test]
    fn weight_three_counts() {
        assert_eq!(gen_fds(3).len(), 4);
        let (fds, all) = rank_profile(3).unwrap();
        assert_eq!(all, 3);
        assert!(fds > 3);
        assert_eq!(rank_profile(2).unwrap().1, 2);
    }

    #[test]
    fn zlobin_shape() {
        let z = zlobin_basis(5);
        assert_eq!(z.len(), 8);
        assert!(z.iter().all(|w| index_string(w).starts_with('-')));
        assert_eq!(index_string(&z[0]), "-1,2,2");
    }
}
