//! Exact elimination on integer matrices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::lincomb::Rational;

/// Divide out the content and make the first nonzero entry positive.
/// Returns `None` for the zero row.
pub fn primitive(row: &[BigInt]) -> Option<Vec<BigInt>> {
    let mut g = BigInt::zero();
    let mut first_sign = None;
    for x in row {
        if !x.is_zero() {
            g = g.gcd(x);
            if first_sign.is_none() {
                first_sign = Some(x.is_negative());
            }
        }
    }
    let neg = first_sign?;
    let g = if neg { -g } else { g };
    Some(row.iter().map(|x| x / &g).collect())
}

/// Clear denominators of a rational row.
pub fn integer_row(row: &[Rational]) -> Vec<BigInt> {
    let mut l = BigInt::one();
    for x in row {
        l = l.lcm(x.denom());
    }
    row.iter().map(|x| (x * Rational::from_integer(l.clone())).to_integer()).collect()
}

/// Row-echelon form by fraction-free (Bareiss) elimination. Pivot in each
/// column is the remaining row with smallest nonzero absolute entry, ties
/// broken by position. Returns the pivot rows and their columns.
pub fn bareiss_echelon(mut rows: Vec<Vec<BigInt>>, ncols: usize) -> (Vec<Vec<BigInt>>, Vec<usize>) {
    let mut prev = BigInt::one();
    let mut top = 0usize;
    let mut pivots = Vec::new();
    for col in 0..ncols {
        if top == rows.len() {
            break;
        }
        let pick = (top..rows.len())
            .filter(|&r| !rows[r][col].is_zero())
            .min_by(|&x, &y| rows[x][col].abs().cmp(&rows[y][col].abs()).then(x.cmp(&y)));
        let Some(p) = pick else { continue };
        rows.swap(top, p);
        let (head, tail) = rows.split_at_mut(top + 1);
        let pivot_row = &head[top];
        let piv = pivot_row[col].clone();
        for row in tail.iter_mut() {
            let f = row[col].clone();
            for c in 0..ncols {
                let v = &piv * &row[c] - &f * &pivot_row[c];
                row[c] = if prev.is_one() {
                    v
                } else {
                    let (q, r) = v.div_rem(&prev);
                    debug_assert!(r.is_zero(), "Bareiss division not exact");
                    q
                };
            }
        }
        prev = piv;
        pivots.push(col);
        top += 1;
    }
    rows.truncate(top);
    (rows, pivots)
}

pub fn rank(rows: Vec<Vec<BigInt>>, ncols: usize) -> usize {
    bareiss_echelon(rows, ncols).1.len()
}

/// Reduced row-echelon form over ℚ from an echelon basis.
pub fn rref(echelon: &[Vec<BigInt>], pivots: &[usize]) -> Vec<Vec<Rational>> {
    let mut out: Vec<Vec<Rational>> = echelon
        .iter()
        .zip(pivots)
        .map(|(row, &pc)| {
            let p = Rational::from_integer(row[pc].clone());
            row.iter().map(|x| Rational::from_integer(x.clone()) / &p).collect()
        })
        .collect();
    for i in (0..out.len()).rev() {
        let pc = pivots[i];
        let (above, rest) = out.split_at_mut(i);
        let pivot_row = &rest[0];
        for row in above.iter_mut() {
            let f = row[pc].clone();
            if f.is_zero() {
                continue;
            }
            for (x, y) in row.iter_mut().zip(pivot_row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lincomb::int;

    fn m(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn primitive_rows() {
        let r = primitive(&m(&[&[0, -4, 6, 2]])[0]).unwrap();
        assert_eq!(r, m(&[&[0, 2, -3, -1]])[0]);
        assert!(primitive(&m(&[&[0, 0]])[0]).is_none());
    }

    #[test]
    fn echelon_and_rref() {
        let a = m(&[&[2, 4, 1], &[1, 2, 3], &[3, 6, 4]]);
        let (e, p) = bareiss_echelon(a, 3);
        assert_eq!(p, vec![0, 2]);
        let r = rref(&e, &p);
        assert_eq!(r[0], vec![int(1), int(2), int(0)]);
        assert_eq!(r[1], vec![int(0), int(0), int(1)]);
    }

    #[test]
    fn rank_matches_determinant() {
        let a = m(&[&[3, 1, 4, 1], &[5, 9, 2, 6], &[5, 3, 5, 8], &[9, 7, 9, 3]]);
        assert_eq!(rank(a, 4), 4);
        let b = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1], &[0, 2, 2]]);
        assert_eq!(rank(b, 3), 2);
    }
}
