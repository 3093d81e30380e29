//! Low-precision direct-series check for convergent signed indices.
//!
//! The nested sum splits by how many of the outer indices exceed `N`:
//! `ζ = Σ_j τ_j(N) · P_j(N)` where `P_j` is the truncated sum over the last
//! `l - j` indices (all `≤ N`) and `τ_j` sums the first `j` indices over
//! `k_1 > … > k_j > N`. The `P_j` are plain prefix sums. The tails `τ_j`
//! are built as asymptotic series in `1/N` with exact rational
//! coefficients, using Euler–Maclaurin for the non-alternating parts and
//! Euler–Boole for the alternating parts.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::words::SignedIndex;

const ORDER: usize = 24;

type Q = BigRational;

fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

fn factorial(n: usize) -> Q {
    (1..=n as i64).fold(Q::one(), |acc, k| acc * q(k))
}

// (p)_m = p (p+1) … (p+m-1)
fn rising(p: usize, m: usize) -> Q {
    (0..m).fold(Q::one(), |acc, i| acc * q((p + i) as i64))
}

fn bernoulli(n_max: usize) -> Vec<Q> {
    let mut b = vec![Q::zero(); n_max + 1];
    b[0] = Q::one();
    for n in 1..=n_max {
        // Σ_{k=0}^{n} C(n+1,k) B_k = 0
        let mut s = Q::zero();
        let mut binom = BigInt::one();
        for (k, bk) in b.iter().enumerate().take(n) {
            s += Q::from_integer(binom.clone()) * bk;
            binom = binom * BigInt::from(n + 1 - k) / BigInt::from(k + 1);
        }
        b[n] = -s / Q::from_integer(binom);
    }
    b
}

// Taylor coefficients of 1/(1+e^x).
fn boole_coeffs(n_max: usize) -> Vec<Q> {
    let g: Vec<Q> = (0..=n_max)
        .map(|n| {
            if n == 0 {
                q(2)
            } else {
                Q::one() / factorial(n)
            }
        })
        .collect();
    let mut h = vec![Q::zero(); n_max + 1];
    h[0] = Q::new(BigInt::one(), BigInt::from(2));
    for n in 1..=n_max {
        let mut s = Q::zero();
        for i in 1..=n {
            s += &g[i] * &h[n - i];
        }
        h[n] = -s / &g[0];
    }
    h
}

/// `Σ_m (α_m + β_m (-1)^M) M^-m`.
#[derive(Clone, Debug)]
struct Asym {
    alpha: Vec<Q>,
    beta: Vec<Q>,
}

struct Tables {
    bern: Vec<Q>,
    boole: Vec<Q>,
}

impl Asym {
    fn one() -> Asym {
        let mut alpha = vec![Q::zero(); ORDER + 1];
        alpha[0] = Q::one();
        Asym {
            alpha,
            beta: vec![Q::zero(); ORDER + 1],
        }
    }

    // Σ_{k>M} x^k k^-s · self(k), as a series in M.
    fn sum_tail(&self, s: usize, negative: bool, t: &Tables) -> Option<Asym> {
        let mut a = vec![Q::zero(); ORDER + 1];
        let mut b = vec![Q::zero(); ORDER + 1];
        for m in 0..=ORDER {
            if m + s <= ORDER {
                a[m + s] = self.alpha[m].clone();
                b[m + s] = self.beta[m].clone();
            }
        }
        if negative {
            std::mem::swap(&mut a, &mut b);
        }
        if !a[0].is_zero() || !a[1].is_zero() || !b[0].is_zero() {
            return None;
        }
        let mut out = Asym {
            alpha: vec![Q::zero(); ORDER + 1],
            beta: vec![Q::zero(); ORDER + 1],
        };
        for p in 2..=ORDER {
            if a[p].is_zero() {
                continue;
            }
            out.alpha[p - 1] += &a[p] / q(p as i64 - 1);
            out.alpha[p] -= &a[p] / q(2);
            let mut j = 1;
            while p + 2 * j - 1 <= ORDER {
                let c = &t.bern[2 * j] / factorial(2 * j) * rising(p, 2 * j - 1);
                out.alpha[p + 2 * j - 1] += &a[p] * c;
                j += 1;
            }
        }
        for p in 1..=ORDER {
            if b[p].is_zero() {
                continue;
            }
            out.beta[p] -= &b[p];
            for qq in 0..=(ORDER - p) {
                let mut c = &t.boole[qq] * rising(p, qq);
                if qq % 2 == 1 {
                    c = -c;
                }
                out.beta[p + qq] += &b[p] * c;
            }
        }
        Some(out)
    }

    fn at(&self, n: usize) -> f64 {
        let inv = 1.0 / n as f64;
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let mut s = 0.0;
        for m in (0..=ORDER).rev() {
            let c = self.alpha[m].to_f64().unwrap_or(0.0) + sign * self.beta[m].to_f64().unwrap_or(0.0);
            s = s * inv + c;
        }
        s
    }
}

/// Approximate `ζ(k)` from the defining series, truncated at `n` plus tails.
pub fn oracle_eval(k: &SignedIndex, n: usize) -> Result<f64> {
    if !k.is_convergent() {
        return Err(Error::Divergent(k.to_string()));
    }
    let ent: Vec<(usize, bool)> = k
        .entries()
        .iter()
        .map(|e| (e.magnitude as usize, e.negative))
        .collect();
    let l = ent.len();

    // Truncated sums P_j = Σ_{n ≥ k_{j+1} > … > k_l ≥ 1}, j = 0..=l.
    let mut p = vec![0.0f64; l + 1];
    p[l] = 1.0;
    let mut inner = vec![1.0f64; n + 1]; // S_{j+1}(m), m = 0..=n
    for j in (0..l).rev() {
        let (s, neg) = ent[j];
        let mut cur = vec![0.0f64; n + 1];
        let mut acc = 0.0;
        for i in 1..=n {
            let sign = if neg && i % 2 == 1 { -1.0 } else { 1.0 };
            acc += sign * (i as f64).powi(-(s as i32)) * inner[i - 1];
            cur[i] = acc;
        }
        p[j] = cur[n];
        // S_{j+1}(0) = 0 for non-empty inner sums
        inner = cur;
    }

    let tables = Tables {
        bern: bernoulli(2 * ORDER + 2),
        boole: boole_coeffs(ORDER + 1),
    };
    let mut tau = Asym::one();
    let mut total = p[0];
    for (j, &(s, neg)) in ent.iter().enumerate() {
        tau = tau
            .sum_tail(s, neg, &tables)
            .ok_or_else(|| Error::Divergent(k.to_string()))?;
        total += tau.at(n) * p[j + 1];
    }
    Ok(total)
}
