use euler_ds::numeval::oracle::oracle_eval;
use euler_ds::numeval::{Evaluator, PrecisionContext};
use euler_ds::products::{shuffle, stuffle_words};
use euler_ds::relations::{gen_all, index_string};
use euler_ds::words::{enumerate_admissible, Letter, Word};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_admissible(rng: &mut ChaCha8Rng, n: usize) -> Word {
    let mut v = Vec::with_capacity(n);
    for i in 0..n {
        let choices: &[Letter] = if i == 0 {
            &[Letter::A, Letter::C]
        } else if i == n - 1 {
            &[Letter::B, Letter::C]
        } else {
            &[Letter::A, Letter::B, Letter::C]
        };
        v.push(*choices.choose(rng).unwrap());
    }
    if n == 1 {
        v[0] = Letter::C;
    }
    Word::new(v)
}

#[test]
fn evaluation_respects_both_products() {
    let ev = Evaluator::new(PrecisionContext::new(30));
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let (nu, nv) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
        let u = random_admissible(&mut rng, nu);
        let v = random_admissible(&mut rng, nv);
        let zu = ev.eval_word(&u).unwrap().value;
        let zv = ev.eval_word(&v).unwrap().value;
        let prod = &zu * &zv;
        for p in [shuffle(&u, &v), stuffle_words(&u, &v).unwrap()] {
            let z = ev.eval_lincomb(&p).unwrap().value;
            let err = (&z - &prod).abs().to_f64();
            worst = worst.max(err);
            assert!(err < 1e-25, "{u} · {v}: {err:e}");
        }
    }
    eprintln!("worst product defect {worst:e}");
}

#[test]
fn agrees_with_direct_series() {
    let ev = Evaluator::new(PrecisionContext::new(30));
    for n in 1..=4 {
        for w in enumerate_admissible(n) {
            let k = w.to_composite().unwrap().to_index();
            let fast = ev.eval_word(&w).unwrap().to_f64();
            let slow = oracle_eval(&k, 2000).unwrap();
            assert!((fast - slow).abs() < 1e-8, "{k}: {fast} vs {slow}");
        }
    }
}

#[test]
fn relations_vanish_numerically() {
    let ev = Evaluator::new(PrecisionContext::new(30));
    for n in 2..=4 {
        for r in gen_all(n).unwrap() {
            let z = ev.eval_lincomb(&r.combo).unwrap().value.abs().to_f64();
            assert!(z < 1e-20, "weight {n} {}: {z:e}", r.provenance);
        }
    }
    let mut all = gen_all(5).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    all.shuffle(&mut rng);
    for r in all.iter().take(50) {
        let z = ev.eval_lincomb(&r.combo).unwrap().value.abs().to_f64();
        assert!(z < 1e-20, "weight 5 {}: {z:e}", r.provenance);
    }
}

#[test]
fn reduced_rows_hold_numerically() {
    let ev = Evaluator::new(PrecisionContext::new(30));
    let table = euler_ds::fixtures::table(4).unwrap();
    let basis: Vec<_> = table.basis.iter().map(|b| ev.eval_word(b).unwrap().value).collect();
    for (w, row) in &table.rows {
        let mut acc = ev.eval_word(w).unwrap().value;
        for (c, z) in row.iter().zip(&basis) {
            acc -= &z.mul_ratio(c);
        }
        assert!(acc.abs().to_f64() < 1e-20, "{}", index_string(w));
    }
}
