use euler_ds::lincomb::LinComb;
use euler_ds::numeval::{Evaluator, PrecisionContext};
use euler_ds::regularize::{decompose, rho_residual, substitute_b, RegKind};
use euler_ds::words::{enumerate_a1, w};

#[test]
fn substitution_recovers_every_word_to_weight_5() {
    for n in 1..=5 {
        for u in enumerate_a1(n) {
            for kind in [RegKind::Shuffle, RegKind::Stuffle] {
                let p = decompose(kind, &u).unwrap();
                assert_eq!(substitute_b(kind, &p).unwrap(), LinComb::single(u.clone()), "{kind} {u}");
            }
        }
    }
}

#[test]
fn comparison_map_weight_2() {
    // constant terms give ζ(1̄,1̄) = ζ(2̄) + ζ(1̄,1)
    let ev = Evaluator::new(PrecisionContext::new(30));
    for r in rho_residual(&ev, &w("bc")).unwrap() {
        assert!(r.abs().to_f64() < 1e-20);
    }
}

#[test]
fn comparison_map_to_weight_4() {
    let ev = Evaluator::new(PrecisionContext::new(30));
    for n in 1..=4 {
        for u in enumerate_a1(n) {
            for r in rho_residual(&ev, &u).unwrap() {
                assert!(r.abs().to_f64() < 1e-20, "{u}");
            }
        }
    }
}
