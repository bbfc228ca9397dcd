use bellbound_core::bell::VariantSpec;
use bellbound_core::protocol::{make_biased_strategy, make_one_bit_pr, Flavor};

#[test]
fn constant_one_with_outcome_biased_to_zero() {
    // A = 1 on a = 0, A = B xor b on a = 1, P(B = 0) = 0.8
    let p = make_biased_strategy(0.2, Flavor::One).unwrap();
    let an = p.analyze().unwrap();
    let twin = VariantSpec::new(true, false, true);
    assert!((an.score.score(twin) - 0.9).abs() <= 1e-12);
    assert!(an.info.i_big_b <= 1e-12);
    assert!((an.info.i_bxorb - 1.0).abs() <= 1e-12);
    assert_eq!(an.score.violations, vec![twin]);
    assert!(an.fano.holds);
}

#[test]
fn biased_beta_is_linear_in_the_bias() {
    for k in 0..=10 {
        let p = k as f64 / 10.0;
        let an = make_biased_strategy(p, Flavor::One).unwrap().analyze().unwrap();
        assert!((an.score.score(VariantSpec::CHSH) - (1.0 + p) / 2.0).abs() <= 1e-12, "p = {p}");
        assert!(an.info.i_big_b <= 1e-12);
        assert!(an.score.beta_score <= 0.75 + 1e-12 || p > 0.5);
    }
}

#[test]
fn pr_transmits_setting_not_outcome() {
    let an = make_one_bit_pr().analyze().unwrap();
    assert!((an.info.delta_b - 1.0).abs() <= 1e-12);
    assert!(an.info.delta_big_b.abs() <= 1e-12);
    assert!((an.info.i_big_b_lambda - 1.0).abs() <= 1e-12);
}
