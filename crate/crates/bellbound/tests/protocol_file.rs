use bellbound::protocol_file::{parse_protocol, protocol_to_json, ProtocolFile};
use bellbound::resolve::resolve;
use bellbound_core::bell::VariantSpec;
use bellbound_core::protocol::{make_biased_strategy, random_protocol_general, Flavor, RandomSizes};
use proptest::prelude::*;

const FIXTURE: &str = include_str!("data/biased_coin.json");

#[test]
fn fixture_matches_builtin() {
    let from_file = parse_protocol(FIXTURE, "fixture").unwrap();
    let builtin = make_biased_strategy(0.8, Flavor::One).unwrap();
    let a = from_file.exact_joint().unwrap();
    let b = builtin.exact_joint().unwrap();
    assert!(a.max_abs_diff(&b).unwrap() <= 1e-15);
    let an = from_file.analyze().unwrap();
    assert!((an.score.score(VariantSpec::CHSH) - 0.9).abs() <= 1e-12);
    assert_eq!(from_file.label, "biased coin, A = 1 on a = 0");
}

#[test]
fn defaults_apply() {
    let text = r#"{
        "lambda": [{"value": 0, "prob": 1}],
        "bob_output": [{"key": [0, 0, 0], "value": 0}, {"key": [1, 0, 0], "value": 0}],
        "message": [{"key": [0, 0, 0], "value": 0}, {"key": [1, 0, 0], "value": 0}],
        "alice_output": [
            {"key": [0, 0, 0, 0], "value": 0}, {"key": [0, 0, 1, 0], "value": 0},
            {"key": [1, 0, 0, 0], "value": 0}, {"key": [1, 0, 1, 0], "value": 0}
        ]
    }"#;
    let p = parse_protocol(text, "minimal").unwrap();
    assert_eq!(p.message_alphabet(), 2);
    assert_eq!(p.bob_private().len(), 1);
    assert_eq!(p.label, "minimal");
    assert_eq!(p.analyze().unwrap().score.beta_score, 0.75);
}

fn mutate(f: impl FnOnce(&mut serde_json::Value)) -> Result<(), String> {
    let mut v: serde_json::Value = serde_json::from_str(FIXTURE).unwrap();
    f(&mut v);
    parse_protocol(&v.to_string(), "x").map(|_| ())
}

#[test]
fn malformed_files_are_rejected() {
    let err = mutate(|v| v["bob_private"][0]["prob"] = 0.3.into()).unwrap_err();
    assert!(err.contains("sum"), "{err}");
    let err = mutate(|v| {
        v["message"].as_array_mut().unwrap().pop();
    })
    .unwrap_err();
    assert!(err.contains("total"), "{err}");
    let err = mutate(|v| v["message"][1]["key"] = serde_json::json!([0, "none", "tails"])).unwrap_err();
    assert!(err.contains("twice"), "{err}");
    let err = mutate(|v| v["bob_output"][0]["key"][2] = "edge".into()).unwrap_err();
    assert!(err.contains("unknown bob_private"), "{err}");
    let err = mutate(|v| v["alice_output"][0]["value"] = 2.into()).unwrap_err();
    assert!(err.contains("not a bit"), "{err}");
    let err = mutate(|v| v["message"][0]["value"] = 5.into()).unwrap_err();
    assert!(err.contains("alphabet"), "{err}");
    let err = mutate(|v| v["alice_output"][0]["key"][2] = 2.into()).unwrap_err();
    assert!(err.contains("message chi"), "{err}");
    let err = mutate(|v| v["lambda"][0]["prob"] = (-1.0).into()).unwrap_err();
    assert!(err.contains("outside"), "{err}");
    assert!(mutate(|v| v["extra"] = 1.into()).is_err());
    assert!(parse_protocol("{", "x").is_err());
}

#[test]
fn builtins_export_and_reload() {
    for name in ["pr-onebit", "local:not,const1", "biased:0.3:zero", "random-b-indep:9"] {
        let p = resolve(name).unwrap();
        let back = parse_protocol(&protocol_to_json(&p), "x").unwrap();
        assert_eq!(back.label, p.label);
        let d = back.exact_joint().unwrap().max_abs_diff(&p.exact_joint().unwrap()).unwrap();
        assert!(d <= 1e-15, "{name}: {d}");
    }
}

proptest! {
    #[test]
    fn json_round_trip(seed in any::<u64>()) {
        let p = random_protocol_general(seed, RandomSizes::from_seed(seed)).unwrap();
        let text = protocol_to_json(&p);
        let parsed: ProtocolFile = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(&parsed, &ProtocolFile::from_protocol(&p));
        let back = parsed.into_protocol("x").unwrap();
        for b in 0..2 {
            for l in 0..p.lambda().len() as u32 {
                for mb in 0..p.bob_private().len() as u32 {
                    prop_assert_eq!(back.bob_output(b, l, mb), p.bob_output(b, l, mb));
                    prop_assert_eq!(back.message(b, l, mb), p.message(b, l, mb));
                }
            }
        }
        let d = back.exact_joint().unwrap().max_abs_diff(&p.exact_joint().unwrap()).unwrap();
        prop_assert!(d <= 1e-15);
    }
}
