use dirtyenc::state::{self, StateObject};
use dirtyenc_core::learners::{logistic_fit, ridge_fit, LogisticConfig};
use dirtyenc_core::pipeline::{fit_method, FeatureAssembler, Method, Table};
use dirtyenc_core::Target;
use proptest::prelude::*;

const METHODS: [&str; 14] = [
    "one_hot",
    "similarity:ngram3",
    "similarity:lev_ratio",
    "similarity:jaro_winkler:0.2",
    "hashing:16",
    "target",
    "mdv",
    "bag_of_ngrams:2",
    "cluster_one_hot:2:ngram2",
    "similarity:ngram3@projection:3",
    "one_hot@most_frequent:2",
    "similarity:ngram2@kmeans:2",
    "similarity:lev_ratio@dedup_merge:2",
    "one_hot@projection:2",
];

fn column() -> impl Strategy<Value = Vec<String>> {
    // Spaces, backslashes and empty strings exercise the escaping.
    prop::collection::vec("[ab \\\\]{0,4}|x\ty", 6..20)
        .prop_filter("need 3 distinct values", |v| v.iter().collect::<std::collections::BTreeSet<_>>().len() >= 3)
}

fn binary(column: &[String]) -> Target {
    let names: Vec<&str> = (0..column.len()).map(|i| if i % 2 == 0 { "no" } else { "yes" }).collect();
    Target::from_class_names(&names)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn every_encoder_round_trips(col in column(), seed in 0u64..1000) {
        let target = binary(&col);
        for m in METHODS {
            let method: Method = m.parse().unwrap();
            let enc = fit_method(&method, &col, Some(&target), seed).unwrap();
            let text = state::encoder_to_string(&enc);
            let back = state::parse_encoder(&text).unwrap();
            prop_assert_eq!(&back, &enc, "{}", m);
            prop_assert_eq!(state::encoder_to_string(&back), text.clone());
            let probe = ["a", "zz", "", "b a"];
            prop_assert_eq!(back.transform(&probe), enc.transform(&probe));
        }
    }
}

#[test]
fn regression_target_encoder_round_trips() {
    let col = ["a", "b", "a", "c", "b"];
    let y = Target::Continuous(vec![1.0, 2.5, -1.0, 1e-300, 7.0]);
    let enc = fit_method(&"target:2.5".parse().unwrap(), &col, Some(&y), 0).unwrap();
    let text = state::encoder_to_string(&enc);
    assert!(text.contains("stats regression 2.5\n"));
    assert_eq!(state::encoder_to_string(&state::parse_encoder(&text).unwrap()), text);
}

#[test]
fn models_and_scalers_round_trip() {
    let col: Vec<String> = (0..40).map(|i| format!("v{}", i % 7)).collect();
    let y = Target::Continuous((0..40).map(|i| (i % 7) as f64 * 0.3 + (i as f64).sin()).collect());
    let table = Table::new("c", col.clone(), "y", y.clone());
    let enc = fit_method(&Method::plain("one_hot".parse().unwrap()), &col, None, 0).unwrap();
    let asm = FeatureAssembler::fit(&table, enc, true).unwrap();
    let x = asm.transform(&table).unwrap();
    let ridge = ridge_fit(&x, &y.as_real(), &[0.1, 1.0], 3, 1).unwrap();
    let labels: Vec<usize> = (0..40).map(|i| i % 3).collect();
    let logistic = logistic_fit(&x, &labels, 3, &LogisticConfig { max_iter: 20, ..Default::default() }, 1).unwrap();
    for obj in [
        StateObject::Scaler(asm.scaler.clone()),
        StateObject::Ridge(ridge),
        StateObject::Logistic(logistic),
    ] {
        let text = state::to_string(&obj);
        let back = state::parse(&text).unwrap();
        assert_eq!(back, obj);
        assert_eq!(state::to_string(&back), text);
    }
}

#[test]
fn rejects_inconsistent_files() {
    let enc = fit_method(&"similarity:ngram3@most_frequent:2".parse().unwrap(), &["ab", "cd", "ab"], None, 0).unwrap();
    let text = state::encoder_to_string(&enc);
    // prototype outside the domain
    let bad = text.replace("prototype cd", "prototype zz");
    assert_eq!(state::parse(&bad).unwrap_err().exit_code(), 3);
    // state kind disagrees with the spec
    assert!(state::parse(&text.replace("state similarity", "state one_hot")).is_err());
    assert!(state::parse(&text.replace("object encoder", "object widget")).is_err());
    assert!(state::parse("").is_err());
}
