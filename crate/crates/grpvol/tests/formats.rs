use grpvol::formats::{parse_rational, rational_string};
use grpvol::report::json_text;
use grpvol_core::linalg::Rational;
use proptest::prelude::*;
use serde_json::{json, Map, Value};

fn value() -> impl Strategy<Value = Value> {
    let leaf = prop_oneof![
        Just(Value::Null),
        any::<bool>().prop_map(Value::Bool),
        any::<i64>().prop_map(|x| json!(x)),
        "[a-z\"\\\\ ]{0,6}".prop_map(Value::String),
    ];
    leaf.prop_recursive(4, 32, 5, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 0..5).prop_map(Value::Array),
            prop::collection::vec(("[a-z]{1,4}", inner), 0..5)
                .prop_map(|kv| Value::Object(kv.into_iter().collect::<Map<_, _>>())),
        ]
    })
}

proptest! {
    #[test]
    fn json_text_parses_back(v in value()) {
        let text = json_text(&v);
        prop_assert!(text.ends_with('\n'));
        prop_assert_eq!(serde_json::from_str::<Value>(&text).unwrap(), v);
    }

    #[test]
    fn rational_strings_are_canonical(n in -10_000i64..10_000, d in 1i64..500) {
        let r = Rational::new(n.into(), d.into());
        let s = rational_string(&r);
        prop_assert_eq!(parse_rational(&s).unwrap(), r.clone());
        prop_assert_eq!(s.contains('/'), !r.is_integer());
    }
}
