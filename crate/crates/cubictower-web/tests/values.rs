use cubictower_web::{census_value, character_value, classify_value};

#[test]
fn classify_example() {
    let v = classify_value(8541, "").unwrap();
    assert_eq!(v["label"], "III/6");
    assert_eq!(v["symbol"], "{9<->73->13}");
    assert_eq!(v["edges"].as_array().unwrap().len(), 3);
    assert!(v["rule"].as_str().unwrap().starts_with("<81,7>^4"));
    assert!(classify_value(12, "").is_err());
    assert_eq!(classify_value(7, "").unwrap()["label"], "singlet");
}

#[test]
fn census_example() {
    let v = census_value(5, 100_000).unwrap();
    assert_eq!(v["multiplets"]["total_conductors"], 3282);
    let v = census_value(3, 100_000).unwrap();
    assert_eq!(v["doublets"]["g3"], 408);
    assert_eq!(v["categories"]["total"]["conductors"], 783);
    assert!(census_value(3, 2_000_000).is_err());
}

#[test]
fn character_example() {
    let v = character_value(3, 7, 6).unwrap();
    assert_eq!(v["exponent"], 0);
    assert!(character_value(3, 8, 3).is_err());
}
