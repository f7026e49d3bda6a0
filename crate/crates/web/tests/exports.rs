use exdisc_web::{factors_json, profile_json, sensitivity_json};
use serde_json::Value;

#[test]
fn factors_table() {
    let rows: Value = serde_json::from_str(&factors_json(0.02, 0.01, 0.0, 0.5, 0.5).unwrap()).unwrap();
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 5);
    assert_eq!(rows[0]["case"], "individual");
    assert!((rows[0]["factor"].as_f64().unwrap() - 0.9702).abs() < 1e-15);
    let sum = rows[0]["weight_sum"].as_f64().unwrap();
    assert!((sum - 1.0 / (1.0 - 0.9702)).abs() < 1e-8);
    // no births: social welfare is undefined, reported without a sum
    assert!(rows[4]["weight_sum"].is_null());
}

#[test]
fn divergent_point_has_no_sum() {
    let rows: Value = serde_json::from_str(&factors_json(0.0, 0.005, 0.01, 1.0, 0.5).unwrap()).unwrap();
    assert_eq!(rows[1]["finite"], false);
    assert!(rows[1]["weight_sum"].is_null());
}

#[test]
fn profile_converges() {
    let prof: Value = serde_json::from_str(&profile_json(0.02, 0.01, 0.03, 50).unwrap()).unwrap();
    let ratios = prof["ratios"].as_array().unwrap();
    assert_eq!(ratios.len(), 50);
    assert!((prof["long_run"].as_f64().unwrap() - 0.99 * 0.98 * 1.03).abs() < 1e-15);
    assert!(profile_json(0.02, 0.01, 0.0, 10).unwrap_err().contains("birth"));
}

#[test]
fn sensitivity_regimes() {
    let rows: Value =
        serde_json::from_str(&sensitivity_json(0.02, 0.01, 0.03, 1.0, 0.5, "growth-fixed").unwrap()).unwrap();
    assert_eq!(rows[1]["response"]["d_mortality"].as_f64().unwrap(), 0.0);
    assert!(sensitivity_json(0.02, 0.01, 0.03, 1.0, 0.5, "sideways").is_err());
    assert!(factors_json(1.5, 0.01, 0.0, 1.0, 0.5).is_err());
}
