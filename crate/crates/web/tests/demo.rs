use mublp_web::{bracket_scan_json, evaluate_json, karlsson_json};

#[test]
fn karlsson_page_reports_vanishing_placements() {
    let v = karlsson_json(0.3, 1.1, 0.7, "+-+").unwrap();
    assert_eq!(v["branches"], "+-+");
    assert!(v["hadamard_residual"].as_f64().unwrap() < 1e-9);
    for p in v["placements"].as_array().unwrap() {
        assert!(p["abs"].as_f64().unwrap() < 1e-9, "{p}");
    }
    assert_eq!(v["args_over_pi"].as_array().unwrap().len(), 6);
}

#[test]
fn bad_inputs_become_messages() {
    assert!(karlsson_json(0.3, 1.1, 0.7, "++")
        .unwrap_err()
        .contains("three signs"));
    assert!(evaluate_json("spectral", "1,2", 0.0, 0.0, 0.0, "+++")
        .unwrap_err()
        .contains("6 entries"));
    assert!(evaluate_json("mystery", "0,0,0,0,0,0", 0.0, 0.0, 0.0, "+++").is_err());
    assert!(bracket_scan_json(0, 4).is_err());
}

#[test]
fn spectral_matrix_does_not_vanish() {
    let v = evaluate_json("spectral", "1 1 1 -1 -1 -1", 0.0, 0.0, 0.0, "+++").unwrap();
    assert!((v["g_abs"].as_f64().unwrap() - 1.5).abs() < 1e-9);
}

#[test]
fn fourier_g_at_zero_is_six() {
    let v = evaluate_json("fourier", "0,0,0,0,0,0", 0.0, 0.0, 0.0, "+++").unwrap();
    assert!((v["g_re"].as_f64().unwrap() - 6.0).abs() < 1e-12);
    assert!((v["G"].as_f64().unwrap() - 36.0).abs() < 1e-9);
}

#[test]
fn only_one_bracket_reading_vanishes() {
    let v = bracket_scan_json(12, 10).unwrap();
    assert_eq!(v["conjugated"].as_array().unwrap().len(), 120);
    assert!(v["conjugated_max"].as_f64().unwrap() < 1e-9);
    assert!(v["as_printed_max"].as_f64().unwrap() > 1e-3);
    assert!(v["t0_max"].as_f64().unwrap() < 1e-10);
}
