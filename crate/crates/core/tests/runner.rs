//! The shared check runner and the file formats around it.

use dinfty::catalog::{entry_json, FamilyId};
use dinfty::module::GradedModule;
use dinfty::verify::{checks, exit_code, run_check, verify_all, Config, Status};
use dinfty::Fp;

#[test]
fn config_validation() {
    assert!(Config::new(2, 5, None, 10, 0).is_err());
    assert!(Config::new(9, 5, None, 10, 0).is_err());
    assert!(Config::new(5, 1, None, 10, 0).is_err());
    assert!(Config::new(5, 5, Some(13), 10, 0).is_err());
    let c = Config::new(7, 4, None, 10, 3).unwrap();
    assert_eq!(c.depth, 16);
}

#[test]
fn check_ids_are_unique_and_sorted_output() {
    let ids: Vec<&str> = checks().iter().map(|c| c.0).collect();
    let mut sorted = ids.clone();
    sorted.sort();
    sorted.dedup();
    assert_eq!(sorted.len(), ids.len());
}

#[test]
fn fast_checks_are_deterministic() {
    let config = Config::new(5, 3, None, 6, 1).unwrap();
    let ctx = config.ctx();
    for id in ["ring.identities", "ring.socles", "quiver.duality", "quilt.graph"] {
        let a = serde_json::to_string(&run_check(&ctx, &config, id).unwrap()).unwrap();
        let b = serde_json::to_string(&run_check(&config.ctx(), &config, id).unwrap()).unwrap();
        assert_eq!(a, b, "{id}");
        assert!(a.contains("\"status\":\"pass\""), "{id}: {a}");
    }
    assert!(run_check(&ctx, &config, "no.such.check").is_none());
}

#[test]
fn verify_all_passes_at_small_window_and_other_prime() {
    let config = Config::new(7, 3, None, 6, 0).unwrap();
    let reports = verify_all(&config);
    let ids: Vec<&str> = reports.iter().map(|r| r.check.as_str()).collect();
    let mut sorted = ids.clone();
    sorted.sort();
    assert_eq!(ids, sorted);
    for r in &reports {
        assert_eq!(r.status, Status::Pass, "{}", r.line());
        assert!(r.counterexample.is_none());
    }
    assert_eq!(exit_code(&reports), 0);
}

#[test]
fn exit_codes() {
    let config = Config::new(5, 3, None, 6, 0).unwrap();
    let ctx = config.ctx();
    let mut r = run_check(&ctx, &config, "ring.socles").unwrap();
    assert_eq!(exit_code(std::slice::from_ref(&r)), 0);
    r.status = Status::Indeterminate;
    assert_eq!(exit_code(std::slice::from_ref(&r)), 3);
    r.status = Status::Fail;
    assert_eq!(exit_code(&[r]), 1);
}

#[test]
fn catalog_entries_round_trip() {
    let f = Fp::new(5).unwrap();
    for id in FamilyId::window(3) {
        let v = entry_json(f, id, 3);
        let m = GradedModule::from_json(f, &v).unwrap();
        assert_eq!(m.name(), id.to_string());
        let lo = m.min_gen_degree().unwrap();
        let threads = v["threads"].as_array().unwrap();
        for (t, d) in threads.iter().zip(lo..) {
            assert_eq!(t["basis"].as_array().unwrap().len(), m.dim(d), "{id} degree {d}");
        }
        assert_eq!(m.to_json()["relations"], v["relations"]);
    }
}

#[test]
fn malformed_module_json_is_rejected() {
    let f = Fp::new(5).unwrap();
    let bad = serde_json::json!({"name": "Q", "generators": ["m"], "degrees": [], "relations": []});
    assert!(GradedModule::from_json(f, &bad).is_err());
    let bad = serde_json::json!({"generators": ["m"], "degrees": [0], "relations": ["q*x"]});
    assert!(GradedModule::from_json(f, &bad).is_err());
}
