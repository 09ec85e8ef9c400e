use super::*;

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("tensorcat").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn call_json(args: &[&str]) -> (i32, Value) {
    let (code, out, err) = call(args);
    let v = serde_json::from_str(&out).unwrap_or_else(|e| panic!("{e}: {out} {err}"));
    (code, v)
}

#[test]
fn dims_of_fibonacci() {
    let (code, v) = call_json(&["dims", "--catalog", "fibonacci"]);
    assert_eq!(code, 0);
    let d = v["dims"].as_array().unwrap();
    assert_eq!(d[0], 1.0);
    assert!((d[1].as_f64().unwrap() - (1.0 + 5f64.sqrt()) / 2.0).abs() < 1e-10);
    assert!((v["global_dim"].as_f64().unwrap() - 3.618_033_988_75).abs() < 1e-10);
    assert_eq!(v["tolerance"], 1e-9);
    assert_eq!(v["dims"][0], 1);
    assert_eq!(v["command"], "dims");
}

#[test]
fn canonical_fibonacci_algebra_is_not_commutative() {
    let (code, v) = call_json(&["commutative", "--catalog", "fibonacci", "--algebra", "canonical:t"]);
    assert_eq!(code, 1);
    assert_eq!(v["commutative"], false);
    assert!(v["residual"].as_f64().unwrap() > 0.1);
    let (code, _) = call_json(&["commutative", "--catalog", "toric_code", "--algebra", "canonical:1"]);
    assert_eq!(code, 0);
}

#[test]
fn catalog_lists_everything() {
    let (code, v) = call_json(&["catalog"]);
    assert_eq!(code, 0);
    let names: Vec<&str> = v["categories"].as_array().unwrap().iter().map(|e| e["name"].as_str().unwrap()).collect();
    let expect: Vec<&str> = catalog_names().map(|e| e.name).collect();
    assert_eq!(names, expect);
}

#[test]
fn usage_errors_exit_3() {
    let (code, out, err) = call(&["frobnicate"]);
    assert_eq!(code, 3);
    assert!(out.is_empty() && err.contains("Usage"), "{err}");
    assert_eq!(call(&["dims"]).0, 3);
    assert_eq!(call(&["dims", "--catalog", "nope"]).0, 3);
    assert_eq!(call(&["dims", "--catalog", "ising", "--tol", "-1"]).0, 3);
    let (code, v) = call_json(&["commutative", "--catalog", "ising"]);
    assert_eq!((code, v["kind"].as_str()), (3, Some("structural")));
}

#[test]
fn tolerance_override() {
    let (_, v) = call_json(&["smatrix", "--catalog", "semion", "--tol", "1e-7"]);
    assert_eq!(v["tolerance"], 1e-7);
}

#[test]
fn validate_reports_broken_input() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    let mut file = crate::category::CategoryFile::from_category(&catalog("fibonacci").unwrap());
    let last = file.F.len() - 1;
    file.F[last].6 = crate::numeral::Numeral::real(0.5);
    std::fs::write(&path, serde_json::to_string(&file).unwrap()).unwrap();
    let p = path.to_str().unwrap();
    let (code, v) = call_json(&["validate", "--input", p]);
    assert_eq!(code, 2);
    assert_eq!(v["valid"], false);
    assert!(!v["coherence_violations"].as_array().unwrap().is_empty());
    assert_eq!(call(&["dims", "--input", p]).0, 2);
    assert_eq!(call(&["dims", "--input", p, "--no-validate"]).0, 0);
    assert_eq!(call(&["validate", "--catalog", "ising"]).0, 0);
}

#[test]
fn modular_data_and_characters() {
    let (code, v) = call_json(&["smatrix", "--catalog", "toric_code"]);
    assert_eq!(code, 0);
    assert_eq!(v["nondegenerate"], true);
    assert_eq!(v["s"][1][1]["re"], 0.5);
    assert_eq!(v["s"][1][2]["re"], -0.5);
    let (code, v) = call_json(&["chars", "--catalog", "ising"]);
    assert_eq!((code, &v["pass"]), (0, &Value::Bool(true)));
    assert!((v["gamma"][0][1]["re"].as_f64().unwrap() - 2f64.sqrt()).abs() < 1e-10);
}

#[test]
fn centralizers() {
    let (code, v) = call_json(&["centralizer", "--catalog", "ising", "--sub", "1,s,p"]);
    assert_eq!(code, 0);
    assert_eq!(v["centralizer"], json!(["1"]));
    assert_eq!(v["hom_violations"], json!([]));
    assert_eq!(v["restriction"]["s"], "s");
    let (code, v) = call_json(&["centralizer", "--catalog", "ising", "--sub", "1,p"]);
    assert_eq!((code, v["kind"].as_str()), (1, Some("precondition")));
    let (code, v) = call_json(&["find-central", "--catalog", "fibonacci", "--sub", "1"]);
    assert_eq!((code, v["object"].as_str()), (0, Some("t")));
    let (code, v) = call_json(&["find-central", "--catalog", "fibonacci", "--sub", "1,t"]);
    assert_eq!((code, &v["object"]), (1, &Value::Null));
}

#[test]
fn algebras_and_condensation() {
    let (code, v) = call_json(&["qsystem-check", "--catalog", "ising", "--algebra", "canonical:s"]);
    assert_eq!((code, &v["pass"]), (0, &Value::Bool(true)));
    assert!((v["algebra_dim"].as_f64().unwrap() - 2.0).abs() < 1e-9);

    let dir = tempfile::tempdir().unwrap();
    let cd = catalog("toric_code").unwrap();
    let alg = crate::algebra::pointed_subgroup_algebra(&cd, &[0, 1]).unwrap();
    let apath = dir.path().join("alg.json");
    std::fs::write(&apath, serde_json::to_string(&alg.to_file()).unwrap()).unwrap();
    let a = apath.to_str().unwrap();
    let (code, v) = call_json(&["condense", "--catalog", "toric_code", "--algebra", a]);
    assert_eq!(code, 0);
    assert_eq!(v["simples"].as_array().unwrap().len(), 1);
    assert_eq!(v["report"]["lagrangian"], true);
    assert!((v["report"]["lhs"].as_f64().unwrap() - 4.0).abs() < 1e-6);

    let mpath = dir.path().join("mod.json");
    let m = ModuleObject::regular(&cd, &alg);
    std::fs::write(&mpath, serde_json::to_string(&m.to_file().unwrap()).unwrap()).unwrap();
    let mp = mpath.to_str().unwrap();
    let (code, v) = call_json(&["local-modules", "--catalog", "toric_code", "--algebra", a, "--module", mp]);
    assert_eq!((code, &v["local"]), (0, &Value::Bool(true)));

    let (code, v) = call_json(&["local-modules", "--catalog", "fibonacci", "--algebra", "canonical:t"]);
    assert_eq!((code, v["kind"].as_str()), (1, Some("precondition")));
}

#[test]
fn lagrangian_of_the_center() {
    let (code, v) = call_json(&["condense", "--catalog", "fibonacci", "--algebra", "lagrangian"]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["simples"].as_array().unwrap().len(), 1);
    let phi2 = (1.0 + 5f64.sqrt()) / 2.0 + 2.0;
    assert!((v["report"]["rhs"].as_f64().unwrap() - phi2 * phi2).abs() < 1e-6);
}

#[test]
fn center_summary_and_partial_file() {
    let (code, v) = call_json(&["center", "--catalog", "z2"]);
    assert_eq!(code, 0);
    assert_eq!(v["rank"], 4);
    assert_eq!(v["theorem_c"]["pass"], true);
    let (code, v) = call_json(&["center", "--catalog", "fibonacci", "--emit-category"]);
    assert_eq!(code, 0);
    assert_eq!(v["partial"], true);
    let file: crate::category::CategoryFile = serde_json::from_value(v).unwrap();
    let cd = file.into_category(true).unwrap();
    assert_eq!(cd.rank(), 4);
    assert_eq!(call(&["dims", "--input", "/nonexistent.json"]).0, 3);
}

#[test]
fn eval_loops_and_generators() {
    let (code, v) = call_json(&["eval", "--catalog", "fibonacci", "cap[t] . cup[t]"]);
    assert_eq!(code, 0);
    assert!((v["scalar"]["re"].as_f64().unwrap() - 1.618_033_988_75).abs() < 1e-9);
    let (code, v) = call_json(&["eval", "--catalog", "ising", "--algebra", "canonical:s", "m[p,p,1] . v[p,p,1]"]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["source"], json!(["1"]));
    let (code, v) = call_json(&["eval", "--catalog", "fibonacci", "braid[t,t] . cup[1]"]);
    assert_eq!((code, v["kind"].as_str()), (3, Some("type")));
}

#[test]
fn kappa_of_semion() {
    let (code, v) = call_json(&["kappa", "--catalog", "semion"]);
    assert_eq!(code, 0);
    assert_eq!(v["kappa"][1], json!({ "re": 0, "im": 1 }));
    assert_eq!(call(&["kappa", "--catalog", "fibonacci"]).0, 1);
}

#[test]
fn json_is_byte_stable() {
    for args in [
        &["center", "--catalog", "ising", "--seed", "5"][..],
        &["condense", "--catalog", "toric_code", "--algebra", "lagrangian"],
        &["smatrix", "--catalog", "z4q"],
    ] {
        assert_eq!(call(args).1, call(args).1);
    }
    let a = call(&["center", "--catalog", "fibonacci", "--seed", "1"]).1;
    let b = call(&["center", "--catalog", "fibonacci", "--seed", "99"]).1;
    assert_eq!(a, b);
}

#[test]
fn text_format() {
    let (code, out, _) = call(&["dims", "--catalog", "ising", "--format", "text"]);
    assert_eq!(code, 0);
    assert!(out.contains("labels: [1, s, p]"), "{out}");
    assert!(out.lines().any(|l| l.starts_with("global_dim: 4")));
}
