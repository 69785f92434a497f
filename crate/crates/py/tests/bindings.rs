use std::ffi::CString;
use std::path::PathBuf;

use pyo3::prelude::*;
use pyo3::types::PyDict;
use pyo3::wrap_pymodule;

fn configs() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn run_python(code: &str) {
    Python::attach(|py| {
        let module = wrap_pymodule!(radproof_py::radproof_py)(py);
        let globals = PyDict::new(py);
        globals.set_item("radproof", module).unwrap();
        globals.set_item("CONFIGS", configs().to_str().unwrap()).unwrap();
        let code = CString::new(code).unwrap();
        if let Err(e) = py.run(&code, Some(&globals), None) {
            e.display(py);
            panic!("python snippet failed");
        }
    });
}

#[test]
fn proof_round_trip_from_python() {
    run_python(
        r#"
import json, os
cfg = radproof.RunConfig.load(os.path.join(CONFIGS, "sech2_manufactured.json"))
run = radproof.run_proof(cfg)
assert run.passed, run.report()
assert 0 < run.c0_bound < 1e-10
cert = json.loads(run.certificate_json())
assert cert["passed"] and cert["problem"] == "sech2"
lines = run.profile_csv().splitlines()
assert lines[0] == "r,u1,region"
assert abs(run.profile_at(0.0)[0] - 1.0) < 1e-10
assert json.loads(cfg.to_json())["geometry"]["L"] == 9.6
"#,
    );
}

#[test]
fn eigen_only_and_errors_from_python() {
    run_python(
        r#"
import os
cfg = radproof.RunConfig.load(os.path.join(CONFIGS, "fhn3_spot_full.json"))
lo, hi = radproof.eigen_only(cfg).lambda_hat
assert lo <= 0.368776624719 + 1e-10 and hi >= 0.368776624719 - 1e-10
try:
    radproof.RunConfig.from_json('{"problem": {"builtin": "klein-gordon"}}')
except ValueError:
    pass
else:
    raise AssertionError("incomplete config accepted")
"#,
    );
}
