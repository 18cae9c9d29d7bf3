use pyo3::prelude::*;
use pyo3::types::PyDict;
use spinscape_py::spinscape_py;

#[test]
fn module_round_trip() {
    pyo3::append_to_inittab!(spinscape_py);
    Python::attach(|py| {
        let locals = PyDict::new(py);
        py.run(
            cr#"
import math
import spinscape_py as sp
m = sp.Mixture("2:0.9,10:0.1")
prof = m.profile()
g = prof["g_value"]
cls = prof["class"]
verdict = sp.compare_f1_e0(m)["verdict"]
euler = sp.euler_exact(sp.Mixture("3:0.5,4:0.5"), 5, 10.0)
try:
    sp.Mixture("2:0.6,2:0.4")
    err = ""
except sp.SpinscapeError as e:
    err = str(e)
"#,
            None,
            Some(&locals),
        )
        .unwrap();
        let get = |k: &str| locals.get_item(k).unwrap().unwrap();
        assert!((get("g").extract::<f64>().unwrap() + 0.146_672).abs() < 1e-6);
        assert_eq!(get("cls").extract::<String>().unwrap(), "FullMixture");
        assert_eq!(get("verdict").extract::<String>().unwrap(), "Less");
        let (sign, log_abs): (i8, f64) = get("euler").extract().unwrap();
        assert!((sign as f64 * log_abs.exp() - 2.0).abs() < 1e-6);
        assert!(get("err")
            .extract::<String>()
            .unwrap()
            .starts_with("DuplicateDegree"));
    });
}
