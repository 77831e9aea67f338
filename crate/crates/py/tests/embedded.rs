use std::ffi::CString;

use pyagcode::pyagcode;
use pyo3::prelude::*;

fn run(code: &str) -> PyResult<()> {
    pyo3::append_to_inittab!(pyagcode);
    Python::initialize();
    Python::attach(|py| py.run(&CString::new(code).unwrap(), None, None))
}

#[test]
fn module_works_in_an_embedded_interpreter() {
    let script = r#"
import pyagcode
code = pyagcode.construct("fermat", 3)
assert (code.n, code.k, code.distance_bound) == (16, 3, 12)
assert code.min_distance() == 12
assert code.faithful() == (True, 16, 16)
word = code.encode([0, 0, 1])
assert len(word) == 16 and all(w != 0 for w in word)
pl = pyagcode.Instance.builtin("projline", 7).build()
assert (pl.n, pl.k, pl.min_distance()) == (7, 4, 4)
f = pyagcode.Field(2, 4)
assert f.modulus == [1, 0, 0, 1, 1]
assert f.pow(f.root_of_unity(5), 5) == 1
try:
    pyagcode.construct("projline", 4)
    raise AssertionError("expected ValueError")
except ValueError:
    pass
"#;
    run(script).unwrap();
}
