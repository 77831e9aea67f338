"""Smoke test for the pyagcode extension module.

Build and install first, e.g. `pip install --no-build-isolation ./crates/py`
or `maturin develop -m crates/py/Cargo.toml`.
"""

import json

import pyagcode

f9 = pyagcode.Field(3, 2)
assert f9.order == 9 and f9.modulus == [1, 0, 1]
x = 3  # the generator, encoded
assert f9.mul(x, x) == 2  # x^2 = -1
assert f9.mul(x, f9.inv(x)) == 1

code = pyagcode.construct("fermat", 3)
assert (code.n, code.k, code.distance_bound) == (16, 3, 12), code
assert code.min_distance() == 12
assert code.distance_exact == 12
assert code.faithful() == (True, 16, 16)
assert len(code.matrix) == 3 and len(code.points) == 16

inst = pyagcode.Instance.builtin("projline", 9)
checks = inst.verify()
assert all(passed for _, passed, _ in checks), checks
again = pyagcode.Instance.from_json(inst.to_json())
assert again.build().matrix == inst.build().matrix
assert json.loads(code.to_json())["n"] == 16

try:
    pyagcode.construct("fermat", 2)
except ValueError as e:
    assert "no point Q'" in str(e)
else:
    raise AssertionError("fermat q=2 should be rejected")

try:
    pyagcode.construct("fermat", 3, m=4)
except pyagcode.ConditionFailed:
    pass
else:
    raise AssertionError("m=4 violates the orbit condition")

print("pyagcode smoke test passed:", code)
