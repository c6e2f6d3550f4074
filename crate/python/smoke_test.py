"""Smoke test for the plancherel extension module.

Build and run from the repository root:

    cargo build --release -p plancherel-py
    cp target/release/libplancherel.so python/plancherel.so
    python3 python/smoke_test.py
"""

import json
import math
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))

import plancherel  # noqa: E402


def main():
    inv = plancherel.Invariants.iwahori(2, 2)
    assert json.loads(inv.validate()) == []
    comps = json.loads(inv.components())
    assert [c["selector"] for c in comps] == ["2", "1+1"], comps

    d = inv.density("1+1")
    assert str(d.constant) == "(q + 1)/q"
    assert abs(d.eval(2.0, [(1.0, 0.0), (-1.0, 0.0)]) - 8.0 / 3.0) < 1e-12
    for q in (2.0, 3.0, 5.0):
        mass, delta = d.integrate(q)
        assert abs(mass - 1.0) < 1e-6 and delta < 1e-9, (q, mass, delta)

    st = inv.density("2")
    mass, _ = st.integrate(3.0)
    assert abs(mass - 2.0) < 1e-12
    assert json.loads(st.kappa())["kappa"] is not None

    gl3 = plancherel.Invariants(
        '{"q": 3, "cuspidals": [{"m": 1, "e": 3, "r": 1, "d": "1", "delta": 0, "f_self": 0}]}'
    )
    mu = gl3.density("2+1").mu
    gamma = plancherel.RatFunc("(q^2 + q + 1)/q^2")
    expected = plancherel.FactoredExpr(
        f"({gamma * gamma * plancherel.RatFunc('q')}) * |1 - z2/z1 * q^(-1/2)|^2 * |1 - z2/z1 * q^(-3/2)|^(-2)"
    )
    assert mu.exact_eq(expected), (str(mu), str(expected))

    lam = plancherel.lambda_df(2, 1)
    assert math.isfinite(lam.eval(3.0))

    reports = json.loads(plancherel.run_verify(["poincare", "macdonald"]))
    assert all(r["failed"] == 0 for r in reports), reports

    for bad, exc in (("not json", ValueError),):
        try:
            plancherel.Invariants(bad)
        except exc:
            pass
        else:
            raise AssertionError("expected failure")
    try:
        inv.density("3")
    except IndexError:
        pass
    else:
        raise AssertionError("expected IndexError")

    print("smoke test ok")


if __name__ == "__main__":
    main()
