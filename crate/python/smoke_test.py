"""Quick end-to-end check of the Python bindings."""

import json
import math
from pathlib import Path

import ribbon_tqft as rt

INPUTS = Path(__file__).resolve().parent.parent / "inputs"


def close(a, b, tol=1e-9):
    return abs(a - b) < tol


def main():
    assert set(rt.BUNDLED) == {"trivial", "semion", "fibonacci"}
    fib = rt.Category.bundled("fibonacci")
    phi = (1 + math.sqrt(5)) / 2
    assert fib.labels == ["1", "tau"]
    assert close(fib.global_dimension, math.sqrt(2 + phi))
    assert close(abs(fib.gauss_sum) ** 2, fib.global_dimension.real ** 2)
    assert fib.fusion(1, 1, 1) == 1

    ok, report = fib.validate()
    assert ok and json.loads(report)["passed"]

    d = fib.global_dimension
    assert close(fib.tau(""), 1 / d)
    assert close(fib.tau("slice cup[?c] @1\nslice cap[?c] @1"), 1)
    assert close(fib.tau((INPUTS / "diagrams/unknot_plus1.rd").read_text()), 1 / d)

    cyl = (INPUTS / "cobordisms/cylinder_11.cob").read_text()
    for b in fib.eval_functor(cyl):
        if b.i == b.j:
            assert b.matrix == [[1 + 0j]], b
    blocks = json.loads(fib.eval_functor_json(cyl))["blocks"]
    assert len(blocks) == fib.rank ** 2

    t = rt.DecoratedType("(1,2; 1)")
    u = rt.DecoratedType("(2,1; tau+)")
    c, prod, direct = fib.compose_types(t, u)
    assert str(c) == "(1,1; 1, 1, (tau,+))" and prod == direct
    assert t.compose(u) == c

    ok, report = rt.Category.bundled("semion").verify()
    assert ok, [x["name"] for x in json.loads(report)["checks"] if not x["passed"]]

    bad = rt.Category.from_json((INPUTS / "categories/fibonacci_perturbed.json").read_text())
    assert not bad.validate()[0]
    try:
        fib.tau("slice frobnicate @1")
    except rt.InputError:
        pass
    else:
        raise AssertionError("expected InputError")
    try:
        fib.tau((INPUTS / "diagrams/open.rd").read_text())
    except rt.DomainError:
        pass
    else:
        raise AssertionError("expected DomainError")
    print("smoke test passed")


if __name__ == "__main__":
    main()
