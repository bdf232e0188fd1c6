import pytest

from lieconformal.algebra import (ConformalAlgebra, ConformalModule,
                                  TruncationOverflow, lam_add, lam_is_zero,
                                  lam_scale, lam_sub)
from lieconformal.poly import MultiPoly, v
from lieconformal.zoo import free_module, trivial_module, virasoro


def test_lam_helpers():
    l = v("l")
    a = {"x": l, "y": 2 * l}
    b = {"y": -2 * l, "z": l}
    s = lam_add(a, b)
    assert s == {"x": l, "z": l}
    assert lam_sub(a, a) == {}
    assert lam_scale(MultiPoly.const(3), a) == {"x": 3 * l, "y": 6 * l}
    assert lam_is_zero({})
    assert not lam_is_zero(a)


def test_duplicate_generators_rejected():
    with pytest.raises(ValueError):
        ConformalAlgebra(("L", "L"), lambda a, b: {})


def test_unknown_generator_rejected():
    alg = virasoro()
    with pytest.raises(KeyError):
        alg.structure("L", "X")


def test_structure_coefficient_variable_guard():
    bad = ConformalAlgebra(("L",), lambda a, b: {"L": v("m")})
    with pytest.raises(ValueError):
        bad.structure("L", "L")


def test_params_allowed_when_declared():
    alg = ConformalAlgebra(("L",), lambda a, b: {"L": v("c") * v("l")},
                           params=("c",))
    assert alg.structure("L", "L") == {"L": v("c") * v("l")}


def test_truncation_overflow_carries_generator():
    alg = ConformalAlgebra((0,), lambda a, b: {1: v("l")})
    with pytest.raises(TruncationOverflow) as ei:
        alg.structure(0, 0)
    assert ei.value.gid == 1


def test_virasoro_axioms_hold():
    alg = virasoro()
    assert lam_is_zero(alg.check_skew("L", "L"))
    assert lam_is_zero(alg.check_jacobi("L", "L", "L"))
    rep = alg.verify()
    assert rep["failures"] == []
    assert rep["skew_checked"] == 1
    assert rep["jacobi_checked"] == 1


def test_skew_failure_detected():
    l, d = v("l"), v("d")
    bad = ConformalAlgebra(("L",), lambda a, b: {"L": d + 3 * l})
    res = bad.check_skew("L", "L")
    # (d + 3l) + (d + 3(-l-d)) = -d
    assert res == {"L": -d}
    rep = bad.verify()
    kinds = {k for k, *_ in rep["failures"]}
    assert "skew" in kinds


def test_jacobi_failure_with_good_skew():
    # L a Virasoro element, J a primary of weight 3 that also brackets
    # with itself Virasoro-style: skew holds on every pair, but the mixed
    # Jacobi identity on (L, J, J) fails with residual -l*(d + l + 2m) * J,
    # derived by hand from the three nested brackets.
    l, m, d = v("l"), v("m"), v("d")

    def rule(a, b):
        if a == "L" and b == "L":
            return {"L": d + 2 * l}
        if a == "L" and b == "J":
            return {"J": d + 3 * l}
        if a == "J" and b == "L":
            return {"J": 3 * l + 2 * d}
        return {"J": d + 2 * l}

    alg = ConformalAlgebra(("L", "J"), rule)
    assert lam_is_zero(alg.check_skew("L", "J"))
    assert lam_is_zero(alg.check_skew("J", "J"))
    res = alg.check_jacobi("L", "J", "J")
    assert res == {"J": -l * (d + l + 2 * m)}


def test_jacobi_residual_lives_in_l_m_d():
    alg = virasoro()
    res = alg.check_jacobi("L", "L", "L")
    for p in res.values():
        assert set(p.vars) <= {"l", "m", "d"}


def test_structure_memoized():
    calls = []

    def rule(a, b):
        calls.append((a, b))
        return {"L": v("d") + 2 * v("l")}

    alg = ConformalAlgebra(("L",), rule)
    alg.structure("L", "L")
    alg.structure("L", "L")
    assert calls == [("L", "L")]


# -- modules --------------------------------------------------------------

def test_free_module_satisfies_module_identity():
    for Delta, alpha in [(1, 0), (2, 0), (0, 5), (-3, 2)]:
        mod = free_module(Delta, alpha)
        rep = mod.verify()
        assert rep["failures"] == [], (Delta, alpha)
        assert rep["module_checked"] == 1


def test_free_module_action_formula():
    mod = free_module(2, 3)
    l, d = v("l"), v("d")
    assert mod.action("L", 0) == {0: 3 + d + 2 * l}


def test_broken_module_action_detected():
    alg = virasoro()
    l, d = v("l"), v("d")
    mod = ConformalModule(alg, (0,), lambda g, k: {0: d + l ** 2})
    rep = mod.verify()
    assert rep["failures"] != []


def test_trivial_module_zero_action():
    mod = trivial_module(virasoro(), alpha=7)
    rep = mod.verify()
    assert rep["failures"] == []
    assert mod.action("L", 0) == {}


def test_module_unknown_keys_rejected():
    mod = free_module(1, 0)
    with pytest.raises(KeyError):
        mod.action("X", 0)
    with pytest.raises(KeyError):
        mod.action("L", 5)
