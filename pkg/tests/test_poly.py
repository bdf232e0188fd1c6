from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lieconformal.poly import MultiPoly, eliminate_partial, substitute, v
from lieconformal.scalars import QuadExt

# -- strategies -----------------------------------------------------------

coeffs = st.builds(Fraction,
                   st.integers(min_value=-50, max_value=50),
                   st.integers(min_value=1, max_value=8))
names = st.sampled_from(["d", "l", "m", "a"])


@st.composite
def polys(draw):
    n = draw(st.integers(min_value=0, max_value=4))
    p = MultiPoly.zero()
    for _ in range(n):
        c = draw(coeffs)
        term = MultiPoly.const(c)
        for _ in range(draw(st.integers(min_value=0, max_value=3))):
            term = term * v(draw(names))
        p = p + term
    return p


# -- normalization --------------------------------------------------------

def test_unused_vars_stripped_for_structural_equality():
    p = v("l") + v("d") - v("d")
    assert p.vars == ("l",)
    assert p == v("l")


def test_zero_terms_pruned():
    p = 2 * v("l") - 2 * v("l")
    assert p.is_zero
    assert p.terms == {}
    assert p == 0


def test_var_order_geometric_before_params():
    p = v("b") * v("l") * v("d") * v("c")
    assert p.vars == ("d", "l", "b", "c")


def test_constructor_rejects_negative_power():
    with pytest.raises(ValueError):
        v("l") ** -1


# -- ring axioms (property-based) ----------------------------------------

@settings(max_examples=60, deadline=None)
@given(polys(), polys(), polys())
def test_ring_axioms(p, q, r):
    assert (p + q) + r == p + (q + r)
    assert p + q == q + p
    assert p * q == q * p
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r
    assert p + MultiPoly.zero() == p
    assert p * MultiPoly.const(1) == p
    assert p - p == MultiPoly.zero()


@settings(max_examples=30, deadline=None)
@given(polys(), st.integers(min_value=0, max_value=4))
def test_pow_matches_repeated_multiplication(p, n):
    expected = MultiPoly.const(1)
    for _ in range(n):
        expected = expected * p
    assert p ** n == expected


# -- arithmetic oracles ---------------------------------------------------

def test_known_product():
    l, d = v("l"), v("d")
    p = (l + d) ** 2
    assert p == l * l + 2 * l * d + d * d
    assert p.degree() == 2
    assert p.degree_in("l") == 2


def test_scalar_coercion_and_fractions():
    l = v("l")
    p = Fraction(1, 2) * l + Fraction(1, 2) * l
    assert p == l
    q = l / 2 + l / 2
    assert q == l


def test_quadext_coefficients():
    r = QuadExt.sqrt(19)
    l = v("l")
    p = r * l
    assert p * p == 19 * l * l
    assert (p - r * l).is_zero


# -- substitution ---------------------------------------------------------

def test_substitute_simultaneous_swap():
    l, m = v("l"), v("m")
    p = l ** 2 + 3 * m
    q = p.substitute({"l": m, "m": l})
    assert q == m ** 2 + 3 * l


def test_substitute_polynomial_value():
    l, d = v("l"), v("d")
    p = l ** 2
    assert p.substitute({"l": l + d}) == l ** 2 + 2 * l * d + d ** 2


def test_substitute_absent_name_is_identity_on_method():
    p = v("l") + 1
    assert p.substitute({"zz": v("d")}) == p


def test_strict_substitute_rejects_unknown_name():
    with pytest.raises(KeyError):
        substitute(v("l") + 1, {"zz": v("d")})


def test_eliminate_partial():
    d, l1, l2 = v("d"), v("l1"), v("l2")
    p = d ** 2 + d * l1
    q = eliminate_partial(p, ["l1", "l2"])
    s = -(l1 + l2)
    assert q == s * s + s * l1
    with pytest.raises(ValueError):
        eliminate_partial(p, [])


@settings(max_examples=40, deadline=None)
@given(polys(), polys(), polys())
def test_substitution_is_ring_homomorphism(p, q, r):
    sub = {"l": r}
    assert (p + q).substitute(sub) == p.substitute(sub) + q.substitute(sub)
    assert (p * q).substitute(sub) == p.substitute(sub) * q.substitute(sub)


# -- structure queries ----------------------------------------------------

def test_coefficients_split():
    l, d, b = v("l"), v("d"), v("b")
    p = 3 * l ** 2 + b * l * d + (b ** 2 + 1) * d
    rows = p.coefficients(("l", "d"))
    assert rows[(2, 0)] == MultiPoly.const(3)
    assert rows[(1, 1)] == b
    assert rows[(0, 1)] == b ** 2 + 1
    assert set(rows) == {(2, 0), (1, 1), (0, 1)}


def test_homogeneous_part():
    l, d = v("l"), v("d")
    p = (l + d) ** 3 + l + 5
    assert p.homogeneous_part(3) == (l + d) ** 3
    assert p.homogeneous_part(1) == l
    assert p.homogeneous_part(0) == MultiPoly.const(5)
    assert p.homogeneous_part(2).is_zero


def test_homogeneous_part_restricted_vars():
    l, b = v("l"), v("b")
    p = b ** 3 * l + b
    assert p.homogeneous_part(1, vars={"l"}) == b ** 3 * l
    assert p.homogeneous_part(0, vars={"l"}) == b


def test_degree_conventions():
    assert MultiPoly.zero().degree() == -1
    assert MultiPoly.const(4).degree() == 0
    assert (v("l") * v("d")).degree() == 2
    assert (v("b") * v("l")).degree(vars={"l", "d"}) == 1


def test_constant_value():
    assert MultiPoly.const(Fraction(7, 2)).constant_value() == Fraction(7, 2)
    assert MultiPoly.zero().constant_value() == 0
    with pytest.raises(ValueError):
        v("l").constant_value()


def test_uses_only():
    assert (v("l") + v("d")).uses_only({"l", "d"})
    assert not (v("b") * v("l")).uses_only({"l", "d"})


# -- printing -------------------------------------------------------------

def test_to_str_deterministic_forms():
    l, d = v("l"), v("d")
    assert MultiPoly.zero().to_str() == "0"
    assert (2 * l + d).to_str() == "d + 2*l"
    assert (d ** 2 - l).to_str() == "d^2 - l"
    assert (-l).to_str() == "-l"
    assert (Fraction(3, 2) * l * d).to_str() == "3/2*d*l"


def test_to_str_orders_same_degree_terms_stably():
    l, d = v("l"), v("d")
    a = (l * d + d ** 2).to_str()
    b = (d ** 2 + l * d).to_str()
    assert a == b
