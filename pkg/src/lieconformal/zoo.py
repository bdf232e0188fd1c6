"""Standard conformal algebras, modules, and filtrations.

Every constructor returns structure rules for *both* orientations of each
generator pair computed from the defining formulas independently, so the
skew-symmetry checker exercises a genuine identity.

Truncated infinite families (the general conformal algebras and their
graded versions) carry a finite index window; brackets that would leave it
raise TruncationOverflow.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .algebra import ConformalAlgebra, ConformalModule, LambdaExpr, lam_add
from .poly import MultiPoly, v
from .scalars import binom


def _p(expr) -> MultiPoly:
    if isinstance(expr, MultiPoly):
        return expr
    return MultiPoly.const(expr)


def _param_names(*exprs) -> set:
    names = set()
    for e in exprs:
        if isinstance(e, MultiPoly):
            names |= set(e.vars)
    return names


def virasoro() -> ConformalAlgebra:
    l, d = v("l"), v("d")

    def rule(a, b):
        return {"L": d + 2 * l}

    return ConformalAlgebra(("L",), rule, name="virasoro")


def free_module(Delta, alpha=0) -> ConformalModule:
    """Rank-one free module over Virasoro: L acts by (alpha + d + Delta*l)."""
    l, d = v("l"), v("d")
    alg = virasoro()
    weight = _p(alpha) + d + _p(Delta) * l

    def action(gid, k):
        return {0: weight}

    name = f"M({Delta},{alpha})"
    return ConformalModule(alg, (0,), action, name=name,
                           params=_param_names(weight))


def trivial_module(algebra: ConformalAlgebra, alpha=0) -> ConformalModule:
    """One-dimensional module with zero lambda-action; d acts by ``alpha``."""

    def action(gid, k):
        return {}

    return ConformalModule(algebra, (0,), action,
                           partial_scalars={0: Fraction(alpha) if isinstance(alpha, int) else alpha},
                           name="trivial")


def semidirect(a) -> ConformalAlgebra:
    """Virasoro extended by a rank-one abelian ideal of conformal weight ``a``."""
    l, d = v("l"), v("d")
    a = _p(a)

    def rule(gi, gj):
        if gi == "L" and gj == "L":
            return {"L": d + 2 * l}
        if gi == "L" and gj == "J":
            return {"J": d + a * l}
        if gi == "J" and gj == "L":
            return {"J": a * l + (a - 1) * d}
        return {}

    return ConformalAlgebra(("L", "J"), rule, name="semidirect",
                            params=_param_names(a))


def gc1(N: int) -> ConformalAlgebra:
    """Truncation of the rank-one general conformal algebra, indices 0..N."""
    l, d = v("l"), v("d")

    def rule(m, n):
        out: LambdaExpr = {}
        for s in range(m + 1):
            coeff = binom(m + 1, s + 1) * (l + d) ** (s + 1)
            out = lam_add(out, {m + n - s: coeff})
        for s in range(n + 1):
            coeff = -binom(n + 1, s + 1) * (-l) ** (s + 1)
            out = lam_add(out, {m + n - s: coeff})
        return out

    return ConformalAlgebra(tuple(range(N + 1)), rule, name=f"gc1[0..{N}]",
                            truncation=N)


def gr_gc1(N: int) -> ConformalAlgebra:
    """Truncation of the graded rank-one general conformal algebra."""
    l, d = v("l"), v("d")

    def rule(i, j):
        return {i + j: (i + j + 2) * l + (i + 1) * d}

    return ConformalAlgebra(tuple(range(N + 1)), rule, name=f"gr_gc1[0..{N}]",
                            truncation=N)


def gcN(size: int, N: int) -> ConformalAlgebra:
    """Truncation of the matrix general conformal algebra.

    Generators are (m, a, b) with polynomial degree m in 0..N and matrix
    unit position (a, b), 1-based, in a size x size square.
    """
    l, d = v("l"), v("d")

    def rule(gi, gj):
        m, a, b = gi
        n, c, e = gj
        out: LambdaExpr = {}
        if b == c:
            for s in range(m + 1):
                out = lam_add(out, {(m + n - s, a, e): binom(m, s) * (l + d) ** s})
        if e == a:
            for s in range(n + 1):
                out = lam_add(out, {(m + n - s, c, b): -binom(n, s) * (-l) ** s})
        return out

    gens = tuple((m, a, b)
                 for m in range(N + 1)
                 for a in range(1, size + 1)
                 for b in range(1, size + 1))
    return ConformalAlgebra(gens, rule, name=f"gc{size}[0..{N}]",
                            truncation=N)


# -- filtrations ----------------------------------------------------------

@dataclass(frozen=True)
class FiltrationSpec:
    """Integer degree for each generator; brackets must not raise degree."""

    degrees: dict

    def degree(self, gid) -> int:
        return self.degrees[gid]


def check_filtration(algebra: ConformalAlgebra, spec: FiltrationSpec,
                     expected: ConformalAlgebra | None = None) -> dict:
    """Verify the degree map filters the bracket, and optionally compare
    the associated graded structure against a reference algebra.

    A pair whose bracket overflows the truncated universe is skipped and
    counted; within a truncation window that is the best possible claim.
    """
    from .algebra import TruncationOverflow, lam_is_zero, lam_sub

    report = {"closed": True, "violations": [], "checked": 0, "skipped": 0}
    graded = associated_graded(algebra, spec)
    for gi in algebra.generators:
        for gj in algebra.generators:
            try:
                val = algebra.structure(gi, gj)
            except TruncationOverflow:
                report["skipped"] += 1
                continue
            report["checked"] += 1
            bound = spec.degree(gi) + spec.degree(gj)
            for g, p in val.items():
                if spec.degree(g) > bound:
                    report["closed"] = False
                    report["violations"].append((gi, gj, g))
    if expected is not None:
        mism = []
        for gi in algebra.generators:
            for gj in algebra.generators:
                if gi not in expected._universe or gj not in expected._universe:
                    continue
                try:
                    got = graded.structure(gi, gj)
                    want = expected.structure(gi, gj)
                except TruncationOverflow:
                    continue
                if not lam_is_zero(lam_sub(got, want)):
                    mism.append((gi, gj))
        report["graded_mismatches"] = mism
        report["graded_matches_expected"] = not mism
    return report


def associated_graded(algebra: ConformalAlgebra, spec: FiltrationSpec) -> ConformalAlgebra:
    """Keep only the top-degree part of each bracket: components whose
    output degree equals the sum of the input degrees."""

    def rule(gi, gj):
        val = algebra.structure(gi, gj)
        bound = spec.degree(gi) + spec.degree(gj)
        return {g: p for g, p in val.items() if spec.degree(g) == bound}

    return ConformalAlgebra(algebra.generators, rule,
                            name=f"gr({algebra.name})", params=algebra.params,
                            truncation=algebra.truncation)


# Aliases under constructor-style names.
make_vir = virasoro
make_M = free_module
make_semidirect = semidirect
make_gc1 = gc1
make_gr_gc1 = gr_gc1
make_gcN = gcN
