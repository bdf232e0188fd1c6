"""Conformal algebras presented by structure polynomials.

A structure rule maps an ordered pair of generator ids to a lambda-bracket
value: a finitely supported map ``{generator id: polynomial in ('l', 'd')}``
where 'l' is the bracket variable and 'd' the translation generator acting
on the output.  Rules are total on ordered pairs (both orientations are
stored or computed independently, so the skew-symmetry check is a real
check, not a tautology).

Truncated universes raise :class:`TruncationOverflow` when a bracket would
produce a generator outside the universe; that is a modelling limit, not an
axiom failure, and the checks distinguish the two.
"""

from __future__ import annotations

from typing import Callable, Iterable, Union

from .poly import MultiPoly, v

GeneratorId = Union[int, str, tuple]
LambdaExpr = dict  # GeneratorId -> MultiPoly in ('l', 'd')


class TruncationOverflow(Exception):
    """A bracket left the (finite) generator universe."""

    def __init__(self, gid, pair=None):
        self.gid = gid
        self.pair = pair
        where = f" in bracket {pair}" if pair else ""
        super().__init__(f"generator {gid!r} outside universe{where}")


def lam_zero() -> LambdaExpr:
    return {}


def lam_add(a: LambdaExpr, b: LambdaExpr) -> LambdaExpr:
    out = dict(a)
    for g, p in b.items():
        q = out.get(g)
        q = p if q is None else q + p
        if q.is_zero:
            out.pop(g, None)
        else:
            out[g] = q
    return out


def lam_scale(p: MultiPoly, a: LambdaExpr) -> LambdaExpr:
    out = {}
    for g, q in a.items():
        r = p * q
        if not r.is_zero:
            out[g] = r
    return out


def lam_sub(a: LambdaExpr, b: LambdaExpr) -> LambdaExpr:
    return lam_add(a, lam_scale(MultiPoly.const(-1), b))


def lam_map(f: Callable[[MultiPoly], MultiPoly], a: LambdaExpr) -> LambdaExpr:
    out = {}
    for g, p in a.items():
        q = f(p)
        if not q.is_zero:
            out[g] = q
    return out


def lam_is_zero(a: LambdaExpr) -> bool:
    return all(p.is_zero for p in a.values())


class ConformalAlgebra:
    """Finite (possibly truncated) family of generators with a bracket rule.

    ``rule(gi, gj)`` must return a LambdaExpr for every ordered pair of
    universe members, or raise TruncationOverflow.  Results are memoized.
    """

    def __init__(self, generators: Iterable[GeneratorId],
                 rule: Callable[[GeneratorId, GeneratorId], LambdaExpr],
                 name: str = "", params: Iterable[str] = (),
                 truncation: int | None = None):
        self.generators = tuple(generators)
        self._universe = set(self.generators)
        if len(self._universe) != len(self.generators):
            raise ValueError("duplicate generator ids")
        self._rule = rule
        self._cache: dict[tuple, LambdaExpr] = {}
        self.name = name
        self.params = frozenset(params)
        self.truncation = truncation
        self._allowed_vars = {"l", "d"} | self.params

    def __contains__(self, gid) -> bool:
        return gid in self._universe

    def structure(self, gi: GeneratorId, gj: GeneratorId) -> LambdaExpr:
        """The bracket of gi with gj, coefficients in ('l', 'd')."""
        if gi not in self._universe or gj not in self._universe:
            raise KeyError(f"unknown generator in pair ({gi!r}, {gj!r})")
        key = (gi, gj)
        if key not in self._cache:
            value = self._rule(gi, gj)
            for g, p in value.items():
                if g not in self._universe:
                    raise TruncationOverflow(g, key)
                bad = set(p.vars) - self._allowed_vars
                if bad:
                    raise ValueError(f"structure coefficient uses {bad} at {key}")
            self._cache[key] = {g: p for g, p in value.items() if not p.is_zero}
        return self._cache[key]

    def with_params(self, bindings: dict) -> "ConformalAlgebra":
        """Substitute values (scalars or polynomials) for symbolic parameters."""
        unknown = set(bindings) - self.params
        if unknown:
            raise KeyError(f"not parameters of this algebra: {sorted(unknown)}")
        subs = {n: MultiPoly._coerce(x) for n, x in bindings.items()}
        remaining = self.params - set(bindings)

        def rule(gi, gj):
            val = self.structure(gi, gj)
            return {g: p.substitute(subs) for g, p in val.items()}

        return ConformalAlgebra(self.generators, rule, name=self.name,
                                params=remaining, truncation=self.truncation)

    # -- axiom residuals --------------------------------------------------

    def check_skew(self, gi, gj) -> LambdaExpr:
        """Residual of [a_l b] + [b_(-l-d) a]; zero iff skew-symmetry holds."""
        ab = self.structure(gi, gj)
        ba = self.structure(gj, gi)
        flipped = lam_map(lambda p: p.substitute({"l": -v("l") - v("d")}), ba)
        return lam_add(ab, flipped)

    def check_jacobi(self, gi, gj, gk) -> dict:
        """Residual of the Jacobi identity on (gi, gj, gk).

        Convention: first bracket variable 'l', second 'm'; the residual is
        a map {generator id: polynomial in ('l', 'm', 'd')}, identically
        zero iff  [a_l [b_m c]] = [[a_l b]_(l+m) c] + [b_m [a_l c]].
        """
        l, m, d = v("l"), v("m"), v("d")
        lhs = lam_zero()
        inner = self.structure(gj, gk)
        for g, p in inner.items():
            coeff = p.substitute({"l": m, "d": l + d})
            lhs = lam_add(lhs, lam_scale(coeff, self.structure(gi, g)))
        rhs = lam_zero()
        outer = self.structure(gi, gj)
        for g, p in outer.items():
            coeff = p.substitute({"d": -l - m})
            part = lam_map(lambda q: q.substitute({"l": l + m}), self.structure(g, gk))
            rhs = lam_add(rhs, lam_scale(coeff, part))
        inner2 = self.structure(gi, gk)
        for g, p in inner2.items():
            coeff = p.substitute({"d": m + d})
            part = lam_map(lambda q: q.substitute({"l": m}), self.structure(gj, g))
            rhs = lam_add(rhs, lam_scale(coeff, part))
        return lam_sub(lhs, rhs)

    # -- batch checks -----------------------------------------------------

    def verify(self, pairs=None, triples=None, skip_overflow: bool = True):
        """Run skew/Jacobi checks, collecting failures and overflow skips.

        Returns a dict: {'skew_checked', 'jacobi_checked', 'skipped',
        'failures'} where failures is a list of (kind, key, residual).
        """
        gens = self.generators
        if pairs is None:
            pairs = [(a, b) for i, a in enumerate(gens) for b in gens[i:]]
        if triples is None:
            triples = [(a, b, c) for a in gens for b in gens for c in gens]
        report = {"skew_checked": 0, "jacobi_checked": 0, "skipped": 0, "failures": []}
        for a, b in pairs:
            try:
                res = self.check_skew(a, b)
            except TruncationOverflow:
                if not skip_overflow:
                    raise
                report["skipped"] += 1
                continue
            report["skew_checked"] += 1
            if not lam_is_zero(res):
                report["failures"].append(("skew", (a, b), res))
        for a, b, c in triples:
            try:
                res = self.check_jacobi(a, b, c)
            except TruncationOverflow:
                if not skip_overflow:
                    raise
                report["skipped"] += 1
                continue
            report["jacobi_checked"] += 1
            if not lam_is_zero(res):
                report["failures"].append(("jacobi", (a, b, c), res))
        return report


def structurally_equal(a: ConformalAlgebra, b: ConformalAlgebra) -> bool:
    """Same generator set, truncation, parameters, and bracket table.

    Pairs on which both algebras overflow their truncation window count as
    agreeing; a pair defined on one side only is a mismatch.
    """
    if set(a.generators) != set(b.generators):
        return False
    if a.truncation != b.truncation or a.params != b.params:
        return False
    for gi in a.generators:
        for gj in a.generators:
            try:
                va = a.structure(gi, gj)
            except TruncationOverflow:
                va = None
            try:
                vb = b.structure(gi, gj)
            except TruncationOverflow:
                vb = None
            if (va is None) != (vb is None):
                return False
            if va is not None and not lam_is_zero(lam_sub(va, vb)):
                return False
    return True


class ConformalModule:
    """A module over a conformal algebra with a finite free/quotient basis.

    ``action(gid, k)`` gives the lambda-action of generator ``gid`` on basis
    vector ``k`` as a LambdaExpr over basis indices; ``partial_scalars``
    optionally records basis vectors on which the translation generator
    acts by a scalar (finite-dimensional components), applied to final
    residual coefficients.
    """

    def __init__(self, algebra: ConformalAlgebra, basis: Iterable,
                 action: Callable[[GeneratorId, object], LambdaExpr],
                 partial_scalars: dict | None = None, name: str = "",
                 params: Iterable[str] = ()):
        self.algebra = algebra
        self.basis = tuple(basis)
        self._basis_set = set(self.basis)
        self._action = action
        self._cache: dict[tuple, LambdaExpr] = {}
        self.partial_scalars = dict(partial_scalars or {})
        self.name = name
        self._allowed_vars = {"l", "d"} | set(params) | algebra.params

    def action(self, gid, k) -> LambdaExpr:
        if gid not in self.algebra._universe:
            raise KeyError(f"unknown generator {gid!r}")
        if k not in self._basis_set:
            raise KeyError(f"unknown basis vector {k!r}")
        key = (gid, k)
        if key not in self._cache:
            value = self._action(gid, k)
            for w, p in value.items():
                if w not in self._basis_set:
                    raise TruncationOverflow(w, key)
                bad = set(p.vars) - self._allowed_vars
                if bad:
                    raise ValueError(f"action coefficient uses {bad} at {key}")
            self._cache[key] = {w: p for w, p in value.items() if not p.is_zero}
        return self._cache[key]

    def check_module(self, gi, gj, k) -> LambdaExpr:
        """Residual of  [a_l b]_(l+m) v = a_l (b_m v) - b_m (a_l v)  on v = basis k."""
        l, m, d = v("l"), v("m"), v("d")
        lhs = lam_zero()
        for g, p in self.algebra.structure(gi, gj).items():
            coeff = p.substitute({"d": -l - m})
            part = lam_map(lambda q: q.substitute({"l": l + m}), self.action(g, k))
            lhs = lam_add(lhs, lam_scale(coeff, part))
        rhs = lam_zero()
        for w, p in self.action(gj, k).items():
            coeff = p.substitute({"l": m, "d": l + d})
            rhs = lam_add(rhs, lam_scale(coeff, self.action(gi, w)))
        for w, p in self.action(gi, k).items():
            coeff = p.substitute({"d": m + d})
            part = lam_map(lambda q: q.substitute({"l": m}), self.action(gj, w))
            rhs = lam_sub(rhs, lam_scale(coeff, part))
        res = lam_sub(lhs, rhs)
        if self.partial_scalars:
            fixed = {}
            for w, p in res.items():
                if w in self.partial_scalars:
                    p = p.substitute({"d": MultiPoly.const(self.partial_scalars[w])})
                if not p.is_zero:
                    fixed[w] = p
            res = fixed
        return res

    def verify(self, skip_overflow: bool = True):
        gens = self.algebra.generators
        report = {"module_checked": 0, "skipped": 0, "failures": []}
        for a in gens:
            for b in gens:
                for k in self.basis:
                    try:
                        res = self.check_module(a, b, k)
                    except TruncationOverflow:
                        if not skip_overflow:
                            raise
                        report["skipped"] += 1
                        continue
                    report["module_checked"] += 1
                    if not lam_is_zero(res):
                        report["failures"].append(("module", (a, b, k), res))
        return report
