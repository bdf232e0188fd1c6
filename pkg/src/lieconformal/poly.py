"""Multivariate polynomials with exact coefficients.

Terms are a finitely supported map from dense exponent vectors to scalars
(Fraction or QuadExt).  Every polynomial carries the tuple of indeterminate
names its exponent vectors refer to; unused names are dropped on
normalization so structural equality coincides with mathematical equality.

Reserved geometric names: 'd' (the translation generator), 'l' (the bracket
variable), 'm' (second bracket variable), 'l1','l2','l3' (cochain slots),
'x'.  Any other name is an inert parameter and sorts after these.
"""

from __future__ import annotations

from fractions import Fraction

from .scalars import QuadExt, scalar_str

GEOM_VARS = ("d", "l", "m", "x", "l1", "l2", "l3")
_PRIMARY = {n: i for i, n in enumerate(GEOM_VARS)}

ScalarTypes = (int, Fraction, QuadExt)


def _var_key(name: str):
    if name in _PRIMARY:
        return (0, _PRIMARY[name], "")
    return (1, 0, name)


class MultiPoly:
    __slots__ = ("vars", "terms")

    def __init__(self, vars: tuple[str, ...] = (), terms: dict | None = None):
        terms = {e: c for e, c in (terms or {}).items() if c}
        used = [i for i in range(len(vars)) if any(e[i] for e in terms)]
        if len(used) != len(vars):
            vars = tuple(vars[i] for i in used)
            terms = {tuple(e[i] for i in used): c for e, c in terms.items()}
        self.vars = vars
        self.terms = terms

    # -- constructors -----------------------------------------------------

    @classmethod
    def const(cls, c) -> "MultiPoly":
        if isinstance(c, int):
            c = Fraction(c)
        return cls((), {(): c} if c else {})

    @classmethod
    def var(cls, name: str, exp: int = 1) -> "MultiPoly":
        if exp < 0:
            raise ValueError("negative exponent")
        if exp == 0:
            return cls.const(1)
        return cls((name,), {(exp,): Fraction(1)})

    @classmethod
    def zero(cls) -> "MultiPoly":
        return cls((), {})

    # -- alignment --------------------------------------------------------

    def _aligned(self, other: "MultiPoly"):
        if self.vars == other.vars:
            return self.vars, self.terms, other.terms
        allvars = tuple(sorted(set(self.vars) | set(other.vars), key=_var_key))
        return allvars, self._remap(allvars), other._remap(allvars)

    def _remap(self, allvars: tuple[str, ...]) -> dict:
        idx = {n: i for i, n in enumerate(allvars)}
        pos = [idx[n] for n in self.vars]
        out = {}
        for e, c in self.terms.items():
            vec = [0] * len(allvars)
            for p, ei in zip(pos, e):
                vec[p] = ei
            out[tuple(vec)] = c
        return out

    # -- ring operations --------------------------------------------------

    @staticmethod
    def _coerce(other):
        if isinstance(other, MultiPoly):
            return other
        if isinstance(other, ScalarTypes):
            return MultiPoly.const(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        vars, a, b = self._aligned(o)
        out = dict(a)
        for e, c in b.items():
            out[e] = out.get(e, 0) + c
        return MultiPoly(vars, out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not o.vars and len(o.terms) <= 1:
            c0 = o.terms.get((), 0)
            return MultiPoly(self.vars, {e: c * c0 for e, c in self.terms.items()})
        vars, a, b = self._aligned(o)
        out = {}
        for ea, ca in a.items():
            for eb, cb in b.items():
                key = tuple(i + j for i, j in zip(ea, eb))
                out[key] = out.get(key, 0) + ca * cb
        return MultiPoly(vars, out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, ScalarTypes):
            return self * (Fraction(1) / other)
        return NotImplemented

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative exponent")
        result = MultiPoly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.vars == o.vars and self.terms == o.terms

    def __bool__(self):
        return bool(self.terms)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    # -- structure --------------------------------------------------------

    def degree(self, vars: set | None = None) -> int:
        """Total degree (in the given variables; all by default); zero poly -> -1."""
        if not self.terms:
            return -1
        if vars is None:
            return max(sum(e) for e in self.terms)
        pos = [i for i, n in enumerate(self.vars) if n in vars]
        return max((sum(e[i] for i in pos) for e in self.terms), default=0)

    def degree_in(self, name: str) -> int:
        if name not in self.vars:
            return 0 if self.terms else -1
        i = self.vars.index(name)
        return max(e[i] for e in self.terms)

    def homogeneous_part(self, k: int, vars: set | None = None) -> "MultiPoly":
        if vars is None:
            keep = lambda e: sum(e) == k
        else:
            pos = [i for i, n in enumerate(self.vars) if n in vars]
            keep = lambda e: sum(e[i] for i in pos) == k
        return MultiPoly(self.vars, {e: c for e, c in self.terms.items() if keep(e)})

    def coefficients(self, names: tuple[str, ...]) -> dict[tuple[int, ...], "MultiPoly"]:
        """Collect coefficients with respect to the named indeterminates.

        Returns a map from exponent vectors over ``names`` to polynomials in
        the remaining indeterminates.
        """
        pos = {n: self.vars.index(n) for n in names if n in self.vars}
        rest = [i for i, n in enumerate(self.vars) if n not in names]
        restvars = tuple(self.vars[i] for i in rest)
        out: dict[tuple[int, ...], dict] = {}
        for e, c in self.terms.items():
            key = tuple(e[pos[n]] if n in pos else 0 for n in names)
            sub = tuple(e[i] for i in rest)
            out.setdefault(key, {})[sub] = c
        return {k: MultiPoly(restvars, t) for k, t in out.items()}

    def constant_value(self):
        if self.vars:
            raise ValueError(f"not a constant: {self}")
        return self.terms.get((), Fraction(0))

    def uses_only(self, names: set) -> bool:
        return set(self.vars) <= set(names)

    # -- substitution -----------------------------------------------------

    def substitute(self, assignments: dict) -> "MultiPoly":
        """Simultaneously substitute polynomials (or scalars) for variables.

        Names absent from this polynomial are ignored.
        """
        live = {n: MultiPoly._coerce(v) for n, v in assignments.items() if n in self.vars}
        if not live:
            return self
        result = MultiPoly.zero()
        cache: dict[tuple[str, int], MultiPoly] = {}

        def power(name, e):
            key = (name, e)
            if key not in cache:
                cache[key] = live[name] ** e
            return cache[key]

        for e, c in self.terms.items():
            factor = MultiPoly.const(c)
            for name, ei in zip(self.vars, e):
                if ei == 0:
                    continue
                if name in live:
                    factor = factor * power(name, ei)
                else:
                    factor = factor * MultiPoly((name,), {(ei,): Fraction(1)})
            result = result + factor
        return result

    def rename(self, mapping: dict[str, str]) -> "MultiPoly":
        return self.substitute({a: MultiPoly.var(b) for a, b in mapping.items()})

    # -- printing ---------------------------------------------------------

    def to_str(self) -> str:
        if not self.terms:
            return "0"
        items = sorted(self.terms.items(), key=lambda ec: (-sum(ec[0]), tuple(-x for x in ec[0])))
        parts = []
        for e, c in items:
            mono = "*".join(
                n if ei == 1 else f"{n}^{ei}"
                for n, ei in zip(self.vars, e) if ei
            )
            if isinstance(c, QuadExt):
                cs = f"({scalar_str(c)})"
                neg = False
            else:
                neg = c < 0
                cabs = -c if neg else c
                cs = None if (cabs == 1 and mono) else str(cabs)
            body = "*".join(p for p in (cs, mono) if p)
            if not parts:
                parts.append(("-" if neg else "") + body)
            else:
                parts.append(("- " if neg else "+ ") + body)
        return " ".join(parts)

    def __repr__(self):
        return f"<poly {self.to_str()}>"


def substitute(p: MultiPoly, assignments: dict) -> MultiPoly:
    """Strict substitution: every assigned name must occur in ``p``."""
    for name in assignments:
        if name not in p.vars:
            raise KeyError(f"unknown indeterminate {name!r} (have {p.vars})")
    return p.substitute(assignments)


def eliminate_partial(p: MultiPoly, lambda_vars: list[str]) -> MultiPoly:
    """Reduce modulo the relation d = -(sum of the given lambda variables)."""
    if not lambda_vars:
        raise ValueError("lambda_vars must be non-empty")
    repl = MultiPoly.zero()
    for n in lambda_vars:
        repl = repl - MultiPoly.var(n)
    return p.substitute({"d": repl})


def v(name: str) -> MultiPoly:
    """Shorthand variable constructor."""
    return MultiPoly.var(name)
