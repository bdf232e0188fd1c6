"""Low-degree conformal cohomology with rank-one free coefficients.

Conventions
-----------
The coefficient module is free of rank one over the translation operator,
with the distinguished generator (named ``L``) acting through the weight
polynomial ``alpha + d + Delta*l`` and every other generator acting by
zero.  A reduced 1-cochain assigns to each generator a polynomial in the
single variable ``x`` (its lambda variable); a reduced 2-cochain assigns
to each ordered pair a polynomial ``P(l1, l2)`` subject to the skew rule
``P_{gh}(l1, l2) = -P_{hg}(l2, l1)``.  Both differentials land in
polynomials where the translation variable has been eliminated against
the sum of the lambda variables.

With ``alpha == 0`` both differentials raise homogeneous degree by
exactly one, so the second cohomology splits into graded slices that can
be solved independently; ``h2_total`` sums them.  For ``alpha != 0`` the
grading is broken and ``h2_total`` performs a single solve over all
2-cochains of bounded total degree, subtracting every coboundary that a
window one degree wider can exhibit.
"""

from __future__ import annotations

from fractions import Fraction

from .algebra import ConformalAlgebra
from .linalg import kernel_basis, quotient_basis, rank
from .poly import GEOM_VARS, MultiPoly, v
from .scalars import QuadExt

LAMBDA1 = "l1"
LAMBDA2 = "l2"
LAMBDA3 = "l3"
COCHAIN_VAR = "x"


def _p(x) -> MultiPoly:
    return x if isinstance(x, MultiPoly) else MultiPoly.const(x)


def rank1_action(algebra: ConformalAlgebra, Delta, alpha=0,
                 acting="L") -> dict:
    """Action polynomials (in 'l', 'd') of each generator on the rank-one
    coefficient module: `acting` acts by alpha + d + Delta*l, the rest by 0."""
    weight = _p(alpha) + v("d") + _p(Delta) * v("l")
    return {g: (weight if g == acting else MultiPoly.zero())
            for g in algebra.generators}


class Cochain1:
    """Reduced 1-cochain: generator -> polynomial in the variable 'x'."""

    def __init__(self, values: dict):
        self.values = {}
        for g, p in values.items():
            p = _p(p)
            bad = (set(p.vars) & set(GEOM_VARS)) - {COCHAIN_VAR}
            if bad:
                raise ValueError(f"1-cochain value may only use "
                                 f"{COCHAIN_VAR!r} among the geometric "
                                 f"variables, got {sorted(bad)}")
            if not p.is_zero:
                self.values[g] = p

    def get(self, g) -> MultiPoly:
        return self.values.get(g, MultiPoly.zero())

    def __repr__(self):
        inner = ", ".join(f"{g!r}: {p.to_str()}"
                          for g, p in self.values.items())
        return f"Cochain1({{{inner}}})"


class Cochain2:
    """Reduced 2-cochain on ordered pairs, P_{gh}(l1, l2) = -P_{hg}(l2, l1).

    Missing orientations are filled in from the skew rule; providing both
    orientations inconsistently, or a non-skew diagonal entry, raises
    ValueError.
    """

    def __init__(self, entries: dict):
        table = {}
        for (g, h), p in entries.items():
            p = _p(p)
            bad = (set(p.vars) & set(GEOM_VARS)) - {LAMBDA1, LAMBDA2}
            if bad:
                raise ValueError(f"2-cochain value may only use "
                                 f"{LAMBDA1!r}, {LAMBDA2!r} among the "
                                 f"geometric variables, got {sorted(bad)}")
            table[(g, h)] = p
        full = dict(table)
        swap = {LAMBDA1: v(LAMBDA2), LAMBDA2: v(LAMBDA1)}
        for (g, h), p in table.items():
            flipped = -p.substitute(swap)
            if g == h:
                if p != flipped:
                    raise ValueError(f"diagonal component at {g!r} is not "
                                     f"skew under argument exchange")
                continue
            if (h, g) in table:
                if table[(h, g)] != flipped:
                    raise ValueError(f"components for ({g!r},{h!r}) and "
                                     f"({h!r},{g!r}) violate the skew rule")
            else:
                full[(h, g)] = flipped
        self.values = {k: p for k, p in full.items() if not p.is_zero}

    def get(self, g, h) -> MultiPoly:
        return self.values.get((g, h), MultiPoly.zero())

    @property
    def is_zero(self) -> bool:
        return not self.values

    def scale(self, c) -> "Cochain2":
        out = Cochain2({})
        out.values = {k: p * c for k, p in self.values.items()}
        return out

    def __repr__(self):
        inner = ", ".join(f"{k!r}: {p.to_str()}"
                          for k, p in sorted(self.values.items(), key=repr))
        return f"Cochain2({{{inner}}})"


def d1(algebra: ConformalAlgebra, f: Cochain1, action: dict) -> Cochain2:
    """First differential; components are polynomials in (l1, l2)."""
    l1, l2 = v(LAMBDA1), v(LAMBDA2)
    gens = algebra.generators
    out = {}
    for i, x in enumerate(gens):
        for y in gens[i:]:
            t = MultiPoly.zero()
            qy = f.get(y)
            if qy and action[x]:
                t = t + qy.substitute({COCHAIN_VAR: l2}) \
                    * action[x].substitute({"l": l1, "d": -l1 - l2})
            qx = f.get(x)
            if qx and action[y]:
                t = t - qx.substitute({COCHAIN_VAR: l1}) \
                    * action[y].substitute({"l": l2, "d": -l1 - l2})
            for g, p in algebra.structure(x, y).items():
                qg = f.get(g)
                if qg:
                    t = t - p.substitute({"l": l1, "d": -l1 - l2}) \
                        * qg.substitute({COCHAIN_VAR: l1 + l2})
            out[(x, y)] = t
    return Cochain2(out)


def d2(algebra: ConformalAlgebra, psi, action: dict) -> dict:
    """Second differential on a skew 2-cochain.

    Returns {ordered triple: polynomial in (l1, l2, l3)}; the input is
    validated through Cochain2, so non-skew data raises ValueError.
    """
    if not isinstance(psi, Cochain2):
        psi = Cochain2(psi)
    l1, l2, l3 = v(LAMBDA1), v(LAMBDA2), v(LAMBDA3)
    gens = algebra.generators
    out = {}
    for x in gens:
        for y in gens:
            for z in gens:
                t = MultiPoly.zero()
                pyz = psi.get(y, z)
                if pyz and action[x]:
                    t = t + pyz.substitute({LAMBDA1: l2, LAMBDA2: l3}) \
                        * action[x].substitute({"l": l1, "d": -l1 - l2 - l3})
                pxz = psi.get(x, z)
                if pxz and action[y]:
                    t = t - pxz.substitute({LAMBDA1: l1, LAMBDA2: l3}) \
                        * action[y].substitute({"l": l2, "d": -l1 - l2 - l3})
                pxy = psi.get(x, y)
                if pxy and action[z]:
                    t = t + pxy.substitute({LAMBDA1: l1, LAMBDA2: l2}) \
                        * action[z].substitute({"l": l3, "d": -l1 - l2 - l3})
                for g, p in algebra.structure(x, y).items():
                    q = psi.get(g, z)
                    if q:
                        t = t - p.substitute({"l": l1, "d": -l1 - l2}) \
                            * q.substitute({LAMBDA1: l1 + l2, LAMBDA2: l3})
                for g, p in algebra.structure(x, z).items():
                    q = psi.get(g, y)
                    if q:
                        t = t + p.substitute({"l": l1, "d": -l1 - l3}) \
                            * q.substitute({LAMBDA1: l1 + l3, LAMBDA2: l2})
                for g, p in algebra.structure(y, z).items():
                    q = psi.get(g, x)
                    if q:
                        t = t - p.substitute({"l": l2, "d": -l2 - l3}) \
                            * q.substitute({LAMBDA1: l2 + l3, LAMBDA2: l1})
                out[(x, y, z)] = t
    return out


# -- coordinates for bounded 2-cochain spaces -------------------------------

def _canonical_pairs(algebra) -> list:
    gens = algebra.generators
    return [(g, h) for i, g in enumerate(gens) for h in gens[i:]]


def _slice_coords(algebra, m: int, pairs=None) -> list:
    """Monomial basis of homogeneous degree-m 2-cochains.

    Each entry is (pair, basis polynomial, representative exponent pair);
    on diagonal pairs the basis polynomials are the skew combinations
    l1^(m-k) l2^k - l1^k l2^(m-k) for k < m/2, keyed by (m-k, k).
    """
    l1, l2 = v(LAMBDA1), v(LAMBDA2)
    coords = []
    for g, h in _canonical_pairs(algebra):
        if pairs is not None and (g, h) not in pairs:
            continue
        if g == h:
            for k in range((m + 1) // 2):
                mono = l1 ** (m - k) * l2 ** k - l1 ** k * l2 ** (m - k)
                coords.append(((g, h), mono, (m - k, k)))
        else:
            for k in range(m + 1):
                coords.append(((g, h), l1 ** (m - k) * l2 ** k, (m - k, k)))
    return coords


def _mono_coeffs(p: MultiPoly, names) -> dict:
    return {exps: q.constant_value()
            for exps, q in p.coefficients(names).items() if q}


def _vectorize(algebra, coords, cochain: Cochain2) -> list:
    """Coordinates of a cochain in the given basis; raises ValueError if
    any component falls outside the spanned window."""
    index = {(pair, key): i for i, (pair, _, key) in enumerate(coords)}
    pairset = {pair for pair, _, _ in coords}
    vec = [Fraction(0)] * len(coords)
    for pair in _canonical_pairs(algebra):
        p = cochain.get(*pair)
        if p.is_zero:
            continue
        if pair not in pairset:
            raise ValueError(f"component on pair {pair!r} outside window")
        g, h = pair
        for exps, c in _mono_coeffs(p, (LAMBDA1, LAMBDA2)).items():
            if g == h:
                if exps[0] < exps[1]:
                    continue  # mirror of a stored coordinate
                if exps[0] == exps[1]:
                    raise ValueError("diagonal component not skew")
            if (pair, exps) not in index:
                raise ValueError(f"monomial {exps} on {pair!r} outside window")
            vec[index[(pair, exps)]] = c
    return vec


def _cochain_from_vector(coords, vec) -> Cochain2:
    acc = {}
    for (pair, mono, _), c in zip(coords, vec):
        if c:
            acc[pair] = acc.get(pair, MultiPoly.zero()) + mono * c
    return Cochain2(acc)


def _cocycle_rows(algebra, action, coords):
    """Linear constraints (rows over the coordinate columns) expressing
    that the second differential vanishes."""
    cols = []
    keys: dict = {}
    for pair, mono, _ in coords:
        res = d2(algebra, Cochain2({pair: mono}), action)
        col = {}
        for triple, poly in res.items():
            for exps, c in _mono_coeffs(poly, (LAMBDA1, LAMBDA2, LAMBDA3)).items():
                col[(triple, exps)] = c
        for key in col:
            keys.setdefault(key, len(keys))
        cols.append(col)
    return [[col.get(key, Fraction(0)) for col in cols] for key in keys]


def _cocycle_kernel(algebra, action, coords):
    if not coords:
        return []
    return kernel_basis(_cocycle_rows(algebra, action, coords), len(coords))


def _normalize_vec(vec):
    lead = next((c for c in vec if c), None)
    if lead is None:
        return vec
    if isinstance(lead, QuadExt):
        inv = QuadExt(1, 0, lead.d) / lead
    else:
        inv = Fraction(1) / Fraction(lead)
    return [c * inv for c in vec]


def _require_concrete(algebra, Delta, alpha):
    if algebra.params:
        raise ValueError("instantiate symbolic algebra parameters first")
    for val in (Delta, alpha):
        if isinstance(val, MultiPoly):
            raise ValueError("Delta and alpha must be scalars here")


def h2_graded(algebra: ConformalAlgebra, Delta, m: int, alpha=0) -> dict:
    """One homogeneous slice of the second cohomology (alpha must be 0).

    Returns {'degree', 'cocycle_dim', 'coboundary_dim', 'dim',
    'quotient_basis'} with the basis given as normalized Cochain2 objects.
    """
    _require_concrete(algebra, Delta, alpha)
    if alpha != 0:
        raise ValueError("graded slices require alpha == 0")
    action = rank1_action(algebra, Delta, 0)
    coords = _slice_coords(algebra, m)
    cocycles = _cocycle_kernel(algebra, action, coords)
    images = []
    if m >= 1:
        for g in algebra.generators:
            img = d1(algebra, Cochain1({g: v(COCHAIN_VAR) ** (m - 1)}), action)
            vec = _vectorize(algebra, coords, img)
            if any(vec):
                images.append(vec)
    basis_vecs = [_normalize_vec(u) for u in quotient_basis(cocycles, images)]
    return {
        "degree": m,
        "cocycle_dim": len(cocycles),
        "coboundary_dim": rank(images),
        "dim": len(basis_vecs),
        "quotient_basis": [_cochain_from_vector(coords, u) for u in basis_vecs],
    }


def h2_total(algebra: ConformalAlgebra, Delta, alpha=0,
             max_degree: int = 10) -> dict:
    """Second cohomology within total degree `max_degree`.

    For alpha == 0 this sums the graded slices and reports a per-degree
    breakdown.  For alpha != 0 it solves once over all 2-cochains of
    total degree <= max_degree; coboundaries are taken from 1-cochains of
    degree <= max_degree + 1 whose differentials (or cancelling
    combinations thereof, detected in a window one degree wider) stay
    inside the solve window, so the reported dimension can only err on
    the high side.
    """
    _require_concrete(algebra, Delta, alpha)
    if alpha == 0:
        by_degree = {}
        basis = []
        for m in range(max_degree + 1):
            piece = h2_graded(algebra, Delta, m)
            by_degree[m] = piece["dim"]
            basis.extend(piece["quotient_basis"])
        return {"dim": sum(by_degree.values()), "by_degree": by_degree,
                "basis": basis}

    action = rank1_action(algebra, Delta, alpha)
    coords = []
    for m in range(max_degree + 1):
        coords.extend(_slice_coords(algebra, m))
    wide = list(coords)
    for m in (max_degree + 1, max_degree + 2):
        wide.extend(_slice_coords(algebra, m))
    cocycles = _cocycle_kernel(algebra, action, coords)

    imgs = []
    for k in range(max_degree + 2):
        for g in algebra.generators:
            img = d1(algebra, Cochain1({g: v(COCHAIN_VAR) ** k}), action)
            vec = _vectorize(algebra, wide, img)
            if any(vec):
                imgs.append(vec)
    n0 = len(coords)
    images = []
    if imgs:
        high_rows = [[w[r] for w in imgs] for r in range(n0, len(wide))]
        for combo in kernel_basis(high_rows, len(imgs)):
            vec = [Fraction(0)] * n0
            for i, c in enumerate(combo):
                if c:
                    vec = [a + c * b for a, b in zip(vec, imgs[i][:n0])]
            if any(vec):
                images.append(vec)
    basis_vecs = [_normalize_vec(u) for u in quotient_basis(cocycles, images)]
    return {"dim": len(basis_vecs), "by_degree": None,
            "basis": [_cochain_from_vector(coords, u) for u in basis_vecs]}


def cochain2_str(cochain: Cochain2, algebra: ConformalAlgebra) -> str:
    """Deterministic display string; bare polynomial when the algebra has
    a single generator, labelled components otherwise."""
    pairs = _canonical_pairs(algebra)
    if len(pairs) == 1:
        return cochain.get(*pairs[0]).to_str()
    parts = [f"({g},{h}): {cochain.get(g, h).to_str()}"
             for g, h in pairs if cochain.get(g, h)]
    return "; ".join(parts) if parts else "0"


# -- the weight-a current extension of the Witt-type algebra ----------------

def _current_extension(a):
    from .zoo import semidirect
    return semidirect(a)


def pjj_classify(a, b, max_degree: int = 6) -> list:
    """Cohomology classes supported on the current-current component.

    No coboundary has a current-current component, so these are exactly
    the cocycles there; returns their component polynomials in (l1, l2).
    """
    alg = _current_extension(a)
    action = rank1_action(alg, b, 0)
    out = []
    for m in range(max_degree + 1):
        coords = _slice_coords(alg, m, pairs={("J", "J")})
        for u in _cocycle_kernel(alg, action, coords):
            out.append(_cochain_from_vector(coords, _normalize_vec(u)).get("J", "J"))
    return out


def plj_homogeneous(m: int, a, b) -> list:
    """Degree-m mixed-component classes in residual normal form.

    Solves the cocycle constraints on a 2-cochain supported on the
    (L, J) component, homogeneous of degree m, together with the linear
    normal-form rows that fix the leftover coboundary freedom; returns a
    basis of component polynomials.
    """
    alg = _current_extension(a)
    action = rank1_action(alg, b, 0)
    coords = _slice_coords(alg, m, pairs={("L", "J")})
    ncols = len(coords)  # p_k multiplies l1^(m-k) l2^k, k = 0..m
    rows = _cocycle_rows(alg, action, coords)
    if (a != 1 and m >= 1) or (m, a, b) == (1, 1, 0):
        rows.append([1 if k == 0 else 0 for k in range(ncols)])
    if a == 1 and b != 0 and m >= 1:
        rows.append([(-1) ** k for k in range(ncols)])
    if a == 1 and b == 0 and m >= 3:
        rows.append([1] * ncols)
    return [_cochain_from_vector(coords, _normalize_vec(u)).get("L", "J")
            for u in kernel_basis(rows, ncols)]


def h2_semidirect_dim(a, b, max_degree: int = 10) -> int:
    """Dimension of the second cohomology of the weight-a current
    extension with rank-one coefficients of weight b, by direct solve."""
    return h2_total(_current_extension(a), b, 0, max_degree)["dim"]


def vir_h2_dim(Delta, alpha=0) -> int:
    """Second-cohomology dimension for the weight-Delta rank-one module
    over the Witt-type algebra alone."""
    if alpha != 0:
        return 0
    if Delta == -1 or Delta == 0:
        return 2
    if Delta in (-6, -4, 1):
        return 1
    return 0


def mixed_sector_dim(a, b) -> int:
    """Dimension contributed by the mixed (L, J) component; the branch
    order matters, earlier cases win."""
    if a == 1 and b == 0:
        return 3
    if a == b or (a == 1 and (b == -3 or b == -4 or b == -5 or b == -6)):
        return 2
    if (a == 1 or a - b == 2 or a - b == 3 or a - b == 4 or (a, b) == (5, 0)
            or (a == b + 6 and 2 * b * b + 10 * b + 3 == 0)):
        return 1
    return 0


def current_pair_sector_dim(a, b) -> int:
    """Dimension contributed by the current-current component."""
    return 1 if b == 2 * a - 2 else 0


def h2_semidirect_dim_closed_form(a, b) -> int:
    """Sector-by-sector closed form for h2_semidirect_dim."""
    return vir_h2_dim(b) + current_pair_sector_dim(a, b) + mixed_sector_dim(a, b)


def h2_semidirect_report(a, b, max_degree: int = 10) -> dict:
    """Compare the direct quotient solve against the closed form.

    The two routes are computed independently and never reconciled: when
    they differ the report says so, together with the per-degree solver
    breakdown, so a disagreement is surfaced rather than absorbed.  (The
    known case: for a == 1 the closed form counts the degree-2 mixed
    cocycle l1*l2, which is the coboundary of the 1-cochain x/b whenever
    b != 0, so the solver reports one class fewer on those inputs.)
    """
    solved = h2_total(_current_extension(a), b, 0, max_degree)
    closed = h2_semidirect_dim_closed_form(a, b)
    return {
        "dim": solved["dim"],
        "closed_form": closed,
        "agrees": solved["dim"] == closed,
        "by_degree": solved["by_degree"],
    }
