"""Groebner bases over Q and the ideal-theoretic queries built on them."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Sequence

from gmpy2 import mpq

from .poly import (
    GREVLEX,
    MonomialOrder,
    Polynomial,
    monomial_divides,
    monomial_lcm,
)


class NotZeroDimensional(ValueError):
    """The ideal has positive-dimensional (or empty) zero set where finiteness is needed."""


@dataclass(frozen=True)
class Ideal:
    """Ideal of Q[z1..zn] given by generators; zero generators are dropped."""

    nvars: int
    generators: tuple[Polynomial, ...]

    def __init__(self, generators: Sequence[Polynomial], nvars: int | None = None):
        gens = tuple(g for g in generators if not g.is_zero())
        if nvars is None:
            if not generators:
                raise ValueError("cannot infer ambient dimension of an empty generator list")
            nvars = generators[0].nvars
        if any(g.nvars != nvars for g in gens):
            raise ValueError("generators live in different rings")
        object.__setattr__(self, "nvars", nvars)
        object.__setattr__(self, "generators", gens)

    def __repr__(self):
        return f"Ideal([{', '.join(str(g) for g in self.generators)}], nvars={self.nvars})"


@dataclass(frozen=True)
class GroebnerBasis:
    """Reduced Groebner basis.

    When ``cofactors`` is present, ``basis[i] == sum_j cofactors[i][j] * generators[j]``.
    """

    order: MonomialOrder
    basis: tuple[Polynomial, ...]
    nvars: int
    generators: tuple[Polynomial, ...]
    cofactors: tuple[tuple[Polynomial, ...], ...] | None = None
    reduced: bool = True

    def leading_monomials(self) -> list[tuple[int, ...]]:
        return [g.leading_monomial(self.order) for g in self.basis]

    def is_unit(self) -> bool:
        return any(g.is_constant() for g in self.basis)


# -- low-level reduction on term dictionaries -------------------------------

def _lt(p: dict, key):
    e = max(p, key=key)
    return e, p[e]


def _sub_scaled(target: dict, src: dict, shift, c) -> None:
    """target -= c * x^shift * src, in place."""
    for e, v in src.items():
        t = tuple(a + b for a, b in zip(e, shift))
        r = target.get(t, 0) - c * v
        if r:
            target[t] = r
        else:
            target.pop(t, None)


def _reduce(p: dict, basis: list, key):
    """Divide ``p`` by ``basis`` entries ``(poly, lm, lc)``.

    Returns ``(remainder, quotients)`` with quotients as term dicts per basis
    element.
    """
    p = dict(p)
    rem: dict = {}
    quots: list[dict] = [dict() for _ in basis]
    while p:
        e, c = _lt(p, key)
        for k, (g, lm, lc) in enumerate(basis):
            if monomial_divides(lm, e):
                shift = tuple(a - b for a, b in zip(e, lm))
                q = c / lc
                quots[k][shift] = quots[k].get(shift, 0) + q
                _sub_scaled(p, g, shift, q)
                break
        else:
            rem[e] = c
            del p[e]
    return rem, quots


def _mul_dicts(a: dict, b: dict) -> dict:
    out: dict = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            e = tuple(x + y for x, y in zip(e1, e2))
            v = out.get(e, 0) + c1 * c2
            if v:
                out[e] = v
            else:
                del out[e]
    return out


def _add_into(target: dict, src: dict, c=1) -> None:
    for e, v in src.items():
        r = target.get(e, 0) + c * v
        if r:
            target[e] = r
        else:
            target.pop(e, None)


def _combine_cofactors(base: list[dict] | None, quots: list[dict], cofs: list[list[dict]], ngens: int) -> list[dict]:
    """``base - sum_k quots[k] * cofs[k]`` (elementwise over generators)."""
    out = [dict(x) for x in base] if base is not None else [dict() for _ in range(ngens)]
    for q, cof in zip(quots, cofs):
        if not q:
            continue
        for j in range(ngens):
            if cof[j]:
                _add_into(out[j], _mul_dicts(q, cof[j]), -1)
    return out


def _buchberger(gens: list[dict], nvars: int, key, track: bool):
    ngens = len(gens)
    # basis polys are monic; cofactor rows kept in parallel
    polys: list[dict] = []
    lms: list = []
    cofs: list[list[dict]] = []
    pairs: set[tuple[int, int]] = set()

    def add(p: dict, cof):
        lm, lc = _lt(p, key)
        inv = 1 / lc
        p = {e: v * inv for e, v in p.items()}
        if track:
            cof = [{e: v * inv for e, v in c.items()} for c in cof]
        idx = len(polys)
        for j in range(idx):
            pairs.add((j, idx))
        polys.append(p)
        lms.append(lm)
        cofs.append(cof)

    for j, g in enumerate(gens):
        cof = [({(0,) * nvars: mpq(1)} if i == j else {}) for i in range(ngens)] if track else None
        active = [i for i in range(len(polys)) if polys[i] is not None]
        rem, quots = _reduce(g, [(polys[i], lms[i], mpq(1)) for i in active], key)
        if rem:
            if track:
                cof = _combine_cofactors(cof, quots, [cofs[i] for i in active], ngens)
            add(rem, cof)

    while pairs:
        i, j = min(pairs, key=lambda ij: (key(monomial_lcm(lms[ij[0]], lms[ij[1]])), ij))
        pairs.discard((i, j))
        if polys[i] is None or polys[j] is None:
            continue
        lcm = monomial_lcm(lms[i], lms[j])
        # product criterion
        if all(a == 0 or b == 0 for a, b in zip(lms[i], lms[j])):
            continue
        # chain criterion
        skip = False
        for k in range(len(polys)):
            if k in (i, j) or polys[k] is None:
                continue
            if monomial_divides(lms[k], lcm):
                pik = (min(i, k), max(i, k))
                pjk = (min(j, k), max(j, k))
                if pik not in pairs and pjk not in pairs:
                    skip = True
                    break
        if skip:
            continue
        si = tuple(a - b for a, b in zip(lcm, lms[i]))
        sj = tuple(a - b for a, b in zip(lcm, lms[j]))
        s: dict = {}
        _sub_scaled(s, polys[i], si, -1)
        _sub_scaled(s, polys[j], sj, 1)
        active = [k for k in range(len(polys)) if polys[k] is not None]
        rem, quots = _reduce(s, [(polys[k], lms[k], mpq(1)) for k in active], key)
        if rem:
            cof = None
            if track:
                base = [dict() for _ in range(ngens)]
                for t in range(ngens):
                    if cofs[i][t]:
                        _add_into(base[t], {tuple(a + b for a, b in zip(e, si)): v for e, v in cofs[i][t].items()})
                    if cofs[j][t]:
                        _add_into(base[t], {tuple(a + b for a, b in zip(e, sj)): v for e, v in cofs[j][t].items()}, -1)
                cof = _combine_cofactors(base, quots, [cofs[k] for k in active], ngens)
            add(rem, cof)

    # minimalize
    idx = [k for k in range(len(polys)) if polys[k] is not None]
    keep = []
    for k in idx:
        dominated = False
        for t in idx:
            if t == k:
                continue
            if monomial_divides(lms[t], lms[k]) and (lms[t] != lms[k] or t < k):
                dominated = True
                break
        if not dominated:
            keep.append(k)
    # interreduce
    final_polys, final_cofs = [], []
    for k in keep:
        others = [(polys[t], lms[t], mpq(1)) for t in keep if t != k]
        head = {lms[k]: polys[k][lms[k]]}
        tail = {e: v for e, v in polys[k].items() if e != lms[k]}
        rem, quots = _reduce(tail, others, key)
        rem.update(head)
        final_polys.append(rem)
        if track:
            final_cofs.append(_combine_cofactors(cofs[k], quots, [cofs[t] for t in keep if t != k], ngens))
    order_idx = sorted(range(len(final_polys)), key=lambda t: key(_lt(final_polys[t], key)[0]))
    return [final_polys[t] for t in order_idx], ([final_cofs[t] for t in order_idx] if track else None)


@lru_cache(maxsize=512)
def _groebner_cached(gens: tuple[Polynomial, ...], nvars: int, order: MonomialOrder, track: bool) -> GroebnerBasis:
    names = gens[0].names if gens else None
    if not gens:
        return GroebnerBasis(order, (), nvars, gens, () if track else None)
    basis, cofs = _buchberger([dict(g.terms) for g in gens], nvars, order.key, track)
    basis_polys = tuple(Polynomial(nvars, b, names, _clean=True) for b in basis)
    cof_polys = None
    if track:
        cof_polys = tuple(tuple(Polynomial(nvars, c, names, _clean=True) for c in row) for row in cofs)
        for b, row in zip(basis_polys, cof_polys):
            check = Polynomial.zero(nvars, names)
            for c, g in zip(row, gens):
                if not c.is_zero():
                    check = check + c * g
            if check != b:
                raise AssertionError("cofactor bookkeeping failed")
    return GroebnerBasis(order, basis_polys, nvars, gens, cof_polys)


def groebner(ideal: Ideal | Sequence[Polynomial], order: MonomialOrder = GREVLEX, track_cofactors: bool = False) -> GroebnerBasis:
    """Reduced Groebner basis (Buchberger with product and chain criteria).

    With ``track_cofactors`` each basis element also carries its expression in
    the original generators.
    """
    if not isinstance(ideal, Ideal):
        ideal = Ideal(list(ideal))
    return _groebner_cached(ideal.generators, ideal.nvars, order, track_cofactors)


def _basis_entries(G: GroebnerBasis):
    return [(dict(g.terms), g.leading_monomial(G.order), mpq(1)) for g in G.basis]


def normal_form(p: Polynomial, G: GroebnerBasis) -> Polynomial:
    rem, _ = _reduce(dict(p.terms), _basis_entries(G), G.order.key)
    return Polynomial(p.nvars, rem, p.names, _clean=True)


def ideal_contains(ideal: Ideal, p: Polynomial, order: MonomialOrder = GREVLEX) -> bool:
    return normal_form(p, groebner(ideal, order)).is_zero()


def divide_with_cofactors(p: Polynomial, gens: Sequence[Polynomial], G: GroebnerBasis) -> tuple[list[Polynomial], Polynomial]:
    """Write ``p = sum c_i gens_i + r`` with ``r`` the normal form of ``p``.

    ``G`` must be computed from ``gens`` with cofactor tracking.  The identity
    is checked by expansion before returning.
    """
    if G.cofactors is None:
        raise ValueError("Groebner basis was computed without cofactor tracking")
    gens_nz = tuple(g for g in gens if not g.is_zero())
    if gens_nz != G.generators:
        raise ValueError("generators do not match the Groebner basis source")
    names = p.names
    rem, quots = _reduce(dict(p.terms), _basis_entries(G), G.order.key)
    cof = [Polynomial.zero(p.nvars, names) for _ in gens_nz]
    for q, row in zip(quots, G.cofactors):
        if not q:
            continue
        qp = Polynomial(p.nvars, q, names, _clean=True)
        for j, c in enumerate(row):
            if not c.is_zero():
                cof[j] = cof[j] + qp * c
    remainder = Polynomial(p.nvars, rem, names, _clean=True)
    # re-expand against the caller's generator list (zeros get zero cofactors)
    full = []
    it = iter(cof)
    for g in gens:
        full.append(Polynomial.zero(p.nvars, names) if g.is_zero() else next(it))
    check = remainder
    for c, g in zip(full, gens):
        if not c.is_zero():
            check = check + c * g
    if check != p:
        raise AssertionError("division identity failed")
    return full, remainder


def krull_dimension(ideal: Ideal) -> int:
    """Dimension of V(I) in C^n: largest set of variables independent mod the leading-term ideal.

    The unit ideal has dimension -1.
    """
    G = groebner(ideal)
    if G.is_unit():
        return -1
    n = ideal.nvars
    lms = G.leading_monomials()
    supports = [frozenset(i for i, e in enumerate(lm) if e) for lm in lms]
    for size in range(n, -1, -1):
        for subset in combinations(range(n), size):
            s = set(subset)
            if all(not sup <= s for sup in supports):
                return size
    return 0


def is_zero_dimensional(G: GroebnerBasis) -> bool:
    if G.is_unit():
        return False
    pure = set()
    for lm in G.leading_monomials():
        nz = [i for i, e in enumerate(lm) if e]
        if len(nz) == 1:
            pure.add(nz[0])
    return len(pure) == G.nvars


def standard_monomials(G: GroebnerBasis) -> list[tuple[int, ...]]:
    """Monomials outside the leading-term ideal, sorted by the basis order."""
    if not is_zero_dimensional(G):
        raise NotZeroDimensional("standard monomials need a zero-dimensional ideal")
    lms = G.leading_monomials()
    n = G.nvars
    seen = set()
    stack = [(0,) * n]
    while stack:
        e = stack.pop()
        if e in seen or any(monomial_divides(lm, e) for lm in lms):
            continue
        seen.add(e)
        for i in range(n):
            stack.append(e[:i] + (e[i] + 1,) + e[i + 1:])
    return sorted(seen, key=G.order.key)


def standard_monomial_count(G: GroebnerBasis) -> int:
    """Dimension over Q of the quotient ring (zero-dimensional ideals only)."""
    return len(standard_monomials(G))


def variable_power_in_ideal(G: GroebnerBasis, i: int) -> tuple[int, list[Polynomial]]:
    """Smallest ``a`` with ``z_i^a`` in the ideal, and its cofactors in the generators."""
    if not is_zero_dimensional(G):
        raise NotZeroDimensional("pure powers only exist in zero-dimensional ideals")
    n = G.nvars
    if not 1 <= i <= n:
        raise IndexError(f"variable index {i} outside 1..{n}")
    names = G.basis[0].names
    bound = standard_monomial_count(G)
    zi = Polynomial.var(n, i, names)
    power = zi
    for a in range(1, bound + 1):
        if normal_form(power, G).is_zero():
            if G.cofactors is None:
                return a, []
            cof, _ = divide_with_cofactors(power, G.generators, G)
            return a, cof
        power = power * zi
    raise AssertionError("nilpotency bound exceeded")  # impossible for a zero-dimensional ideal


def _coordinates(p: Polynomial, index: dict) -> list:
    vec = [mpq(0)] * len(index)
    for e, c in p.terms.items():
        vec[index[e]] = c
    return vec


def univariate_eliminant(G: GroebnerBasis, i: int) -> Polynomial:
    """Monic generator of ``I ∩ Q[z_i]`` (the minimal polynomial of ``z_i`` in the quotient)."""
    std = standard_monomials(G)
    index = {e: k for k, e in enumerate(std)}
    n = G.nvars
    names = G.basis[0].names
    zi = Polynomial.var(n, i, names)
    # echelon rows: (pivot, vector, combination over powers)
    rows: list[tuple[int, list, list]] = []
    power = Polynomial.constant(n, 1, names)
    for j in range(len(std) + 1):
        vec = _coordinates(normal_form(power, G), index)
        combo = [mpq(0)] * (j + 1)
        combo[j] = mpq(1)
        for piv, rvec, rcombo in rows:
            if vec[piv]:
                f = vec[piv] / rvec[piv]
                vec = [a - f * b for a, b in zip(vec, rvec)]
                combo = [a - f * (rcombo[k] if k < len(rcombo) else 0) for k, a in enumerate(combo)]
        piv = next((k for k, x in enumerate(vec) if x), None)
        if piv is None:
            terms = {}
            for k, c in enumerate(combo):
                if c:
                    exp = [0] * n
                    exp[i - 1] = k
                    terms[tuple(exp)] = c
            return Polynomial(n, terms, names).monic()
        rows.append((piv, vec, combo))
        power = power * zi
    raise AssertionError("no dependency found within the quotient dimension")


def zero_locus_is_origin_only(ideal: Ideal) -> bool:
    """True iff V(I) = {0} over C.

    Checks zero-dimensionality, then that every univariate eliminant is a pure
    power of its variable.
    """
    G = groebner(ideal)
    if not is_zero_dimensional(G):
        return False
    for i in range(1, ideal.nvars + 1):
        elim = univariate_eliminant(G, i)
        if len(elim.terms) != 1:
            return False
    return True
