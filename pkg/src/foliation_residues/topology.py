"""Finite simplicial complexes: homology, barycentric subdivision, dual cells,
Poincare and Alexander duality, and the chain-level intersection product.

Simplices are stored as strictly increasing vertex tuples; a chain is a dict
``simplex -> integer``.  A simplex listed in increasing vertex order carries
the orientation of that order.

In a subdivision the new vertices are numbered by listing the simplices of
the old complex by (dimension, vertices).  Along a flag of simplices the
dimension increases, so the sorted vertex tuple of a subdivided simplex is
its flag read from the smallest member upwards.
"""

from __future__ import annotations

import random
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations
from typing import Iterable, Mapping, Sequence

from .exterior import sort_sign

Simplex = tuple
Chain = dict


class NotAManifold(ValueError):
    """Some codimension-one simplex does not have exactly two cofaces."""


class NotOrientable(ValueError):
    """Top simplices admit no coherent orientation."""


# -- chains -----------------------------------------------------------------

def chain_add(a: Mapping, b: Mapping, scale=1) -> Chain:
    """``a + scale * b`` with zero coefficients removed."""
    out = dict(a)
    for s, c in b.items():
        v = out.get(s, 0) + scale * c
        if v:
            out[s] = v
        else:
            out.pop(s, None)
    return out


def chain_scale(a: Mapping, scale) -> Chain:
    return {s: scale * c for s, c in a.items()} if scale else {}


def oriented(vertices: Sequence[int]) -> Chain:
    """The simplex spanned by ``vertices`` in the given order, as a chain."""
    sign, key = sort_sign(vertices)
    return {key: sign} if sign else {}


def simplex_boundary(s: Simplex) -> Chain:
    if len(s) == 1:
        return {}
    return {s[:i] + s[i + 1:]: (-1) ** i for i in range(len(s))}


def boundary(chain: Mapping) -> Chain:
    out: Chain = {}
    for s, c in chain.items():
        out = chain_add(out, simplex_boundary(s), c)
    return out


def augmentation(chain: Mapping) -> int:
    """Sum of the coefficients of a 0-chain."""
    if any(len(s) != 1 for s in chain):
        raise ValueError("augmentation is defined on 0-chains")
    return sum(chain.values())


# -- linear algebra ---------------------------------------------------------

def elementary_divisors(matrix: Sequence[Sequence[int]]) -> list[int]:
    """Nonzero diagonal entries of the Smith normal form of an integer matrix."""
    A = [list(map(int, row)) for row in matrix]
    nrows = len(A)
    ncols = len(A[0]) if A else 0
    diag = []
    t = 0
    while t < min(nrows, ncols):
        best = None
        for i in range(t, nrows):
            for j in range(t, ncols):
                if A[i][j] and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        i, j = best
        A[t], A[i] = A[i], A[t]
        for row in A:
            row[t], row[j] = row[j], row[t]
        while True:
            p = A[t][t]
            clean = True
            for i in range(t + 1, nrows):
                if A[i][t]:
                    q = A[i][t] // p
                    if q:
                        A[i] = [x - q * y for x, y in zip(A[i], A[t])]
                    if A[i][t]:
                        clean = False
            for j in range(t + 1, ncols):
                if A[t][j]:
                    q = A[t][j] // p
                    if q:
                        for row in A:
                            row[j] -= q * row[t]
                    if A[t][j]:
                        clean = False
            if not clean:
                # move the smallest remaining entry of row/column t to the pivot
                cands = [(abs(A[i][t]), i, t) for i in range(t, nrows) if A[i][t]]
                cands += [(abs(A[t][j]), t, j) for j in range(t, ncols) if A[t][j]]
                _, i, j = min(cands)
                A[t], A[i] = A[i], A[t]
                for row in A:
                    row[t], row[j] = row[j], row[t]
                continue
            bad = next((i for i in range(t + 1, nrows) for j in range(t + 1, ncols) if A[i][j] % p), None)
            if bad is None:
                break
            A[t] = [x + y for x, y in zip(A[t], A[bad])]
        diag.append(abs(A[t][t]))
        t += 1
    return diag


def _rref(rows: Iterable[Mapping[int, object]]) -> dict[int, dict[int, Fraction]]:
    """Sparse reduced row echelon form: pivot column -> normalized row."""
    pivots: dict[int, dict[int, Fraction]] = {}
    for raw in rows:
        r = {c: Fraction(v) for c, v in raw.items() if v}
        while r:
            lead = min(r)
            piv = pivots.get(lead)
            if piv is None:
                break
            f = r[lead]
            for c, v in piv.items():
                x = r.get(c, 0) - f * v
                if x:
                    r[c] = x
                else:
                    r.pop(c, None)
        if not r:
            continue
        lead = min(r)
        f = r[lead]
        pivots[lead] = {c: v / f for c, v in r.items()}
    for c in sorted(pivots, reverse=True):
        row = pivots[c]
        for d, other in pivots.items():
            if d != c and c in other:
                f = other[c]
                for cc, v in row.items():
                    x = other.get(cc, 0) - f * v
                    if x:
                        other[cc] = x
                    else:
                        other.pop(cc, None)
    return pivots


def rational_rank(rows: Iterable[Mapping[int, object]]) -> int:
    return len(_rref(rows))


def nullspace(rows: Iterable[Mapping[int, object]], ncols: int) -> list[dict[int, Fraction]]:
    """Basis of ``{x : A x = 0}`` for a sparse matrix given by its rows."""
    piv = _rref(rows)
    basis = []
    for f in range(ncols):
        if f in piv:
            continue
        x = {f: Fraction(1)}
        for c, row in piv.items():
            if f in row:
                x[c] = -row[f]
        basis.append(x)
    return basis


def solve(rows: Sequence[Mapping[int, object]], rhs: Sequence, ncols: int) -> dict[int, Fraction] | None:
    """One solution of ``A x = b`` (free variables set to 0), or None."""
    aug = []
    for r, b in zip(rows, rhs):
        row = dict(r)
        if b:
            row[ncols] = b
        aug.append(row)
    piv = _rref(aug)
    if ncols in piv:
        return None
    return {c: row.get(ncols, Fraction(0)) for c, row in piv.items()}


# -- complexes ---------------------------------------------------------------

class SimplicialComplex:
    """Pure finite simplicial complex given by its top simplices.

    When ``orientable`` is true, top simplices are oriented coherently by
    propagating the orientation of the first listed simplex of each
    connected piece across shared codimension-one faces.

    Examples
    ========

    >>> S2 = SimplicialComplex([(0, 1, 2), (0, 3, 1), (0, 2, 3), (1, 3, 2)])
    >>> [S2.homology(p)[0] for p in range(3)]
    [1, 0, 1]
    """

    def __init__(self, top_simplices: Iterable[Sequence[int]], orientable: bool = True,
                 _orientation: Mapping[Simplex, int] | None = None):
        tops = [tuple(t) for t in top_simplices]
        if not tops:
            raise ValueError("complex needs at least one simplex")
        sizes = {len(t) for t in tops}
        if len(sizes) != 1:
            raise ValueError("complex must be pure: all top simplices need the same dimension")
        if any(len(set(t)) != len(t) for t in tops):
            raise ValueError("simplex with repeated vertex")
        self.dim = sizes.pop() - 1
        given = {}
        for t in tops:
            sign, key = sort_sign(t)
            if key in given:
                raise ValueError(f"top simplex {t} listed twice")
            given[key] = sign
        self.top = tuple(given)
        faces: list[set] = [set() for _ in range(self.dim + 1)]
        for t in self.top:
            for p in range(self.dim + 1):
                faces[p].update(combinations(t, p + 1))
        self.simplices = [sorted(f) for f in faces]
        self._index = [{s: i for i, s in enumerate(level)} for level in self.simplices]
        self._cofaces: dict[Simplex, list[Simplex]] = defaultdict(list)
        for p in range(1, self.dim + 1):
            for s in self.simplices[p]:
                for i in range(len(s)):
                    self._cofaces[s[:i] + s[i + 1:]].append(s)
        self.orientable = orientable
        if _orientation is not None:
            self.orientation = dict(_orientation)
        elif orientable:
            self.orientation = self._propagate(given)
        else:
            self.orientation = None

    def _propagate(self, given: Mapping[Simplex, int]) -> dict[Simplex, int]:
        m = self.dim
        orient: dict[Simplex, int] = {}
        for start in self.top:
            if start in orient:
                continue
            orient[start] = given[start]
            queue = [start]
            while queue:
                s = queue.pop()
                if m == 0:
                    break
                for face, c in simplex_boundary(s).items():
                    others = [t for t in self._cofaces[face] if t != s]
                    if len(others) > 1:
                        raise NotOrientable("a codimension-one face has more than two cofaces")
                    for t in others:
                        want = -orient[s] * c * simplex_boundary(t)[face]
                        if t in orient:
                            if orient[t] != want:
                                raise NotOrientable("top simplices cannot be oriented coherently")
                        else:
                            orient[t] = want
                            queue.append(t)
        return orient

    # basic queries
    @property
    def vertices(self) -> list[int]:
        return [s[0] for s in self.simplices[0]]

    def count(self, p: int) -> int:
        return len(self.simplices[p]) if 0 <= p <= self.dim else 0

    def f_vector(self) -> list[int]:
        return [len(level) for level in self.simplices]

    def index(self, s: Simplex) -> int:
        return self._index[len(s) - 1][s]

    def contains(self, s: Simplex) -> bool:
        return 0 < len(s) <= self.dim + 1 and s in self._index[len(s) - 1]

    def cofaces(self, s: Simplex) -> list[Simplex]:
        return list(self._cofaces.get(s, ()))

    def is_closed_pseudomanifold(self) -> bool:
        if self.dim == 0:
            return False
        return all(len(self._cofaces[f]) == 2 for f in self.simplices[self.dim - 1])

    def fundamental_chain(self) -> Chain:
        if self.orientation is None:
            raise NotOrientable("complex carries no orientation")
        return dict(self.orientation)

    def boundary_rows(self, p: int) -> list[dict[int, int]]:
        """Rows (indexed by (p-1)-simplices) of the boundary matrix in degree p."""
        rows: list[dict[int, int]] = [dict() for _ in range(self.count(p - 1))]
        if p < 1 or p > self.dim:
            return rows
        for j, s in enumerate(self.simplices[p]):
            for f, c in simplex_boundary(s).items():
                rows[self.index(f)][j] = c
        return rows

    def boundary_matrix(self, p: int) -> list[list[int]]:
        ncols = self.count(p)
        return [[r.get(j, 0) for j in range(ncols)] for r in self.boundary_rows(p)]

    def homology(self, p: int, coefficients: str = "integers") -> tuple[int, list[int]]:
        """``(betti, torsion)`` of ``H_p``; torsion is empty over the rationals."""
        if coefficients not in ("integers", "rationals"):
            raise ValueError("coefficients must be 'integers' or 'rationals'")
        if not 0 <= p <= self.dim:
            return 0, []
        if coefficients == "rationals":
            rank_p = rational_rank(self.boundary_rows(p)) if p else 0
            rank_next = rational_rank(self.boundary_rows(p + 1)) if p < self.dim else 0
            return self.count(p) - rank_p - rank_next, []
        div_p = elementary_divisors(self.boundary_matrix(p)) if p else []
        div_next = elementary_divisors(self.boundary_matrix(p + 1)) if p < self.dim else []
        return self.count(p) - len(div_p) - len(div_next), [d for d in div_next if d > 1]

    def betti_numbers(self, coefficients: str = "rationals") -> list[int]:
        return [self.homology(p, coefficients)[0] for p in range(self.dim + 1)]

    # serialization
    @classmethod
    def from_json(cls, obj: Mapping) -> "SimplicialComplex":
        K = cls(obj["top_simplices"], bool(obj.get("orientable", True)))
        if "dim" in obj and obj["dim"] != K.dim:
            raise ValueError(f"declared dimension {obj['dim']} differs from {K.dim}")
        return K

    def to_json(self) -> dict:
        tops = []
        for t in self.top:
            if self.orientation and self.orientation[t] < 0:
                t = (t[1], t[0]) + t[2:] if len(t) > 1 else t
            tops.append(list(t))
        return {"dim": self.dim, "top_simplices": tops, "orientable": self.orientation is not None}


def homology_report(K: SimplicialComplex, coefficients: str = "integers") -> dict:
    groups = [K.homology(p, coefficients) for p in range(K.dim + 1)]
    return {"betti": [b for b, _ in groups], "torsion": [t for _, t in groups]}


# -- subdivision ------------------------------------------------------------

@dataclass
class Subdivision:
    """Barycentric subdivision with the simplex each new vertex is the barycenter of."""

    base: SimplicialComplex
    complex: SimplicialComplex
    carrier_of_vertex: tuple
    vertex_of: dict
    _cache: dict = field(default_factory=dict, repr=False)

    def barycenter(self, s: Simplex) -> int:
        return self.vertex_of[s]

    def carrier(self, s: Simplex) -> Simplex:
        """Smallest simplex of the base containing the new simplex ``s``."""
        return self.carrier_of_vertex[s[-1]]

    def subdivide_simplex(self, s: Simplex) -> Chain:
        """Cone formula ``Sd(s) = b_s * Sd(boundary s)``, with ``Sd(v) = b_v``."""
        hit = self._cache.get(s)
        if hit is not None:
            return hit
        b = self.vertex_of[s]
        if len(s) == 1:
            out = {(b,): 1}
        else:
            out = {}
            for face, c in simplex_boundary(s).items():
                for t, d in self.subdivide_simplex(face).items():
                    # b has the largest id, so moving it to the end costs (-1)^len(t)
                    out = chain_add(out, {t + (b,): c * d * (-1) ** len(t)})
        self._cache[s] = out
        return out

    def subdivide(self, chain: Mapping) -> Chain:
        out: Chain = {}
        for s, c in chain.items():
            out = chain_add(out, self.subdivide_simplex(s), c)
        return out


def barycentric_subdivide(K: SimplicialComplex) -> Subdivision:
    """Barycentric subdivision; orientation is transported by the subdivision chain map.

    Examples
    ========

    >>> sub = barycentric_subdivide(SimplicialComplex([(0, 1, 2)]))
    >>> sub.complex.f_vector()
    [7, 12, 6]
    """
    order = [s for level in K.simplices for s in level]
    vertex_of = {s: i for i, s in enumerate(order)}
    tops = []
    for t in K.top:
        for perm in permutations(t):
            tops.append(tuple(vertex_of[tuple(sorted(perm[: i + 1]))] for i in range(len(t))))
    placeholder = Subdivision(K, None, tuple(order), vertex_of)
    orientation = None
    if K.orientation is not None:
        orientation = placeholder.subdivide(K.orientation)
    new = SimplicialComplex(tops, orientable=K.orientation is not None, _orientation=orientation)
    placeholder.complex = new
    return placeholder


def simplicial_approximation(sub: Subdivision, chain: Mapping) -> Chain:
    """Push a chain of the subdivision to the base via ``b_s -> first vertex of s``."""
    out: Chain = {}
    for s, c in chain.items():
        image = [sub.carrier_of_vertex[v][0] for v in s]
        out = chain_add(out, oriented(image), c)
    return out


# -- duality ---------------------------------------------------------------

@dataclass
class DualCell:
    source: Simplex
    chain: Chain

    @property
    def dim(self) -> int:
        return len(next(iter(self.chain))) - 1


class SubdivisionTower:
    """``K0``, its subdivision ``K`` and second subdivision ``K'``.

    Requires ``K0`` to be an oriented closed pseudomanifold.  Dual cells of
    ``K``-simplices and intersection products are chains of ``K'``.
    """

    def __init__(self, K0: SimplicialComplex):
        if K0.orientation is None:
            raise NotOrientable("duality needs an oriented complex")
        if not K0.is_closed_pseudomanifold():
            raise NotAManifold("every codimension-one simplex needs exactly two cofaces")
        self.K0 = K0
        self.first = barycentric_subdivide(K0)
        self.second = barycentric_subdivide(self.first.complex)
        self.K = self.first.complex
        self.Kp = self.second.complex
        self.m = K0.dim
        self.fundamental = self.Kp.fundamental_chain()
        self._by_front: dict[Simplex, list[Simplex]] = defaultdict(list)
        for f in self.fundamental:
            for p in range(self.m + 1):
                self._by_front[f[: p + 1]].append(f)
        self._duals: dict[Simplex, DualCell] = {}

    # ancestry
    def carrier_in_K(self, s: Simplex) -> Simplex:
        return self.second.carrier(s)

    def carrier_in_K0(self, s: Simplex) -> Simplex:
        return self.first.carrier(self.second.carrier(s))

    def K_simplex_in(self, s: Simplex, S: SimplicialComplex) -> bool:
        """Whether the K-simplex ``s`` lies in the subcomplex ``S`` of K0."""
        return S.contains(self.first.carrier(s))

    def K_simplices_in(self, S: SimplicialComplex, p: int) -> list[Simplex]:
        return [s for s in self.K.simplices[p] if self.K_simplex_in(s, S)] if p <= self.m else []

    def subdivide_to_Kp(self, chain_K0: Mapping) -> Chain:
        return self.second.subdivide(self.first.subdivide(chain_K0))

    def to_K0(self, chain_Kp: Mapping) -> Chain:
        """Simplicial approximation K' -> K -> K0."""
        return simplicial_approximation(self.first, simplicial_approximation(self.second, chain_Kp))

    # dual cells
    def dual_sign(self, p: int) -> int:
        """Orientation factor ``(-1)^(p(m-p))`` for duals of p-simplices."""
        return (-1) ** (p * (self.m - p))

    def inner_simplices(self, s: Simplex) -> Chain:
        """``Sd(s)``: the K'-simplices filling ``s`` with induced orientation."""
        return self.second.subdivide_simplex(s)

    def dual_cell(self, s: Simplex, t1: Simplex | None = None) -> DualCell:
        """Dual cell of the K-simplex ``s``: ``+-sgn(t1) * (X_{K'} cap t1^)``.

        ``t1`` is a K'-simplex of the same dimension inside ``s`` (default the
        smallest) and ``sgn(t1)`` its sign in the subdivision of ``s``; the cap
        takes the front face against the cochain.  The extra factor
        ``(-1)^(p(m-p))`` makes the boundary formula for products hold.
        """
        if t1 is None and s in self._duals:
            return self._duals[s]
        if not self.K.contains(s):
            raise ValueError(f"{s} is not a simplex of the subdivision")
        inner = self.inner_simplices(s)
        choice = min(inner) if t1 is None else tuple(t1)
        sign = inner.get(choice)
        if not sign:
            raise ValueError("t1 must be a simplex of the subdivision of s")
        p = len(s) - 1
        sign *= self.dual_sign(p)
        chain: Chain = {}
        for f in self._by_front[choice]:
            chain = chain_add(chain, {f[p:]: sign * self.fundamental[f]})
        cell = DualCell(s, chain)
        if t1 is None:
            self._duals[s] = cell
        return cell

    def as_dual_chain(self, chain: Mapping) -> dict[Simplex, int]:
        """Write a K'-chain as a combination of dual cells; ValueError if it is not one."""
        coeffs: dict[Simplex, object] = {}
        for f, c in chain.items():
            s = self.second.carrier_of_vertex[f[0]]
            if s in coeffs:
                continue
            if len(s) + len(f) != self.m + 2:
                raise ValueError("chain is not a combination of dual cells")
            d = self.dual_cell(s).chain.get(f)
            if not d:
                raise ValueError("chain is not a combination of dual cells")
            coeffs[s] = Fraction(c, d) if c % d else c // d
        rebuilt = self.dual_to_Kp(coeffs)
        if rebuilt != {k: v for k, v in chain.items() if v}:
            raise ValueError("chain is not a combination of dual cells")
        return {s: c for s, c in coeffs.items() if c}

    def dual_to_Kp(self, dual_chain: Mapping) -> Chain:
        out: Chain = {}
        for s, c in dual_chain.items():
            out = chain_add(out, self.dual_cell(s).chain, c)
        return out

    def dual_boundary(self, dual_chain: Mapping) -> dict[Simplex, int]:
        return self.as_dual_chain(boundary(self.dual_to_Kp(dual_chain)))

    def dual_boundary_rows(self, d: int) -> list[dict[int, int]]:
        """Boundary matrix of the dual cell complex from dimension d to d - 1.

        Dual d-cells are indexed like the K-simplices of dimension m - d.
        """
        m, K = self.m, self.K
        rows: list[dict[int, int]] = [dict() for _ in range(K.count(m - d + 1))]
        if d < 1 or d > m:
            return rows
        for j, s in enumerate(K.simplices[m - d]):
            for t, c in self.dual_boundary({s: 1}).items():
                rows[K.index(t)][j] = c
        return rows

    def unit_cochain(self) -> dict[Simplex, int]:
        """Values of the constant 0-cochain 1 on the oriented dual 0-cells."""
        return {s: augmentation(self.dual_cell(s).chain) for s in self.K.simplices[self.m]}

    # intersection product
    def intersection_product(self, s1: Simplex, s2: Simplex, t1: Simplex | None = None,
                             t2: Simplex | None = None) -> Chain:
        """``s1* . s2 = (t1^ cap_r X_{K'}) cap_l t2^``, a chain of dimension dim s2 - dim s1.

        ``t1`` is a K'-simplex inside ``s1`` and ``t2`` a K'-simplex of the dual
        cell of ``s2``; each cochain carries the sign that simplex has in its
        cell.  The left cap of an n-chain with a j-cochain evaluates the back
        face and carries ``(-1)^(j(n-j))``.

        Examples
        ========

        >>> tower = SubdivisionTower(tetrahedron_boundary())
        >>> e = tower.K.simplices[1][0]
        >>> tower.intersection_product(e, e) == {(tower.second.barycenter(e),): 1}
        True
        """
        q = len(s2) - 1
        p1 = len(s1) - 1
        if not set(s1) <= set(s2):
            return {}
        first = self.dual_cell(s1, t1).chain
        dual2 = self.dual_cell(s2).chain
        choice = min(dual2) if t2 is None else tuple(t2)
        sign = dual2.get(choice)
        if not sign:
            raise ValueError("t2 must be a simplex of the dual cell of s2")
        cut = q - p1
        sign *= (-1) ** ((self.m - q) * cut)
        out: Chain = {}
        for f, c in first.items():
            if f[cut:] == choice:
                out = chain_add(out, {f[: cut + 1]: c * sign})
        return out

    def intersect(self, dual_chain: Mapping, chain: Mapping) -> Chain:
        """Bilinear extension: dual cells of K against a K-chain."""
        out: Chain = {}
        for s1, a in dual_chain.items():
            for s2, b in chain.items():
                if set(s1) <= set(s2):
                    out = chain_add(out, self.intersection_product(s1, s2), a * b)
        return out


def poincare_dual(tower: SubdivisionTower, u: Mapping[Simplex, object]) -> Chain:
    """``sum_s <s*, u> s`` for a cochain ``u`` on dual cells, keyed by K-simplex."""
    out = {}
    for s, c in u.items():
        if not tower.K.contains(s):
            raise ValueError(f"{s} is not a simplex of the subdivision")
        if c:
            out[s] = c
    return out


def alexander_dual(tower: SubdivisionTower, S: SimplicialComplex, u: Mapping[Simplex, object]) -> Chain:
    """Relative cochain on dual cells near ``S`` to the chain ``sum_{s in S} <s*, u> s``.

    ``u`` may only be nonzero on dual cells of K-simplices lying in ``S`` (the
    dual cells meeting ``S``); anything else is rejected.
    """
    for s, c in u.items():
        if c and not tower.K_simplex_in(s, S):
            raise ValueError(f"cochain is nonzero on the dual of {s}, which is not in the subcomplex")
    return poincare_dual(tower, u)


def cochain_coboundary(tower: SubdivisionTower, u: Mapping[Simplex, object]) -> dict[Simplex, object]:
    """``(delta u)(t*) = u(boundary t*)`` on dual cells."""
    if not u:
        return {}
    p = tower.m - (len(next(iter(u))) - 1)
    out: dict[Simplex, object] = {}
    for t in tower.K.simplices[tower.m - p - 1] if p + 1 <= tower.m else []:
        v = sum(c * u.get(s, 0) for s, c in tower.dual_boundary({t: 1}).items())
        if v:
            out[t] = v
    return out


def near(tower: SubdivisionTower, s: Simplex, S: SimplicialComplex) -> bool:
    """Whether the K-simplex ``s`` has a vertex in ``S`` (its dual cell lies in the open star of ``S``)."""
    return any(S.contains(tower.first.carrier_of_vertex[v]) for v in s)


@dataclass
class LocalizedProduct:
    chain: Chain
    support: SimplicialComplex | None

    @property
    def degree(self) -> int:
        return augmentation(self.chain) if self.chain else 0


def localized_intersection(tower: SubdivisionTower, S1: SimplicialComplex, S2: SimplicialComplex,
                           a: Mapping[Simplex, object], b: Mapping[Simplex, object]) -> LocalizedProduct:
    """Product of a dual-cell cycle ``a`` near ``S1`` with a K-cycle ``b`` on ``S2``.

    ``a`` is keyed by K-simplices whose dual cells make up the cycle; each must
    touch ``S1``.  ``b`` must lie in ``S2``.  The product is a K'-chain
    supported in the stars of ``S1 n S2``; it is zero when they are disjoint.
    """
    for s, c in a.items():
        if c and not near(tower, s, S1):
            raise ValueError(f"dual cell of {s} leaves the star of S1")
    for s, c in b.items():
        if c and not tower.K_simplex_in(s, S2):
            raise ValueError(f"{s} is not in S2")
    common = [t for t in S1.simplices[0] if S2.contains(t)]
    support = None
    if common:
        tops = [s for level in S1.simplices for s in level if S2.contains(s)]
        maximal = [s for s in tops if not any(set(s) < set(t) for t in tops)]
        support = SimplicialComplex(maximal, orientable=False) if len({len(s) for s in maximal}) == 1 else None
    return LocalizedProduct(tower.intersect(a, b), support)


# -- helpers for classes ------------------------------------------------------

def class_coordinates(K: SimplicialComplex, basis: Sequence[Mapping], cycle: Mapping) -> list[Fraction] | None:
    """Coefficients ``x`` with ``cycle = sum x_j basis_j + boundary``, or None."""
    if not cycle:
        return [Fraction(0)] * len(basis)
    p = len(next(iter(cycle))) - 1
    columns = [dict(b) for b in basis]
    if p < K.dim:
        columns += [simplex_boundary(t) for t in K.simplices[p + 1]]
    rows: list[dict[int, int]] = [dict() for _ in range(K.count(p))]
    for j, col in enumerate(columns):
        for s, c in col.items():
            rows[K.index(s)][j] = c
    rhs = [0] * K.count(p)
    for s, c in cycle.items():
        rhs[K.index(s)] = c
    x = solve(rows, rhs, len(columns))
    if x is None:
        return None
    return [x.get(j, Fraction(0)) for j in range(len(basis))]


def dual_cycle_basis(tower: SubdivisionTower, d: int, allowed: Iterable[Simplex] | None = None) -> list[dict]:
    """Rational basis of dual d-cycles, optionally restricted to given K-simplices."""
    cells = list(allowed) if allowed is not None else list(tower.K.simplices[tower.m - d])
    idx = {s: i for i, s in enumerate(cells)}
    rows: dict[Simplex, dict[int, int]] = defaultdict(dict)
    for s in cells:
        for t, c in tower.dual_boundary({s: 1}).items():
            rows[t][idx[s]] = c
    return [{cells[i]: c for i, c in v.items()} for v in nullspace(list(rows.values()), len(cells))]


def dual_representative(tower: SubdivisionTower, basis: Sequence[Mapping], target: Sequence,
                        allowed: Iterable[Simplex] | None = None) -> dict:
    """A dual cycle whose class has coordinates ``target`` against ``basis``.

    ``basis`` is a list of K0-cycles spanning the relevant homology; classes
    of dual cycles are read off after simplicial approximation to K0.
    """
    d = len(next(iter(basis[0]))) - 1
    cycles = dual_cycle_basis(tower, d, allowed)
    coords = []
    for z in cycles:
        c = class_coordinates(tower.K0, basis, tower.to_K0(tower.dual_to_Kp(z)))
        if c is None:
            raise ValueError("basis does not span the homology of the dual cycles")
        coords.append(c)
    rows = [{i: coords[i][j] for i in range(len(cycles)) if coords[i][j]} for j in range(len(basis))]
    x = solve(rows, list(target), len(cycles))
    if x is None:
        raise ValueError("no dual cycle with the requested class in the allowed cells")
    out: dict = {}
    for i, xi in x.items():
        if xi:
            out = chain_add(out, cycles[i], xi)
    return {s: int(c) if c.denominator == 1 else c for s, c in out.items()}


def intersection_pairing(tower: SubdivisionTower, basis: Sequence[Mapping]) -> list[list]:
    """Matrix of intersection numbers between the classes of ``basis`` (K0-cycles).

    Row classes are realized by dual cycles, column classes by the subdivided
    cycles themselves.
    """
    k = len(basis)
    reps = [dual_representative(tower, basis, [int(i == j) for j in range(k)]) for i in range(k)]
    cols = [tower.first.subdivide(b) for b in basis]
    out = []
    for a in reps:
        row = []
        for b in cols:
            prod = tower.intersect(a, b)
            row.append(int(augmentation(prod)) if prod else 0)
        out.append(row)
    return out


def random_simplex_pairs(tower: SubdivisionTower, count: int, seed: int = 0) -> list[tuple[Simplex, Simplex]]:
    """Pairs ``(s1, s2)`` of K-simplices, mostly with ``s1`` a proper face of ``s2``."""
    rng = random.Random(seed)
    K = tower.K
    out = []
    for _ in range(count):
        q = rng.randint(1, K.dim)
        s2 = rng.choice(K.simplices[q])
        if rng.random() < 0.8:
            size = rng.randint(1, len(s2) - 1)
            s1 = tuple(sorted(rng.sample(s2, size)))
        else:
            s1 = rng.choice(K.simplices[rng.randint(0, K.dim)])
        out.append((s1, s2))
    return out


# -- fixtures -------------------------------------------------------------

def tetrahedron_boundary() -> SimplicialComplex:
    return SimplicialComplex([(0, 1, 2), (0, 3, 1), (0, 2, 3), (1, 3, 2)])


def octahedron() -> SimplicialComplex:
    """Vertices 0..3 on the equator in cyclic order, 4 and 5 the poles."""
    eq = [0, 1, 2, 3]
    tops = []
    for i in range(4):
        a, b = eq[i], eq[(i + 1) % 4]
        tops.append((a, b, 4))
        tops.append((b, a, 5))
    return SimplicialComplex(tops)


def grid_torus(size: int = 3) -> SimplicialComplex:
    """``size x size`` grid on the torus, each square cut along its diagonal."""
    def v(i, j):
        return (i % size) * size + (j % size)

    tops = []
    for i in range(size):
        for j in range(size):
            tops.append((v(i, j), v(i + 1, j), v(i + 1, j + 1)))
            tops.append((v(i, j), v(i + 1, j + 1), v(i, j + 1)))
    return SimplicialComplex(tops)


def grid_torus_loops(size: int = 3) -> tuple[Chain, Chain]:
    """The loops ``j = 0`` (first coordinate varying) and ``i = 0``."""
    def v(i, j):
        return (i % size) * size + (j % size)

    a: Chain = {}
    b: Chain = {}
    for t in range(size):
        a = chain_add(a, oriented((v(t, 0), v(t + 1, 0))))
        b = chain_add(b, oriented((v(0, t), v(0, t + 1))))
    return a, b


def circle(vertices: Sequence[int]) -> SimplicialComplex:
    n = len(vertices)
    return SimplicialComplex([(vertices[i], vertices[(i + 1) % n]) for i in range(n)])


def two_circles() -> SimplicialComplex:
    return SimplicialComplex([(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)])
