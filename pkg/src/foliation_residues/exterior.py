"""Differential forms, multivectors and vector fields with polynomial coefficients.

Index sets are strictly increasing tuples of 1-based variable indices, so
``(1, 2)`` is ``dz1^dz2`` for a form and ``d/dz1 ^ d/dz2`` for a multivector.
Vector fields are plain tuples of :class:`Polynomial` components.
"""

from __future__ import annotations

from itertools import combinations
from typing import Mapping, Sequence

from .poly import AmbientMismatch, Polynomial, rational_det, rational_rank, to_qq

VectorField = tuple


def sort_sign(indices: Sequence[int]) -> tuple[int, tuple[int, ...]]:
    """Sign of the permutation sorting ``indices`` and the sorted tuple.

    The sign is 0 when an index repeats.
    """
    idx = list(indices)
    if len(set(idx)) != len(idx):
        return 0, ()
    sign = 1
    # insertion sort counting transpositions
    for i in range(1, len(idx)):
        j = i
        while j > 0 and idx[j - 1] > idx[j]:
            idx[j - 1], idx[j] = idx[j], idx[j - 1]
            sign = -sign
            j -= 1
    return sign, tuple(idx)


class _Graded:
    """Shared storage for homogeneous forms and multivectors."""

    __slots__ = ("n", "degree", "coeffs")

    def __init__(self, n: int, degree: int, coeffs: Mapping[Sequence[int], Polynomial] | None = None):
        if not 0 <= degree <= n:
            raise ValueError(f"degree {degree} outside 0..{n}")
        self.n = n
        self.degree = degree
        clean: dict[tuple[int, ...], Polynomial] = {}
        for idx, c in (coeffs or {}).items():
            if len(idx) != degree:
                raise ValueError(f"index set {idx} has wrong size for degree {degree}")
            sign, key = sort_sign(idx)
            if any(not 1 <= i <= n for i in idx):
                raise ValueError(f"index set {idx} outside 1..{n}")
            if not isinstance(c, Polynomial):
                c = Polynomial.constant(n, c)
            if c.nvars != n:
                raise AmbientMismatch("coefficient lives in a different ring")
            if sign == 0 or c.is_zero():
                continue
            total = clean.get(key)
            total = c.scale(sign) if total is None else total + c.scale(sign)
            if total.is_zero():
                clean.pop(key, None)
            else:
                clean[key] = total
        self.coeffs = clean

    def _make(self, degree, coeffs):
        return type(self)(self.n, degree, coeffs)

    def __eq__(self, other):
        return type(self) is type(other) and (self.n, self.degree, self.coeffs) == (other.n, other.degree, other.coeffs)

    def __hash__(self):
        return hash((type(self).__name__, self.n, self.degree, frozenset(self.coeffs.items())))

    def __bool__(self):
        return bool(self.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __getitem__(self, idx) -> Polynomial:
        sign, key = sort_sign(idx)
        c = self.coeffs.get(key)
        if c is None or sign == 0:
            return Polynomial.zero(self.n)
        return c if sign == 1 else -c

    def __add__(self, other):
        self._check(other)
        if other.degree != self.degree:
            raise ValueError("cannot add elements of different degree")
        coeffs = dict(self.coeffs)
        for k, c in other.coeffs.items():
            coeffs[k] = coeffs[k] + c if k in coeffs else c
        return self._make(self.degree, coeffs)

    def __neg__(self):
        return self._make(self.degree, {k: -c for k, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, f) -> "_Graded":
        """Multiply every coefficient by a polynomial or rational ``f``."""
        if isinstance(f, Polynomial):
            return self._make(self.degree, {k: c * f for k, c in self.coeffs.items()})
        return self._make(self.degree, {k: c.scale(f) for k, c in self.coeffs.items()})

    def _check(self, other):
        if type(other) is not type(self):
            raise TypeError(f"cannot combine {type(self).__name__} with {type(other).__name__}")
        if other.n != self.n:
            raise AmbientMismatch(f"ambient dimensions {self.n} and {other.n} differ")

    def coefficient_list(self) -> list[Polynomial]:
        return [self.coeffs[k] for k in sorted(self.coeffs)]

    def map_coefficients(self, fn) -> "_Graded":
        return self._make(self.degree, {k: fn(c) for k, c in self.coeffs.items()})

    def __repr__(self):
        sym = "dz" if isinstance(self, PolyForm) else "d"
        if not self.coeffs:
            return f"{type(self).__name__}(0, degree={self.degree})"
        parts = []
        for k in sorted(self.coeffs):
            basis = "^".join(f"{sym}{i}" for i in k) or "1"
            parts.append(f"({self.coeffs[k]})*{basis}")
        return f"{type(self).__name__}(" + " + ".join(parts) + ")"


class PolyForm(_Graded):
    """Differential ``p``-form on C^n with polynomial coefficients."""

    __slots__ = ()

    @classmethod
    def basis(cls, n: int, indices: Sequence[int], coef=1) -> "PolyForm":
        return cls(n, len(indices), {tuple(indices): coef})

    @classmethod
    def volume(cls, n: int) -> "PolyForm":
        return cls.basis(n, tuple(range(1, n + 1)))

    @classmethod
    def one_form(cls, components: Sequence[Polynomial]) -> "PolyForm":
        n = len(components)
        return cls(n, 1, {(i + 1,): c for i, c in enumerate(components)})

    @classmethod
    def differential(cls, f: Polynomial) -> "PolyForm":
        return cls.one_form([f.derivative(i) for i in range(1, f.nvars + 1)])


class PolyMultivector(_Graded):
    """Multivector field of degree ``p`` on C^n with polynomial coefficients."""

    __slots__ = ()

    @classmethod
    def from_vector_field(cls, v: Sequence[Polynomial]) -> "PolyMultivector":
        n = len(v)
        return cls(n, 1, {(i + 1,): c for i, c in enumerate(v)})

    @classmethod
    def basis(cls, n: int, indices: Sequence[int], coef=1) -> "PolyMultivector":
        return cls(n, len(indices), {tuple(indices): coef})


def wedge(a: _Graded, b: _Graded) -> _Graded:
    """Exterior product with shuffle signs; both factors must be the same kind."""
    a._check(b)
    if a.degree + b.degree > a.n:
        raise ValueError(f"degree {a.degree + b.degree} exceeds ambient dimension {a.n}")
    out: dict[tuple[int, ...], Polynomial] = {}
    for i, ca in a.coeffs.items():
        si = set(i)
        for j, cb in b.coeffs.items():
            if si.intersection(j):
                continue
            sign, key = sort_sign(i + j)
            term = ca * cb
            if sign < 0:
                term = -term
            out[key] = out[key] + term if key in out else term
    return a._make(a.degree + b.degree, out)


def wedge_all(items: Sequence[_Graded]) -> _Graded:
    result = items[0]
    for x in items[1:]:
        result = wedge(result, x)
    return result


def contract(v: Sequence[Polynomial], omega: PolyForm) -> PolyForm:
    """Interior product ``i_v omega`` of a vector field with a form of degree >= 1."""
    if omega.degree < 1:
        raise ValueError("cannot contract a 0-form")
    if len(v) != omega.n:
        raise AmbientMismatch("vector field and form live on different spaces")
    out: dict[tuple[int, ...], Polynomial] = {}
    for idx, c in omega.coeffs.items():
        for t, i in enumerate(idx):
            vi = v[i - 1]
            if vi.is_zero():
                continue
            key = idx[:t] + idx[t + 1:]
            term = vi * c
            if t % 2:
                term = -term
            out[key] = out[key] + term if key in out else term
    return PolyForm(omega.n, omega.degree - 1, out)


def exterior_derivative(omega: PolyForm) -> PolyForm:
    if omega.degree == omega.n:
        return PolyForm(omega.n, omega.degree, {})
    out: dict[tuple[int, ...], Polynomial] = {}
    for idx, c in omega.coeffs.items():
        for j in range(1, omega.n + 1):
            if j in idx:
                continue
            d = c.derivative(j)
            if d.is_zero():
                continue
            sign, key = sort_sign((j,) + idx)
            term = d if sign > 0 else -d
            out[key] = out[key] + term if key in out else term
    return PolyForm(omega.n, omega.degree + 1, out)


def lie_bracket(u: Sequence[Polynomial], v: Sequence[Polynomial]) -> VectorField:
    """``[u, v]_j = sum_i (u_i dv_j/dz_i - v_i du_j/dz_i)``."""
    if len(u) != len(v):
        raise AmbientMismatch("vector fields have different lengths")
    n = len(u)
    if n and (u[0].nvars != v[0].nvars):
        raise AmbientMismatch("vector fields live in different rings")
    out = []
    for j in range(n):
        acc = Polynomial.zero(u[0].nvars, u[0].names)
        for i in range(n):
            if not u[i].is_zero():
                acc = acc + u[i] * v[j].derivative(i + 1)
            if not v[i].is_zero():
                acc = acc - v[i] * u[j].derivative(i + 1)
        out.append(acc)
    return tuple(out)


def affine_pullback(omega: PolyForm, p: Sequence, L: Sequence[Sequence]) -> PolyForm:
    """Pull ``omega`` back along ``w -> p + L w`` with ``L`` an n x m rational matrix."""
    n = omega.n
    if len(p) != n or len(L) != n:
        raise ValueError("base point and matrix must have n rows")
    m = len(L[0])
    if any(len(row) != m for row in L):
        raise ValueError("ragged slice matrix")
    if rational_rank(L) < m:
        raise ValueError("slice matrix is rank deficient")
    Lq = [[to_qq(x) for x in row] for row in L]
    w = [Polynomial.var(m, b) for b in range(1, m + 1)]
    subst = []
    for a in range(n):
        expr = Polynomial.constant(m, p[a])
        for b in range(m):
            if Lq[a][b]:
                expr = expr + w[b].scale(Lq[a][b])
        subst.append(expr)
    deg = omega.degree
    if deg > m:
        raise ValueError(f"a {deg}-form cannot be pulled back to a {m}-dimensional slice")
    targets = list(combinations(range(1, m + 1), deg))
    out: dict[tuple[int, ...], Polynomial] = {}
    for idx, c in omega.coeffs.items():
        pulled = c.compose(subst)
        if pulled.is_zero():
            continue
        for J in targets:
            minor = rational_det([[Lq[a - 1][b - 1] for b in J] for a in idx]) if deg else 1
            if minor:
                term = pulled.scale(minor)
                out[J] = out[J] + term if J in out else term
    return PolyForm(m, deg, out)
