"""Foliations on C^n presented by vector fields, twisted forms or Poisson bivectors."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations
from math import gcd, lcm
from typing import Sequence

from .exterior import (
    PolyForm,
    PolyMultivector,
    affine_pullback,
    contract,
    exterior_derivative,
    lie_bracket,
    wedge,
    wedge_all,
)
from .ideal import Ideal, krull_dimension
from .poly import Polynomial, PolyMatrix, gcd_polynomials, parse_polynomial, rational_rank, to_qq


class DegenerateFoliation(ValueError):
    """The presentation's twisted form vanishes identically."""


class NotTransverse(ValueError):
    """The slice pulls the twisted form back to zero."""


class DegenerateSlice(ValueError):
    """The slice generator vanishes after saturation."""


KINDS = ("vector_fields", "form", "poisson")


@dataclass(frozen=True)
class FoliationPresentation:
    n: int
    kind: str
    k: int
    fields: tuple[tuple[Polynomial, ...], ...] | None = None
    form: PolyForm | None = None
    bivector: PolyMultivector | None = None
    label: str = field(default="", compare=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown presentation kind {self.kind!r}")
        if self.kind == "vector_fields":
            if self.fields is None or len(self.fields) != self.k:
                raise ValueError("vector_fields presentation needs exactly k fields")
            if any(len(v) != self.n for v in self.fields):
                raise ValueError(f"every field needs {self.n} components")
            if any(c.nvars != self.n for v in self.fields for c in v):
                raise ValueError(f"field components must be polynomials in {self.n} variables")
        elif self.kind == "form":
            if self.form is None or self.form.n != self.n or self.form.degree != self.n - self.k:
                raise ValueError("form presentation needs a form of degree n - k")
        elif self.bivector is None or self.bivector.degree != 2 or self.bivector.n != self.n:
            raise ValueError("poisson presentation needs a bivector")

    # constructors
    @classmethod
    def from_vector_fields(cls, fields: Sequence[Sequence[Polynomial]], label: str = "") -> "FoliationPresentation":
        fields = tuple(tuple(v) for v in fields)
        if not fields:
            raise ValueError("need at least one vector field")
        return cls(len(fields[0]), "vector_fields", len(fields), fields=fields, label=label)

    @classmethod
    def from_form(cls, form: PolyForm, label: str = "") -> "FoliationPresentation":
        return cls(form.n, "form", form.n - form.degree, form=form, label=label)

    @classmethod
    def from_poisson(cls, bivector: PolyMultivector, label: str = "") -> "FoliationPresentation":
        r = poisson_matrix(bivector).rank()
        return cls(bivector.n, "poisson", r, bivector=bivector, label=label)

    @classmethod
    def from_poisson_matrix(cls, rows: Sequence[Sequence[Polynomial]], label: str = "") -> "FoliationPresentation":
        n = len(rows)
        for i in range(n):
            for j in range(n):
                if rows[i][j] != -rows[j][i]:
                    raise ValueError("Poisson matrix is not skew-symmetric")
        biv = PolyMultivector(n, 2, {(i + 1, j + 1): rows[i][j] for i in range(n) for j in range(i + 1, n)})
        return cls.from_poisson(biv, label)

    @classmethod
    def from_json(cls, obj: dict) -> "FoliationPresentation":
        n = obj["n"]
        kind = obj["kind"]
        label = obj.get("label", "")
        if kind == "vector_fields":
            fields = [[parse_polynomial(s, n) for s in v] for v in obj["data"]]
            F = cls.from_vector_fields(fields, label)
            if "k" in obj and obj["k"] != F.k:
                raise ValueError("declared k differs from the number of fields")
            return F
        entries = {tuple(e["indices"]): parse_polynomial(e["coef"], n) for e in obj["data"]}
        if kind == "form":
            degree = n - obj["k"]
            if any(len(idx) != degree for idx in entries):
                raise ValueError("form entries must have degree n - k")
            return cls.from_form(PolyForm(n, degree, entries), label)
        if kind == "poisson":
            return cls.from_poisson(PolyMultivector(n, 2, entries), label)
        raise ValueError(f"unknown presentation kind {kind!r}")

    def to_json(self) -> dict:
        out: dict = {"n": self.n, "kind": self.kind}
        if self.label:
            out["label"] = self.label
        if self.kind == "vector_fields":
            out["k"] = self.k
            out["data"] = [[str(c) for c in v] for v in self.fields]
        else:
            graded = self.form if self.kind == "form" else self.bivector
            if self.kind == "form":
                out["k"] = self.k
            out["data"] = [{"indices": list(idx), "coef": str(graded.coeffs[idx])} for idx in sorted(graded.coeffs)]
        return out


@dataclass(frozen=True)
class SliceSpec:
    point: tuple
    matrix: tuple[tuple[int, ...], ...]
    seed: int | None = None

    @property
    def m(self) -> int:
        return len(self.matrix[0])


@dataclass(frozen=True)
class SliceFoliation:
    m: int
    generator: tuple[Polynomial, ...]
    slice: SliceSpec


@dataclass(frozen=True)
class PoissonAnalysis:
    jacobi_ok: bool
    generic_rank: int
    degeneracy_ideals: dict
    degeneracy_dims: dict


# -- twisted forms and singular ideals --------------------------------------

def omega_from_vector_fields(F: FoliationPresentation) -> PolyForm:
    """``i_{v_k} ... i_{v_1} (dz_1 ^ ... ^ dz_n)``, a form of degree n - k."""
    if F.kind != "vector_fields":
        raise ValueError("presentation is not given by vector fields")
    omega = PolyForm.volume(F.n)
    for v in F.fields:
        omega = contract(v, omega)
    return omega


def contract_multivector(xi: PolyMultivector, omega: PolyForm) -> PolyForm:
    """``i_xi omega`` with ``i_{d1^...^dp} = i_{dp} o ... o i_{d1}``."""
    if xi.degree > omega.degree:
        raise ValueError("multivector degree exceeds form degree")
    n = omega.n
    out = PolyForm(n, omega.degree - xi.degree, {})
    for idx, c in xi.coeffs.items():
        piece = omega
        for i in idx:
            e = [Polynomial.zero(n)] * n
            e[i - 1] = Polynomial.constant(n, 1)
            piece = contract(e, piece)
        out = out + piece.scale(c)
    return out


def twisted_form(F: FoliationPresentation) -> PolyForm:
    """The (n - k)-form cutting out the foliation, before saturation."""
    if F.kind == "vector_fields":
        return omega_from_vector_fields(F)
    if F.kind == "form":
        return F.form
    r = F.k
    if r == 0:
        return PolyForm.volume(F.n)
    power = wedge_all([F.bivector] * (r // 2))
    return contract_multivector(power, PolyForm.volume(F.n))


def saturated_form(F: FoliationPresentation) -> PolyForm:
    """Twisted form divided by the gcd of its coefficients."""
    omega = twisted_form(F)
    if omega.is_zero():
        raise DegenerateFoliation("twisted form vanishes identically")
    g = gcd_polynomials(omega.coefficient_list())
    if g.is_constant():
        return omega
    return omega.map_coefficients(lambda c: c.divexact(g))


def _clean_generators(polys) -> list[Polynomial]:
    seen = {}
    for p in polys:
        if p.is_zero():
            continue
        q = p.monic()
        if q.is_constant():
            return [q]
        seen[q] = None
    return sorted(seen, key=lambda p: (p.degree(), str(p)))


def singular_ideal(F: FoliationPresentation) -> Ideal:
    """Ideal of Sing(F): coefficients of the saturated twisted form.

    For a Poisson presentation this is the ideal of r x r minors of the
    Poisson matrix, r being the generic rank.
    """
    if F.kind == "poisson":
        r = F.k
        if r == 0:
            raise DegenerateFoliation("zero Poisson structure")
        return Ideal(_clean_generators(poisson_matrix(F.bivector).minors(r)), F.n)
    return Ideal(_clean_generators(saturated_form(F).coefficient_list()), F.n)


def involutivity_check(F: FoliationPresentation) -> bool:
    """True iff every bracket ``[v_i, v_j]`` wedges to zero with ``v_1 ^ ... ^ v_k``."""
    if F.kind != "vector_fields":
        raise ValueError("involutivity_check needs a vector-field presentation")
    if F.k >= F.n:
        return True
    top = wedge_all([PolyMultivector.from_vector_field(v) for v in F.fields])
    for i, j in combinations(range(F.k), 2):
        b = PolyMultivector.from_vector_field(lie_bracket(F.fields[i], F.fields[j]))
        if not wedge(b, top).is_zero():
            return False
    return True


def form_is_integrable(omega: PolyForm) -> bool:
    """Frobenius test for a locally decomposable form: ``(i_xi omega) ^ d omega = 0``
    for every coordinate multivector ``xi`` of degree ``deg(omega) - 1``."""
    q = omega.degree
    if q == 0 or q >= omega.n - 1:
        return True
    d = exterior_derivative(omega)
    if d.is_zero():
        return True
    n = omega.n
    for idx in combinations(range(1, n + 1), q - 1):
        piece = contract_multivector(PolyMultivector.basis(n, idx), omega) if idx else omega
        if piece.degree + d.degree <= n and not wedge(piece, d).is_zero():
            return False
    return True


def is_involutive(F: FoliationPresentation) -> bool:
    if F.kind == "vector_fields":
        return involutivity_check(F)
    if F.kind == "form":
        return form_is_integrable(F.form)
    return poisson_analysis(F).jacobi_ok


# -- Poisson structures -----------------------------------------------------

def poisson_matrix(bivector: PolyMultivector) -> PolyMatrix:
    n = bivector.n
    return PolyMatrix([[bivector[(i, j)] if i != j else Polynomial.zero(n) for j in range(1, n + 1)] for i in range(1, n + 1)])


def jacobi_identity_holds(bivector: PolyMultivector) -> bool:
    """Coordinate form of ``[sigma, sigma] = 0``: the cyclic sum over every triple vanishes."""
    n = bivector.n
    s = [[bivector[(i, j)] if i != j else Polynomial.zero(n) for j in range(1, n + 1)] for i in range(1, n + 1)]
    ds = [[[s[i][j].derivative(l + 1) for l in range(n)] for j in range(n)] for i in range(n)]
    for i, j, k in combinations(range(n), 3):
        total = Polynomial.zero(n)
        for l in range(n):
            for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
                if not s[a][l].is_zero() and not ds[b][c][l].is_zero():
                    total = total + s[a][l] * ds[b][c][l]
        if not total.is_zero():
            return False
    return True


def poisson_analysis(F: FoliationPresentation) -> PoissonAnalysis:
    """Jacobi check, generic rank and the rank-degeneracy ideals of a bivector.

    ``degeneracy_ideals[s]`` cuts out ``{rank <= s}`` through the
    ``(s+2) x (s+2)`` minors, for even ``s < r``.
    """
    if F.kind != "poisson":
        raise ValueError("poisson_analysis needs a Poisson presentation")
    M = poisson_matrix(F.bivector)
    r = F.k
    ideals, dims = {}, {}
    for s in range(0, r, 2):
        I = Ideal(_clean_generators(M.minors(s + 2)), F.n)
        ideals[s] = I
        dims[s] = krull_dimension(I)
    return PoissonAnalysis(jacobi_identity_holds(F.bivector), r, ideals, dims)


# -- slices and pullbacks ---------------------------------------------------

def slice_dimension(F: FoliationPresentation) -> int:
    return F.n - F.k + 1


def make_slice(F: FoliationPresentation, point: Sequence, seed: int, bound: int = 5) -> SliceSpec:
    """Random affine slice ``w -> point + L w`` of dimension n - k + 1.

    ``L`` has integer entries in ``[-bound, bound]`` drawn from a generator
    seeded with ``seed``; rank-deficient draws are redrawn (at most 100).
    """
    n, m = F.n, slice_dimension(F)
    if len(point) != n:
        raise ValueError(f"point must have {n} coordinates")
    pt = tuple(to_qq(x) for x in point)
    rng = random.Random(seed)
    for _ in range(100):
        L = tuple(tuple(rng.randint(-bound, bound) for _ in range(m)) for _ in range(n))
        if rational_rank(L) == m:
            return SliceSpec(pt, L, seed)
    raise ValueError("could not draw a full-rank slice matrix in 100 attempts")


def identity_slice(F: FoliationPresentation, point: Sequence) -> SliceSpec:
    n = F.n
    L = tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))
    return SliceSpec(tuple(to_qq(x) for x in point), L, None)


def _normalize_generator(v: list[Polynomial]) -> tuple[Polynomial, ...]:
    g = gcd_polynomials(v)
    if not g.is_constant():
        v = [c.divexact(g) for c in v]
    num, den = 0, 1
    for c in v:
        for x in c.terms.values():
            num = gcd(num, int(x.numerator))
            den = lcm(den, int(x.denominator))
    scale = to_qq(den) / num
    first = next(c for c in v if not c.is_zero())
    if first.leading_term()[1] < 0:
        scale = -scale
    return tuple(c.scale(scale) for c in v)


def slice_foliation(F: FoliationPresentation, S: SliceSpec) -> SliceFoliation:
    """One-dimensional foliation induced on the slice, as a saturated vector field."""
    m = S.m
    if m != slice_dimension(F):
        raise ValueError("slice dimension must be n - k + 1")
    eta = affine_pullback(saturated_form(F), S.point, S.matrix)
    if eta.is_zero():
        raise NotTransverse("pulled-back form vanishes identically")
    full = tuple(range(1, m + 1))
    v = []
    for j in range(1, m + 1):
        c = eta[full[: j - 1] + full[j:]]
        v.append(c if j % 2 == 1 else -c)
    if all(c.is_zero() for c in v):
        raise DegenerateSlice("slice generator vanishes")
    return SliceFoliation(m, _normalize_generator(v), S)


def pullback_under_projection(G: FoliationPresentation, n: int) -> FoliationPresentation:
    """Pull a one-dimensional foliation on C^m back along ``(z1..zn) -> (z1..zm)``."""
    if G.kind != "vector_fields" or G.k != 1:
        raise ValueError("G must be a one-dimensional vector-field presentation")
    m = G.n
    if n < m:
        raise ValueError("target dimension smaller than source")

    def lift(p: Polynomial) -> Polynomial:
        return Polynomial(n, {e + (0,) * (n - m): c for e, c in p.terms.items()})

    fields = [tuple(lift(c) for c in G.fields[0]) + tuple(Polynomial.zero(n) for _ in range(n - m))]
    for j in range(m + 1, n + 1):
        fields.append(tuple(Polynomial.constant(n, 1 if i == j else 0) for i in range(1, n + 1)))
    return FoliationPresentation.from_vector_fields(fields, label=f"pullback({G.label or 'G'})->C{n}")


def linear_change(F: FoliationPresentation, T: Sequence[Sequence[int]], T_inv: Sequence[Sequence[int]]) -> FoliationPresentation:
    """Express a vector-field foliation in new coordinates ``z = T z'``: fields become ``T^{-1} v(T z')``."""
    if F.kind != "vector_fields":
        raise ValueError("linear_change needs a vector-field presentation")
    n = F.n
    zs = [Polynomial.var(n, i) for i in range(1, n + 1)]
    subst = []
    for a in range(n):
        expr = Polynomial.zero(n)
        for b in range(n):
            if T[a][b]:
                expr = expr + zs[b].scale(T[a][b])
        subst.append(expr)
    new_fields = []
    for v in F.fields:
        w = [c.compose(subst) for c in v]
        new_fields.append(tuple(
            sum((w[b].scale(T_inv[a][b]) for b in range(n) if T_inv[a][b]), Polynomial.zero(n)) for a in range(n)
        ))
    return FoliationPresentation.from_vector_fields(new_fields, label=F.label)
