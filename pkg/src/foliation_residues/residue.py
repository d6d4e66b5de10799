"""Grothendieck residues and Baum-Bott residues at isolated zeros of vector fields.

Characteristic classes use the convention ``c_i(A)`` = sum of the ``i x i``
principal minors of ``A``, i.e. ``det(I + tA) = sum_i c_i(A) t^i``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from gmpy2 import mpq

from .foliation import SliceFoliation
from .ideal import (
    Ideal,
    NotZeroDimensional,
    groebner,
    is_zero_dimensional,
    standard_monomial_count,
    variable_power_in_ideal,
    zero_locus_is_origin_only,
)
from .poly import Polynomial, PolyMatrix, jacobian, parse_polynomial, principal_minor_sum, to_qq


class NotIsolated(ValueError):
    """The zero set of the denominators is more than the origin."""


class DegreeTooLow(ValueError):
    """The characteristic polynomial has weighted degree below the slice dimension."""


@dataclass(frozen=True)
class PhiSpec:
    """Weighted-homogeneous polynomial in Chern symbols ``c1..cM`` (weight of ``ci`` is ``i``)."""

    expression: Polynomial
    weighted_degree: int
    text: str

    @property
    def max_index(self) -> int:
        return max((i for i in self.expression.variables()), default=0)

    def __str__(self):
        return self.text


def parse_phi(text: str) -> PhiSpec:
    """Parse e.g. ``c1^2*c2 - 2*c4``; every monomial must have the same positive weight."""
    expr = parse_polynomial(text, prefix="c")
    if expr.is_zero():
        raise ValueError("phi must be nonzero")
    weights = {sum((i + 1) * e for i, e in enumerate(exp)) for exp in expr.terms}
    if len(weights) != 1:
        raise ValueError(f"phi {text!r} is not weighted-homogeneous")
    d = weights.pop()
    if d < 1:
        raise ValueError("phi must have positive weighted degree")
    return PhiSpec(expr, d, str(expr))


def chern(m: int) -> PhiSpec:
    """``c_m``."""
    return parse_phi(f"c{m}")


@dataclass(frozen=True)
class ResidueResult:
    value: Fraction
    point: tuple[Fraction, ...]
    phi: PhiSpec
    multiplicity: int | None
    vanishes_by_degree: bool = False


def _to_fraction(x) -> Fraction:
    x = to_qq(x)
    return Fraction(int(x.numerator), int(x.denominator))


def _truncate(p: Polynomial, bound: Sequence[int]) -> Polynomial:
    """Drop terms outside the box ``exp < bound`` (reduction mod the monomial ideal)."""
    return Polynomial(p.nvars, {e: c for e, c in p.terms.items() if all(x < b for x, b in zip(e, bound))}, p.names, _clean=True)


def _residue_with_basis(h: Polynomial, f: Sequence[Polynomial], G) -> mpq:
    m = len(f)
    exps, rows = [], []
    for i in range(1, m + 1):
        a, cof = variable_power_in_ideal(G, i)
        exps.append(a)
        rows.append(cof)
    A = PolyMatrix([[_truncate(c, exps) for c in row] for row in rows])
    det = _truncate(A.det(), exps)
    target = tuple(a - 1 for a in exps)
    total = mpq(0)
    for e, c in h.terms.items():
        rest = tuple(t - x for t, x in zip(target, e))
        if min(rest) < 0:
            continue
        total += c * det.coeff(rest)
    return total


def _certified_basis(f: Sequence[Polynomial]):
    if any(p.nvars != len(f) for p in f):
        raise ValueError("need as many polynomials as variables")
    ideal = Ideal(list(f), len(f))
    G = groebner(ideal, track_cofactors=True)
    if not is_zero_dimensional(G):
        raise NotZeroDimensional("denominators do not define a finite zero set")
    if not zero_locus_is_origin_only(ideal):
        raise NotIsolated("denominators vanish away from the origin")
    return G


def grothendieck_residue(h: Polynomial, f: Sequence[Polynomial]) -> Fraction:
    """Res_0 [h dz / (f_1 ... f_m)] by the transformation law.

    Finds ``z_i^{a_i} = sum_j A_ij f_j`` and returns the coefficient of
    ``z^{a-1}`` in ``h det(A)``.  Requires V(f) = {0}.
    """
    G = _certified_basis(f)
    return _to_fraction(_residue_with_basis(h, f, G))


def chern_numerator(phi: PhiSpec, v: Sequence[Polynomial]) -> Polynomial:
    """Substitute ``c_i -> principal_minor_sum(Jv, i)`` into phi."""
    m = len(v)
    if phi.max_index > m:
        raise ValueError(f"phi uses c{phi.max_index} but the field has only {m} components")
    J = jacobian(v)
    cs = [principal_minor_sum(J, i) if i <= m else Polynomial.zero(v[0].nvars) for i in range(1, phi.expression.nvars + 1)]
    return phi.expression.compose(cs)


def baum_bott_residue(v, phi: PhiSpec, point: Sequence | None = None) -> ResidueResult:
    """Res_phi of the foliation generated by ``v`` at ``point`` (default the origin).

    ``v`` is a vector field or a :class:`SliceFoliation`.  Weighted degree above
    the dimension gives 0 (flagged); below it is rejected.
    """
    if isinstance(v, SliceFoliation):
        v = v.generator
    v = tuple(v)
    m = len(v)
    if point is None:
        point = (0,) * m
    if len(point) != m:
        raise ValueError("point dimension mismatch")
    if any(to_qq(x) for x in point):
        v = tuple(c.translate(point) for c in v)
    pt = tuple(_to_fraction(x) for x in point)
    d = phi.weighted_degree
    if d < m:
        raise DegreeTooLow(f"phi has weighted degree {d} < {m}")
    G = _certified_basis(v)
    mult = standard_monomial_count(G)
    if d > m:
        return ResidueResult(Fraction(0), pt, phi, mult, vanishes_by_degree=True)
    value = _residue_with_basis(chern_numerator(phi, v), v, G)
    return ResidueResult(_to_fraction(value), pt, phi, mult)


def _charpoly_chern(A: list[list[mpq]]) -> list[mpq]:
    """``[c_0, ..., c_m]`` of a constant matrix via Faddeev-LeVerrier."""
    m = len(A)
    ident = [[mpq(1) if i == j else mpq(0) for j in range(m)] for i in range(m)]
    M = [[mpq(0)] * m for _ in range(m)]
    coeffs = [mpq(1)]  # char poly det(lambda I - A) coefficients a_0 = 1, a_1, ...
    for k in range(1, m + 1):
        # M_k = A M_{k-1} + a_{k-1} I
        prev = coeffs[-1]
        AM = [[sum(A[i][t] * M[t][j] for t in range(m)) for j in range(m)] for i in range(m)]
        M = [[AM[i][j] + prev * ident[i][j] for j in range(m)] for i in range(m)]
        AMk = [[sum(A[i][t] * M[t][j] for t in range(m)) for j in range(m)] for i in range(m)]
        a_k = -sum(AMk[i][i] for i in range(m)) / k
        coeffs.append(a_k)
    return [c if i % 2 == 0 else -c for i, c in enumerate(coeffs)]


def nondegenerate_oracle(v: Sequence[Polynomial], phi: PhiSpec) -> Fraction:
    """phi(A) / det(A) for the linear part ``A`` of ``v`` at 0 (a simple zero)."""
    m = len(v)
    A = []
    for comp in v:
        row = []
        for j in range(m):
            e = [0] * m
            e[j] = 1
            row.append(comp.coeff(tuple(e)))
        A.append(row)
    cs = _charpoly_chern(A)
    det = cs[m]
    if not det:
        raise ValueError("linear part is degenerate")
    if phi.max_index > m:
        raise ValueError(f"phi uses c{phi.max_index} beyond dimension {m}")
    vals = [cs[i] if i <= m else mpq(0) for i in range(1, phi.expression.nvars + 1)]
    return _to_fraction(phi.expression.evaluate(vals) / det)
