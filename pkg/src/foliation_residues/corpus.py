"""Shipped fixtures: involutive foliations, Poisson structures and slice test cases."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exterior import PolyForm, PolyMultivector, wedge_all
from .foliation import FoliationPresentation, linear_change, pullback_under_projection
from .poly import Polynomial, parse_polynomial


def _field(n: int, comps) -> tuple[Polynomial, ...]:
    return tuple(parse_polynomial(c, n) if isinstance(c, str) else Polynomial.constant(n, c) for c in comps)


def one_dimensional(comps, label: str = "") -> FoliationPresentation:
    """Foliation generated by a single vector field given as component strings."""
    return FoliationPresentation.from_vector_fields([_field(len(comps), comps)], label)


def radial(m: int) -> FoliationPresentation:
    return one_dimensional([f"z{i}" for i in range(1, m + 1)], f"radial-C{m}")


def power_field(exponents, label: str = "") -> FoliationPresentation:
    """``sum z_i^{d_i} d/dz_i``; an exponent of None leaves the component zero."""
    comps = [f"z{i}^{d}" if d is not None else 0 for i, d in enumerate(exponents, 1)]
    return one_dimensional(comps, label or "power" + "".join(f"-{d}" for d in exponents))


def linear_field(A, label: str = "") -> FoliationPresentation:
    m = len(A)
    comps = []
    for row in A:
        p = Polynomial.zero(m)
        for j, a in enumerate(row):
            if a:
                p = p + Polynomial.var(m, j + 1).scale(a)
        comps.append(p)
    return FoliationPresentation.from_vector_fields([tuple(comps)], label or "linear")


def pullback(G: FoliationPresentation, n: int, label: str = "") -> FoliationPresentation:
    F = pullback_under_projection(G, n)
    return FoliationPresentation.from_vector_fields(F.fields, label or f"pullback-{G.label}-C{n}")


def coordinate_foliation(k: int, n: int) -> FoliationPresentation:
    fields = [_field(n, [1 if i == j else 0 for i in range(n)]) for j in range(k)]
    return FoliationPresentation.from_vector_fields(fields, f"coordinate-{k}-in-C{n}")


def _sharp_potential(m: int, r: int, s: int) -> Polynomial:
    n = 2 * r + s
    z = [Polynomial.var(n, i) for i in range(1, n + 1)]
    f = z[0] ** m + z[0] ** (m - 1) * sum(z[1:r], Polynomial.zero(n))
    return f + sum((zj ** m for zj in z[r:]), Polynomial.zero(n))


def sharp_example(m: int = 3, r: int = 3, s: int = 3) -> FoliationPresentation:
    """Foliation of ``df ^ dz1 ^ ... ^ dzr`` on C^(2r+s), where
    ``f = z1^m + z1^(m-1)(z2 + ... + zr) + z_(r+1)^m + ... + z_(2r+s)^m``."""
    n = 2 * r + s
    pieces = [PolyForm.differential(_sharp_potential(m, r, s))] + [PolyForm.basis(n, (j,)) for j in range(1, r + 1)]
    return FoliationPresentation.from_form(wedge_all(pieces), f"sharp-example-m{m}-r{r}-s{s}")


def sharp_example_hypersurface(m: int = 3, r: int = 3, s: int = 3) -> FoliationPresentation:
    """The codimension-one foliation ``df = 0``."""
    return FoliationPresentation.from_form(PolyForm.differential(_sharp_potential(m, r, s)), f"sharp-hypersurface-m{m}")


# unimodular changes of coordinates used to disguise fixtures
_T4 = ((1, 1, 0, 0), (0, 1, 1, 0), (0, 0, 1, 0), (0, 0, 0, 1))
_T4_INV = ((1, -1, 1, 0), (0, 1, -1, 0), (0, 0, 1, 0), (0, 0, 0, 1))
_T6 = tuple(tuple(1 if j == i or j == i + 1 else 0 for j in range(6)) for i in range(6))
_T6_INV = tuple(tuple((-1) ** (j - i) if j >= i else 0 for j in range(6)) for i in range(6))


def involutive_corpus() -> list[FoliationPresentation]:
    """Involutive vector-field foliations with 2k <= n <= 9."""
    return [
        pullback(radial(3), 4, "pullback-radial-C3-C4"),
        pullback(power_field([2, 2, 2]), 4, "pullback-squares-C3-C4"),
        pullback(radial(4), 6, "pullback-radial-C4-C6"),
        pullback(power_field([3, 3, None]), 4, "pullback-cubes-line-C3-C4"),
        pullback(linear_field([[2, 1, 0, 0], [0, 1, 0, 0], [0, 0, -1, 1], [1, 0, 0, 3]]), 5, "pullback-linear-C4-C5"),
        pullback(radial(5), 8, "pullback-radial-C5-C8"),
        coordinate_foliation(2, 4),
        coordinate_foliation(3, 6),
        coordinate_foliation(4, 9),
        FoliationPresentation.from_vector_fields(
            [_field(4, ["z1", "z2", 0, 0]), _field(4, [0, 0, "z3", "z4"])], "commuting-scalings-C4"),
        FoliationPresentation.from_vector_fields(
            [_field(6, ["z1", "z2", "z3", 0, 0, 0]), _field(6, [0, 0, 0, "z4", "z5", "z6"])], "product-radial-C6"),
        one_dimensional(["z1", "2*z2", "3*z3"], "diagonal-C3"),
        one_dimensional(["z2", "z3", "z1^2"], "cyclic-C3"),
        FoliationPresentation.from_vector_fields(
            linear_change(pullback(radial(3), 4), _T4, _T4_INV).fields, "sl-pullback-radial-C3-C4"),
        FoliationPresentation.from_vector_fields(
            linear_change(pullback(radial(4), 6), _T6, _T6_INV).fields, "sl-pullback-radial-C4-C6"),
    ]


def poisson(n: int, entries: dict, label: str) -> FoliationPresentation:
    biv = PolyMultivector(n, 2, {idx: parse_polynomial(c, n) for idx, c in entries.items()})
    return FoliationPresentation.from_poisson(biv, label)


def poisson_corpus() -> list[FoliationPresentation]:
    """Poisson structures of generic rank two on C^4, C^5 and C^6."""
    return [
        poisson(4, {(1, 2): "z3"}, "z3-d1d2-C4"),
        poisson(6, {(1, 2): "z3^2"}, "z3sq-d1d2-C6"),
        poisson(4, {(1, 2): "z1"}, "z1-d1d2-C4"),
        poisson(4, {(1, 2): "z3", (2, 3): "z1", (3, 1): "z2"}, "so3-C4"),
        poisson(5, {(1, 2): "z3^2 + z4"}, "z3sq-plus-z4-d1d2-C5"),
        poisson(6, {(1, 2): "z1*z2"}, "z1z2-d1d2-C6"),
        poisson(4, {(1, 2): "1"}, "constant-d1d2-C4"),
    ]


def non_poisson() -> FoliationPresentation:
    """``d1^d2 + z1 d3^d4``: skew but fails the Jacobi identity."""
    return poisson(4, {(1, 2): "1", (3, 4): "z1"}, "non-poisson-C4")


@dataclass(frozen=True)
class SliceCase:
    """A foliation, a rational point on its expected-dimension singular
    component, and the foliation whose residue the slice should reproduce."""

    foliation: FoliationPresentation
    point: tuple
    reference: FoliationPresentation
    reference_point: tuple


def slice_cases() -> list[SliceCase]:
    def case(G, n, point):
        F = pullback(G, n)
        return SliceCase(F, tuple(Fraction(x) for x in point), G, tuple(Fraction(0) for _ in range(G.n)))

    linear = linear_field([[2, 1, 0, 0], [0, 1, 0, 0], [0, 0, -1, 1], [1, 0, 0, 3]], "linear-C4")
    sl = linear_change(pullback(radial(3), 4), _T4, _T4_INV)
    return [
        case(radial(3), 4, (0, 0, 0, 0)),
        case(radial(3), 4, (0, 0, 0, 2)),
        case(power_field([2, 2, 2]), 4, (0, 0, 0, 0)),
        case(power_field([2, 3, 1]), 4, (0, 0, 0, -1)),
        case(radial(4), 6, (0, 0, 0, 0, 3, 0)),
        case(linear, 5, (0, 0, 0, 0, 1)),
        case(one_dimensional(["z1 + z2^2", "z2 + z3^2", "2*z3"], "perturbed-C3"), 4, (0, 0, 0, 1)),
        SliceCase(FoliationPresentation.from_vector_fields(sl.fields, "sl-pullback-radial-C3-C4"),
                  (Fraction(0),) * 4, radial(3), (Fraction(0),) * 3),
        SliceCase(one_dimensional(["z1", "2*z2", "3*z3"], "diagonal-C3"), (Fraction(0),) * 3,
                  one_dimensional(["z1", "2*z2", "3*z3"], "diagonal-C3"), (Fraction(0),) * 3),
    ]
