"""Residues of foliations on transverse slices, and the dimension-bound checkers.

A foliation of dimension k on C^n is cut by an affine slice of dimension
n - k + 1 through a singular point; the induced foliation on the slice is
one-dimensional and its Baum-Bott residue at the point is the quantity
compared across slices.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .foliation import (
    DegenerateSlice,
    FoliationPresentation,
    NotTransverse,
    SliceSpec,
    identity_slice,
    is_involutive,
    make_slice,
    poisson_analysis,
    singular_ideal,
    slice_foliation,
)
from .ideal import Ideal, krull_dimension, zero_locus_is_origin_only
from .poly import qq_str, to_qq
from .residue import PhiSpec, ResidueResult, baum_bott_residue


class RetriesExhausted(ValueError):
    """No certified slice was found; ``attempts`` lists what each draw failed on."""

    def __init__(self, message: str, attempts: list[dict]):
        super().__init__(message)
        self.attempts = attempts

    @property
    def slice_ideal_dimension(self) -> int | None:
        dims = [a["slice_ideal_dimension"] for a in self.attempts if "slice_ideal_dimension" in a]
        return max(dims) if dims else None


@dataclass(frozen=True)
class SliceResidueReport:
    fixture: str
    slice: SliceSpec
    certified: dict
    residue: ResidueResult
    retries_used: int

    def to_json(self) -> dict:
        return {
            "fixture": self.fixture,
            "certified": dict(self.certified),
            "residue": {
                "value": qq_str(self.residue.value),
                "phi": str(self.residue.phi),
                "multiplicity": str(self.residue.multiplicity),
            },
            "retries": str(self.retries_used),
            "slice": {
                "seed": None if self.slice.seed is None else str(self.slice.seed),
                "point": [qq_str(x) for x in self.slice.point],
                "matrix": [[str(x) for x in row] for row in self.slice.matrix],
            },
        }


def _check_point_on_singular_set(F: FoliationPresentation, point: Sequence) -> tuple:
    if len(point) != F.n:
        raise ValueError(f"point must have {F.n} coordinates")
    pt = tuple(to_qq(x) for x in point)
    for g in singular_ideal(F).generators:
        if g.evaluate(pt) != 0:
            raise ValueError("point is not on the singular set")
    return pt


def certified_slice_residue(
    F: FoliationPresentation,
    point: Sequence,
    phi: PhiSpec,
    seed: int = 0,
    max_retries: int = 16,
    bound: int = 5,
) -> SliceResidueReport:
    """Baum-Bott residue at ``point`` of the foliation induced on a certified slice.

    Slices are drawn with seeds ``seed, seed + 1, ...``.  A slice is accepted
    when the form pulls back to something nonzero and the induced vector
    field vanishes only at the slice origin.

    Examples
    ========

    >>> from foliation_residues.corpus import pullback, radial
    >>> from foliation_residues.residue import parse_phi
    >>> F = pullback(radial(3), 4)
    >>> r = certified_slice_residue(F, (0, 0, 0, 0), parse_phi("c3"), seed=7)
    >>> r.residue.value
    Fraction(1, 1)
    """
    pt = _check_point_on_singular_set(F, point)
    if F.k == 1:
        draws = [identity_slice(F, pt)]
    else:
        draws = (make_slice(F, pt, seed + t, bound) for t in range(max_retries))
    attempts: list[dict] = []
    for t, S in enumerate(draws):
        record: dict = {"seed": S.seed}
        try:
            G = slice_foliation(F, S)
        except NotTransverse:
            record["failure"] = "not transverse"
            attempts.append(record)
            continue
        except DegenerateSlice:
            record["failure"] = "degenerate slice"
            attempts.append(record)
            continue
        ideal = Ideal(list(G.generator), G.m)
        if not zero_locus_is_origin_only(ideal):
            record["failure"] = "zero locus larger than the slice origin"
            record["slice_ideal_dimension"] = krull_dimension(ideal)
            attempts.append(record)
            continue
        residue = baum_bott_residue(G.generator, phi)
        certified = {"transverse": True, "origin_only_zero": True}
        return SliceResidueReport(F.label, S, certified, residue, t)
    dims = [a["slice_ideal_dimension"] for a in attempts if "slice_ideal_dimension" in a]
    detail = f"slice singular ideal has dimension {max(dims)}" if dims else "no transverse slice found"
    raise RetriesExhausted(f"{len(attempts)} slices rejected: {detail}", attempts)


def slice_invariance_test(
    F: FoliationPresentation,
    point: Sequence,
    phi: PhiSpec,
    seeds: tuple[int, int] = (7, 11),
    max_retries: int = 16,
    bound: int = 5,
) -> bool:
    """True iff slices drawn from the two seeds give the same residue."""
    a, b = (certified_slice_residue(F, point, phi, s, max_retries, bound) for s in seeds)
    return a.residue.value == b.residue.value


@dataclass
class TheoremCheckReport:
    theorem: str
    examined: int = 0
    violations: list = field(default_factory=list)
    records: list = field(default_factory=list)
    rejected: list = field(default_factory=list)
    out_of_hypothesis: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        def render(rows):
            return [{k: v if isinstance(v, (str, bool)) else str(v) for k, v in row.items()} for row in rows]

        return {
            "theorem": self.theorem,
            "examined": str(self.examined),
            "passed": self.passed,
            "violations": render(self.violations),
            "records": render(self.records),
            "rejected": render(self.rejected),
            "out_of_hypothesis": render(self.out_of_hypothesis),
        }


def dimension_theorem_check(corpus: Sequence[FoliationPresentation]) -> TheoremCheckReport:
    """Check ``dim Sing(F) >= k - 1`` on involutive foliations with ``2k <= n``, ``k <= n - 2``.

    An empty singular set passes vacuously (dimension reported as -1).
    Inputs outside the hypotheses are recorded with their dimension.
    """
    report = TheoremCheckReport("dim_lower_bound")
    for F in corpus:
        report.examined += 1
        if not is_involutive(F):
            report.rejected.append({"fixture": F.label, "reason": "not involutive"})
            continue
        dim = krull_dimension(singular_ideal(F))
        row = {"fixture": F.label, "n": F.n, "k": F.k, "dim": dim}
        if 2 * F.k > F.n or F.k > F.n - 2:
            report.out_of_hypothesis.append(row)
            continue
        report.records.append(row)
        if dim >= 0 and dim < F.k - 1:
            report.violations.append(row)
    return report


def poisson_theorem_check(corpus: Sequence[FoliationPresentation]) -> TheoremCheckReport:
    """Check that a nonempty degeneracy locus ``{rank < r}`` has a component of dimension > r - 2."""
    report = TheoremCheckReport("poisson_degeneracy")
    for F in corpus:
        report.examined += 1
        info = poisson_analysis(F)
        if not info.jacobi_ok:
            report.rejected.append({"fixture": F.label, "reason": "Jacobi identity fails"})
            continue
        r = info.generic_rank
        dim = info.degeneracy_dims.get(r - 2, -1)
        row = {"fixture": F.label, "n": F.n, "rank": r, "dim": dim}
        if r < 2 or 2 * r > F.n:
            report.out_of_hypothesis.append(row)
            continue
        report.records.append(row)
        if dim >= 0 and dim <= r - 2:
            report.violations.append(row)
    return report
