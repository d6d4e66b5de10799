"""Command-line front end: run a JSON job file and print a JSON report.

Exit status is 0 on success, 2 when a computation is refused for a
mathematical reason (no transverse or isolated slice, non-isolated zero),
and 1 for malformed input.  Every number in the output is a string.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from importlib import resources

import jsonschema

from . import corpus
from .foliation import (
    DegenerateSlice,
    FoliationPresentation,
    NotTransverse,
    is_involutive,
    poisson_analysis,
    singular_ideal,
)
from .harness import (
    RetriesExhausted,
    certified_slice_residue,
    dimension_theorem_check,
    poisson_theorem_check,
)
from .ideal import NotZeroDimensional, groebner, krull_dimension
from .poly import GREVLEX, LEX, parse_polynomial, qq_str, to_qq
from .residue import NotIsolated, baum_bott_residue, chern, parse_phi
from .topology import (
    SimplicialComplex,
    SubdivisionTower,
    chain_add,
    homology_report,
    intersection_pairing,
    oriented,
)

CERTIFIED_FAILURES = (NotTransverse, RetriesExhausted, NotIsolated, NotZeroDimensional, DegenerateSlice)


def load_schema() -> dict:
    text = resources.files(__package__).joinpath("job_schema.json").read_text()
    return json.loads(text)


def _parse_point(text: str) -> list[str]:
    parts = [p.strip() for p in text.split(",")]
    for p in parts:
        to_qq(p)
    return parts


def _ideal_json(ideal, order) -> dict:
    G = groebner(ideal, order=order)
    return {
        "generators": [str(g) for g in ideal.generators],
        "groebner": [str(g) for g in G.basis],
        "dim": str(krull_dimension(ideal)),
    }


def _foliation(payload: dict) -> FoliationPresentation:
    return FoliationPresentation.from_json(payload["foliation"])


def _phi(payload: dict, args, default_degree: int):
    text = args.phi or payload.get("phi")
    return parse_phi(text) if text else chern(default_degree)


def _point(payload: dict, args, n: int) -> list:
    pts = _parse_point(args.point) if args.point else payload.get("point", ["0"] * n)
    if len(pts) != n:
        raise ValueError(f"point needs {n} coordinates")
    return [Fraction(str(to_qq(p))) for p in pts]


# -- tasks ------------------------------------------------------------------

def task_sing(payload, args) -> dict:
    F = _foliation(payload)
    out = _ideal_json(singular_ideal(F), args.order)
    out.update({"n": str(F.n), "k": str(F.k)})
    return out


def task_involutive(payload, args) -> dict:
    F = _foliation(payload)
    return {"involutive": is_involutive(F), "n": str(F.n), "k": str(F.k)}


def task_residue(payload, args) -> dict:
    m = len(payload["field"])
    v = [parse_polynomial(s, m) for s in payload["field"]]
    phi = _phi(payload, args, m)
    res = baum_bott_residue(v, phi, _point(payload, args, m))
    return {
        "value": qq_str(res.value),
        "multiplicity": str(res.multiplicity),
        "phi": str(phi),
        "point": [qq_str(x) for x in res.point],
        "vanishes_by_degree": res.vanishes_by_degree,
    }


def task_slice_residue(payload, args) -> dict:
    F = _foliation(payload)
    phi = _phi(payload, args, F.n - F.k + 1)
    rep = certified_slice_residue(F, _point(payload, args, F.n), phi, args.seed, args.retries, args.bound)
    out = rep.to_json()
    out["value"] = out["residue"]["value"]
    return out


def task_poisson(payload, args) -> dict:
    F = _foliation(payload)
    if F.kind != "poisson":
        raise ValueError("poisson task needs a Poisson presentation")
    info = poisson_analysis(F)
    return {
        "jacobi": info.jacobi_ok,
        "rank": str(info.generic_rank),
        "degeneracy": {str(s): _ideal_json(I, args.order) for s, I in sorted(info.degeneracy_ideals.items())},
    }


def run_verify(seed: int = 0, retries: int = 16, bound: int = 5) -> dict:
    """Fixed battery over the shipped corpora; the report is deterministic."""
    sharp_example = corpus.sharp_example()
    dim_report = dimension_theorem_check(corpus.involutive_corpus() + [sharp_example])
    pois_report = poisson_theorem_check(corpus.poisson_corpus() + [corpus.non_poisson()])
    slices = []
    ok = dim_report.passed and pois_report.passed
    for case in corpus.slice_cases():
        m = case.reference.n
        for phi in (chern(m), parse_phi(f"c1^{m}")):
            a = certified_slice_residue(case.foliation, case.point, phi, seed, retries, bound)
            b = certified_slice_residue(case.foliation, case.point, phi, seed + retries, retries, bound)
            ref = baum_bott_residue(case.reference.fields[0], phi, case.reference_point)
            agree = a.residue.value == b.residue.value == ref.value
            ok = ok and agree
            slices.append({
                "fixture": case.foliation.label,
                "point": [qq_str(x) for x in case.point],
                "phi": str(phi),
                "values": [qq_str(a.residue.value), qq_str(b.residue.value)],
                "reference": qq_str(ref.value),
                "agree": agree,
            })
    sharp_point = [1] + [0] * (sharp_example.n - 1)
    try:
        certified_slice_residue(sharp_example, sharp_point, chern(sharp_example.n - sharp_example.k + 1), seed, retries, bound)
        sharp_example_slice = {"outcome": "certified"}
    except RetriesExhausted as exc:
        sharp_example_slice = {"outcome": "retries exhausted", "slice_ideal_dimension": str(exc.slice_ideal_dimension)}
    anchors = []
    for m in (2, 3, 4):
        F = corpus.radial(m)
        r = baum_bott_residue(F.fields[0], chern(m))
        anchors.append({"fixture": F.label, "phi": f"c{m}", "value": qq_str(r.value), "multiplicity": str(r.multiplicity)})
        ok = ok and r.value == 1
    for a, b in ((1, 1), (2, 3), (4, 2)):
        F = corpus.power_field([a, b])
        r = baum_bott_residue(F.fields[0], chern(2))
        anchors.append({"fixture": F.label, "phi": "c2", "value": qq_str(r.value), "multiplicity": str(r.multiplicity)})
        ok = ok and r.value == a * b == r.multiplicity
    return {
        "passed": ok,
        "dimension_theorem": dim_report.to_json(),
        "poisson_theorem": pois_report.to_json(),
        "slice_invariance": slices,
        "sharp_example_slice": sharp_example_slice,
        "anchors": anchors,
        "flags": {"seed": str(seed), "retries": str(retries), "bound": str(bound)},
    }


def task_verify(payload, args) -> dict:
    return run_verify(args.seed, args.retries, args.bound)


def task_topo_homology(payload, args) -> dict:
    K = SimplicialComplex.from_json(payload["complex"])
    rep = homology_report(K, payload.get("coefficients", "integers"))
    return {
        "dim": str(K.dim),
        "f_vector": [str(x) for x in K.f_vector()],
        "betti": [str(b) for b in rep["betti"]],
        "torsion": [[str(t) for t in ts] for ts in rep["torsion"]],
    }


def _render_Kp_simplex(tower: SubdivisionTower, s) -> list:
    """A K'-vertex is a K-simplex, i.e. a flag of K0-simplices."""
    out = []
    for v in s:
        k_simplex = tower.second.carrier_of_vertex[v]
        out.append([list(tower.first.carrier_of_vertex[w]) for w in k_simplex])
    return out


def _K_simplex_from_flag(tower: SubdivisionTower, flag) -> tuple:
    ids = []
    for sigma in flag:
        key = tuple(sorted(sigma))
        if key not in tower.first.vertex_of:
            raise ValueError(f"{list(sigma)} is not a simplex of the complex")
        ids.append(tower.first.vertex_of[key])
    s = tuple(sorted(ids))
    if len(set(s)) != len(s) or not tower.K.contains(s):
        raise ValueError("flag does not describe a simplex of the subdivision")
    return s


def task_topo_intersect(payload, args) -> dict:
    K0 = SimplicialComplex.from_json(payload["complex"])
    tower = SubdivisionTower(K0)
    if "cycles" in payload:
        basis = []
        for cyc in payload["cycles"]:
            chain = {}
            for entry in cyc:
                simplex = tuple(entry["simplex"])
                key = tuple(sorted(simplex))
                if not K0.contains(key):
                    raise ValueError(f"{list(simplex)} is not a simplex of the complex")
                chain = chain_add(chain, oriented(simplex), Fraction(str(to_qq(entry["coef"]))))
            basis.append(chain)
        matrix = intersection_pairing(tower, basis)
        return {"pairing": [[qq_str(x) for x in row] for row in matrix]}
    s1 = _K_simplex_from_flag(tower, payload["s1"])
    s2 = _K_simplex_from_flag(tower, payload["s2"])
    chain = tower.intersection_product(s1, s2)
    entries = sorted(([_render_Kp_simplex(tower, s), qq_str(c)] for s, c in chain.items()), key=lambda e: json.dumps(e[0]))
    dim = len(s2) - len(s1)
    return {"dim": str(dim), "chain": [{"simplex": s, "coef": c} for s, c in entries]}


TASKS = {
    "sing": task_sing,
    "involutive": task_involutive,
    "residue": task_residue,
    "slice-residue": task_slice_residue,
    "poisson": task_poisson,
    "verify": task_verify,
    "topo-homology": task_topo_homology,
    "topo-intersect": task_topo_intersect,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="foliation-residues", description=__doc__.splitlines()[0])
    parser.add_argument("job", help="job file (JSON), or - for standard input")
    parser.add_argument("--seed", type=int, default=0, help="first slice seed (default 0)")
    parser.add_argument("--retries", type=int, default=16, help="slice draws before giving up (default 16)")
    parser.add_argument("--bound", type=int, default=5, help="slice matrix entries lie in [-bound, bound] (default 5)")
    parser.add_argument("--phi", help="characteristic polynomial in c1..cm, e.g. 'c1^2*c2'")
    parser.add_argument("--point", help="comma-separated rational coordinates")
    parser.add_argument("--order", choices=("grevlex", "lex"), default="grevlex", help="monomial order for reported bases")
    return parser


def _emit(obj: dict, stream) -> None:
    stream.write(json.dumps(obj, sort_keys=True, indent=2) + "\n")


def run(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    args.order = LEX if args.order == "lex" else GREVLEX
    try:
        if args.retries < 1 or args.bound < 1:
            raise ValueError("--retries and --bound must be positive")
        if args.job == "-":
            job = json.load(sys.stdin)
        else:
            with open(args.job) as fh:
                job = json.load(fh)
        jsonschema.validate(job, load_schema())
        result = TASKS[job["task"]](job["payload"], args)
    except CERTIFIED_FAILURES as exc:
        err = {"type": type(exc).__name__, "message": str(exc)}
        if isinstance(exc, RetriesExhausted):
            err["slice_ideal_dimension"] = None if exc.slice_ideal_dimension is None else str(exc.slice_ideal_dimension)
            err["attempts"] = [{k: v if isinstance(v, str) or v is None else str(v) for k, v in a.items()} for a in exc.attempts]
        _emit({"error": err}, stdout)
        return 2
    except jsonschema.ValidationError as exc:
        _emit({"error": {"type": "SchemaError", "message": exc.message}}, stdout)
        return 1
    except (OSError, json.JSONDecodeError, ValueError, KeyError, TypeError, ZeroDivisionError) as exc:
        _emit({"error": {"type": type(exc).__name__, "message": str(exc)}}, stdout)
        return 1
    _emit(result, stdout)
    if job["task"] == "verify" and not result["passed"]:
        return 2
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
