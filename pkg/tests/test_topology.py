import random
from functools import lru_cache

import pytest

from foliation_residues.topology import (
    NotAManifold,
    NotOrientable,
    SimplicialComplex,
    SubdivisionTower,
    alexander_dual,
    augmentation,
    barycentric_subdivide,
    boundary,
    chain_add,
    circle,
    class_coordinates,
    cochain_coboundary,
    dual_representative,
    elementary_divisors,
    grid_torus,
    grid_torus_loops,
    intersection_pairing,
    localized_intersection,
    near,
    nullspace,
    octahedron,
    oriented,
    poincare_dual,
    random_simplex_pairs,
    rational_rank,
    simplex_boundary,
    simplicial_approximation,
    tetrahedron_boundary,
    two_circles,
)

RP2 = [(1, 2, 3), (1, 3, 4), (1, 4, 5), (1, 5, 6), (1, 6, 2), (2, 3, 5), (3, 4, 6), (4, 5, 2), (5, 6, 3), (6, 2, 4)]
S3 = [(1, 2, 3, 4), (0, 3, 2, 4), (0, 1, 3, 4), (0, 2, 1, 4), (0, 1, 2, 3)]


@lru_cache(maxsize=None)
def tower(name):
    return SubdivisionTower({
        "sphere": tetrahedron_boundary,
        "torus": grid_torus,
        "octahedron": octahedron,
        "circle": lambda: circle([0, 1, 2]),
        "S3": lambda: SimplicialComplex(S3),
    }[name]())


def test_homology_examples():
    assert tetrahedron_boundary().betti_numbers() == [1, 0, 1]
    assert grid_torus().betti_numbers() == [1, 2, 1]
    assert two_circles().betti_numbers() == [2, 2]
    assert octahedron().betti_numbers("integers") == [1, 0, 1]
    assert SimplicialComplex(S3).betti_numbers() == [1, 0, 0, 1]


def test_projective_plane_torsion():
    K = SimplicialComplex(RP2, orientable=False)
    assert [K.homology(p) for p in range(3)] == [(1, []), (0, [2]), (0, [])]
    assert K.betti_numbers("rationals") == [1, 0, 0]
    with pytest.raises(NotOrientable):
        SimplicialComplex(RP2)


def test_elementary_divisors():
    assert elementary_divisors([[2, 4, 4], [-6, 6, 12], [10, -4, -16]]) == [2, 6, 12]
    assert elementary_divisors([[0, 0], [0, 0]]) == []
    assert elementary_divisors([[1, 1], [1, -1]]) == [1, 2]


def test_boundary_squares_to_zero():
    for name in ("sphere", "torus", "S3"):
        t = tower(name)
        for K in (t.K0, t.K, t.Kp):
            for p in range(2, K.dim + 1):
                for s in K.simplices[p]:
                    assert boundary(simplex_boundary(s)) == {}
            assert boundary(K.fundamental_chain()) == {}


def test_barycentric_examples():
    assert barycentric_subdivide(SimplicialComplex([(0, 1)])).complex.f_vector() == [3, 2]
    assert barycentric_subdivide(SimplicialComplex([(0, 1, 2)])).complex.f_vector()[2] == 6
    assert barycentric_subdivide(circle([0, 1, 2])).complex.f_vector() == [6, 6]
    K = SimplicialComplex(S3)
    assert barycentric_subdivide(K).complex.f_vector()[3] == 24 * K.f_vector()[3]


def test_subdivision_is_a_chain_map_inverted_by_approximation():
    for name in ("sphere", "torus"):
        t = tower(name)
        for sub in (t.first, t.second):
            for p in range(1, sub.base.dim + 1):
                for s in sub.base.simplices[p]:
                    sd = sub.subdivide_simplex(s)
                    assert boundary(sd) == sub.subdivide(simplex_boundary(s))
                    assert simplicial_approximation(sub, sd) == {s: 1}
        assert t.to_K0(t.fundamental) == t.K0.fundamental_chain()
        assert t.subdivide_to_Kp(t.K0.fundamental_chain()) == t.fundamental


def test_subdivided_homology_unchanged():
    t = tower("torus")
    assert t.K.betti_numbers() == t.Kp.betti_numbers() == [1, 2, 1]


def test_tower_requires_oriented_closed_manifold():
    with pytest.raises(NotAManifold):
        SubdivisionTower(SimplicialComplex([(0, 1, 2)]))
    with pytest.raises(NotOrientable):
        SubdivisionTower(SimplicialComplex(RP2, orientable=False))


def test_dual_cell_examples():
    t = tower("sphere")
    for s in t.K.simplices[2]:
        # oriented so that s followed by its dual matches the ambient orientation
        assert t.dual_cell(s).chain == {(t.second.barycenter(s),): t.K.orientation[s]}
    for v in t.K.simplices[0]:
        cell = t.dual_cell(v)
        degree = len(t.K.cofaces(v))
        assert cell.dim == 2 and len(cell.chain) == 2 * degree
        assert all(f[0] == t.second.barycenter(v) for f in cell.chain)
        # the dual polygon is a disc: its boundary is a cycle avoiding b_v
        rim = boundary(cell.chain)
        assert boundary(rim) == {} and all(t.second.barycenter(v) not in f for f in rim)
    e = t.K.simplices[1][0]
    cell = t.dual_cell(e)
    assert cell.dim == 1 and len(cell.chain) == 2
    ends = boundary(cell.chain)
    assert sorted(ends.values()) == [-1, 1]
    tops = {t.second.barycenter(s) for s in t.K.cofaces(e)}
    assert {f[0] for f in ends} == tops


@pytest.mark.parametrize("name", ["sphere", "torus", "S3"])
def test_dual_boundary_matches_incidences(name):
    t = tower(name)
    m = t.m
    for p in range(m):
        for s in t.K.simplices[p]:
            expected = {}
            for tau in t.K.cofaces(s):
                expected[tau] = (-1) ** (m - p) * simplex_boundary(tau)[s]
            assert t.dual_boundary({s: 1}) == expected


@pytest.mark.parametrize("name", ["sphere", "torus", "S3"])
def test_dual_meets_its_simplex_at_the_barycenter(name):
    t = tower(name)
    for p in range(t.m + 1):
        for s in t.K.simplices[p]:
            assert t.intersection_product(s, s) == {(t.second.barycenter(s),): 1}


def _boundary_formula_holds(t, s1, s2):
    q = len(s2) - 1
    lhs = boundary(t.intersection_product(s1, s2))
    rhs = chain_add({}, t.intersect(t.dual_boundary({s1: 1}), {s2: 1}), (-1) ** (t.m - q))
    rhs = chain_add(rhs, t.intersect({s1: 1}, simplex_boundary(s2)))
    return lhs == rhs


@pytest.mark.parametrize("name,seed", [("sphere", 1), ("torus", 2), ("S3", 3)])
def test_boundary_formula_on_random_pairs(name, seed):
    t = tower(name)
    pairs = random_simplex_pairs(t, 100, seed)
    assert sum(1 for s1, s2 in pairs if set(s1) < set(s2)) >= 60
    for s1, s2 in pairs:
        assert _boundary_formula_holds(t, s1, s2)


@pytest.mark.parametrize("name", ["sphere", "torus"])
def test_product_independent_of_choices(name):
    t = tower(name)
    rng = random.Random(4)
    pairs = [p for p in random_simplex_pairs(t, 60, 9) if set(p[0]) <= set(p[1])][:25]
    for s1, s2 in pairs:
        p1 = len(s1) - 1
        reference = t.intersection_product(s1, s2)
        t1s = [f for f in t.inner_simplices(s1) if len(f) == p1 + 1]
        t2s = list(t.dual_cell(s2).chain)
        for t1 in t1s:
            for t2 in rng.sample(t2s, min(4, len(t2s))):
                assert t.intersection_product(s1, s2, t1, t2) == reference


def test_disjoint_supports_give_zero():
    t = tower("torus")
    verts = t.K.simplices[0]
    far = [(a, b) for a in verts for b in verts if a != b and not any(set(a + b) <= set(s) for s in t.K.simplices[1])]
    for a, b in far[:20]:
        assert t.intersection_product(a, b) == {}


def test_torus_pairing():
    t = tower("torus")
    pairing = intersection_pairing(t, list(grid_torus_loops()))
    assert pairing in ([[0, 1], [-1, 0]], [[0, -1], [1, 0]])


def _coboundary_constraints(t, p):
    """Rows expressing delta u = 0 for p-cochains on dual cells."""
    m = t.m
    if p == m:
        return []
    rows = t.dual_boundary_rows(p + 1)
    constraints = {}
    for i, row in enumerate(rows):
        for j, c in row.items():
            constraints.setdefault(j, {})[i] = c
    return list(constraints.values())


@pytest.mark.parametrize("name", ["sphere", "torus", "octahedron", "S3"])
def test_poincare_map_has_full_rank_on_homology(name):
    t = tower(name)
    m, K = t.m, t.K
    betti = K.betti_numbers()
    for p in range(m + 1):
        q = m - p
        cocycles = nullspace(_coboundary_constraints(t, p), K.count(q)) if p < m else [
            {i: 1} for i in range(K.count(q))]
        bounds = [dict(simplex_boundary(s)) for s in K.simplices[q + 1]] if q < m else []

        def column(chain):
            return {K.index(s): c for s, c in chain.items()}

        images = [column(poincare_dual(t, {K.simplices[q][i]: c for i, c in u.items()})) for u in cocycles]
        base = [column(b) for b in bounds]

        def rank(cols):
            rows = {}
            for j, col in enumerate(cols):
                for i, c in col.items():
                    rows.setdefault(i, {})[j] = c
            return rational_rank(list(rows.values()))

        assert rank(base + images) - rank(base) == betti[q]


def test_poincare_dual_of_unit_is_fundamental_class():
    for name in ("sphere", "torus", "S3"):
        t = tower(name)
        assert poincare_dual(t, t.unit_cochain()) == t.K.fundamental_chain()
        assert cochain_coboundary(t, t.unit_cochain()) == {}


def test_top_cochain_maps_to_a_point():
    t = tower("sphere")
    v = t.K.simplices[0][0]
    chain = poincare_dual(t, {v: 1})
    assert chain == {v: 1} and augmentation(chain) == 1


def test_alexander_examples():
    t = tower("sphere")
    assert alexander_dual(t, t.K0, t.unit_cochain()) == poincare_dual(t, t.unit_cochain())
    vertex = SimplicialComplex([(0,)], orientable=False)
    v = (t.first.barycenter((0,)),)
    assert alexander_dual(t, vertex, {v: 1}) == {v: 1}
    with pytest.raises(ValueError):
        alexander_dual(t, vertex, {(t.first.barycenter((1,)),): 1})


def test_alexander_dual_of_octahedron_equator():
    t = tower("octahedron")
    equator = SimplicialComplex([(0, 1), (1, 2), (2, 3), (0, 3)], orientable=False)
    loop = {}
    for a, b in ((0, 1), (1, 2), (2, 3), (3, 0)):
        loop = chain_add(loop, oriented((a, b)))
    u = t.first.subdivide(loop)
    assert cochain_coboundary(t, u) == {}
    chain = alexander_dual(t, equator, u)
    assert boundary(chain) == {}
    assert all(t.K_simplex_in(s, equator) for s in chain)
    assert class_coordinates(equator, [loop], simplicial_approximation(t.first, chain)) == [1]
    # naturality: pushing into the sphere agrees with the absolute dual
    assert poincare_dual(t, u) == chain


def test_alexander_naturality_on_torus_loop():
    t = tower("torus")
    alpha, beta = grid_torus_loops()
    S = SimplicialComplex(list(alpha), orientable=False)
    u = t.first.subdivide(alpha)
    assert cochain_coboundary(t, u) == {}
    pushed = t.first.subdivide(simplicial_approximation(t.first, alexander_dual(t, S, u)))
    coords = class_coordinates(t.K, [t.first.subdivide(alpha), t.first.subdivide(beta)], pushed)
    assert coords == class_coordinates(t.K, [t.first.subdivide(alpha), t.first.subdivide(beta)], poincare_dual(t, u))
    assert coords == [1, 0]


def _loop_near(t, loop):
    S = SimplicialComplex(list(loop), orientable=False)
    allowed = [e for e in t.K.simplices[1] if near(t, e, S)]
    return S, allowed


def test_localized_product_of_transverse_torus_loops():
    t = tower("torus")
    alpha, beta = grid_torus_loops()
    S1, allowed = _loop_near(t, alpha)
    S2 = SimplicialComplex(list(beta), orientable=False)
    a = dual_representative(t, [alpha, beta], [1, 0], allowed)
    prod = localized_intersection(t, S1, S2, a, t.first.subdivide(beta))
    assert prod.degree in (1, -1)
    assert prod.support is not None and prod.support.vertices == [0]
    # another representative of the same class near S1
    v = (t.first.barycenter((3,)),)
    a2 = chain_add(a, t.dual_boundary({v: 1}))
    assert all(near(t, s, S1) for s in a2)
    assert localized_intersection(t, S1, S2, a2, t.first.subdivide(beta)).degree == prod.degree


def test_localized_product_of_disjoint_loops_vanishes():
    t = tower("torus")
    alpha, beta = grid_torus_loops()
    parallel = {}
    for a, b in ((1, 4), (4, 7), (7, 1)):
        parallel = chain_add(parallel, oriented((a, b)))
    S1, allowed = _loop_near(t, alpha)
    S2 = SimplicialComplex(list(parallel), orientable=False)
    a = dual_representative(t, [alpha, beta], [1, 0], allowed)
    prod = localized_intersection(t, S1, S2, a, t.first.subdivide(parallel))
    assert prod.chain == {} and prod.degree == 0 and prod.support is None


def test_localized_product_with_fundamental_class_is_identity():
    t = tower("torus")
    alpha, beta = grid_torus_loops()
    S1, allowed = _loop_near(t, alpha)
    a = dual_representative(t, [alpha, beta], [1, 0], allowed)
    prod = localized_intersection(t, S1, t.K0, a, t.K.fundamental_chain())
    assert prod.chain == t.dual_to_Kp(a)


def test_localized_product_rejects_support_violations():
    t = tower("torus")
    alpha, beta = grid_torus_loops()
    S1, allowed = _loop_near(t, alpha)
    S2 = SimplicialComplex(list(beta), orientable=False)
    outside = next(e for e in t.K.simplices[1] if not near(t, e, S1))
    with pytest.raises(ValueError):
        localized_intersection(t, S1, S2, {outside: 1}, t.first.subdivide(beta))
    with pytest.raises(ValueError):
        localized_intersection(t, S1, S2, {}, t.first.subdivide(alpha))


def test_json_round_trip():
    for K in (tetrahedron_boundary(), grid_torus(), two_circles()):
        L = SimplicialComplex.from_json(K.to_json())
        assert L.top == K.top and L.fundamental_chain() == K.fundamental_chain()
    with pytest.raises(ValueError):
        SimplicialComplex.from_json({"dim": 1, "top_simplices": [[0, 1, 2]]})
