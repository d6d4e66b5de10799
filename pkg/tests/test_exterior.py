from itertools import combinations

import pytest
from hypothesis import given, strategies as st

from foliation_residues.corpus import _sharp_potential
from foliation_residues.exterior import (
    PolyForm,
    PolyMultivector,
    affine_pullback,
    contract,
    lie_bracket,
    sort_sign,
    wedge,
    wedge_all,
)
from foliation_residues.poly import Polynomial, parse_polynomial

from conftest import polynomials, vector_fields

N = 4


def P(text, n=3):
    return parse_polynomial(text, n)


def forms(degree, n=N):
    keys = list(combinations(range(1, n + 1), degree))
    return st.dictionaries(st.sampled_from(keys), polynomials(n, 1, 2), max_size=3).map(
        lambda d: PolyForm(n, degree, d))


def test_sort_sign():
    assert sort_sign((2, 1)) == (-1, (1, 2))
    assert sort_sign((3, 1, 2)) == (1, (1, 2, 3))
    assert sort_sign((1, 1))[0] == 0


def test_wedge_examples():
    dz1, dz2 = PolyForm.basis(3, (1,)), PolyForm.basis(3, (2,))
    assert wedge(dz1, dz2) == PolyForm.basis(3, (1, 2))
    assert wedge(dz2, dz1) == -PolyForm.basis(3, (1, 2))
    assert wedge(dz1, dz1).is_zero()
    with pytest.raises(ValueError):
        wedge(PolyForm.volume(3), dz1)


def test_sharp_example_wedge_at_m2():
    n = 9
    f = _sharp_potential(2, 3, 3)
    omega = wedge_all([PolyForm.differential(f)] + [PolyForm.basis(n, (j,)) for j in (1, 2, 3)])
    expected = PolyForm(n, 4, {(j, 1, 2, 3): Polynomial.var(n, j).scale(2) for j in range(4, 10)})
    assert omega == expected
    # dz_j ^ dz1 ^ dz2 ^ dz3 = -dz1 ^ dz2 ^ dz3 ^ dz_j
    assert omega[(1, 2, 3, 4)] == P("-2*z4", 9)


def test_contract_examples():
    vol = PolyForm.volume(2)
    e1 = (P("1", 2), P("0", 2))
    e2 = (P("0", 2), P("1", 2))
    assert contract(e1, vol) == PolyForm.basis(2, (2,))
    assert contract(e2, vol) == -PolyForm.basis(2, (1,))
    radial = (P("z1", 2), P("z2", 2))
    assert contract(radial, vol) == PolyForm(2, 1, {(2,): P("z1", 2), (1,): P("-z2", 2)})
    with pytest.raises(ValueError):
        contract(e1, PolyForm(2, 0, {(): 1}))


def test_lie_bracket_examples():
    one, zero = P("1", 2), P("0", 2)
    assert lie_bracket((one, zero), (zero, one)) == (zero, zero)
    assert lie_bracket((P("z1", 2), zero), (one, zero)) == (-one, zero)
    assert lie_bracket((P("z2", 2), zero), (zero, P("z1", 2))) == (P("-z1", 2), P("z2", 2))


def test_affine_pullback_examples():
    omega = PolyForm.basis(3, (1, 2))
    ident = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    assert affine_pullback(omega, (0, 0, 0), ident) == omega
    assert affine_pullback(omega, (0, 0, 0), [[1, 0], [0, 1], [0, 0]]) == PolyForm.basis(2, (1, 2))
    omega = PolyForm(3, 2, {(1, 2): P("z3")})
    got = affine_pullback(omega, (0, 0, 1), [[1, 0], [0, 1], [1, 0]])
    assert got == PolyForm(2, 2, {(1, 2): P("1 + z1", 2)})
    with pytest.raises(ValueError):
        affine_pullback(omega, (0, 0, 0), [[1, 2], [2, 4], [3, 6]])


def test_pullback_of_differential_is_differential_of_composition():
    f = P("z1^2*z2 - z3^3 + 2*z1")
    p, L = (1, -1, 2), [[1, 2], [0, 1], [3, -1]]
    w = [Polynomial.var(2, i) for i in (1, 2)]
    subst = [p[a] + sum((w[b].scale(L[a][b]) for b in range(2)), Polynomial.zero(2)) for a in range(3)]
    assert affine_pullback(PolyForm.differential(f), p, L) == PolyForm.differential(f.compose(subst))


@given(forms(1), forms(2))
def test_wedge_graded_antisymmetry(a, b):
    assert wedge(a, b) == wedge(b, a).scale((-1) ** (a.degree * b.degree))


@given(forms(1), forms(1), forms(1))
def test_wedge_associative(a, b, c):
    assert wedge(wedge(a, b), c) == wedge(a, wedge(b, c))


@given(vector_fields(N, 1), forms(1), forms(2))
def test_contraction_is_an_antiderivation(v, a, b):
    lhs = contract(v, wedge(a, b))
    rhs = wedge(contract(v, a), b) + wedge(a, contract(v, b)).scale((-1) ** a.degree)
    assert lhs == rhs


@given(vector_fields(3, 2), vector_fields(3, 2), vector_fields(3, 2))
def test_jacobi_identity_of_brackets(u, v, w):
    total = [Polynomial.zero(3)] * 3
    for x, y, z in ((u, v, w), (v, w, u), (w, u, v)):
        total = [a + b for a, b in zip(total, lie_bracket(x, lie_bracket(y, z)))]
    assert all(t.is_zero() for t in total)


@given(vector_fields(3, 2), vector_fields(3, 2))
def test_bracket_antisymmetric(u, v):
    assert lie_bracket(u, v) == tuple(-c for c in lie_bracket(v, u))


def test_multivector_wedge():
    a = PolyMultivector.from_vector_field((P("z1"), P("0"), P("0")))
    b = PolyMultivector.basis(3, (2,))
    assert wedge(a, b) == PolyMultivector(3, 2, {(1, 2): P("z1")})
    with pytest.raises(TypeError):
        wedge(a, PolyForm.basis(3, (1,)))
