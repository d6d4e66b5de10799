import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from foliation_residues import corpus
from foliation_residues.ideal import NotZeroDimensional, groebner, standard_monomial_count
from foliation_residues.poly import Polynomial, parse_polynomial
from foliation_residues.residue import (
    DegreeTooLow,
    NotIsolated,
    baum_bott_residue,
    chern,
    chern_numerator,
    grothendieck_residue,
    nondegenerate_oracle,
    parse_phi,
)

from conftest import polynomials


def P(text, n=2):
    return parse_polynomial(text, n)


def linear(A):
    m = len(A)
    z = [Polynomial.var(m, j) for j in range(1, m + 1)]
    return tuple(sum((z[j].scale(A[i][j]) for j in range(m) if A[i][j]), Polynomial.zero(m)) for i in range(m))


def to_sympy(p, symbols):
    expr = sympy.Integer(0)
    for e, c in p.terms.items():
        term = sympy.Rational(int(c.numerator), int(c.denominator))
        for s, k in zip(symbols, e):
            term *= s ** k
        expr += term
    return expr


def test_phi_parsing():
    phi = parse_phi("c1^2*c2 - 2*c4")
    assert phi.weighted_degree == 4 and phi.max_index == 4
    for bad in ["c1 + c2", "0", "3"]:
        with pytest.raises(ValueError):
            parse_phi(bad)


def test_grothendieck_examples():
    assert grothendieck_residue(P("1"), [P("z1"), P("z2")]) == 1
    assert grothendieck_residue(P("z1*z2"), [P("z1^2 - z2"), P("z2^2")]) == 1
    assert grothendieck_residue(P("1"), [P("z1^2 - z2"), P("z2^2")]) == 0


def _perturbation_sum(h_text, t):
    """Sum of h / det J over the four simple zeros of (z1^2 - z2, z2^2 - t^4)."""
    x, y = sympy.symbols("x y")
    h = sympy.sympify(h_text.replace("z1", "x").replace("z2", "y").replace("^", "**"))
    total = 0
    for z2 in (t ** 2, -t ** 2):
        root = sympy.sqrt(z2)
        for z1 in (root, -root):
            total += h.subs({x: z1, y: z2}) / (4 * z1 * z2)
    return sympy.nsimplify(sympy.simplify(total))


def test_degenerate_fixtures_against_perturbation_sums():
    for t in (sympy.Integer(1), sympy.Integer(2), sympy.Rational(1, 3)):
        assert _perturbation_sum("z1*z2", t) == 1
        assert _perturbation_sum("1", t) == 0
        assert _perturbation_sum("z1^3", t) == 1
    f = [P("z1^2 - z2"), P("z2^2")]
    assert grothendieck_residue(P("z1*z2"), f) == 1
    assert grothendieck_residue(P("1"), f) == 0
    assert grothendieck_residue(P("z1^3"), f) == 1


def test_residue_requires_isolated_origin():
    with pytest.raises(NotIsolated):
        grothendieck_residue(P("1"), [P("z1^2 - 1"), P("z2")])
    with pytest.raises(NotZeroDimensional):
        grothendieck_residue(P("1"), [P("z1*z2"), P("z2^2")])


def test_chern_numerator_examples():
    assert chern_numerator(chern(3), corpus.radial(3).fields[0]) == 1
    assert chern_numerator(parse_phi("c1^2"), (P("z1^2"), P("z2"))) == P("2*z1 + 1") ** 2


def test_chern_numerator_against_characteristic_polynomial():
    rng = random.Random(2)
    syms = sympy.symbols("z1 z2 z3")
    t = sympy.Symbol("t")
    phi = parse_phi("c1*c2 - c3")
    for _ in range(5):
        v = tuple(Polynomial(3, {tuple(rng.randint(0, 2) for _ in range(3)): rng.randint(-3, 3) for _ in range(3)})
                  for _ in range(3))
        J = sympy.Matrix(3, 3, lambda i, j: sympy.diff(to_sympy(v[i], syms), syms[j]))
        char = sympy.Poly(sympy.expand((sympy.eye(3) + t * J).det()), t)
        c = [char.coeff_monomial(t ** i) for i in range(4)]
        expected = sympy.expand(c[1] * c[2] - c[3])
        assert sympy.expand(to_sympy(chern_numerator(phi, v), syms) - expected) == 0


def test_baum_bott_examples():
    v = corpus.radial(3).fields[0]
    assert baum_bott_residue(v, chern(3)).value == 1
    assert baum_bott_residue(v, parse_phi("c1^3")).value == 27
    for a, b in ((1, 1), (2, 3), (3, 2), (5, 1)):
        r = baum_bott_residue((P(f"z1^{a}"), P(f"z2^{b}")), chern(2))
        assert r.value == a * b == r.multiplicity


def test_monomial_box_numerator():
    # (2 z1 + 1)^2 against the box (z1^2, z2): coefficient of z1 is 4
    assert baum_bott_residue((P("z1^2"), P("z2")), parse_phi("c1^2")).value == 4


def test_degree_conventions():
    v = corpus.radial(2).fields[0]
    r = baum_bott_residue(v, parse_phi("c1*c2"))
    assert r.value == 0 and r.vanishes_by_degree
    with pytest.raises(DegreeTooLow):
        baum_bott_residue(corpus.radial(3).fields[0], parse_phi("c2"))
    # the isolation certificate is checked even when the degree forces zero
    with pytest.raises(NotIsolated):
        baum_bott_residue((P("z1^2 - 1"), P("z2")), parse_phi("c1^3"))


def test_residue_at_translated_point():
    v = (P("z1 - 2"), P("z2 + 1") ** 2)
    r = baum_bott_residue(v, chern(2), point=(2, -1))
    assert r.value == 2 == r.multiplicity
    assert r.point == (Fraction(2), Fraction(-1))


def test_nondegenerate_oracle_examples():
    assert nondegenerate_oracle(linear([[1, 0], [0, 2]]), chern(2)) == 1
    assert nondegenerate_oracle(linear([[1, 0], [0, 2]]), parse_phi("c1^2")) == Fraction(9, 2)
    assert nondegenerate_oracle(linear([[0, 1], [1, 0]]), chern(2)) == 1
    with pytest.raises(ValueError):
        nondegenerate_oracle(linear([[1, 1], [1, 1]]), chern(2))


def _invertible(rng, m, diagonal):
    while True:
        if diagonal:
            A = [[rng.choice([x for x in range(-6, 7) if x]) if i == j else 0 for j in range(m)] for i in range(m)]
        else:
            A = [[rng.randint(-4, 4) for _ in range(m)] for _ in range(m)]
        if sympy.Matrix(A).det() != 0:
            return A


@pytest.mark.parametrize("m", [2, 3])
def test_oracle_agreement_on_linear_fields(m):
    rng = random.Random(100 + m)
    phis = [chern(m), parse_phi(f"c1^{m}"), parse_phi("c2" if m == 2 else "c1*c2")]
    for trial in range(12):
        A = _invertible(rng, m, diagonal=trial % 2 == 0)
        v = linear(A)
        for phi in phis:
            assert baum_bott_residue(v, phi).value == nondegenerate_oracle(v, phi)


@given(polynomials(2, 3, 4), polynomials(2, 3, 4))
def test_residue_linear_in_numerator(h1, h2):
    f = [P("z1^2 + z1*z2 - z2^3"), P("z2^2")]
    assert grothendieck_residue(h1 + h2, f) == grothendieck_residue(h1, f) + grothendieck_residue(h2, f)


@given(polynomials(3, 4, 5), st.tuples(st.integers(1, 4), st.integers(1, 4), st.integers(1, 4)))
def test_monomial_denominators_extract_a_coefficient(h, a):
    f = [Polynomial.var(3, i + 1) ** a[i] for i in range(3)]
    assert grothendieck_residue(h, f) == h.coeff(tuple(x - 1 for x in a))


def test_multiplicity_law_on_fixtures():
    fields = [
        corpus.radial(2).fields[0],
        corpus.radial(4).fields[0],
        (P("z1^3 + z2^2"), P("z2^3")),
        (P("z1^2 - z2"), P("z2^2")),
        (P("z1*z2 + z1^3"), P("z2^2")),
        tuple(parse_polynomial(c, 3) for c in ("z1 + z2^2", "z2 + z3^2", "2*z3")),
        tuple(parse_polynomial(c, 3) for c in ("z2", "z3", "z1^2")),
    ]
    for v in fields:
        m = len(v)
        r = baum_bott_residue(v, chern(m))
        assert r.value == r.multiplicity == standard_monomial_count(groebner(list(v)))


def _unimodular(rng, m):
    T = [[int(i == j) for j in range(m)] for i in range(m)]
    for _ in range(6):
        i, j = rng.sample(range(m), 2)
        c = rng.randint(-2, 2)
        T = [[T[r][k] + (c * T[j][k] if r == i else 0) for k in range(m)] for r in range(m)]
    return T


def test_invariance_under_unimodular_change():
    rng = random.Random(11)
    systems = [
        (P("z1*z2"), [P("z1^2 - z2"), P("z2^2")]),
        (P("z1^3 + 2*z2"), [P("z1^3 + z2^2"), P("z2^3")]),
        (P("1 + z1*z2^2"), [P("z1^2 + z1*z2 - z2^3"), P("z2^2")]),
    ]
    for h, f in systems:
        base = grothendieck_residue(h, f)
        for _ in range(4):
            T = _unimodular(rng, 2)
            assert sympy.Matrix(T).det() == 1
            subst = linear(T)
            assert grothendieck_residue(h.compose(subst), [g.compose(subst) for g in f]) == base
