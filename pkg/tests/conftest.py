from fractions import Fraction

from hypothesis import settings, strategies as st

from foliation_residues.poly import Polynomial

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")

coefficients = st.fractions(min_value=-5, max_value=5, max_denominator=4)


def polynomials(n=3, max_exp=2, max_terms=4):
    exps = st.tuples(*[st.integers(0, max_exp)] * n)
    return st.dictionaries(exps, coefficients, max_size=max_terms).map(lambda d: Polynomial(n, d))


def vector_fields(n=3, max_exp=2):
    return st.tuples(*[polynomials(n, max_exp, 3)] * n)


def frac_point(values):
    return tuple(Fraction(v) for v in values)
