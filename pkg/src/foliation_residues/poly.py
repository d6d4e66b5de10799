"""Exact multivariate polynomials over the rationals.

Polynomials are stored sparsely as ``{exponent tuple: coefficient}`` with
``gmpy2.mpq`` coefficients.  Variable indices in the public API are 1-based so
that index ``i`` always refers to the variable printed as ``z<i>``.
"""

from __future__ import annotations

import re
from fractions import Fraction
from itertools import combinations
from math import gcd, lcm
from typing import Iterable, Sequence

from gmpy2 import mpq
from sympy import QQ as SQQ
from sympy.polys.rings import ring

QQ = mpq


class AmbientMismatch(ValueError):
    """Operands live in polynomial rings with different variables."""


def to_qq(value) -> mpq:
    if isinstance(value, str):
        return mpq(value.strip())
    if isinstance(value, Fraction):
        return mpq(value.numerator, value.denominator)
    return mpq(value)


def qq_str(value) -> str:
    """Canonical ``p/q`` rendering (``p`` alone when the denominator is 1)."""
    return str(to_qq(value))


def default_names(n: int, prefix: str = "z") -> tuple[str, ...]:
    return tuple(f"{prefix}{i}" for i in range(1, n + 1))


# -- monomial orders --------------------------------------------------------

def grevlex_key(exp: tuple[int, ...]):
    return (sum(exp), tuple(-e for e in reversed(exp)))


def lex_key(exp: tuple[int, ...]):
    return exp


class MonomialOrder:
    """A monomial order given by a sort key (larger key = larger monomial).

    ``kind`` is one of ``"grevlex"``, ``"lex"`` or ``"block"``; a block order
    compares the first ``split`` variables by grevlex and breaks ties with
    grevlex on the remaining ones, so it eliminates the first block.
    """

    def __init__(self, kind: str = "grevlex", split: int | None = None):
        if kind not in ("grevlex", "lex", "block"):
            raise ValueError(f"unknown monomial order {kind!r}")
        if kind == "block" and split is None:
            raise ValueError("block order needs a split index")
        self.kind = kind
        self.split = split
        if kind == "grevlex":
            self.key = grevlex_key
        elif kind == "lex":
            self.key = lex_key
        else:
            s = split

            def key(exp, s=s):
                return (grevlex_key(exp[:s]), grevlex_key(exp[s:]))

            self.key = key

    def __eq__(self, other):
        return isinstance(other, MonomialOrder) and (self.kind, self.split) == (other.kind, other.split)

    def __hash__(self):
        return hash((self.kind, self.split))

    def __repr__(self):
        if self.kind == "block":
            return f"MonomialOrder('block', split={self.split})"
        return f"MonomialOrder({self.kind!r})"


GREVLEX = MonomialOrder("grevlex")
LEX = MonomialOrder("lex")


def monomial_divides(a: tuple[int, ...], b: tuple[int, ...]) -> bool:
    return all(x <= y for x, y in zip(a, b))


def monomial_lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def monomial_mul(a, b):
    return tuple(x + y for x, y in zip(a, b))


def monomial_div(a, b):
    return tuple(x - y for x, y in zip(a, b))


# -- polynomials ------------------------------------------------------------

class Polynomial:
    """Immutable sparse polynomial in ``nvars`` variables with rational coefficients."""

    __slots__ = ("nvars", "names", "terms")

    def __init__(self, nvars: int, terms: dict | None = None, names: Sequence[str] | None = None, *, _clean: bool = False):
        self.nvars = nvars
        self.names = tuple(names) if names is not None else default_names(nvars)
        if len(self.names) != nvars:
            raise ValueError("name list length differs from variable count")
        if terms is None:
            self.terms = {}
        elif _clean:
            self.terms = terms
        else:
            clean = {}
            for exp, c in terms.items():
                exp = tuple(exp)
                if len(exp) != nvars:
                    raise ValueError(f"exponent {exp} does not have length {nvars}")
                if any(e < 0 for e in exp):
                    raise ValueError("negative exponent")
                c = to_qq(c)
                if c:
                    clean[exp] = clean.get(exp, 0) + c
            self.terms = {e: c for e, c in clean.items() if c}

    # construction helpers
    @classmethod
    def zero(cls, n: int, names=None) -> "Polynomial":
        return cls(n, {}, names, _clean=True)

    @classmethod
    def constant(cls, n: int, c, names=None) -> "Polynomial":
        c = to_qq(c)
        return cls(n, {(0,) * n: c} if c else {}, names, _clean=True)

    @classmethod
    def var(cls, n: int, i: int, names=None) -> "Polynomial":
        if not 1 <= i <= n:
            raise IndexError(f"variable index {i} outside 1..{n}")
        exp = [0] * n
        exp[i - 1] = 1
        return cls(n, {tuple(exp): mpq(1)}, names, _clean=True)

    @classmethod
    def monomial(cls, exp: Sequence[int], c=1, names=None) -> "Polynomial":
        return cls(len(exp), {tuple(exp): c}, names)

    def _new(self, terms: dict) -> "Polynomial":
        return Polynomial(self.nvars, terms, self.names, _clean=True)

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.nvars != self.nvars or other.names != self.names:
                raise AmbientMismatch(f"{self.names} vs {other.names}")
            return other
        if isinstance(other, (int, Fraction)) or type(other) is type(mpq(0)):
            return Polynomial.constant(self.nvars, other, self.names)
        return NotImplemented

    # arithmetic
    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = dict(self.terms)
        for e, c in other.terms.items():
            v = terms.get(e, 0) + c
            if v:
                terms[e] = v
            else:
                terms.pop(e, None)
        return self._new(terms)

    __radd__ = __add__

    def __neg__(self):
        return self._new({e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            other_c = self._coerce(other)
            if other_c is NotImplemented:
                return other_c
            return self.scale(other)
        other = self._coerce(other)
        terms: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = terms.get(e, 0) + c1 * c2
                if v:
                    terms[e] = v
                else:
                    del terms[e]
        return self._new(terms)

    def __rmul__(self, other):
        return self * other

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result = Polynomial.constant(self.nvars, 1, self.names)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def scale(self, c) -> "Polynomial":
        c = to_qq(c)
        if not c:
            return Polynomial.zero(self.nvars, self.names)
        return self._new({e: v * c for e, v in self.terms.items()})

    def mul_term(self, exp, c) -> "Polynomial":
        return self._new({tuple(a + b for a, b in zip(e, exp)): v * c for e, v in self.terms.items()})

    # comparison
    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.nvars == other.nvars and self.terms == other.terms
        if isinstance(other, (int, Fraction)) or type(other) is type(mpq(0)):
            return self == Polynomial.constant(self.nvars, other, self.names)
        return NotImplemented

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and (0,) * self.nvars in self.terms)

    # inspection
    def degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def coeff(self, exp: Sequence[int]) -> mpq:
        return self.terms.get(tuple(exp), mpq(0))

    def constant_term(self) -> mpq:
        return self.coeff((0,) * self.nvars)

    def leading_monomial(self, order: MonomialOrder = GREVLEX):
        if not self.terms:
            raise ValueError("zero polynomial has no leading monomial")
        return max(self.terms, key=order.key)

    def leading_term(self, order: MonomialOrder = GREVLEX):
        lm = self.leading_monomial(order)
        return lm, self.terms[lm]

    def monic(self, order: MonomialOrder = GREVLEX) -> "Polynomial":
        if not self.terms:
            return self
        return self.scale(1 / self.leading_term(order)[1])

    def variables(self) -> set[int]:
        """1-based indices of the variables occurring in the polynomial."""
        out = set()
        for e in self.terms:
            out.update(i + 1 for i, x in enumerate(e) if x)
        return out

    # calculus and substitution
    def derivative(self, i: int) -> "Polynomial":
        if not 1 <= i <= self.nvars:
            raise IndexError(f"variable index {i} outside 1..{self.nvars}")
        j = i - 1
        terms = {}
        for e, c in self.terms.items():
            if e[j]:
                d = list(e)
                d[j] -= 1
                terms[tuple(d)] = c * e[j]
        return self._new(terms)

    def evaluate(self, point: Sequence) -> mpq:
        if len(point) != self.nvars:
            raise AmbientMismatch("point has wrong length")
        pt = [to_qq(x) for x in point]
        total = mpq(0)
        for e, c in self.terms.items():
            v = c
            for x, k in zip(pt, e):
                if k:
                    v *= x ** k
            total += v
        return total

    def compose(self, values: Sequence["Polynomial"]) -> "Polynomial":
        """Substitute ``values[i-1]`` for ``z_i`` (all values share one ambient)."""
        if len(values) != self.nvars:
            raise AmbientMismatch("need one value per variable")
        if not values:
            raise ValueError("cannot compose a polynomial in zero variables")
        target = values[0]
        powers: list[dict[int, Polynomial]] = [{0: Polynomial.constant(target.nvars, 1, target.names)} for _ in values]

        def power(i, k):
            cache = powers[i]
            if k not in cache:
                cache[k] = power(i, k - 1) * values[i]
            return cache[k]

        result = Polynomial.zero(target.nvars, target.names)
        for e, c in self.terms.items():
            term = Polynomial.constant(target.nvars, c, target.names)
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            result = result + term
        return result

    def translate(self, point: Sequence) -> "Polynomial":
        """Return ``p(z + point)``."""
        shifted = [Polynomial.var(self.nvars, i + 1, self.names) + to_qq(x) for i, x in enumerate(point)]
        return self.compose(shifted)

    def with_names(self, names: Sequence[str]) -> "Polynomial":
        return Polynomial(self.nvars, self.terms, names, _clean=True)

    def content(self) -> mpq:
        """Positive rational ``c`` such that ``self / c`` has coprime integer coefficients."""
        if not self.terms:
            return mpq(0)
        num = 0
        den = 1
        for c in self.terms.values():
            num = gcd(num, int(c.numerator))
            den = lcm(den, int(c.denominator))
        return mpq(num, den)

    def primitive(self, order: MonomialOrder = GREVLEX) -> "Polynomial":
        """Integer-coefficient primitive part with positive leading coefficient."""
        if not self.terms:
            return self
        c = self.content()
        if self.leading_term(order)[1] < 0:
            c = -c
        return self.scale(1 / c)

    def divexact(self, other: "Polynomial") -> "Polynomial":
        """Exact quotient ``self / other``; raises ``ValueError`` if not divisible."""
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        lm, lc = other.leading_term(GREVLEX)
        rem = dict(self.terms)
        quot = {}
        key = grevlex_key
        while rem:
            e = max(rem, key=key)
            if not monomial_divides(lm, e):
                raise ValueError("polynomial division is not exact")
            q_exp = monomial_div(e, lm)
            q_c = rem[e] / lc
            quot[q_exp] = q_c
            for oe, oc in other.terms.items():
                t = tuple(a + b for a, b in zip(oe, q_exp))
                v = rem.get(t, 0) - oc * q_c
                if v:
                    rem[t] = v
                else:
                    rem.pop(t, None)
        return self._new(quot)

    # rendering
    def sorted_terms(self, order: MonomialOrder = GREVLEX):
        return sorted(self.terms.items(), key=lambda t: order.key(t[0]), reverse=True)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            factors = []
            for name, k in zip(self.names, e):
                if k == 1:
                    factors.append(name)
                elif k > 1:
                    factors.append(f"{name}^{k}")
            mono = "*".join(factors)
            mag = abs(c)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(f"+ {body}" if c > 0 else f"- {body}")
        return " ".join(parts)

    def __repr__(self):
        return f"Polynomial({str(self)!r}, nvars={self.nvars})"


# -- parsing ----------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+(?:/\d+)?)|([A-Za-z]+)(\d+)|(\^)|(\*)|([+-]))")


def parse_polynomial(text: str, nvars: int | None = None, prefix: str = "z") -> Polynomial:
    """Parse ``coef*z1^2*z3 - 3/2*z2``-style text.

    Variables must be ``<prefix><index>``; ``nvars`` defaults to the largest
    index that occurs.  Raises ``ValueError`` on malformed input.
    """
    text = text.strip()
    if not text:
        raise ValueError("empty polynomial string")
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            if text[pos:].strip() == "":
                break
            raise ValueError(f"unexpected character {text[pos]!r} in {text!r}")
        num, name, idx, caret, star, sign = m.groups()
        if num is not None:
            tokens.append(("num", num))
        elif name is not None:
            if name != prefix:
                raise ValueError(f"unknown variable {name}{idx!s} (expected {prefix}<i>)")
            if int(idx) < 1:
                raise ValueError("variable indices start at 1")
            tokens.append(("var", int(idx)))
        elif caret:
            tokens.append(("^", None))
        elif star:
            tokens.append(("*", None))
        else:
            tokens.append(("sign", sign))
        pos = m.end()

    def fail(msg):
        raise ValueError(f"{msg} in {text!r}")

    raw_terms: list[tuple[mpq, dict[int, int]]] = []
    i = 0
    sign = 1
    if tokens and tokens[0][0] == "sign":
        sign = -1 if tokens[0][1] == "-" else 1
        i = 1
    while True:
        coef = mpq(sign)
        powers: dict[int, int] = {}
        while True:
            if i >= len(tokens):
                fail("missing factor")
            kind, val = tokens[i]
            if kind == "num":
                coef *= mpq(val)
                i += 1
            elif kind == "var":
                k = 1
                i += 1
                if i < len(tokens) and tokens[i][0] == "^":
                    if i + 1 >= len(tokens) or tokens[i + 1][0] != "num" or "/" in tokens[i + 1][1]:
                        fail("bad exponent")
                    k = int(tokens[i + 1][1])
                    i += 2
                powers[val] = powers.get(val, 0) + k
            else:
                fail(f"unexpected {kind!r}")
            if i < len(tokens) and tokens[i][0] == "*":
                i += 1
                continue
            break
        raw_terms.append((coef, powers))
        if i == len(tokens):
            break
        if tokens[i][0] != "sign":
            fail("missing operator")
        sign = -1 if tokens[i][1] == "-" else 1
        i += 1

    top = max((v for _, p in raw_terms for v in p), default=0)
    if nvars is None:
        nvars = max(top, 1)
    elif top > nvars:
        raise ValueError(f"variable {prefix}{top} exceeds ambient dimension {nvars}")
    terms: dict = {}
    for c, p in raw_terms:
        exp = [0] * nvars
        for v, k in p.items():
            exp[v - 1] += k
        exp = tuple(exp)
        terms[exp] = terms.get(exp, 0) + c
    return Polynomial(nvars, terms, default_names(nvars, prefix))


def variables(n: int) -> list[Polynomial]:
    return [Polynomial.var(n, i) for i in range(1, n + 1)]


# -- polynomial matrices ----------------------------------------------------

class PolyMatrix:
    """Dense matrix of polynomials sharing one ambient ring."""

    __slots__ = ("rows", "cols", "entries", "nvars")

    def __init__(self, entries: Sequence[Sequence[Polynomial]]):
        rows = [tuple(r) for r in entries]
        if not rows or not rows[0]:
            raise ValueError("matrix must have positive size")
        cols = len(rows[0])
        if any(len(r) != cols for r in rows):
            raise ValueError("ragged matrix")
        self.rows = len(rows)
        self.cols = cols
        self.entries = tuple(rows)
        self.nvars = rows[0][0].nvars

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def __eq__(self, other):
        return isinstance(other, PolyMatrix) and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __repr__(self):
        body = "; ".join(", ".join(str(x) for x in row) for row in self.entries)
        return f"PolyMatrix([{body}])"

    @classmethod
    def constant(cls, values: Sequence[Sequence], nvars: int) -> "PolyMatrix":
        return cls([[Polynomial.constant(nvars, v) for v in row] for row in values])

    @classmethod
    def identity(cls, size: int, nvars: int) -> "PolyMatrix":
        return cls.constant([[1 if i == j else 0 for j in range(size)] for i in range(size)], nvars)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "PolyMatrix":
        return PolyMatrix([[self.entries[i][j] for j in cols] for i in rows])

    def transpose(self) -> "PolyMatrix":
        return PolyMatrix([[self.entries[i][j] for i in range(self.rows)] for j in range(self.cols)])

    def evaluate(self, point) -> list[list[mpq]]:
        return [[e.evaluate(point) for e in row] for row in self.entries]

    def det(self) -> Polynomial:
        """Determinant by fraction-free (Bareiss) elimination."""
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        a = [list(r) for r in self.entries]
        sign = 1
        prev = Polynomial.constant(self.nvars, 1, a[0][0].names)
        for k in range(n - 1):
            if a[k][k].is_zero():
                swap = next((i for i in range(k + 1, n) if not a[i][k].is_zero()), None)
                if swap is None:
                    return Polynomial.zero(self.nvars, a[0][0].names)
                a[k], a[swap] = a[swap], a[k]
                sign = -sign
            piv = a[k][k]
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (piv * a[i][j] - a[i][k] * a[k][j]).divexact(prev)
                a[i][k] = Polynomial.zero(self.nvars, piv.names)
            prev = piv
        d = a[n - 1][n - 1]
        return d if sign == 1 else -d

    def rank(self) -> int:
        """Rank over the field of rational functions (fraction-free elimination)."""
        a = [list(r) for r in self.entries]
        rows, cols = self.rows, self.cols
        names = a[0][0].names
        prev = Polynomial.constant(self.nvars, 1, names)
        r = 0
        for c in range(cols):
            if r == rows:
                break
            piv_row = next((i for i in range(r, rows) if not a[i][c].is_zero()), None)
            if piv_row is None:
                continue
            a[r], a[piv_row] = a[piv_row], a[r]
            piv = a[r][c]
            for i in range(r + 1, rows):
                for j in range(c + 1, cols):
                    a[i][j] = (piv * a[i][j] - a[i][c] * a[r][j]).divexact(prev)
                a[i][c] = Polynomial.zero(self.nvars, names)
            prev = piv
            r += 1
        return r

    def minors(self, size: int) -> list[Polynomial]:
        """All ``size x size`` minors (row subsets x column subsets), zero ones included."""
        out = []
        for rs in combinations(range(self.rows), size):
            for cs in combinations(range(self.cols), size):
                out.append(self.submatrix(rs, cs).det())
        return out


def jacobian(v: Sequence[Polynomial]) -> PolyMatrix:
    """Matrix with entry ``(i, j) = d v_i / d z_j``; needs ``len(v) == nvars``."""
    if not v:
        raise ValueError("empty vector field")
    n = v[0].nvars
    if len(v) != n:
        raise ValueError(f"vector field has {len(v)} components in {n} variables")
    return PolyMatrix([[vi.derivative(j) for j in range(1, n + 1)] for vi in v])


def principal_minor_sum(m: PolyMatrix, i: int) -> Polynomial:
    """Sum of the ``i x i`` principal minors: the ``t^i`` coefficient of ``det(I + tM)``."""
    if m.rows != m.cols:
        raise ValueError("principal minors need a square matrix")
    size = m.rows
    if not 0 <= i <= size:
        raise ValueError(f"minor size {i} outside 0..{size}")
    names = m.entries[0][0].names
    if i == 0:
        return Polynomial.constant(m.nvars, 1, names)
    total = Polynomial.zero(m.nvars, names)
    for idx in combinations(range(size), i):
        total = total + m.submatrix(idx, idx).det()
    return total


# -- rational matrices ------------------------------------------------------

def rational_det(rows: Sequence[Sequence]) -> mpq:
    a = [[to_qq(x) for x in r] for r in rows]
    n = len(a)
    det = mpq(1)
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k]), None)
        if piv is None:
            return mpq(0)
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            det = -det
        det *= a[k][k]
        for i in range(k + 1, n):
            if a[i][k]:
                f = a[i][k] / a[k][k]
                for j in range(k, n):
                    a[i][j] -= f * a[k][j]
    return det


def rational_rank(rows: Sequence[Sequence]) -> int:
    a = [[to_qq(x) for x in r] for r in rows]
    if not a:
        return 0
    nrows, ncols = len(a), len(a[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        for i in range(r + 1, nrows):
            if a[i][c]:
                f = a[i][c] / a[r][c]
                for j in range(c, ncols):
                    a[i][j] -= f * a[r][j]
        r += 1
        if r == nrows:
            break
    return r


def gcd_polynomials(polys: Iterable[Polynomial]) -> Polynomial:
    """Monic gcd of a family of polynomials (zero if all are zero)."""
    polys = [p for p in polys]
    nonzero = [p for p in polys if not p.is_zero()]
    if not nonzero:
        return polys[0] if polys else Polynomial.zero(1)
    first = nonzero[0]
    if len(nonzero) == 1:
        return first.monic()
    if any(p.is_constant() for p in nonzero):
        return Polynomial.constant(first.nvars, 1, first.names)
    R, *_ = ring(",".join(f"x{i}" for i in range(first.nvars)), SQQ)

    def to_ring(p):
        return R.from_dict({e: SQQ(int(c.numerator), int(c.denominator)) for e, c in p.terms.items()})

    g = to_ring(nonzero[0])
    for p in nonzero[1:]:
        g = g.gcd(to_ring(p))
        if g.is_ground:
            return Polynomial.constant(first.nvars, 1, first.names)
    terms = {tuple(e): mpq(int(c.numerator), int(c.denominator)) for e, c in g.items()}
    return Polynomial(first.nvars, terms, first.names).monic()
