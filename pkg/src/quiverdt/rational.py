"""Exact arithmetic in one formal variable y, where q = y**2.

Everything in this package is a rational function of a single square root
of q.  We fix the variable y = -q**(1/2), so that q itself is y**2 and any
integer power of q**(1/2) is a signed power of y.  Coefficients are exact
rationals (int or fractions.Fraction); there is no floating point and no
tolerance anywhere.

A LaurentPoly maps integer exponents of y (negative exponents allowed) to
nonzero coefficients; the zero polynomial is the empty map.  A
RationalFunction is a quotient of two LaurentPoly kept in canonical form:

  * numerator and denominator share no polynomial factor,
  * the denominator has no negative exponents and constant term 1
    (monomial shifts are pushed into the numerator).

Canonical form is total, so equality of values is equality of
representations and golden-value tests can compare structurally.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Union

Coeff = Union[int, Fraction]


class PoleError(ArithmeticError):
    """Raised when a rational function is evaluated at a pole."""


def _strip_dense(cs: list) -> list:
    while cs and cs[-1] == 0:
        cs.pop()
    return cs


def _dense_divmod(a: list, b: list) -> tuple[list, list]:
    """Quotient and remainder of dense ascending coefficient lists."""
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(a)
    db, lead = len(b) - 1, b[-1]
    q = [0] * max(len(r) - db, 0)
    for i in range(len(r) - 1, db - 1, -1):
        c = r[i]
        if c == 0:
            continue
        c = c / lead if isinstance(c, Fraction) or isinstance(lead, Fraction) else Fraction(c, lead)
        if c.denominator == 1:
            c = c.numerator
        q[i - db] = c
        for j, bj in enumerate(b):
            if bj:
                r[i - db + j] -= c * bj
    return _strip_dense(q), _strip_dense(r)


def _dense_gcd(a: list, b: list) -> list:
    """Monic gcd of dense ascending coefficient lists (1 for coprime)."""
    while b:
        a, b = b, _dense_divmod(a, b)[1]
    if not a:
        return []
    lead = a[-1]
    if lead != 1:
        a = [Fraction(c, lead) if not isinstance(c, Fraction) else c / lead for c in a]
        a = [c.numerator if isinstance(c, Fraction) and c.denominator == 1 else c for c in a]
    return a


class LaurentPoly:
    """Sparse Laurent polynomial in y with exact rational coefficients."""

    __slots__ = ("_c",)

    def __init__(self, coeffs: Mapping[int, Coeff] | None = None):
        c = {}
        if coeffs:
            for e, v in coeffs.items():
                if v != 0:
                    c[int(e)] = v
        self._c = c

    @classmethod
    def term(cls, coeff: Coeff, exp: int = 0) -> "LaurentPoly":
        return cls({exp: coeff})

    @classmethod
    def from_dense(cls, cs: Iterable[Coeff], offset: int = 0) -> "LaurentPoly":
        return cls({offset + i: v for i, v in enumerate(cs)})

    def items(self):
        return self._c.items()

    def coefficient(self, exp: int) -> Coeff:
        return self._c.get(exp, 0)

    def is_zero(self) -> bool:
        return not self._c

    def __bool__(self) -> bool:
        return bool(self._c)

    def is_one(self) -> bool:
        return self._c == {0: 1}

    def valuation(self) -> int:
        """Lowest exponent with nonzero coefficient (0 for the zero poly)."""
        return min(self._c) if self._c else 0

    def degree(self) -> int:
        """Highest exponent with nonzero coefficient (0 for the zero poly)."""
        return max(self._c) if self._c else 0

    def __eq__(self, other) -> bool:
        if isinstance(other, LaurentPoly):
            return self._c == other._c
        if isinstance(other, (int, Fraction)):
            return self._c == ({0: other} if other != 0 else {})
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self._c.items()))

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly({e: -v for e, v in self._c.items()})

    def __add__(self, other) -> "LaurentPoly":
        other = _as_laurent(other)
        c = dict(self._c)
        for e, v in other._c.items():
            s = c.get(e, 0) + v
            if s == 0:
                c.pop(e, None)
            else:
                c[e] = s
        out = LaurentPoly.__new__(LaurentPoly)
        out._c = c
        return out

    __radd__ = __add__

    def __sub__(self, other) -> "LaurentPoly":
        return self + (-_as_laurent(other))

    def __rsub__(self, other) -> "LaurentPoly":
        return _as_laurent(other) + (-self)

    def __mul__(self, other) -> "LaurentPoly":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        a, b = self._c, other._c
        if len(a) > len(b):
            a, b = b, a
        c: dict = {}
        for ea, va in a.items():
            for eb, vb in b.items():
                e = ea + eb
                s = c.get(e, 0) + va * vb
                if s == 0:
                    c.pop(e, None)
                else:
                    c[e] = s
        out = LaurentPoly.__new__(LaurentPoly)
        out._c = c
        return out

    __rmul__ = __mul__

    def scale(self, factor: Coeff) -> "LaurentPoly":
        if factor == 0:
            return LaurentPoly()
        return LaurentPoly({e: v * factor for e, v in self._c.items()})

    def __pow__(self, n: int) -> "LaurentPoly":
        if n < 0:
            raise ValueError("negative power of a Laurent polynomial")
        out = LaurentPoly({0: 1})
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by the monomial y**k."""
        if k == 0:
            return self
        return LaurentPoly({e + k: v for e, v in self._c.items()})

    def substitute_power(self, m: int) -> "LaurentPoly":
        """Substitute y -> y**m (multiplies every exponent by m)."""
        if m < 1:
            raise ValueError("substitution power must be >= 1")
        return LaurentPoly({e * m: v for e, v in self._c.items()})

    def substitute_neg(self) -> "LaurentPoly":
        """Substitute y -> -y."""
        return LaurentPoly({e: v if e % 2 == 0 else -v for e, v in self._c.items()})

    def __call__(self, value: Coeff) -> Fraction:
        """Evaluate at an exact rational point (nonzero if exponents < 0)."""
        total = Fraction(0)
        value = Fraction(value)
        for e, v in self._c.items():
            total += v * value**e
        return total

    def to_dense(self) -> tuple[int, list]:
        """Return (valuation, ascending coefficient list); ([], 0) if zero."""
        if not self._c:
            return 0, []
        v, d = self.valuation(), self.degree()
        cs = [0] * (d - v + 1)
        for e, c in self._c.items():
            cs[e - v] = c
        return v, cs

    def exact_div(self, other: "LaurentPoly") -> "LaurentPoly | None":
        """Exact quotient self/other in the Laurent ring, or None."""
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        if self.is_zero():
            return LaurentPoly()
        va, ca = self.to_dense()
        vb, cb = other.to_dense()
        q, r = _dense_divmod(ca, cb)
        if r:
            return None
        return LaurentPoly.from_dense(q, va - vb)

    def __repr__(self):
        return f"LaurentPoly({dict(sorted(self._c.items()))!r})"

    def __str__(self):
        return format_laurent(self)


def _as_laurent(x) -> LaurentPoly:
    if isinstance(x, LaurentPoly):
        return x
    if isinstance(x, (int, Fraction)):
        return LaurentPoly({0: x})
    raise TypeError(f"cannot interpret {x!r} as a Laurent polynomial")


L_ZERO = LaurentPoly()
L_ONE = LaurentPoly({0: 1})
Y = LaurentPoly({1: 1})


def laurent_gcd(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    """Gcd of the polynomial parts, normalized to constant term 1.

    Monomials are units of the Laurent ring, so the gcd is only defined up
    to a unit; the representative returned here has valuation 0 and the
    lowest coefficient equal to 1.
    """
    if a.is_zero() or b.is_zero():
        raise ValueError("gcd with the zero polynomial")
    _, ca = a.to_dense()
    _, cb = b.to_dense()
    g = _dense_gcd(ca, cb)
    gp = LaurentPoly.from_dense(g, 0)
    v = gp.valuation()
    if v:
        gp = gp.shift(-v)
    c0 = gp.coefficient(0)
    if c0 != 1:
        gp = gp.scale(Fraction(1, 1) / c0)
    return gp


class RationalFunction:
    """Quotient of Laurent polynomials in y, always in canonical form."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        num = _as_laurent(num)
        den = L_ONE if den is None else _as_laurent(den)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero():
            self.num, self.den = L_ZERO, L_ONE
            return
        vn, vd = num.valuation(), den.valuation()
        n = num.shift(-vn)
        d = den.shift(-vd)
        _, cn = n.to_dense()
        _, cd = d.to_dense()
        g = _dense_gcd(cn, cd)
        if len(g) > 1:
            cn = _dense_divmod(cn, g)[0]
            cd = _dense_divmod(cd, g)[0]
            n = LaurentPoly.from_dense(cn)
            d = LaurentPoly.from_dense(cd)
        c0 = d.coefficient(0)
        if c0 != 1:
            inv = Fraction(1, 1) / c0
            n = n.scale(inv)
            d = d.scale(inv)
        self.num = n.shift(vn - vd)
        self.den = d

    @classmethod
    def _raw(cls, num: LaurentPoly, den: LaurentPoly) -> "RationalFunction":
        """Wrap already-canonical parts without re-reducing."""
        out = cls.__new__(cls)
        out.num, out.den = num, den
        return out

    @classmethod
    def monomial(cls, coeff: Coeff, exp: int = 0) -> "RationalFunction":
        if coeff == 0:
            return RF_ZERO
        return cls._raw(LaurentPoly({exp: coeff}), L_ONE)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self) -> bool:
        return bool(self.num)

    def is_laurent_polynomial(self) -> bool:
        return self.den.is_one()

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction, LaurentPoly)):
            other = RationalFunction(other)
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __neg__(self) -> "RationalFunction":
        return RationalFunction._raw(-self.num, self.den)

    def __add__(self, other) -> "RationalFunction":
        other = _as_rational(other)
        if self.den == other.den:
            return RationalFunction(self.num + other.num, self.den)
        return RationalFunction(
            self.num * other.den + other.num * self.den, self.den * other.den
        )

    __radd__ = __add__

    def __sub__(self, other) -> "RationalFunction":
        return self + (-_as_rational(other))

    def __rsub__(self, other) -> "RationalFunction":
        return _as_rational(other) + (-self)

    def __mul__(self, other) -> "RationalFunction":
        other = _as_rational(other)
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "RationalFunction":
        other = _as_rational(other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RationalFunction(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other) -> "RationalFunction":
        return _as_rational(other) / self

    def __pow__(self, n: int) -> "RationalFunction":
        if n < 0:
            return (RF_ONE / self) ** (-n)
        out = RF_ONE
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def substitute_power(self, m: int) -> "RationalFunction":
        """Substitute y -> y**m and re-canonicalize."""
        if m < 1:
            raise ValueError("substitution power must be >= 1")
        return RationalFunction(self.num.substitute_power(m), self.den.substitute_power(m))

    def substitute_neg(self) -> "RationalFunction":
        """Substitute y -> -y and re-canonicalize."""
        return RationalFunction(self.num.substitute_neg(), self.den.substitute_neg())

    def substitute_signed_power(self, m: int) -> "RationalFunction":
        """Substitute y -> (-1)**(m+1) * y**m.

        This is the image of y under raising -q**(1/2) to the m-th power
        while keeping the branch q**(1/2) -> -y; it drives every plethystic
        power substitution in the product factorization.
        """
        f = self if m % 2 == 1 else self.substitute_neg()
        return f.substitute_power(m)

    def eval_at_q1(self) -> Fraction:
        """Evaluate at q = 1 along the branch q**(1/2) = 1, i.e. y = -1."""
        dv = self.den(Fraction(-1))
        if dv == 0:
            raise PoleError("pole at q = 1 (y = -1)")
        return Fraction(self.num(Fraction(-1))) / dv

    def coefficients(self) -> list[tuple[int, Coeff]]:
        """Sorted (exponent, coefficient) pairs when this is a Laurent polynomial."""
        if not self.is_laurent_polynomial():
            raise ValueError("not a Laurent polynomial")
        return sorted(self.num.items())

    def __repr__(self):
        return f"RationalFunction({self.num!r}, {self.den!r})"

    def __str__(self):
        return format_rational(self)


def _as_rational(x) -> RationalFunction:
    if isinstance(x, RationalFunction):
        return x
    if isinstance(x, (int, Fraction, LaurentPoly)):
        return RationalFunction(x)
    raise TypeError(f"cannot interpret {x!r} as a rational function")


RF_ZERO = RationalFunction(0)
RF_ONE = RationalFunction(1)


# ---------------------------------------------------------------------------
# q-combinatorics


def q_pochhammer(d: int) -> LaurentPoly:
    """Product (1 - y**-2) (1 - y**-4) ... (1 - y**-2d); 1 for d = 0.

    With q = y**2 this is the falling product (1-q**-1)...(1-q**-d)
    appearing in every denominator of the partition series.
    """
    if d < 0:
        raise ValueError("q_pochhammer needs d >= 0")
    out = L_ONE
    for k in range(1, d + 1):
        out = out * LaurentPoly({0: 1, -2 * k: -1})
    return out


def gaussian_binomial(m: int, k: int) -> RationalFunction:
    """The q-binomial coefficient [m choose k] as a polynomial in q = y**2.

    Computed by the quotient of q-factorials; for k > m the value is 0.
    The quotient always cancels to a polynomial with nonnegative integer
    coefficients.
    """
    if m < 0 or k < 0:
        raise ValueError("gaussian_binomial needs m, k >= 0")
    if k > m:
        return RF_ZERO
    num = L_ONE
    den = L_ONE
    for j in range(1, k + 1):
        num = num * LaurentPoly({0: 1, 2 * (m - k + j): -1})
        den = den * LaurentPoly({0: 1, 2 * j: -1})
    return RationalFunction(num, den)


def motive_gl(n: int) -> RationalFunction:
    """Class of the group GL_n: q**(n**2) (1-q**-1)...(1-q**-n), q = y**2."""
    if n < 1:
        raise ValueError("motive_gl needs n >= 1")
    return RationalFunction(q_pochhammer(n).shift(2 * n * n))


def rf_expand_descending(f: RationalFunction, terms: int) -> list[tuple[int, Coeff]]:
    """Leading terms of the expansion of f in descending powers of y.

    Views f as a Laurent series in 1/y and returns the first `terms`
    nonzero-or-not coefficients starting from the top exponent: a list of
    (exponent, coefficient) pairs for consecutive exponents e_top, e_top-1,
    ... (zero coefficients included).  Exact arithmetic throughout.
    """
    if terms <= 0:
        return []
    if f.is_zero():
        return []
    # Substitute y -> 1/w (negate exponents); expand in ascending powers of w.
    num = LaurentPoly({-e: c for e, c in f.num.items()})
    den = LaurentPoly({-e: c for e, c in f.den.items()})
    vn, cn = num.to_dense()
    vd, cd = den.to_dense()
    lead = cd[0]
    inv = Fraction(1, 1) / lead
    series = []
    rem = list(cn)
    for i in range(terms):
        c = (rem[i] if i < len(rem) else 0) * inv
        if isinstance(c, Fraction) and c.denominator == 1:
            c = c.numerator
        series.append(c)
        if c != 0:
            for j, b in enumerate(cd):
                if b and i + j >= len(rem):
                    rem.extend([0] * (i + j - len(rem) + 1))
                if b:
                    rem[i + j] -= c * b
    top = -(vn - vd)  # back to y exponents
    return [(top - i, series[i]) for i in range(terms)]


# ---------------------------------------------------------------------------
# String forms


def _format_coeff(c: Coeff) -> str:
    return str(c)


def format_laurent(p: LaurentPoly, var: str = "y") -> str:
    """Render with terms in descending exponent order, e.g. 'y^3 - 2*y + 1'."""
    if p.is_zero():
        return "0"
    parts = []
    for e, c in sorted(p.items(), reverse=True):
        neg = c < 0
        mag = -c if neg else c
        if e == 0:
            body = _format_coeff(mag)
        else:
            v = var if e == 1 else f"{var}^{e}"
            body = v if mag == 1 else f"{_format_coeff(mag)}*{v}"
        if not parts:
            parts.append(f"-{body}" if neg else body)
        else:
            parts.append(f"- {body}" if neg else f"+ {body}")
    return " ".join(parts)


def format_rational(f: RationalFunction, var: str = "y") -> str:
    if f.den.is_one():
        return format_laurent(f.num, var)
    return f"({format_laurent(f.num, var)})/({format_laurent(f.den, var)})"
