"""Quiver input model and truncated multivariate power-series algebra.

A quiver with nonnegative integer arrow-count matrix A gives rise to the
q-hypergeometric partition series

    P_A(x) = sum_d  y^(N(d)) / prod_i (1-q^-1)...(1-q^-d_i) * x^d,

over dimension vectors d, with q = y**2 and N(d) = sum_ij (a_ij - d_ij)
d_i d_j.  This module builds P_A truncated to a componentwise box and
provides the series operations (product, formal log, formal exp) needed
to factor it.

Coefficient storage.  The coefficient of x^d is kept internally as a
Laurent-polynomial numerator over the fixed grade denominator

    D_d = prod_i prod_{k=1..d_i} (1 - y^(2k)).

These denominators are multiplicative up to Gaussian binomials:
D_d / (D_e * D_{d-e}) = prod_i [d_i choose e_i]_q is a polynomial, so
products, log and exp of series never leave the representation and never
need a polynomial gcd.  Series whose coefficients do not fit over D_d
(possible for hand-built input) transparently fall back to generic
rational-function arithmetic.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .rational import (
    L_ONE,
    LaurentPoly,
    RationalFunction,
    RF_ONE,
    RF_ZERO,
    gaussian_binomial,
    motive_gl,
)

DimVector = tuple[int, ...]


def graded_lex_key(d: DimVector) -> tuple:
    """Sort key ordering dimension vectors by total degree, then lexicographically."""
    return (sum(d), d)


@lru_cache(maxsize=None)
def box_vectors(bound: DimVector) -> tuple[DimVector, ...]:
    """All vectors 0 <= d <= bound componentwise, in graded-lex order."""
    vs = itertools.product(*[range(b + 1) for b in bound])
    return tuple(sorted(vs, key=graded_lex_key))


def total_degree_box(n: int, total: int) -> DimVector:
    """Componentwise box enclosing all vectors of total degree <= total."""
    return (total,) * n


@dataclass(frozen=True)
class QuiverMatrix:
    """Square matrix of nonnegative arrow counts a_ij between quiver vertices."""

    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        n = len(self.entries)
        for row in self.entries:
            if len(row) != n:
                raise ValueError("matrix must be square")
            for a in row:
                if not isinstance(a, int) or a < 0:
                    raise ValueError("matrix entries must be nonnegative integers")

    @classmethod
    def from_rows(cls, rows) -> "QuiverMatrix":
        return cls(tuple(tuple(int(a) for a in row) for row in rows))

    @property
    def n(self) -> int:
        return len(self.entries)

    @property
    def is_symmetric(self) -> bool:
        a = self.entries
        return all(a[i][j] == a[j][i] for i in range(self.n) for j in range(i + 1, self.n))

    def twist(self, d: DimVector) -> int:
        """Quadratic exponent N(d) = sum_ij (a_ij - delta_ij) d_i d_j."""
        a = self.entries
        return sum(
            (a[i][j] - (1 if i == j else 0)) * d[i] * d[j]
            for i in range(self.n)
            for j in range(self.n)
        )

    def arrow_dim(self, d: DimVector) -> int:
        """Dimension sum_ij a_ij d_i d_j of the representation space at d."""
        a = self.entries
        return sum(a[i][j] * d[i] * d[j] for i in range(self.n) for j in range(self.n))

    def blocks(self) -> list[list[int]]:
        """Connected components of the undirected support graph (0-based).

        The matrix is indecomposable (cannot be brought to proper block
        diagonal form by a simultaneous row/column permutation) exactly
        when there is a single block.
        """
        a = self.entries
        n = self.n
        seen = [False] * n
        out = []
        for start in range(n):
            if seen[start]:
                continue
            comp, stack = [], [start]
            seen[start] = True
            while stack:
                i = stack.pop()
                comp.append(i)
                for j in range(n):
                    if not seen[j] and j != i and (a[i][j] or a[j][i]):
                        seen[j] = True
                        stack.append(j)
            out.append(sorted(comp))
        return out


def validate_and_decompose(A: QuiverMatrix) -> list[list[int]]:
    """Blocks of the support graph; construction already validated entries."""
    return A.blocks()


# ---------------------------------------------------------------------------
# Grade denominators and Gaussian cofactors


def _binomial_factor(k: int) -> LaurentPoly:
    return LaurentPoly({0: 1, 2 * k: -1})


_DENOM_CACHE: dict[tuple, LaurentPoly] = {}


def grade_denominator(d: DimVector) -> LaurentPoly:
    """D_d = prod_i prod_{k=1..d_i} (1 - y^(2k))."""
    key = tuple(sorted((c for c in d if c), reverse=True))
    got = _DENOM_CACHE.get(key)
    if got is None:
        got = L_ONE
        for c in key:
            for k in range(1, c + 1):
                got = got * _binomial_factor(k)
        _DENOM_CACHE[key] = got
    return got


def grade_denominator_factors(d: DimVector) -> list[int]:
    """Exponent list [k ...] such that D_d = prod (1 - y^(2k))."""
    out = []
    for c in d:
        out.extend(range(1, c + 1))
    return out


@lru_cache(maxsize=None)
def _qbin_numerator(m: int, k: int) -> LaurentPoly:
    f = gaussian_binomial(m, k)
    if not f.is_laurent_polynomial():
        raise AssertionError("Gaussian binomial did not cancel to a polynomial")
    return f.num


_GAUSS_CACHE: dict[tuple, LaurentPoly] = {}


def _gauss_cofactor(d: DimVector, e: DimVector) -> LaurentPoly:
    """D_d / (D_e * D_{d-e}) = prod_i [d_i choose e_i]_q, a polynomial."""
    key = tuple(sorted((di, ei) for di, ei in zip(d, e) if 0 < ei < di))
    got = _GAUSS_CACHE.get(key)
    if got is None:
        got = L_ONE
        for di, ei in key:
            got = got * _qbin_numerator(di, ei)
        _GAUSS_CACHE[key] = got
    return got


# ---------------------------------------------------------------------------
# Truncated series


class TruncatedSeries:
    """Formal power series in x_1..x_n truncated to a componentwise box.

    Absent coefficients are zero.  Exactly one of the two storages is
    active: `_num` maps grades to numerators over the grade denominator
    (fast path), `_gen` maps grades to RationalFunction (generic path).
    """

    __slots__ = ("bound", "_num", "_gen", "_view")

    def __init__(self, bound: DimVector, coefficients=None):
        bound = tuple(int(b) for b in bound)
        if any(b < 0 for b in bound):
            raise ValueError("bound components must be >= 0")
        self.bound = bound
        self._num = None
        self._gen = None
        self._view: dict = {}
        if coefficients is not None:
            self._init_from_coefficients(coefficients)

    def _init_from_coefficients(self, coefficients) -> None:
        num = {}
        gen = {}
        for d, f in coefficients.items():
            d = tuple(d)
            if len(d) != len(self.bound) or any(c < 0 or c > b for c, b in zip(d, self.bound)):
                raise ValueError(f"coefficient key {d} outside bound {self.bound}")
            if not isinstance(f, RationalFunction):
                f = RationalFunction(f)
            if f.is_zero():
                continue
            gen[d] = f
            if num is not None:
                cof = grade_denominator(d).exact_div(f.den)
                if cof is None:
                    num = None
                else:
                    num[d] = f.num * cof
        if num is not None:
            self._num = num
            self._view = dict(gen)
        else:
            self._gen = gen
            self._view = gen

    @classmethod
    def _engine(cls, bound: DimVector, num: dict) -> "TruncatedSeries":
        out = cls(bound)
        out._num = {d: p for d, p in num.items() if p}
        return out

    @classmethod
    def one(cls, bound: DimVector) -> "TruncatedSeries":
        zero = (0,) * len(bound)
        return cls._engine(bound, {zero: L_ONE})

    # -- coefficient access

    def coefficient(self, d) -> RationalFunction:
        """Canonical coefficient of x^d (zero if absent)."""
        d = tuple(d)
        if len(d) != len(self.bound) or any(c < 0 or c > b for c, b in zip(d, self.bound)):
            raise ValueError(f"{d} outside truncation bound {self.bound}")
        got = self._view.get(d)
        if got is not None:
            return got
        if self._gen is not None:
            return self._gen.get(d, RF_ZERO)
        p = self._num.get(d)
        f = RF_ZERO if p is None else RationalFunction(p, grade_denominator(d))
        self._view[d] = f
        return f

    def items(self):
        """(d, coefficient) pairs for nonzero coefficients, graded-lex order."""
        keys = self._gen.keys() if self._gen is not None else self._num.keys()
        for d in sorted(keys, key=graded_lex_key):
            yield d, self.coefficient(d)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        if self.bound != other.bound:
            return False
        if self._num is not None and other._num is not None:
            return self._num == other._num
        return all(
            self.coefficient(d) == other.coefficient(d) for d in box_vectors(self.bound)
        )

    def first_difference(self, other: "TruncatedSeries"):
        """Smallest grade (graded-lex) where the two series differ, or None."""
        if self.bound != other.bound:
            raise ValueError("bound mismatch")
        for d in box_vectors(self.bound):
            if self.coefficient(d) != other.coefficient(d):
                return d
        return None

    # -- arithmetic

    def __mul__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        if self.bound != other.bound:
            raise ValueError("series bounds differ")
        bound = self.bound
        if self._num is not None and other._num is not None:
            out: dict = {}
            for e, a in self._num.items():
                for f, b in other._num.items():
                    d = tuple(x + y for x, y in zip(e, f))
                    if any(c > bb for c, bb in zip(d, bound)):
                        continue
                    term = a * b * _gauss_cofactor(d, e)
                    got = out.get(d)
                    out[d] = term if got is None else got + term
            return TruncatedSeries._engine(bound, out)
        coeffs: dict = {}
        for e in box_vectors(bound):
            a = self.coefficient(e)
            if a.is_zero():
                continue
            for f in box_vectors(bound):
                d = tuple(x + y for x, y in zip(e, f))
                if any(c > bb for c, bb in zip(d, bound)):
                    continue
                b = other.coefficient(f)
                if b.is_zero():
                    continue
                coeffs[d] = coeffs.get(d, RF_ZERO) + a * b
        return TruncatedSeries(bound, coeffs)

    def theta_log_numerators(self) -> dict:
        """Numerators over |d| * D_d of the Euler-derivative of log(self).

        theta(log P) = theta(P)/P is computed by the division-free
        convolution theta(L)_d = theta(P)_d - sum_{0<e<d} theta(L)_e
        P_{d-e}; the x^d coefficient of log P itself is the returned
        numerator divided by |d| * D_d.  Requires constant coefficient 1
        and the fast-path storage.
        """
        if self._num is None:
            raise ValueError("series is not stored over grade denominators")
        zero = (0,) * len(self.bound)
        if self._num.get(zero) != L_ONE:
            raise ValueError("formal log needs constant coefficient 1")
        theta: dict = {}
        for d in box_vectors(self.bound):
            tot = sum(d)
            if tot == 0:
                continue
            p = self._num.get(d)
            acc = p.scale(tot) if p is not None else LaurentPoly()
            for e in itertools.product(*[range(c + 1) for c in d]):
                if e == d or not any(e):
                    continue
                t = theta.get(e)
                if t is None:
                    continue
                f = tuple(x - y for x, y in zip(d, e))
                pf = self._num.get(f)
                if pf is None:
                    continue
                acc = acc - t * pf * _gauss_cofactor(d, e)
            if acc:
                theta[d] = acc
        return theta

    def log(self) -> "TruncatedSeries":
        """Formal logarithm; requires constant coefficient 1."""
        zero = (0,) * len(self.bound)
        if self._num is not None:
            theta = self.theta_log_numerators()
            return TruncatedSeries._engine(
                self.bound, {d: p.scale(Fraction(1, sum(d))) for d, p in theta.items()}
            )
        if self.coefficient(zero) != RF_ONE:
            raise ValueError("formal log needs constant coefficient 1")
        theta: dict = {}
        for d in box_vectors(self.bound):
            tot = sum(d)
            if tot == 0:
                continue
            acc = self.coefficient(d) * tot
            for e in itertools.product(*[range(c + 1) for c in d]):
                if e == d or not any(e):
                    continue
                t = theta.get(e)
                if t is None:
                    continue
                f = tuple(x - y for x, y in zip(d, e))
                acc = acc - t * self.coefficient(f)
            if not acc.is_zero():
                theta[d] = acc
        return TruncatedSeries(
            self.bound, {d: f * Fraction(1, sum(d)) for d, f in theta.items()}
        )

    def exp(self) -> "TruncatedSeries":
        """Formal exponential; requires constant coefficient 0."""
        zero = (0,) * len(self.bound)
        if self._num is not None:
            if zero in self._num:
                raise ValueError("formal exp needs constant coefficient 0")
            out: dict = {zero: L_ONE}
            for d in box_vectors(self.bound):
                tot = sum(d)
                if tot == 0:
                    continue
                acc = LaurentPoly()
                for e in itertools.product(*[range(c + 1) for c in d]):
                    if not any(e):
                        continue
                    s = self._num.get(e)
                    if s is None:
                        continue
                    f = tuple(x - y for x, y in zip(d, e))
                    x = out.get(f)
                    if x is None:
                        continue
                    acc = acc + (s * x * _gauss_cofactor(d, e)).scale(sum(e))
                if acc:
                    out[d] = acc.scale(Fraction(1, tot))
            return TruncatedSeries._engine(self.bound, out)
        if not self.coefficient(zero).is_zero():
            raise ValueError("formal exp needs constant coefficient 0")
        out = {zero: RF_ONE}
        for d in box_vectors(self.bound):
            tot = sum(d)
            if tot == 0:
                continue
            acc = RF_ZERO
            for e in itertools.product(*[range(c + 1) for c in d]):
                if not any(e):
                    continue
                s = self.coefficient(e)
                if s.is_zero():
                    continue
                f = tuple(x - y for x, y in zip(d, e))
                x = out.get(f)
                if x is None or x.is_zero():
                    continue
                acc = acc + s * x * sum(e)
            if not acc.is_zero():
                out[d] = acc * Fraction(1, tot)
        return TruncatedSeries(self.bound, out)

    def __repr__(self):
        supp = len(self._gen if self._gen is not None else self._num or {})
        return f"TruncatedSeries(bound={self.bound}, nonzero={supp})"


# ---------------------------------------------------------------------------
# The partition series and its motivic description


def _tri(m: int) -> int:
    return m * (m + 1) // 2


def build_partition_series(A: QuiverMatrix, bound: DimVector) -> TruncatedSeries:
    """Truncation of P_A(x) to the box 0 <= d <= bound.

    The coefficient of x^d is y^N(d) / prod_i (1-y^-2)...(1-y^-2d_i);
    clearing the negative powers turns it into the signed monomial
    (-1)^|d| y^(N(d) + sum_i d_i(d_i+1)) over the grade denominator D_d.
    """
    bound = tuple(int(b) for b in bound)
    if len(bound) != A.n:
        raise ValueError("bound length must match the number of vertices")
    num = {}
    for d in box_vectors(bound):
        off = A.twist(d) + 2 * sum(_tri(c) for c in d)
        sign = -1 if sum(d) % 2 else 1
        num[d] = LaurentPoly({off: sign})
    return TruncatedSeries._engine(bound, num)


def motivic_coefficient(A: QuiverMatrix, d) -> RationalFunction:
    """Coefficient of x^d in P_A assembled from virtual motive classes.

    Independent of build_partition_series: uses [R_d] = q^dim R_d and the
    GL motives, each rescaled to its virtual class by y^(-dim), and takes
    the quotient.  Must agree with the series coefficient.
    """
    d = tuple(d)
    if len(d) != A.n or any(c < 0 for c in d):
        raise ValueError("dimension vector does not match the quiver")
    dim_r = A.arrow_dim(d)
    r_vir = RationalFunction.monomial(1, 2 * dim_r) * RationalFunction.monomial(1, -dim_r)
    g_vir = RF_ONE
    for c in d:
        if c:
            g_vir = g_vir * motive_gl(c) * RationalFunction.monomial(1, -c * c)
    return r_vir / g_vir
