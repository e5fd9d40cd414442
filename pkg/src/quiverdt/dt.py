"""Donaldson-Thomas invariants of a quiver matrix, by series factorization.

The partition series P_A(x) with constant term 1 factors uniquely as

    P_A(x) = prod_{d != 0} prod_{i in Z} prod_{k >= 0}
                 (1 - q^(k + (i+1)/2) x^d)^((-1)^(i+1) c_{d,i}),

and DT_d(q) = sum_i c_{d,i} (-q^(1/2))^i = sum_i c_{d,i} y^i.  Taking the
formal logarithm of both sides and summing the geometric index k turns the
right-hand side into

    log P_A = - sum_{d != 0} sum_{m >= 1} (1/m) z_m DT_d(z_m)
                                          / (1 - y^(2m)) * x^(m d),

where z_m = (-1)^(m+1) y^m is the m-th power of -q^(1/2) on the branch
q^(1/2) = -y.  Reading this at x^d and peeling off the m = 1 term gives a
well-founded recursion: DT_d is determined by the log coefficient at d and
the invariants at proper divisors d/m.  Everything is exact rational-
function arithmetic in y, so DT invariants of non-symmetric matrices
(genuine rational functions) are representable and polynomiality is a
decidable property, not a truncation artifact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .rational import (
    L_ONE,
    LaurentPoly,
    RationalFunction,
    RF_ZERO,
    gaussian_binomial,
)
from .series import (
    DimVector,
    QuiverMatrix,
    TruncatedSeries,
    _binomial_factor,
    box_vectors,
    build_partition_series,
    grade_denominator,
    grade_denominator_factors,
    graded_lex_key,
)


class InternalConsistencyError(Exception):
    """A mathematical identity the artifact relies on failed to hold."""


class ReconstructionError(InternalConsistencyError):
    """Product form re-expansion disagreed with the partition series."""

    def __init__(self, dim_vector: DimVector):
        super().__init__(f"reconstructed series first differs at {dim_vector}")
        self.dim_vector = dim_vector


# -(1 - y^2)/y, the factor turning the m = 1 log term back into DT_d.
_FLIP = LaurentPoly({1: 1, -1: -1})


def _divisors(n: int) -> list[int]:
    return [m for m in range(1, n + 1) if n % m == 0]


def _vector_gcd(d: DimVector) -> int:
    g = 0
    for c in d:
        g = math.gcd(g, c)
    return g


_COFACTOR_CACHE: dict = {}


def _den_cofactor(d: DimVector, m: int) -> LaurentPoly:
    """D_d / (1 - y^(2m)); defined whenever some d_i >= m."""
    key = (tuple(sorted((c for c in d if c), reverse=True)), m)
    got = _COFACTOR_CACHE.get(key)
    if got is None:
        got = grade_denominator(d).exact_div(_binomial_factor(m))
        if got is None:
            raise AssertionError(f"(1 - y^{2*m}) does not divide D_{d}")
        _COFACTOR_CACHE[key] = got
    return got


def _reduce_over_grade(num: LaurentPoly, d: DimVector, scalar: int) -> RationalFunction:
    """Canonical form of num / (scalar * D_d).

    D_d is a known product of binomials 1 - y^(2k); dividing them out of
    the numerator one by one succeeds completely exactly when the value is
    a Laurent polynomial (the usual case), avoiding a polynomial gcd.
    Factors that do not divide are left for the generic constructor.
    """
    if num.is_zero():
        return RF_ZERO
    cur = num
    residual: list[int] = []
    for k in grade_denominator_factors(d):
        q = cur.exact_div(_binomial_factor(k))
        if q is None:
            residual.append(k)
        else:
            cur = q
    if not residual:
        return RationalFunction(cur.scale(Fraction(1, scalar)))
    den = LaurentPoly({0: scalar})
    for k in residual:
        den = den * _binomial_factor(k)
    return RationalFunction(cur, den)


@dataclass(frozen=True)
class DTEntry:
    """Raw and normalized DT invariant at one dimension vector, with flags."""

    d: DimVector
    raw: RationalFunction
    normalized: RationalFunction
    coeffs: tuple | None
    is_polynomial: bool
    is_nonnegative: bool


@dataclass
class DTTable:
    """DT invariants for every nonzero dimension vector inside a box."""

    matrix: QuiverMatrix
    bound: DimVector
    nonsymmetric_warning: bool
    entries: dict

    def vectors(self) -> list[DimVector]:
        return sorted(self.entries, key=graded_lex_key)

    def entry(self, d) -> DTEntry:
        return self.entries[tuple(d)]

    def raw(self, d) -> RationalFunction:
        return self.entries[tuple(d)].raw

    def normalized(self, d) -> RationalFunction:
        return self.entries[tuple(d)].normalized


def normalize_dt(A: QuiverMatrix, d, raw: RationalFunction) -> RationalFunction:
    """Normalized invariant y^(N(d)+1) * raw, N(d) = sum (a_ij - delta_ij) d_i d_j."""
    d = tuple(d)
    if raw.is_zero():
        return RF_ZERO
    return RationalFunction._raw(raw.num.shift(A.twist(d) + 1), raw.den)


def _is_nonnegative_integral(p: LaurentPoly) -> bool:
    for _, c in p.items():
        if isinstance(c, Fraction):
            if c.denominator != 1 or c < 0:
                return False
        elif c < 0:
            return False
    return True


def _make_entry(A: QuiverMatrix, d: DimVector, raw: RationalFunction) -> DTEntry:
    normalized = normalize_dt(A, d, raw)
    poly = raw.is_laurent_polynomial()
    coeffs = tuple(raw.coefficients()) if poly else None
    nonneg = poly and _is_nonnegative_integral(normalized.num)
    return DTEntry(d, raw, normalized, coeffs, poly, nonneg)


def extract_dt(A: QuiverMatrix, bound) -> DTTable:
    """Invert the product factorization of P_A over the given box.

    Dimension vectors are processed in graded-lex order; the invariant at
    d needs only invariants at proper divisors d/m, so every value inside
    the box is exact (independent of the bound, as long as it contains d).
    """
    bound = tuple(int(b) for b in bound)
    if len(bound) != A.n or any(b < 0 for b in bound):
        raise ValueError("bound must have one nonnegative entry per vertex")
    P = build_partition_series(A, bound)
    theta = P.theta_log_numerators()
    raw: dict = {}
    for d in box_vectors(bound):
        tot = sum(d)
        if tot == 0:
            continue
        # bracket accumulates L_d plus divisor corrections over tot * D_d
        bracket = theta.get(d, LaurentPoly())
        deferred = []
        g = _vector_gcd(d)
        for m in _divisors(g):
            if m == 1:
                continue
            f = raw[tuple(c // m for c in d)]
            if f.is_zero():
                continue
            sub = f.substitute_signed_power(m)
            if sub.is_laurent_polynomial():
                scale = Fraction(tot * (-1) ** (m + 1), m)
                bracket = bracket + (sub.num.shift(m) * _den_cofactor(d, m)).scale(scale)
            else:
                deferred.append((m, sub))
        if not deferred:
            raw[d] = _reduce_over_grade(bracket * _FLIP, d, tot)
        else:
            val = RationalFunction(bracket, grade_denominator(d).scale(tot))
            for m, sub in deferred:
                kernel = RationalFunction(
                    LaurentPoly({m: Fraction((-1) ** (m + 1), m)}), _binomial_factor(m)
                )
                val = val + sub * kernel
            raw[d] = val * RationalFunction(_FLIP)
    entries = {d: _make_entry(A, d, f) for d, f in raw.items()}
    return DTTable(A, bound, not A.is_symmetric, entries)


def check_efimov(table: DTTable) -> dict:
    """Per-vector positivity verdicts for the normalized invariants.

    True means the normalized invariant is a polynomial in y with
    nonnegative integer coefficients.  The positivity theorem only covers
    symmetric matrices, so tables with the non-symmetric warning are
    refused.
    """
    if table.nonsymmetric_warning:
        raise ValueError("positivity check applies only to symmetric matrices")
    return {d: table.entries[d].is_nonnegative for d in table.vectors()}


def reconstruct_series(A: QuiverMatrix, table: DTTable, bound) -> TruncatedSeries:
    """Re-expand the product form from a DT table and compare with P_A.

    Each factor family over k >= 0 contributes the closed geometric factor
    1/(1 - y^(2m)) to the m-th plethystic power of its log, so the series
    exponent of the summed contributions reproduces P_A exactly when the
    table is correct.  Raises ReconstructionError at the first differing
    dimension vector otherwise.
    """
    bound = tuple(int(b) for b in bound)
    if len(bound) != A.n:
        raise ValueError("bound length must match the number of vertices")
    num: dict = {}
    generic: dict | None = None
    for g in box_vectors(bound):
        if sum(g) == 0:
            continue
        acc = LaurentPoly()
        for m in _divisors(_vector_gcd(g)):
            e = tuple(c // m for c in g)
            ent = table.entries.get(e)
            if ent is None:
                raise ValueError(f"DT table is incomplete at {e}")
            if ent.raw.is_zero():
                continue
            sub = ent.raw.substitute_signed_power(m)
            if not sub.is_laurent_polynomial():
                generic = {}
                break
            acc = acc + (sub.num.shift(m) * _den_cofactor(g, m)).scale(Fraction((-1) ** m, m))
        if generic is not None:
            break
        if acc:
            num[g] = acc
    if generic is None:
        log_series = TruncatedSeries._engine(bound, num)
    else:
        for g in box_vectors(bound):
            if sum(g) == 0:
                continue
            val = RF_ZERO
            for m in _divisors(_vector_gcd(g)):
                ent = table.entries.get(tuple(c // m for c in g))
                if ent is None:
                    raise ValueError(f"DT table is incomplete at {g}")
                if ent.raw.is_zero():
                    continue
                sub = ent.raw.substitute_signed_power(m)
                kernel = RationalFunction(
                    LaurentPoly({m: Fraction((-1) ** m, m)}), _binomial_factor(m)
                )
                val = val + sub * kernel
            if not val.is_zero():
                generic[g] = val
        log_series = TruncatedSeries(bound, generic)
    result = log_series.exp()
    expected = build_partition_series(A, bound)
    if result != expected:
        diff = result.first_difference(expected)
        raise ReconstructionError(diff)
    return result


# ---------------------------------------------------------------------------
# Closed forms and the non-vanishing criterion


def kronecker_dt(m: int, k: int) -> RationalFunction:
    """Closed form of DT at (1, k) for the m-arrow Kronecker matrix.

    Equals y^(k^2) [m choose k]_q for k <= m and vanishes for k > m.
    """
    if m < 1 or k < 0:
        raise ValueError("kronecker_dt needs m >= 1 and k >= 0")
    if k > m:
        return RF_ZERO
    f = gaussian_binomial(m, k)
    return RationalFunction._raw(f.num.shift(k * k), f.den)


def moebius(n: int) -> int:
    """Classical Moebius function via trial-division factorization."""
    if n < 1:
        raise ValueError("moebius needs n >= 1")
    out = 1
    p = 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            out = -out
        p += 1 if p == 2 else 2
    if n > 1:
        out = -out
    return out


def loop_dt_at_one(m: int, d: int) -> int:
    """Numerical normalized DT invariant of the m-loop one-vertex quiver.

    Evaluates (1/d^2) sum_{e | d} mu(d/e) (-1)^((m-1)(d-e)) C(me-1, e-1)
    and checks the result is a nonnegative integer, which the theory
    guarantees for nontrivial reasons.
    """
    if m < 2:
        raise ValueError("loop_dt_at_one needs m >= 2")
    if d < 1:
        raise ValueError("loop_dt_at_one needs d >= 1")
    total = 0
    for e in _divisors(d):
        total += moebius(d // e) * (-1) ** ((m - 1) * (d - e)) * math.comb(m * e - 1, e - 1)
    val = Fraction(total, d * d)
    if val.denominator != 1 or val < 0:
        raise InternalConsistencyError(
            f"loop formula gave non-integer or negative value {val} at (m={m}, d={d})"
        )
    return int(val)


_COMPLETE_TABLE_MATRICES = (((0,),), ((1,),), ((0, 1), (1, 0)))


def nonvanishing(A: QuiverMatrix, d) -> bool:
    """Numerical criterion for DT_d != 0: d_i <= sum_j a_ij d_j for all i.

    Applies to symmetric indecomposable matrices with strictly positive d,
    excluding the three matrices whose finite DT tables are known
    completely; violations of these hypotheses raise with the failed
    precondition named.
    """
    d = tuple(d)
    if not A.is_symmetric:
        raise ValueError("nonvanishing: matrix must be symmetric")
    if len(A.blocks()) != 1:
        raise ValueError("nonvanishing: matrix must be indecomposable")
    if len(d) != A.n or any(c < 1 for c in d):
        raise ValueError("nonvanishing: every component of d must be >= 1")
    if A.entries in _COMPLETE_TABLE_MATRICES:
        raise ValueError("nonvanishing: matrix has a known complete table; criterion not applicable")
    a = A.entries
    return all(d[i] <= sum(a[i][j] * d[j] for j in range(A.n)) for i in range(A.n))
