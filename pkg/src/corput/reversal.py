"""
Digit-reversal invariance of affine divide-and-conquer recurrences.

A sequence with x_{2n} = x_n and x_{2n+1} = alpha x_n + beta x_{n+1} + gamma
satisfies x_n = x_{n^R}. For odd n >= 3 and x_1 = 1,

    x_n = v A(eps_1) ... A(eps_{nu-1}) w,

with v = (alpha, beta, gamma), w = (1, 1, 1)^T and the transition matrices

    A(0) = [[1, 0, 0], [alpha, beta, gamma], [0, 0, 1]]
    A(1) = [[alpha, beta, gamma], [0, 1, 0], [0, 0, 1]].

The invariance reduces to sixteen identities between short products of A(0)
and A(1), verified here exactly. d_n is the case (1/2, 1/2, 1/2, 1) and
Stern's sequence the case (1, 1, 0, 1).

Parameters are exact: Fractions, or GaussianRationals for complex values.
Only ring operations are used.
"""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .bits import BinaryWord, reverse
from .report import Verdict
from .tables import reversed_indices
from .vdc import d_batch, d_explicit_range

logger = logging.getLogger(__name__)


@dataclass(frozen=True, slots=True)
class GaussianRational:
    """re + im * i with rational parts."""
    re: Fraction
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", Fraction(self.re))
        object.__setattr__(self, "im", Fraction(self.im))

    @staticmethod
    def _lift(other: object) -> GaussianRational | None:
        if isinstance(other, GaussianRational):
            return other
        if isinstance(other, Fraction | int):
            return GaussianRational(Fraction(other))
        return None

    def __add__(self, other: object) -> GaussianRational:
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self) -> GaussianRational:
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other: object) -> GaussianRational:
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other: object) -> GaussianRational:
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other: object) -> GaussianRational:
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self) -> int:
        return hash(self.re) if self.im == 0 else hash((self.re, self.im))

    def __str__(self) -> str:
        if self.im == 0:
            return str(self.re)
        sign = "-" if self.im < 0 else "+"
        return f"{self.re}{sign}{abs(self.im)}i"


Scalar = Fraction | GaussianRational
Matrix = tuple[tuple[Scalar, ...], ...]
Vector = tuple[Scalar, ...]


def _scalar(value: Scalar | int | str) -> Scalar:
    if isinstance(value, GaussianRational):
        return value
    return Fraction(value)


@dataclass(frozen=True, slots=True)
class AffineRecurrence:
    """x_1 = x1, x_{2n} = x_n, x_{2n+1} = alpha x_n + beta x_{n+1} + gamma."""
    alpha: Scalar
    beta: Scalar
    gamma: Scalar
    x1: Scalar = Fraction(1)

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma", "x1"):
            object.__setattr__(self, name, _scalar(getattr(self, name)))

    def step(self, left: Scalar, right: Scalar) -> Scalar:
        """x_{2m+1} from (x_m, x_{m+1})."""
        return self.alpha * left + self.beta * right + self.gamma


DISCREPANCY = AffineRecurrence(Fraction(1, 2), Fraction(1, 2), Fraction(1, 2))
STERN = AffineRecurrence(Fraction(1), Fraction(1), Fraction(0))


def eval_recurrence(rec: AffineRecurrence, n: int) -> Scalar:
    """x_n by carrying (x_m, x_{m+1}) down the bits of n."""
    if n < 1:
        raise ValueError(f"eval_recurrence requires n >= 1, got {n}")
    a, b = rec.x1, rec.x1  # x_2 = x_1
    for bit in format(n, "b")[1:]:
        mid = rec.step(a, b)
        a, b = (a, mid) if bit == "0" else (mid, b)
    return a


def recurrence_table(rec: AffineRecurrence, limit: int) -> list[Scalar]:
    """x_n for 0 <= n < limit; entry 0 is a placeholder zero."""
    table: list[Scalar] = [Fraction(0), rec.x1]
    for n in range(2, limit):
        m = n >> 1
        table.append(table[m] if n % 2 == 0 else rec.step(table[m], table[m + 1]))
    return table[:limit]


# Transition matrices


def _row_times(v: Vector, m: Matrix) -> Vector:
    return tuple(sum((v[k] * m[k][j] for k in range(3)), Fraction(0)) for j in range(3))


def _times_column(m: Matrix, w: Vector) -> Vector:
    return tuple(sum((m[i][k] * w[k] for k in range(3)), Fraction(0)) for i in range(3))


def _dot(v: Vector, w: Vector) -> Scalar:
    return sum((x * y for x, y in zip(v, w, strict=True)), Fraction(0))


def _transpose(m: Matrix) -> Matrix:
    return tuple(tuple(m[j][i] for j in range(3)) for i in range(3))


@dataclass(frozen=True, slots=True)
class TransitionMatrices:
    a0: Matrix
    a1: Matrix
    v: Vector
    w: Vector

    @classmethod
    def of(cls, alpha: Scalar, beta: Scalar, gamma: Scalar) -> TransitionMatrices:
        one, zero = Fraction(1), Fraction(0)
        return cls(
            a0=((one, zero, zero), (alpha, beta, gamma), (zero, zero, one)),
            a1=((alpha, beta, gamma), (zero, one, zero), (zero, zero, one)),
            v=(alpha, beta, gamma),
            w=(one, one, one),
        )

    def matrix(self, digit: int) -> Matrix:
        return self.a1 if digit else self.a0


def eval_matrix(rec: AffineRecurrence, n: int) -> Scalar:
    """v A(eps_1) ... A(eps_{nu-1}) w; equals x_n when x_1 = 1."""
    if n < 3 or n % 2 == 0:
        raise ValueError(f"eval_matrix requires odd n >= 3, got {n}")
    mats = TransitionMatrices.of(rec.alpha, rec.beta, rec.gamma)
    column = mats.w
    for digit in reversed(BinaryWord.from_int(n).interior()):
        column = _times_column(mats.matrix(digit), column)
    return _dot(mats.v, column)


def matrix_table(rec: AffineRecurrence, limit: int) -> dict[int, Scalar]:
    """eval_matrix for every odd 3 <= n < limit, sharing suffix products."""
    mats = TransitionMatrices.of(rec.alpha, rec.beta, rec.gamma)
    columns: dict[int, Vector] = {3: mats.w}
    values: dict[int, Scalar] = {}
    for n in range(3, limit, 2):
        if n > 3:
            # strip eps_1: n = (1 ... eps_2 eps_1 1)_2 -> (1 ... eps_2 1)_2
            columns[n] = _times_column(mats.matrix((n >> 1) & 1), columns[2 * (n >> 2) + 1])
        values[n] = _dot(mats.v, columns[n])
    return values


# The sixteen identities

# word -> (c2, two-letter word, c1, one-letter word, c0) for
#   v XYZ = c2 v W2 + c1 v W1 + c0 v
# with A = A(0), B = A(1); coefficients as functions of (alpha, beta).
IDENTITIES: dict[str, tuple] = {
    "AAA": (lambda a, b: 0, "AA", lambda a, b: b * b + b + 1, "A", lambda a, b: -b * b - b),
    "AAB": (lambda a, b: b + 1, "AB", lambda a, b: -b, "B", lambda a, b: 0),
    "ABA": (lambda a, b: b + 1, "BA", lambda a, b: 0, "A", lambda a, b: -b),
    "ABB": (lambda a, b: a + 1, "AB", lambda a, b: -a, "A", lambda a, b: 0),
    "BAA": (lambda a, b: b + 1, "BA", lambda a, b: -b, "B", lambda a, b: 0),
    "BAB": (lambda a, b: a + 1, "AB", lambda a, b: 0, "B", lambda a, b: -a),
    "BBA": (lambda a, b: a + 1, "BA", lambda a, b: -a, "A", lambda a, b: 0),
    "BBB": (lambda a, b: 0, "BB", lambda a, b: a * a + a + 1, "B", lambda a, b: -a * a - a),
}

SIDES = ("v", "w")


@dataclass(frozen=True, slots=True)
class IdentityRecord:
    word: str
    side: str
    passed: bool


def _word_product(row: Vector, word: str, letters: dict[str, Matrix]) -> Vector:
    for letter in word:
        row = _row_times(row, letters[letter])
    return row


def _combine(terms: Sequence[tuple[Scalar, Vector]]) -> Vector:
    return tuple(sum((c * vec[j] for c, vec in terms), Fraction(0)) for j in range(3))


def identity_records(alpha: Scalar, beta: Scalar, gamma: Scalar) -> list[IdentityRecord]:
    """
    Evaluate each identity on both sides: v times words in A, B, and w^T times
    the same words in A^T, B^T.
    """
    alpha, beta, gamma = _scalar(alpha), _scalar(beta), _scalar(gamma)
    mats = TransitionMatrices.of(alpha, beta, gamma)
    records = []
    for side in SIDES:
        if side == "v":
            row, letters = mats.v, {"A": mats.a0, "B": mats.a1}
        else:
            row, letters = mats.w, {"A": _transpose(mats.a0), "B": _transpose(mats.a1)}
        for word, (c2, two, c1, one, c0) in IDENTITIES.items():
            lhs = _word_product(row, word, letters)
            rhs = _combine([
                (c2(alpha, beta), _word_product(row, two, letters)),
                (c1(alpha, beta), _word_product(row, one, letters)),
                (c0(alpha, beta), row),
            ])
            records.append(IdentityRecord(word, side, lhs == rhs))
    return records


def verify_matrix_identities(alpha: Scalar, beta: Scalar, gamma: Scalar) -> bool:
    return all(r.passed for r in identity_records(alpha, beta, gamma))


# Seeded parameters


def random_rational(rng: np.random.Generator, bound: int = 10**6) -> Fraction:
    return Fraction(int(rng.integers(-bound, bound + 1)), int(rng.integers(1, bound + 1)))


def random_triples(count: int, seed: int, bound: int = 10**6) -> list[tuple[Fraction, Fraction, Fraction]]:
    rng = np.random.default_rng(seed)
    return [
        (random_rational(rng, bound), random_rational(rng, bound), random_rational(rng, bound))
        for _ in range(count)
    ]


def random_recurrences(count: int, seed: int, bound: int = 1000) -> list[AffineRecurrence]:
    """Seeded quadruples (alpha, beta, gamma, x1), x1 free."""
    rng = np.random.default_rng(seed)
    return [
        AffineRecurrence(*(random_rational(rng, bound) for _ in range(4)))
        for _ in range(count)
    ]


def check_identity_grid(triples: Sequence[tuple[Scalar, Scalar, Scalar]]) -> Verdict:
    for alpha, beta, gamma in triples:
        for record in identity_records(alpha, beta, gamma):
            if not record.passed:
                return Verdict.fail(
                    word=record.word, side=record.side, alpha=alpha, beta=beta, gamma=gamma
                )
    return Verdict.ok()


def check_matrix_agreement(recs: Sequence[AffineRecurrence], limit: int) -> Verdict:
    """eval_matrix = eval_recurrence for odd 3 <= n < limit; every rec must have x1 = 1."""
    for rec in recs:
        if rec.x1 != 1:
            raise ValueError(f"Matrix evaluation assumes x1 = 1, got {rec.x1}")
        table = recurrence_table(rec, limit)
        for n, value in matrix_table(rec, limit).items():
            if value != table[n]:
                return Verdict.fail(
                    n=n, alpha=rec.alpha, beta=rec.beta, gamma=rec.gamma,
                    matrix=value, recurrence=table[n],
                )
    return Verdict.ok()


def check_specialization(limit: int, samples: int = 64) -> Verdict:
    """
    The (1/2, 1/2, 1/2, 1) recurrence reproduces d_batch for 1 <= n < limit.

    The whole table is compared, then eval_recurrence and eval_matrix on about
    `samples` evenly spaced indices.
    """
    if limit < 4:
        raise ValueError(f"check_specialization requires limit >= 4, got {limit}")
    table = recurrence_table(DISCREPANCY, limit)
    for n, d in d_batch(limit, start=1):
        if d != table[n]:
            return Verdict.fail(n=n, batch=d, recurrence=table[n])
    for n in range(1, limit, max(1, limit // samples)):
        if eval_recurrence(DISCREPANCY, n) != table[n]:
            return Verdict.fail(n=n, pointwise=eval_recurrence(DISCREPANCY, n), recurrence=table[n])
        odd = n | 1
        if odd >= 3 and odd < limit and eval_matrix(DISCREPANCY, odd) != table[odd]:
            return Verdict.fail(n=odd, matrix=eval_matrix(DISCREPANCY, odd), recurrence=table[odd])
    return Verdict.ok()


# Reversal


def check_reversal(rec: AffineRecurrence, limit: int) -> Verdict:
    """x_n = x_{n^R} for 1 <= n < limit."""
    if limit < 2:
        raise ValueError(f"check_reversal requires limit >= 2, got {limit}")
    table = recurrence_table(rec, 1 << (limit - 1).bit_length())
    for n in range(1, limit):
        if table[n] != table[reverse(n)]:
            return Verdict.fail(
                n=n, reversed=reverse(n), alpha=rec.alpha, beta=rec.beta, gamma=rec.gamma, x1=rec.x1,
                x_n=table[n], x_reversed=table[reverse(n)],
            )
    return Verdict.ok()


def check_corollary(limit: int) -> Verdict:
    """d_n = d_{n^R} for 1 <= n < limit, both sides by the explicit formula."""
    if limit < 2:
        raise ValueError(f"check_corollary requires limit >= 2, got {limit}")
    width = (limit - 1).bit_length()
    values = d_explicit_range(0, 1 << width, width)
    n = np.arange(1, limit, dtype=np.int64)
    mirrored = reversed_indices(n, width)
    bad = np.flatnonzero(values[n] != values[mirrored])
    if bad.size:
        return Verdict.fail(n=int(n[bad[0]]), reversed=int(mirrored[bad[0]]))
    return Verdict.ok()
