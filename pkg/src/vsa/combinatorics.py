"""Binomial coefficients and the square matrices behind the straightening
coefficients.

Matrices are indexed from 1 in ``ExactMatrix.entry`` so that formulas can be
copied over with their ``i, j`` conventions intact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Callable, Sequence

from vsa import linalg
from vsa.errors import DomainError, IdentityMismatch


def gen_binom(m: int, k: int) -> int:
    """Binomial coefficient with integer upper index.

    Zero for ``k < 0``; otherwise the falling factorial ``m(m-1)...(m-k+1)/k!``,
    which is meaningful for negative ``m`` too.
    """
    if k < 0:
        return 0
    num = 1
    for t in range(k):
        num *= m - t
    return num // factorial(k)


def frac_str(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_frac(text: str) -> Fraction:
    return Fraction(text)


@dataclass(frozen=True)
class ExactMatrix:
    rows: int
    cols: int
    data: tuple[tuple[Fraction, ...], ...]

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "ExactMatrix":
        data = tuple(tuple(Fraction(x) for x in row) for row in rows)
        if not data or not data[0]:
            raise DomainError("matrix must be non-empty")
        if any(len(row) != len(data[0]) for row in data):
            raise DomainError("ragged rows")
        return cls(len(data), len(data[0]), data)

    @classmethod
    def build(cls, rows: int, cols: int, fn: Callable[[int, int], object]) -> "ExactMatrix":
        """Build from a 1-based entry function ``fn(i, j)``."""
        return cls.from_rows(
            [[fn(i, j) for j in range(1, cols + 1)] for i in range(1, rows + 1)]
        )

    @classmethod
    def identity(cls, n: int) -> "ExactMatrix":
        return cls.build(n, n, lambda i, j: int(i == j))

    def entry(self, i: int, j: int) -> Fraction:
        return self.data[i - 1][j - 1]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self.data[i - 1]

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix.from_rows(list(zip(*self.data)))

    def __matmul__(self, other):
        if isinstance(other, ExactMatrix):
            if self.cols != other.rows:
                raise DomainError("shape mismatch")
            cols = list(zip(*other.data))
            return ExactMatrix.from_rows(
                [[sum(a * b for a, b in zip(row, col)) for col in cols] for row in self.data]
            )
        vec = [Fraction(x) for x in other]
        if len(vec) != self.cols:
            raise DomainError("shape mismatch")
        return [sum(a * b for a, b in zip(row, vec)) for row in self.data]

    def tolist(self) -> list[list[Fraction]]:
        return [list(row) for row in self.data]

    def is_upper_triangular(self) -> bool:
        return all(self.data[i][j] == 0 for i in range(self.rows) for j in range(min(i, self.cols)))

    def is_lower_triangular(self) -> bool:
        return all(
            self.data[i][j] == 0 for i in range(self.rows) for j in range(i + 1, self.cols)
        )

    def det(self) -> Fraction:
        if self.rows != self.cols:
            raise DomainError("determinant of a non-square matrix")
        return linalg.determinant(self.data)

    def solve(self, rhs: Sequence) -> list[Fraction]:
        return linalg.solve(self.data, rhs)

    def inverse(self) -> "ExactMatrix":
        n = self.rows
        cols = [self.solve([int(i == j) for i in range(n)]) for j in range(n)]
        return ExactMatrix.from_rows(list(zip(*cols)))

    def to_json(self) -> dict:
        return {
            "rows": self.rows,
            "cols": self.cols,
            "entries": [[frac_str(x) for x in row] for row in self.data],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "ExactMatrix":
        m = cls.from_rows([[parse_frac(x) for x in row] for row in obj["entries"]])
        if (m.rows, m.cols) != (obj["rows"], obj["cols"]):
            raise DomainError("declared shape does not match entries")
        return m


def _check_size(N: int) -> None:
    if N < 1:
        raise DomainError(f"matrix size must be positive, got {N}")


def pascal_matrix(N: int) -> ExactMatrix:
    """Upper triangular Pascal matrix, entry (i, j) = C(j-1, i-1)."""
    _check_size(N)
    return ExactMatrix.build(N, N, lambda i, j: gen_binom(j - 1, i - 1))


def pascal_inverse(N: int) -> ExactMatrix:
    _check_size(N)
    return ExactMatrix.build(N, N, lambda i, j: (-1) ** (i + j) * gen_binom(j - 1, i - 1))


def s_matrix(N: int, m: int) -> ExactMatrix:
    """Straightening matrix S_N(m), entry (i, j) = C(m-(j-1), m-(i-1)-(j-1))."""
    _check_size(N)
    return ExactMatrix.build(
        N, N, lambda i, j: gen_binom(m - (j - 1), m - (i - 1) - (j - 1))
    )


def l_matrix(N: int, m: int) -> ExactMatrix:
    """Lower triangular L_N(m) with L_N(m) S_N(m) = P_N for m >= N-1."""
    _check_size(N)
    return ExactMatrix.build(
        N, N, lambda i, j: (-1) ** (j - 1) * gen_binom(m - (j - 1), m - (i - 1))
    )


def det_sign(N: int) -> int:
    return (-1) ** (N * (N - 1) // 2)


def det_s(N: int, m: int) -> Fraction:
    """Exact determinant of S_N(m), checked against (-1)^(N(N-1)/2)."""
    if m < N - 1:
        raise DomainError(f"det_s needs m >= N-1, got N={N}, m={m}")
    det = s_matrix(N, m).det()
    if det != det_sign(N):
        raise IdentityMismatch(f"det S_{N}({m}) = {det}, expected {det_sign(N)}")
    return det


def coeff_matrix_arg(N: int, n: int) -> int:
    """The argument m = -n + floor(N/2) - 1 at which S_N is used for centre n."""
    return -n + N // 2 - 1


def check_coeff_range(N: int, n: int) -> None:
    _check_size(N)
    k = N // 2
    ok = (n + k - 1 < 0) if N % 2 == 0 else (n + k < 0)
    if not ok:
        bound = "n + k - 1 < 0" if N % 2 == 0 else "n + k < 0"
        raise DomainError(f"centre n={n} outside the range {bound} (N={N}, k={k})")


@dataclass(frozen=True)
class CoeffVector:
    N: int
    n: int
    values: tuple[Fraction, ...]

    def __getitem__(self, r: int) -> Fraction:
        return self.values[r]

    def __len__(self):
        return len(self.values)

    def to_json(self) -> dict:
        return {"N": self.N, "n": self.n, "values": [frac_str(v) for v in self.values]}


def closed_form_coeff(N: int, r: int, n: int) -> Fraction:
    """c_N(r, n) = -sum_t (-1)^(r+t) C(-n+k-1-r, -n+k-1-(t-1))."""
    k = N // 2
    m = -n + k - 1
    return Fraction(
        -sum((-1) ** (r + t) * gen_binom(m - r, m - (t - 1)) for t in range(1, N + 1))
    )


def straightening_coeffs(N: int, n: int) -> CoeffVector:
    """Coefficients combining the N associativity instances at centre n.

    The closed form is cross-checked against an elimination solve.  The
    coefficients form the first row of S^{-1}, i.e. they solve the transposed
    system ``S^T c = e_1`` (equivalently ``c S = e_1`` as a row vector).
    """
    check_coeff_range(N, n)
    closed = tuple(closed_form_coeff(N, r, n) for r in range(N))
    S = s_matrix(N, coeff_matrix_arg(N, n))
    e1 = [1] + [0] * (N - 1)
    solved = tuple(S.transpose().solve(e1))
    if closed != solved:
        raise IdentityMismatch(
            f"closed form {list(map(frac_str, closed))} != elimination "
            f"{list(map(frac_str, solved))} for N={N}, n={n}"
        )
    return CoeffVector(N, n, closed)


def lemma63_sum(m: int, k: int, j: int) -> int:
    return sum(
        (-1) ** (i - 1)
        * gen_binom(m - (i - 1), m - (k - 1))
        * gen_binom(m - (j - 1), m - (i - 1) - (j - 1))
        for i in range(1, k + 1)
    )


def check_lemma63(m: int, k: int, j: int) -> bool:
    """Row-combination identity turning S_N(m) into the Pascal matrix.

    Defined for k >= 1, m >= k-1 and 1 <= j <= m+1 (the column range of
    S_{m+1}(m)); past that range the zero-for-negative-lower-index binomial
    convention no longer matches the symmetric form the identity relies on.
    """
    if k < 1 or m < k - 1:
        raise DomainError(f"need k >= 1 and m >= k-1, got m={m}, k={k}")
    if not 1 <= j <= m + 1:
        raise DomainError(f"need 1 <= j <= m+1, got j={j}, m={m}")
    return lemma63_sum(m, k, j) == gen_binom(j - 1, k - 1)
