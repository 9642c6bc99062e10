"""Straightening identities for a pair of modes ``u_{m1} v_{m2}``.

For a difference M = 2k (even) or 2k+1 (odd) and centre n, the M instances

    (u_{-1-r} v)_{T_r},   T_r = 2n + r (even) or 2n + 1 + r (odd),  r = 0..M-1,

of Borcherds's iterate formula are linear in the M "window" products
``u_{n-k+j} v_{T_r-1-r-(n-k+j)}``.  Every other product in an expansion is
collected into the A-sum (``u``-modes first) or the B-sum (``v``-modes first),
so that  window_r = assoc_r - A_r - B_r.  Combining the rows with the
coefficients from ``straightening_coeffs`` isolates the first window product.
All signs come from expanding the formula, none are transcribed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from vsa.combinatorics import (
    CoeffVector,
    ExactMatrix,
    coeff_matrix_arg,
    check_coeff_range,
    frac_str,
    gen_binom,
    parse_frac,
    s_matrix,
    straightening_coeffs,
)
from vsa.errors import DomainError, IdentityMismatch
from vsa.fockspace import FockVector, mode_action


@dataclass(frozen=True)
class Assoc:
    vector: FockVector
    index: int


@dataclass(frozen=True)
class Prod:
    left: FockVector
    li: int
    right: FockVector
    ri: int


Term = Union[Assoc, Prod]


def _vec_weight(v: FockVector) -> int:
    return max(v.weights()) if v else 0


def term_degree(term: Term) -> int:
    """Operator degree (weight shift) of a homogeneous term."""
    if isinstance(term, Assoc):
        return term.vector.weight - term.index - 1
    return term.left.weight - term.li - 1 + term.right.weight - term.ri - 1


@dataclass(frozen=True)
class OperatorExpression:
    """Finite combination of associator modes and products of two modes.

    Only meaningful on vectors of weight at most ``tail_weight``: terms that
    vanish on all such vectors have been dropped.
    """

    terms: tuple[tuple[Fraction, Term], ...]
    tail_weight: int

    @classmethod
    def collect(cls, pairs, tail_weight: int) -> "OperatorExpression":
        acc: dict[Term, Fraction] = {}
        for coeff, term in pairs:
            if isinstance(term, Assoc) and not term.vector:
                continue
            if isinstance(term, Prod) and not (term.left and term.right):
                continue
            acc[term] = acc.get(term, 0) + coeff
        return cls(tuple((Fraction(c), t) for t, c in acc.items() if c), tail_weight)

    def __add__(self, other: "OperatorExpression") -> "OperatorExpression":
        return OperatorExpression.collect(
            self.terms + other.terms, min(self.tail_weight, other.tail_weight)
        )

    def scaled(self, c) -> "OperatorExpression":
        return OperatorExpression.collect(
            [(c * coeff, t) for coeff, t in self.terms], self.tail_weight
        )

    def __neg__(self):
        return self.scaled(-1)

    def __sub__(self, other):
        return self + (-other)

    def __len__(self):
        return len(self.terms)

    def products(self):
        return [(c, t) for c, t in self.terms if isinstance(t, Prod)]

    def associators(self):
        return [(c, t) for c, t in self.terms if isinstance(t, Assoc)]

    def to_json(self) -> dict:
        out = []
        for c, t in self.terms:
            if isinstance(t, Assoc):
                out.append({"coeff": frac_str(c), "kind": "assoc",
                            "vector": t.vector.to_json(), "index": t.index})
            else:
                out.append({"coeff": frac_str(c), "kind": "prod",
                            "left": t.left.to_json(), "li": t.li,
                            "right": t.right.to_json(), "ri": t.ri})
        return {"tailWeight": self.tail_weight, "terms": out}

    @classmethod
    def from_json(cls, obj: dict) -> "OperatorExpression":
        pairs = []
        for t in obj["terms"]:
            c = parse_frac(t["coeff"])
            if t["kind"] == "assoc":
                pairs.append((c, Assoc(FockVector.from_json(t["vector"]), t["index"])))
            elif t["kind"] == "prod":
                pairs.append((c, Prod(FockVector.from_json(t["left"]), t["li"],
                                      FockVector.from_json(t["right"]), t["ri"])))
            else:
                raise DomainError(f"unknown term kind {t['kind']!r}")
        return cls.collect(pairs, obj.get("tailWeight", 0))


def apply(expr: OperatorExpression, tail: FockVector) -> FockVector:
    if tail and max(tail.weights()) > expr.tail_weight:
        raise DomainError(
            f"tail of weight {max(tail.weights())} exceeds budget {expr.tail_weight}"
        )
    out = FockVector()
    for c, t in expr.terms:
        if isinstance(t, Assoc):
            out = out + c * mode_action(t.vector, t.index, tail)
        else:
            out = out + c * mode_action(t.left, t.li, mode_action(t.right, t.ri, tail))
    return out


# -- one associativity instance ----------------------------------------------

def _parity_of(parity) -> str:
    if parity in ("even", "odd"):
        return parity
    raise DomainError(f"parity must be 'even' or 'odd', got {parity!r}")


def difference_of(k: int, parity: str) -> int:
    return 2 * k if parity == "even" else 2 * k + 1


def target_index(r: int, n: int, parity: str) -> int:
    return 2 * n + r if parity == "even" else 2 * n + 1 + r


def _first_sum_coeff(r: int, i: int) -> int:
    # C(-1-r, i) (-1)^i = C(i+r, i), zero for i < 0
    return gen_binom(-1 - r, i) * (-1) ** i if i >= 0 else 0


def ab_sums(r: int, n: int, k: int, parity: str, u: FockVector, v: FockVector,
            tail_weight: int) -> tuple[OperatorExpression, OperatorExpression]:
    """The A (A') and B (B') sums of the r-th associativity instance.

    Returns ``(A, B)`` with ``window_r = assoc_r - A - B`` as operators on
    vectors of weight at most ``tail_weight``.
    """
    parity = _parity_of(parity)
    M = difference_of(k, parity)
    if not 0 <= r < M:
        raise DomainError(f"r={r} outside 0..{M - 1}")
    T = target_index(r, n, parity)
    lo, hi = n - k, n - k + M - 1  # u-indices of the window products
    wu, wv = _vec_weight(u), _vec_weight(v)
    a_terms = []
    for i in range(0, max(wv + tail_weight - T, 0)):
        left = -1 - r - i
        if lo <= left <= hi:
            continue
        a_terms.append((_first_sum_coeff(r, i), Prod(u, left, v, T + i)))
    # second half of the formula: -(-1)^(-1-r) C(-1-r,i)(-1)^i v_{-1-r+T-i} u_i
    sign = -(-1) ** (1 + r)
    b_terms = [
        (sign * _first_sum_coeff(r, i), Prod(v, -1 - r + T - i, u, i))
        for i in range(0, max(wu + tail_weight, 0))
    ]
    return (OperatorExpression.collect(a_terms, tail_weight),
            OperatorExpression.collect(b_terms, tail_weight))


def associativity_instance(r: int, n: int, k: int, parity: str, u: FockVector,
                           v: FockVector, tail_weight: int) -> OperatorExpression:
    """``assoc_r - A_r - B_r``, which equals the r-th window combination."""
    A, B = ab_sums(r, n, k, parity, u, v, tail_weight)
    T = target_index(r, n, parity)
    assoc = OperatorExpression.collect(
        [(Fraction(1), Assoc(mode_action(u, -1 - r, v), T))], tail_weight
    )
    return assoc - A - B


def window_expression(r: int, n: int, k: int, parity: str, u: FockVector,
                      v: FockVector, tail_weight: int) -> OperatorExpression:
    """The window side ``sum_j C(m-j, m-j-r) u_{n-k+j} v_{...}`` of instance r."""
    M = difference_of(k, parity)
    T = target_index(r, n, parity)
    pairs = []
    for j in range(M):
        left = n - k + j
        pairs.append((_first_sum_coeff(r, -1 - r - left), Prod(u, left, v, T - 1 - r - left)))
    return OperatorExpression.collect(pairs, tail_weight)


# -- the linear system ---------------------------------------------------------

@dataclass(frozen=True)
class StraighteningSystem:
    M: int
    n: int
    k: int
    parity: str
    matrix: ExactMatrix
    rhs: tuple[tuple[int, int], ...]  # (associator mode -1-r, target index) per row
    solution: CoeffVector

    @property
    def first_product(self) -> tuple[int, int]:
        """Indices (i, j) of the product u_i v_j the system solves for."""
        return self.n - self.k, self.rhs[0][1] - 1 - (self.n - self.k)


def check_difference_range(M: int, n: int) -> None:
    try:
        check_coeff_range(M, n)
    except DomainError as exc:
        raise DomainError(f"no difference-{M} straightening identity at n={n}: {exc}") from None


def build_system(M: int, n: int) -> StraighteningSystem:
    check_difference_range(M, n)
    k = M // 2
    parity = "even" if M % 2 == 0 else "odd"
    rows, rhs = [], []
    for r in range(M):
        T = target_index(r, n, parity)
        rows.append([_first_sum_coeff(r, -1 - r - (n - k + j)) for j in range(M)])
        rhs.append((-1 - r, T))
    matrix = ExactMatrix.from_rows(rows)
    expected = s_matrix(M, coeff_matrix_arg(M, n))
    if matrix != expected:
        raise IdentityMismatch(f"derived system for M={M}, n={n} is not S_M({coeff_matrix_arg(M, n)})")
    # first row of the inverse: the combination of rows isolating window product 0
    e1 = [1] + [0] * (M - 1)
    solved = tuple(matrix.transpose().solve(e1))
    coeffs = straightening_coeffs(M, n)
    if solved != coeffs.values:
        raise IdentityMismatch(f"elimination and closed form disagree for M={M}, n={n}")
    return StraighteningSystem(M, n, k, parity, matrix, tuple(rhs), coeffs)


def pair_centre(m1: int, m2: int) -> tuple[int, int, int]:
    """(M, k, n) with u_{m1} v_{m2} = u_{n-k} v_{n+k-1} (even M) or u_{n-k} v_{n+k} (odd M)."""
    M = m2 - m1 + 1
    k = M // 2
    n = (m1 + m2 + 1) // 2 if M % 2 == 0 else (m1 + m2) // 2
    return M, k, n


def identity_expression(system: StraighteningSystem, u: FockVector, v: FockVector,
                        tail_weight: int) -> OperatorExpression:
    """Right-hand side  sum_r c(r) (assoc_r - A_r - B_r)  of the identity."""
    out = OperatorExpression((), tail_weight)
    for r in range(system.M):
        inst = associativity_instance(r, system.n, system.k, system.parity, u, v, tail_weight)
        out = out + inst.scaled(system.solution[r])
    return out


def straighten_pair(u: FockVector, m1: int, v: FockVector, m2: int, N: int,
                    tail_weight: int) -> OperatorExpression:
    """Rewrite ``u_{m1} v_{m2}`` with ``0 <= m2 - m1 < N`` and ``m2 < 0``.

    The result contains associator modes and products each having an index
    below ``m1``; it agrees with ``u_{m1} v_{m2}`` on every vector of weight at
    most ``tail_weight``.
    """
    if m2 >= 0:
        raise DomainError(f"second index must be negative, got m2={m2}")
    if not 0 <= m2 - m1 <= N - 1:
        raise DomainError(f"need 0 <= m2 - m1 <= N - 1, got m1={m1}, m2={m2}, N={N}")
    if not (u.is_homogeneous() and v.is_homogeneous()):
        raise DomainError("straighten_pair needs homogeneous vectors")
    M, _, n = pair_centre(m1, m2)
    return identity_expression(build_system(M, n), u, v, tail_weight)


def difference_one_rhs(u: FockVector, v: FockVector, n: int, tail_weight: int,
                       first: int = 1) -> OperatorExpression:
    """Closed-form difference-one identity for ``u_n v_n``:

        (u_{-1} v)_{2n+1} - sum_{i >= first, i != -n} u_{-i} v_{2n+i}
                          - sum_{i >= 0} v_{2n-i} u_i

    ``first=1`` is what the associativity expansion gives; ``first=0`` adds
    the extra product ``u_0 v_{2n}``.
    """
    wu, wv = _vec_weight(u), _vec_weight(v)
    pairs = [(Fraction(1), Assoc(mode_action(u, -1, v), 2 * n + 1))]
    for i in range(first, max(wv + tail_weight - 2 * n, first)):
        if i != -n:
            pairs.append((Fraction(-1), Prod(u, -i, v, 2 * n + i)))
    for i in range(0, max(wu + tail_weight, 0)):
        pairs.append((Fraction(-1), Prod(v, 2 * n - i, u, i)))
    return OperatorExpression.collect(pairs, tail_weight)
