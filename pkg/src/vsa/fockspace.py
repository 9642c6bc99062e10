"""Rank-one Heisenberg vertex algebra on its zero-momentum Fock space.

Basis states are partitions: ``(3, 1, 1)`` is ``a(-3) a(-1) a(-1) 1`` where
``a(m)`` are the oscillators with ``[a(m), a(n)] = m delta(m+n, 0)`` and
``a(0) = 0``.  The state ``(1,)`` has vertex operator ``sum a(n) x^(-n-1)``;
modes of every other basis state are generated from it by Borcherds's
iterate formula, peeling one oscillator at a time.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Mapping, Protocol

from vsa.combinatorics import frac_str, gen_binom, parse_frac
from vsa.errors import DomainError

Partition = tuple[int, ...]
VACUUM: Partition = ()


def canonical(parts: Iterable[int]) -> Partition:
    parts = tuple(sorted(parts, reverse=True))
    if any(p < 1 for p in parts):
        raise DomainError(f"partition parts must be positive: {parts}")
    return parts


@lru_cache(maxsize=None)
def partitions(w: int) -> tuple[Partition, ...]:
    """Partitions of ``w`` as non-increasing tuples, in ascending tuple order."""
    if w < 0:
        return ()
    out = []

    def rec(remaining, largest, prefix):
        if remaining == 0:
            out.append(tuple(prefix))
            return
        for part in range(min(remaining, largest), 0, -1):
            prefix.append(part)
            rec(remaining - part, part, prefix)
            prefix.pop()

    rec(w, w, [])
    return tuple(sorted(out))


def graded_dim(w: int) -> int:
    return len(partitions(w))


def _num(c):
    """Normalise a rational: integral values are stored as ``int``."""
    if type(c) is int:
        return c
    c = Fraction(c)
    return c.numerator if c.denominator == 1 else c


def _finish(acc: dict) -> dict:
    return {p: _num(c) for p, c in acc.items() if c}


class FockVector:
    """Finite rational combination of partition states.  Immutable."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Partition, object] | None = None):
        clean: dict[Partition, object] = {}
        for p, c in (terms or {}).items():
            c = clean.get(p, 0) + _num(c)
            if c:
                clean[p] = c
            else:
                clean.pop(p, None)
        self._terms = clean
        self._hash = None

    @classmethod
    def _trusted(cls, terms: dict) -> "FockVector":
        # terms already merged, zero-free and normalised by _num
        self = cls.__new__(cls)
        self._terms = terms
        self._hash = None
        return self

    @classmethod
    def basis(cls, parts: Iterable[int] = ()) -> "FockVector":
        return cls({canonical(parts): 1})

    @classmethod
    def vacuum(cls) -> "FockVector":
        return cls({VACUUM: 1})

    @classmethod
    def zero(cls) -> "FockVector":
        return cls()

    @property
    def terms(self) -> Mapping[Partition, Fraction]:
        return self._terms

    def items(self):
        return self._terms.items()

    def __iter__(self) -> Iterator[Partition]:
        return iter(self._terms)

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def coeff(self, p: Partition):
        return self._terms.get(p, 0)

    def __eq__(self, other):
        if isinstance(other, FockVector):
            return self._terms == other._terms
        if other == 0:
            return not self._terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __add__(self, other: "FockVector") -> "FockVector":
        out = dict(self._terms)
        for p, c in other._terms.items():
            new = out.get(p, 0) + c
            if new:
                out[p] = new
            else:
                del out[p]
        return FockVector._trusted(_finish(out))

    def __neg__(self):
        return FockVector._trusted({p: -c for p, c in self._terms.items()})

    def __sub__(self, other: "FockVector") -> "FockVector":
        return self + (-other)

    def __mul__(self, scalar) -> "FockVector":
        scalar = _num(scalar)
        if not scalar:
            return FockVector()
        return FockVector._trusted(_finish({p: scalar * c for p, c in self._terms.items()}))

    __rmul__ = __mul__

    def weights(self) -> set[int]:
        return {sum(p) for p in self._terms}

    def component(self, w: int) -> "FockVector":
        return FockVector({p: c for p, c in self._terms.items() if sum(p) == w})

    def is_homogeneous(self) -> bool:
        return len(self.weights()) <= 1

    @property
    def weight(self) -> int:
        ws = self.weights()
        if len(ws) != 1:
            raise DomainError("weight is only defined for nonzero homogeneous vectors")
        return next(iter(ws))

    def sorted_items(self):
        return sorted(self._terms.items(), key=lambda kv: (sum(kv[0]), kv[0]))

    def __repr__(self):
        if not self._terms:
            return "FockVector(0)"
        body = " + ".join(f"{frac_str(c)}*{list(p)}" for p, c in self.sorted_items())
        return f"FockVector({body})"

    def to_json(self) -> dict:
        return {
            "terms": [
                {"partition": list(p), "coeff": frac_str(c)} for p, c in self.sorted_items()
            ]
        }

    @classmethod
    def from_json(cls, obj: dict) -> "FockVector":
        out: dict[Partition, Fraction] = {}
        for t in obj["terms"]:
            p = canonical(t["partition"])
            out[p] = out.get(p, 0) + parse_frac(t["coeff"])
        return cls(out)


# -- oscillators and modes on basis states ----------------------------------

def _alpha_basis(m: int, p: Partition) -> list[tuple[Partition, int]]:
    if m < 0:
        return [(tuple(sorted(p + (-m,), reverse=True)), 1)]
    if m == 0:
        return []
    mult = p.count(m)
    if not mult:
        return []
    idx = p.index(m)
    return [(p[:idx] + p[idx + 1:], m * mult)]


def _add_into(target: dict, key, value) -> None:
    new = target.get(key, 0) + value
    if new:
        target[key] = new
    else:
        del target[key]


@lru_cache(maxsize=None)
def _basis_mode(u: Partition, n: int, w: Partition) -> tuple[tuple[Partition, int], ...]:
    """``u_n w`` for basis states, with integer coefficients."""
    wu, ww = sum(u), sum(w)
    if wu + ww - n - 1 < 0:
        return ()
    if not u:
        return ((w, 1),) if n == -1 else ()
    if u == (1,):
        return tuple(_alpha_basis(n, w))
    m, rest = u[0], u[1:]
    wr = wu - m
    sign_m = -1 if m % 2 else 1
    out: dict[Partition, int] = {}
    # (a(-m) rest)_n = sum_i C(-m,i)(-1)^i [a(-m-i) rest_{n+i} - (-1)^m rest_{-m+n-i} a(i)]
    for i in range(0, wr + ww - n):
        coef = gen_binom(-m, i) * (-1) ** i
        for p, c in _basis_mode(rest, n + i, w):
            _add_into(out, tuple(sorted(p + (m + i,), reverse=True)), coef * c)
    for i in range(1, ww + 1):
        coef = gen_binom(-m, i) * (-1) ** i * sign_m
        for p1, c1 in _alpha_basis(i, w):
            for p, c in _basis_mode(rest, -m + n - i, p1):
                _add_into(out, p, -coef * c1 * c)
    return tuple(sorted(out.items()))


def basis_mode(u: Partition, n: int, w: Partition) -> dict[Partition, int]:
    return dict(_basis_mode(u, n, w))


def alpha_mode(m: int, w: FockVector) -> FockVector:
    """Oscillator ``a(m)`` applied to ``w``; ``a(0)`` is zero."""
    out: dict[Partition, Fraction] = {}
    for p, c in w.items():
        for q, k in _alpha_basis(m, p):
            out[q] = out.get(q, 0) + k * c
    return FockVector._trusted(_finish(out))


def mode_action(u: FockVector, n: int, w: FockVector) -> FockVector:
    """``u_n w``, bilinear in ``u`` and ``w``."""
    out: dict[Partition, Fraction] = {}
    for pu, cu in u.items():
        for pw, cw in w.items():
            scale = cu * cw
            for p, c in _basis_mode(pu, n, pw):
                out[p] = out.get(p, 0) + scale * c
    return FockVector._trusted(_finish(out))


CONFORMAL = FockVector({(1, 1): Fraction(1, 2)})


def sl2_action(j: int, v: FockVector) -> FockVector:
    """``L(j) v`` for j in {-1, 0, 1}, realised as the mode ``omega_{j+1}``."""
    if j not in (-1, 0, 1):
        raise DomainError(f"sl(2) generator index must be -1, 0 or 1, got {j}")
    return mode_action(CONFORMAL, j + 1, v)


def max_nonzero_mode(wt_u: int, wt_w: int) -> int:
    """Largest ``j`` with ``u_j w`` possibly nonzero for the given weights."""
    return wt_u + wt_w - 1


def check_commutator(u: FockVector, v: FockVector, m: int, n: int, w: FockVector) -> bool:
    """Exact check of ``[u_m, v_n] w = sum_j C(m, j) (u_j v)_{m+n-j} w``."""
    lhs = mode_action(u, m, mode_action(v, n, w)) - mode_action(v, n, mode_action(u, m, w))
    rhs = FockVector()
    top = max((a + b for a in u.weights() for b in v.weights()), default=0) - 1
    for j in range(0, top + 1):
        coef = gen_binom(m, j)
        if coef:
            rhs = rhs + coef * mode_action(mode_action(u, j, v), m + n - j, w)
    return lhs == rhs


def associator_rhs(u: FockVector, m: int, v: FockVector, n: int, w: FockVector) -> FockVector:
    """Right-hand side of Borcherds's iterate formula for ``(u_m v)_n w``.

    ``sum_i C(m,i) (-1)^i (u_{m-i} v_{n+i} - (-1)^m v_{m+n-i} u_i) w``, truncated
    where the inner mode kills ``w`` by grading.
    """
    out = FockVector()
    if not (u and v and w):
        return out
    wu, wv, ww = max(u.weights()), max(v.weights()), max(w.weights())
    sign_m = -1 if m % 2 else 1
    for i in range(0, max(wv + ww - n, 0)):
        coef = gen_binom(m, i) * (-1) ** i
        if coef:
            out = out + coef * mode_action(u, m - i, mode_action(v, n + i, w))
    for i in range(0, max(wu + ww, 0)):
        coef = gen_binom(m, i) * (-1) ** i
        if coef:
            out = out - (coef * sign_m) * mode_action(v, m + n - i, mode_action(u, i, w))
    return out


class AlgebraBackend(Protocol):
    """What the straightening machinery needs from a graded vertex algebra."""

    def graded_dim(self, w: int) -> int: ...

    def basis(self, w: int) -> tuple[FockVector, ...]: ...

    def mode_action(self, u: FockVector, n: int, w: FockVector) -> FockVector: ...

    def sl2_action(self, j: int, v: FockVector) -> FockVector: ...

    def vacuum(self) -> FockVector: ...


class Heisenberg:
    """The rank-one Heisenberg Fock space as an ``AlgebraBackend``."""

    def graded_dim(self, w: int) -> int:
        return graded_dim(w)

    def basis(self, w: int) -> tuple[FockVector, ...]:
        return tuple(FockVector.basis(p) for p in partitions(w))

    def mode_action(self, u, n, w):
        return mode_action(u, n, w)

    def sl2_action(self, j, v):
        return sl2_action(j, v)

    def vacuum(self):
        return FockVector.vacuum()


HEISENBERG = Heisenberg()
