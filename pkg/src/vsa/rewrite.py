"""Monomials ``x1_{n1} ... xk_{nk} 1`` and their reduction to difference-N
normal form.

Every mode vector is a partition state; a linear combination in a mode is
expanded by multilinearity, so a monomial is keyed by its sequence of
``(partition, index)`` pairs.  Reduction is a deterministic one-step rewrite
system: each non-normal monomial has exactly one rule applied to it, chosen by
the first condition that fires:

1. a vacuum mode (``1_{-1}`` is the identity, other vacuum modes vanish);
2. grading: some partial product has negative weight, so the monomial is 0;
3. an adjacent pair out of index order is swapped (commutator corrections);
4. a nonnegative index (now rightmost) is pushed into the vacuum;
5. a vector that is not a generator is replaced by representatives plus
   ``a_{-N-1} b`` expansions;
6. the tail (all but the first mode) is not normal: normalise it;
7. the first two indices are closer than N: apply the difference-M identity
   with M = m2 - m1 + 1.

Sorting and killing come before replacement so that every vector reaching
step 5 has weight at most the weight of the monomial.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator

from vsa.combinatorics import frac_str, gen_binom, parse_frac
from vsa.errors import DomainError, TerminationGuardExceeded
from vsa.fockspace import (
    FockVector,
    Partition,
    _num,
    basis_mode,
    canonical,
    graded_dim,
    mode_action,
    partitions,
)
from vsa.linalg import Echelon
from vsa.straightening import Assoc, straighten_pair
from vsa.subspaces import GeneratorSet

Mode = tuple[Partition, int]
Key = tuple[Mode, ...]


# -- monomials and expressions ------------------------------------------------

@dataclass(frozen=True)
class ModeTerm:
    vector: FockVector
    index: int

    @property
    def weight(self) -> int:
        return self.vector.weight


def key_weight(key: Key) -> int:
    return sum(sum(p) - n - 1 for p, n in key)


def key_level(key: Key, N: int) -> int:
    return (N - 1) * len(key) + sum(sum(p) for p, _ in key)


def key_index_sum(key: Key) -> int:
    return sum(n for _, n in key)


@dataclass(frozen=True)
class Monomial:
    coeff: Fraction
    modes: Key

    @classmethod
    def of(cls, modes: Iterable[tuple[Iterable[int], int]], coeff=1) -> "Monomial":
        return cls(Fraction(coeff), tuple((canonical(p), n) for p, n in modes))

    @property
    def length(self) -> int:
        return len(self.modes)

    @property
    def weight(self) -> int:
        return key_weight(self.modes)

    def mode_terms(self) -> list[ModeTerm]:
        return [ModeTerm(FockVector.basis(p), n) for p, n in self.modes]

    def to_json(self) -> dict:
        return {
            "coeff": frac_str(self.coeff),
            "modes": [{"vector": FockVector.basis(p).to_json(), "index": n}
                      for p, n in self.modes],
        }


def _sort_key(key: Key):
    return (len(key), key)


class Expression:
    """Finite combination of monomials with merged like terms."""

    __slots__ = ("_terms",)

    def __init__(self, terms: dict | None = None):
        clean = {}
        for k, c in (terms or {}).items():
            c = _num(c)
            if c:
                clean[k] = clean.get(k, 0) + c
        self._terms = {k: c for k, c in clean.items() if c}

    @classmethod
    def of(cls, *monomials: Monomial) -> "Expression":
        out: dict[Key, object] = {}
        for m in monomials:
            out[m.modes] = out.get(m.modes, 0) + m.coeff
        return cls(out)

    @classmethod
    def vacuum(cls, c=1) -> "Expression":
        return cls({(): c})

    @property
    def terms(self) -> dict:
        return self._terms

    def items(self):
        return self._terms.items()

    def keys(self):
        return self._terms.keys()

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def __iter__(self) -> Iterator[Monomial]:
        return iter(self.monomials())

    def monomials(self) -> list[Monomial]:
        return [Monomial(Fraction(self._terms[k]), k) for k in sorted(self._terms, key=_sort_key)]

    def __eq__(self, other):
        if isinstance(other, Expression):
            return self._terms == other._terms
        return NotImplemented

    def __add__(self, other: "Expression") -> "Expression":
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out.get(k, 0) + c
        return Expression(out)

    def __neg__(self):
        return Expression({k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scaled(self, c) -> "Expression":
        return Expression({k: c * v for k, v in self._terms.items()})

    def __repr__(self):
        from vsa.parse import render
        return f"Expression({render(self)!r})"

    def to_json(self) -> dict:
        return {"terms": [m.to_json() for m in self.monomials()]}

    @classmethod
    def from_json(cls, obj: dict) -> "Expression":
        out: dict[Key, object] = {}
        for t in obj["terms"]:
            modes = []
            for mode in t["modes"]:
                vec = FockVector.from_json(mode["vector"])
                if len(vec) != 1 or next(iter(vec.items()))[1] != 1:
                    raise DomainError("monomial mode vectors must be single partition states")
                modes.append((next(iter(vec)), int(mode["index"])))
            k = tuple(modes)
            out[k] = out.get(k, 0) + parse_frac(t["coeff"])
        return cls(out)


def _acc(target: dict, key, value) -> None:
    new = target.get(key, 0) + value
    if new:
        target[key] = new
    else:
        target.pop(key, None)


# -- evaluation -----------------------------------------------------------------

_EVAL_CACHE: dict[Key, FockVector] = {}


def evaluate_key(key: Key) -> FockVector:
    hit = _EVAL_CACHE.get(key)
    if hit is not None:
        return hit
    if not key:
        vec = FockVector.vacuum()
    else:
        (p, n), rest = key[0], key[1:]
        vec = mode_action(FockVector.basis(p), n, evaluate_key(rest))
    _EVAL_CACHE[key] = vec
    return vec


def evaluate(e: Expression | Monomial) -> FockVector:
    if isinstance(e, Monomial):
        e = Expression.of(e)
    out = FockVector()
    for k, c in e.items():
        out = out + c * evaluate_key(k)
    return out


def filtration_level(m: Monomial | Key, N: int) -> int:
    if N < 1:
        raise DomainError("N must be positive")
    return key_level(m.modes if isinstance(m, Monomial) else m, N)


# -- elementary rewrites --------------------------------------------------------

def _swap(key: Key, p: int) -> dict[Key, object]:
    """Swap positions p, p+1 (0-based): u_a v_b = v_b u_a + sum_j C(a,j) (u_j v)_{a+b-j}."""
    (pu, a), (pv, b) = key[p], key[p + 1]
    head, tail = key[:p], key[p + 2:]
    out: dict[Key, object] = {head + ((pv, b), (pu, a)) + tail: 1}
    for j in range(0, sum(pu) + sum(pv)):
        c = gen_binom(a, j)
        if not c:
            continue
        for q, cq in basis_mode(pu, j, pv).items():
            _acc(out, head + ((q, a + b - j),) + tail, c * cq)
    return out


def _kill(key: Key) -> dict[Key, object]:
    """Push the leftmost nonnegative-index mode right until it hits the vacuum."""
    p = next(i for i, (_, n) in enumerate(key) if n >= 0)
    out: dict[Key, object] = {}
    cur = key
    while p < len(cur) - 1:
        swapped = _swap(cur, p)
        nxt = cur[:p] + (cur[p + 1], cur[p]) + cur[p + 2:]
        for k, c in swapped.items():
            if k != nxt:
                _acc(out, k, c)
        if swapped.get(nxt) != 1:  # corrections cannot reproduce the swapped key
            raise AssertionError("swap produced an unexpected coefficient")
        cur = nxt
        p += 1
    return out  # the final mode sends the vacuum to zero


def _replace(key: Key, p: int, gens: GeneratorSet) -> dict[Key, object]:
    N = gens.N
    part, n = key[p]
    head, tail = key[:p], key[p + 1:]
    t = key_weight(tail)
    rep_combo, c_terms = gens.decompose_partition(part)
    out: dict[Key, object] = {}
    for x, c in rep_combo.items():
        _acc(out, head + ((x, n),) + tail, c)
    sign = -(-1) ** (N + 1)  # -(-1)^(-N-1)
    for lam, a, b in c_terms:
        pa, pb = next(iter(a)), next(iter(b))
        # (a_{-N-1} b)_n = sum_r C(-N-1,r)(-1)^r [a_{-N-1-r} b_{n+r} - (-1)^(-N-1) b_{-N-1+n-r} a_r]
        for r in range(0, max(sum(pb) + t - n, 0)):
            coef = gen_binom(-N - 1, r) * (-1) ** r
            _acc(out, head + ((pa, -N - 1 - r), (pb, n + r)) + tail, lam * coef)
        for r in range(0, max(sum(pa) + t, 0)):
            coef = gen_binom(-N - 1, r) * (-1) ** r * sign
            _acc(out, head + ((pb, -N - 1 + n - r), (pa, r)) + tail, lam * coef)
    return out


def _vector_at(m: Monomial, i: int) -> Partition:
    if not 1 <= i <= m.length:
        raise DomainError(f"position {i} outside 1..{m.length}")
    return m.modes[i - 1][0]


def swap_adjacent(m: Monomial, i: int, N: int) -> Expression:
    """Swap modes i and i+1 (1-based), adding commutator corrections."""
    if not 1 <= i < m.length:
        raise DomainError(f"need 1 <= i < {m.length}, got {i}")
    return Expression(_swap(m.modes, i - 1)).scaled(m.coeff)


def kill_nonnegative(m: Monomial, N: int) -> Expression:
    if not any(n >= 0 for _, n in m.modes):
        raise DomainError("monomial has no nonnegative index")
    return Expression(_kill(m.modes)).scaled(m.coeff)


def replace_vector(m: Monomial, i: int, gens: GeneratorSet, N: int) -> Expression:
    if gens.N != N:
        raise DomainError(f"generator set built for N={gens.N}, not N={N}")
    part = _vector_at(m, i)
    if sum(part) > gens.max_weight:
        raise DomainError(f"vector weight {sum(part)} exceeds generator max weight {gens.max_weight}")
    if gens.is_generator(part):
        return Expression.of(m)
    return Expression(_replace(m.modes, i - 1, gens)).scaled(m.coeff)


# -- normal forms ------------------------------------------------------------------

def is_normal(key: Key, N: int, gens: GeneratorSet) -> bool:
    prev = None
    for p, n in key:
        if not p or n >= 0 or not gens.is_generator(p):
            return False
        if prev is not None and n - prev < N:
            return False
        prev = n
    return True


@dataclass(frozen=True)
class Step:
    kind: str  # swap | killNonneg | replace | straightenPair | tailRecursion | vacuum
    lemma: str
    before: Key
    after: dict
    info: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {
            "kind": self.kind,
            "lemma": self.lemma,
            "before": Expression({self.before: 1}).to_json(),
            "after": Expression(self.after).to_json(),
        }
        out.update(self.info)
        return out


@dataclass
class RewriteTrace:
    input: Expression
    steps: list[Step]
    output: Expression

    def replay(self) -> Expression:
        rules = {s.before: s.after for s in self.steps}
        cur = dict(self.input.terms)
        while True:
            hits = [k for k in cur if k in rules]
            if not hits:
                return Expression(cur)
            nxt: dict = {}
            for k, c in cur.items():
                if k in rules:
                    for k2, c2 in rules[k].items():
                        _acc(nxt, k2, c * c2)
                else:
                    _acc(nxt, k, c)
            cur = nxt

    def to_json(self) -> dict:
        return {
            "input": self.input.to_json(),
            "steps": [s.to_json() for s in self.steps],
            "output": self.output.to_json(),
        }


class Straightener:
    """Reduction engine for a fixed N and generator set.

    Normal forms and rewrite steps are memoised per monomial, so one engine
    can be reused across many inputs.
    """

    def __init__(self, N: int, gens: GeneratorSet):
        if N < 1:
            raise DomainError("N must be positive")
        if gens.N != N:
            raise DomainError(f"generator set built for N={gens.N}, not N={N}")
        self.N = N
        self.gens = gens
        self.rules: dict[Key, Step | None] = {}
        self._nf: dict[Key, dict] = {}
        self._active: set[Key] = set()
        self._pairs: dict = {}

    # one step ---------------------------------------------------------------
    def step(self, key: Key) -> Step | None:
        if key in self.rules:
            return self.rules[key]
        s = self._compute_step(key)
        self.rules[key] = s
        return s

    def _compute_step(self, key: Key) -> Step | None:
        N, gens = self.N, self.gens
        for i, (p, n) in enumerate(key):
            if not p:
                after = {key[:i] + key[i + 1:]: 1} if n == -1 else {}
                return Step("vacuum", "vacuum property", key, after)
        running = 0
        for p, n in reversed(key):
            running += sum(p) - n - 1
            if running < 0:
                return Step("killNonneg", "grading", key, {})
        for i in range(len(key) - 1):
            if key[i][1] > key[i + 1][1]:
                return Step("swap", "commutator", key, _swap(key, i), {"position": i + 1})
        if key and key[-1][1] >= 0:
            return Step("killNonneg", "creation", key, _kill(key))
        w = key_weight(key)
        for i, (p, n) in enumerate(key):
            if not gens.is_generator(p):
                if sum(p) > gens.max_weight:
                    raise DomainError(
                        f"vector weight {sum(p)} exceeds generator max weight {gens.max_weight}"
                    )
                return Step("replace", "replacement", key, _replace(key, i, gens), {"position": i + 1})
        if len(key) <= 1:
            return None
        if not is_normal(key[1:], N, gens):
            tail_nf = self.normal_form(key[1:])
            after = {(key[0],) + k: c for k, c in tail_nf.items()}
            return Step("tailRecursion", "tail induction", key, after)
        (pu, m1), (pv, m2) = key[0], key[1]
        if m2 - m1 >= N:
            return None
        if m1 < -(w + len(key)):
            raise TerminationGuardExceeded(
                f"head index {m1} below -(weight + length) = {-(w + len(key))} in {key}"
            )
        rest = key[2:]
        t = key_weight(rest)
        expr = self._pair(pu, m1, pv, m2, t)
        after: dict[Key, object] = {}
        for c, term in expr.terms:
            if isinstance(term, Assoc):
                for q, cq in term.vector.items():
                    _acc(after, ((q, term.index),) + rest, c * cq)
            else:
                pl, pr = next(iter(term.left)), next(iter(term.right))
                _acc(after, ((pl, term.li), (pr, term.ri)) + rest, c)
        after = {k: _num(c) for k, c in after.items()}
        return Step("straightenPair", "difference-M identity", key, after, {"M": m2 - m1 + 1})

    def _pair(self, pu, m1, pv, m2, t):
        k = (pu, m1, pv, m2, t)
        hit = self._pairs.get(k)
        if hit is None:
            hit = self._pairs[k] = straighten_pair(
                FockVector.basis(pu), m1, FockVector.basis(pv), m2, self.N, t
            )
        return hit

    # full normal form ---------------------------------------------------------
    def normal_form(self, key: Key) -> dict:
        if key in self._nf:
            return self._nf[key]
        stack = [key]
        expanding: set[Key] = set()  # keys on the current path awaiting children
        self._active.add(key)
        try:
            while stack:
                cur = stack[-1]
                if cur in self._nf:
                    stack.pop()
                    continue
                s = self.step(cur)
                if s is None:
                    self._nf[cur] = {cur: 1}
                    stack.pop()
                    continue
                pending = [k for k in s.after if k not in self._nf]
                if pending:
                    if cur in expanding:
                        raise RuntimeError(f"rewrite cycle through {cur}")
                    for k in pending:
                        if k in expanding or (k in self._active and k != key):
                            raise RuntimeError(f"rewrite cycle through {k}")
                    expanding.add(cur)
                    stack.extend(pending)
                    continue
                expanding.discard(cur)
                out: dict[Key, object] = {}
                for k, c in s.after.items():
                    for k2, c2 in self._nf[k].items():
                        _acc(out, k2, c * c2)
                self._nf[cur] = {k: _num(c) for k, c in out.items()}
                stack.pop()
        finally:
            self._active.discard(key)
        return self._nf[key]

    def straighten(self, e: Expression) -> tuple[Expression, RewriteTrace]:
        out: dict[Key, object] = {}
        for k, c in e.items():
            for k2, c2 in self.normal_form(k).items():
                _acc(out, k2, c * c2)
        result = Expression(out)
        return result, RewriteTrace(e, self.trace_steps(e.keys()), result)

    def trace_steps(self, roots: Iterable[Key]) -> list[Step]:
        """Steps reachable from ``roots``, in first-visit order."""
        seen, order, todo = set(), [], list(roots)
        while todo:
            k = todo.pop()
            if k in seen:
                continue
            seen.add(k)
            s = self.rules.get(k)
            if s is None:
                continue
            order.append(s)
            todo.extend(reversed(list(s.after)))
        return order


def straighten(e: Expression, N: int, gens: GeneratorSet) -> tuple[Expression, RewriteTrace]:
    """Rewrite ``e`` as a combination of difference-N normal monomials over ``gens``."""
    for k in e.keys():
        if key_weight(k) > gens.max_weight:
            raise DomainError(
                f"monomial weight {key_weight(k)} exceeds generator max weight {gens.max_weight}"
            )
    return Straightener(N, gens).straighten(e)


def check_step(step: Step, N: int) -> list[str]:
    """Invariant violations of a single step (empty when all hold)."""
    problems = []
    lvl, w = key_level(step.before, N), key_weight(step.before)
    for k in step.after:
        if key_level(k, N) > lvl:
            problems.append(f"{step.kind}: filtration rises {lvl} -> {key_level(k, N)}")
        if key_weight(k) != w:
            problems.append(f"{step.kind}: weight changes {w} -> {key_weight(k)}")
        if step.kind in ("swap", "straightenPair") and len(k) == len(step.before):
            if key_index_sum(k) != key_index_sum(step.before):
                problems.append(f"{step.kind}: index sum changes")
            if step.kind == "straightenPair" and min(n for _, n in k) >= step.before[0][1]:
                problems.append("straightenPair: head index does not drop")
    return problems


# -- spanning sets ------------------------------------------------------------------

def enumerate_normal_monomials(N: int, w: int, gens: GeneratorSet) -> list[Monomial]:
    """All normal monomials of weight ``w`` with coefficient 1, in a fixed order."""
    if gens.max_weight < w:
        raise DomainError(f"generator set only reaches weight {gens.max_weight}")
    gen_list = [
        (next(iter(v)), wt)
        for wt in range(1, w + 1)
        for v in gens.per_weight[wt]
    ]
    out: list[Key] = []

    def rec(suffix: Key, remaining: int, max_index: int):
        # prepend modes to the left; each has index <= max_index
        if remaining == 0:
            out.append(suffix)
        for p, wt in gen_list:
            # contribution wt - n - 1 <= remaining  =>  n >= wt - 1 - remaining
            for n in range(max_index, wt - 2 - remaining, -1):
                rec(((p, n),) + suffix, remaining - (wt - n - 1), n - N)

    rec((), w, -1)
    return [Monomial(Fraction(1), k) for k in sorted(set(out), key=_sort_key)]


@dataclass(frozen=True)
class SpanReport:
    N: int
    weight: int
    rank: int
    dim: int
    count: int

    @property
    def ok(self) -> bool:
        return self.rank == self.dim

    def to_json(self) -> dict:
        return {"N": self.N, "weight": self.weight, "count": self.count,
                "rank": self.rank, "dim": self.dim, "ok": self.ok}


def span_check(N: int, w: int, gens: GeneratorSet) -> SpanReport:
    monos = enumerate_normal_monomials(N, w, gens)
    ech = Echelon()
    dim = graded_dim(w)
    for m in monos:
        ech.add(evaluate_key(m.modes).terms)
        if ech.rank == dim:
            break
    return SpanReport(N, w, ech.rank, dim, len(monos))


# -- random inputs ------------------------------------------------------------------

def random_monomial(rng: random.Random, max_weight: int = 10, max_length: int = 4,
                    max_vector_weight: int = 4) -> Monomial:
    """A random monomial of weight in [0, max_weight] with nonzero value.

    The length is drawn first, uniformly, so long monomials are as common as
    short ones.
    """
    k = rng.randint(1, max_length)
    while True:
        modes = []
        for _ in range(k):
            p = rng.choice(partitions(rng.randint(1, max_vector_weight)))
            modes.append((p, rng.randint(-6, 2)))
        key = tuple(modes)
        if 0 <= key_weight(key) <= max_weight and evaluate_key(key):
            return Monomial(Fraction(rng.choice([1, 1, 2, -1, Fraction(1, 2), -3])), key)
