"""Exact verification suites, one check per acceptance criterion.

Each check returns a :class:`CheckResult`; ``run_suite`` groups them.  All
randomness flows from an explicit seed, so results are reproducible.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from vsa.combinatorics import (
    check_lemma63,
    det_sign,
    l_matrix,
    pascal_matrix,
    s_matrix,
    straightening_coeffs,
)
from vsa.errors import TerminationGuardExceeded
from vsa.fockspace import (
    FockVector,
    associator_rhs,
    check_commutator,
    graded_dim,
    mode_action,
    partitions,
    sl2_action,
)
from vsa.linalg import Echelon
from vsa.rewrite import Expression, Straightener, check_step, evaluate, is_normal, random_monomial, span_check
from vsa.straightening import apply, build_system, difference_one_rhs, straighten_pair
from vsa.subspaces import cn_basis, decompose, quotient_reps


@dataclass
class CheckResult:
    criterion: str
    title: str
    ok: bool
    detail: dict = field(default_factory=dict)
    seconds: float = 0.0

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        return f"[{status}] criterion {self.criterion}: {self.title} ({self.seconds:.1f}s)"

    def to_json(self) -> dict:
        # timings are left out so that identical seeds give identical bytes
        return {"criterion": self.criterion, "title": self.title, "ok": self.ok, "detail": self.detail}


def _timed(fn: Callable[..., CheckResult]) -> Callable[..., CheckResult]:
    def wrapper(*args, **kwargs):
        t0 = time.perf_counter()
        res = fn(*args, **kwargs)
        res.seconds = time.perf_counter() - t0
        return res

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


def _basis_upto(w: int, start: int = 0) -> list[FockVector]:
    return [FockVector.basis(p) for k in range(start, w + 1) for p in partitions(k)]


# -- combinatorics -------------------------------------------------------------

@_timed
def check_matrix_identities() -> CheckResult:
    bad = []
    cases = 0
    for N in range(1, 9):
        P = pascal_matrix(N)
        for m in range(N - 1, N + 13):
            S = s_matrix(N, m)
            cases += 1
            if l_matrix(N, m) @ S != P:
                bad.append(("L S != P", N, m))
            if S.det() != det_sign(N):
                bad.append(("det", N, m))
    return CheckResult("1", "L S = P and det S = (-1)^(N(N-1)/2)", not bad,
                       {"cases": cases, "failures": bad[:10]})


def _valid_ns(N: int, low: int = -12) -> list[int]:
    k = N // 2
    top = -k if N % 2 == 0 else -k - 1
    return list(range(low, top + 1))


def _worked_example(N: int, n: int) -> list[Fraction] | None:
    if N == 2:
        return [Fraction(n + 1), Fraction(1)]
    if N == 3:
        return [Fraction(n * n + 3 * n + 2, 2), Fraction(n + 2), Fraction(1)]
    return None


@_timed
def check_coefficients() -> CheckResult:
    """Closed form = elimination on the transposed system, plus worked examples."""
    bad = []
    cases = 0
    for N in range(1, 7):
        k = N // 2
        for n in _valid_ns(N):
            cases += 1
            c = list(straightening_coeffs(N, n).values)
            S = s_matrix(N, -n + k - 1)
            e1 = [1] + [0] * (N - 1)
            if S.transpose().solve(e1) != c:
                bad.append(("elimination", N, n))
            ex = _worked_example(N, n)
            if ex is not None and ex != c:
                bad.append(("worked example", N, n))
    return CheckResult("2", "closed-form coefficients = exact elimination; worked examples match",
                       not bad, {"cases": cases, "failures": bad[:10]})


@_timed
def check_coefficients_column_system() -> CheckResult:
    """The system exactly as written, S c = e1 with c as a column."""
    bad = []
    cases = 0
    for N in range(1, 7):
        k = N // 2
        for n in _valid_ns(N):
            cases += 1
            c = list(straightening_coeffs(N, n).values)
            S = s_matrix(N, -n + k - 1)
            got = S @ c
            if list(got) != [1] + [0] * (N - 1):
                bad.append({"N": N, "n": n, "Sc": [str(x) for x in got]})
    return CheckResult("2", "S c = e1 taken literally (column vector)", not bad,
                       {"cases": cases, "failing": len(bad), "examples": bad[:3]})


@_timed
def check_pascal_row_fuzz(seed: int = 0, samples: int = 500) -> CheckResult:
    rng = random.Random(seed * 1009 + 9)
    bad = []
    for _ in range(samples):
        k = rng.randint(1, 12)
        m = rng.randint(k - 1, 30)
        j = rng.randint(1, m + 1)
        if not check_lemma63(m, k, j):
            bad.append((m, k, j))
    return CheckResult("9", "binomial row identity on random valid triples", not bad,
                       {"samples": samples, "failures": bad[:10]})


# -- algebra ---------------------------------------------------------------------

@_timed
def check_mode_identities() -> CheckResult:
    vecs = _basis_upto(3)
    tails = _basis_upto(4)
    cases = 0
    bad = []
    for u in vecs:
        for v in vecs:
            for m in range(-4, 5):
                for n in range(-4, 5):
                    uv = mode_action(u, m, v)
                    for w in tails:
                        cases += 1
                        if not check_commutator(u, v, m, n, w):
                            bad.append(("commutator", u, v, m, n, w))
                        if mode_action(uv, n, w) != associator_rhs(u, m, v, n, w):
                            bad.append(("associativity", u, v, m, n, w))
    for u in vecs:
        du = sl2_action(-1, u)
        for n in range(-4, 5):
            for w in tails:
                cases += 1
                if mode_action(du, n, w) != -n * mode_action(u, n - 1, w):
                    bad.append(("translation", u, n, w))
    return CheckResult("3", "commutator, associativity and translation identities", not bad,
                       {"cases": cases, "failures": [repr(b) for b in bad[:5]]})


@_timed
def check_subspace_chain(seed: int = 0, samples: int = 100) -> CheckResult:
    rng = random.Random(seed * 7919 + 8)
    bad = []
    for w in range(0, 11):
        if cn_basis(1, w).dim != graded_dim(w):
            bad.append(("C1 != V", w))
    for N in range(1, 5):
        gens = quotient_reps(N, 10)
        for w in range(0, 11):
            big, small = cn_basis(N, w), cn_basis(N + 1, w)
            ech = Echelon()
            for vec in big.vectors:
                ech.add(vec.terms)
            if any(ech.add(vec.terms) for vec in small.vectors):
                bad.append(("chain", N, w))
            basis = partitions(w)
            for _ in range(samples):
                terms = {p: Fraction(rng.randint(-5, 5), rng.randint(1, 4))
                         for p in rng.sample(basis, rng.randint(1, len(basis)))}
                u = FockVector(terms)
                if not u:
                    u = FockVector.basis(basis[0])
                reps, cterms = decompose(u, N, gens)
                rebuilt = FockVector(reps)
                for lam, a, b in cterms:
                    rebuilt = rebuilt + lam * mode_action(a, -N - 1, b)
                if rebuilt != u:
                    bad.append(("decompose", N, w))
    return CheckResult("8", "C_{N+1} in C_N, C_1 = V, decompose round-trips", not bad,
                       {"samples_per_cell": samples, "failures": bad[:10]})


@_timed
def check_generator_counts() -> CheckResult:
    bad = []
    counts = {}
    for N in range(1, 5):
        gens = quotient_reps(N, 10)
        counts[str(N)] = [len(gens.per_weight[w]) for w in range(11)]
        for w in range(11):
            if len(gens.per_weight[w]) != graded_dim(w) - cn_basis(N + 1, w).dim:
                bad.append((N, w))
    return CheckResult("10", "generator counts = dim V_w - dim C_{N+1}(V)_w", not bad,
                       {"counts": counts, "failures": bad})


# -- identities -------------------------------------------------------------------

@_timed
def check_straightening_identities() -> CheckResult:
    """Pair identities for M <= 5 and the difference-one identity (summed from i >= 1)."""
    vecs = _basis_upto(3, start=1)
    tails = _basis_upto(5)
    cases = 0
    bad = []
    for u in vecs:
        for v in vecs:
            for m2 in range(-6, 0):
                for M in range(1, 6):
                    m1 = m2 - M + 1
                    expr = straighten_pair(u, m1, v, m2, 5, 5)
                    for w in tails:
                        cases += 1
                        if apply(expr, w) != mode_action(u, m1, mode_action(v, m2, w)):
                            bad.append((u, m1, v, m2, w))
            for n in range(-6, 0):
                closed = difference_one_rhs(u, v, n, 5)
                via_system = straighten_pair(u, n, v, n, 1, 5)
                for w in tails:
                    cases += 1
                    lhs = mode_action(u, n, mode_action(v, n, w))
                    if apply(closed, w) != lhs or apply(via_system, w) != lhs:
                        bad.append(("difference-one", u, v, n, w))
    ok = not bad
    for M in range(1, 7):
        k = M // 2
        top = -k if M % 2 == 0 else -k - 1
        for n in range(-12, top + 1):
            if list(build_system(M, n).solution.values) != list(straightening_coeffs(M, n).values):
                ok = False
                bad.append(("system", M, n))
    return CheckResult("4", "straightening identities as operators (M <= 5, tails <= 5)", ok,
                       {"cases": cases, "failures": [repr(b) for b in bad[:5]]})


@_timed
def check_difference_one_as_printed() -> CheckResult:
    """Difference-one identity with the product sum from i >= 0 and n <= 0."""
    vecs = _basis_upto(3, start=1)
    tails = _basis_upto(5)
    bad = []
    cases = 0
    for u in vecs:
        for v in vecs:
            for n in range(-6, 1):
                lhs_tail = [(w, mode_action(u, n, mode_action(v, n, w))) for w in tails]
                expr = difference_one_rhs(u, v, n, 5, first=0)
                for w, lhs in lhs_tail:
                    cases += 1
                    if apply(expr, w) != lhs:
                        bad.append({"u": list(next(iter(u))), "v": list(next(iter(v))), "n": n,
                                    "tail": list(next(iter(w)))})
    return CheckResult("4", "difference-one identity with sum from i >= 0, n <= 0", not bad,
                       {"cases": cases, "failing": len(bad), "examples": bad[:3]})


# -- rewrite ------------------------------------------------------------------------

@dataclass
class _RewriteRun:
    monomials: int = 0
    failures: list = field(default_factory=list)
    guard_events: int = 0
    steps: list = field(default_factory=list)


def _run_rewrites(seed: int, per_n: int) -> _RewriteRun:
    run = _RewriteRun()
    for N in (1, 2, 3):
        rng = random.Random(seed * 104729 + N)
        gens = quotient_reps(N, 10)
        eng = Straightener(N, gens)
        for _ in range(per_n):
            m = random_monomial(rng)
            run.monomials += 1
            try:
                out, trace = eng.straighten(Expression.of(m))
            except TerminationGuardExceeded as exc:
                run.guard_events += 1
                run.failures.append(("guard", N, str(exc)))
                continue
            if evaluate(out) != evaluate(m):
                run.failures.append(("value", N, m))
            if not all(is_normal(k, N, gens) for k in out.keys()):
                run.failures.append(("shape", N, m))
            if trace.replay() != out:
                run.failures.append(("replay", N, m))
            run.steps.extend((N, s) for s in trace.steps)
    return run


_REWRITE_CACHE: dict = {}


def _rewrites(seed: int, per_n: int) -> _RewriteRun:
    key = (seed, per_n)
    if key not in _REWRITE_CACHE:
        _REWRITE_CACHE[key] = _run_rewrites(seed, per_n)
    return _REWRITE_CACHE[key]


@_timed
def check_oracle_equivalence(seed: int = 0, per_n: int = 200) -> CheckResult:
    run = _rewrites(seed, per_n)
    ok = not run.failures and run.guard_events == 0 and run.monomials >= 200
    return CheckResult("5", "straighten output equals input and is in normal form", ok,
                       {"monomials": run.monomials, "guardEvents": run.guard_events,
                        "failures": [repr(f) for f in run.failures[:5]]})


@_timed
def check_trace_invariants(seed: int = 0, per_n: int = 200) -> CheckResult:
    run = _rewrites(seed, per_n)
    problems = []
    for N, s in run.steps:
        problems.extend(check_step(s, N))
    return CheckResult("7", "filtration, weight and index-sum invariants along traces",
                       not problems and bool(run.steps),
                       {"steps": len(run.steps), "problems": problems[:10]})


@_timed
def check_spanning() -> CheckResult:
    table = {}
    ok = True
    for N in (1, 2, 3):
        gens = quotient_reps(N, 10)
        row = []
        for w in range(11):
            rep = span_check(N, w, gens)
            row.append(rep.rank)
            ok &= rep.ok
        table[str(N)] = row
    return CheckResult("6", "normal monomials span V_w for w <= 10", ok,
                       {"ranks": table, "dims": [graded_dim(w) for w in range(11)]})


SUITES: dict[str, list[str]] = {
    "combinatorics": ["1", "2", "2-literal", "9"],
    "algebra": ["3", "8", "10"],
    "identities": ["4", "4-printed"],
    "rewrite": ["5", "6", "7"],
}
SUITES["all"] = [c for name in ("combinatorics", "algebra", "identities", "rewrite") for c in SUITES[name]]


def run_check(name: str, seed: int = 0) -> CheckResult:
    table: dict[str, Callable[[], CheckResult]] = {
        "1": check_matrix_identities,
        "2": check_coefficients,
        "2-literal": check_coefficients_column_system,
        "3": check_mode_identities,
        "4": check_straightening_identities,
        "4-printed": check_difference_one_as_printed,
        "5": lambda: check_oracle_equivalence(seed),
        "6": check_spanning,
        "7": lambda: check_trace_invariants(seed),
        "8": lambda: check_subspace_chain(seed),
        "9": lambda: check_pascal_row_fuzz(seed),
        "10": check_generator_counts,
    }
    return table[name]()


def run_suite(suite: str, seed: int = 0) -> list[CheckResult]:
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; choose from {sorted(SUITES)}")
    return [run_check(name, seed) for name in SUITES[suite]]
