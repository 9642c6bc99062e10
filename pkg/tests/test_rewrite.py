import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from vsa.errors import DomainError, TerminationGuardExceeded
from vsa.fockspace import FockVector, graded_dim, partitions
from vsa.rewrite import (
    Expression,
    Monomial,
    Straightener,
    check_step,
    enumerate_normal_monomials,
    evaluate,
    filtration_level,
    is_normal,
    key_weight,
    kill_nonnegative,
    random_monomial,
    replace_vector,
    span_check,
    straighten,
    swap_adjacent,
)
from vsa.subspaces import quotient_reps

B = FockVector.basis
vac = FockVector.vacuum()
GENS = {N: quotient_reps(N, 10) for N in (1, 2, 3)}


def mono(*modes, coeff=1):
    return Monomial.of(modes, coeff)


def test_filtration_level():
    assert filtration_level(mono(), 4) == 0
    aa = mono(((1,), -1), ((1,), -1))
    assert filtration_level(aa, 1) == 2
    assert filtration_level(aa, 3) == 6
    with pytest.raises(DomainError):
        filtration_level(aa, 0)


def test_evaluate_examples():
    assert evaluate(Expression()) == 0
    assert evaluate(mono(((1,), -2))) == B([2])
    assert evaluate(mono(((1,), -1), ((1,), -1))) == B([1, 1])
    assert evaluate(Expression.vacuum(Fraction(3, 2))) == Fraction(3, 2) * vac


def test_swap_examples():
    m = mono(((1,), -1), ((1,), -2))
    out = swap_adjacent(m, 1, 2)
    assert mono(((1,), -2), ((1,), -1)).modes in out.terms
    assert evaluate(out) == evaluate(m)
    # [a_1, a_{-1}] = 1 leaves a vacuum-mode correction
    m = mono(((1,), 1), ((1,), -1))
    out = swap_adjacent(m, 1, 1)
    assert len(out) == 2 and evaluate(out) == vac
    with pytest.raises(DomainError):
        swap_adjacent(m, 2, 1)


def test_kill_examples():
    assert kill_nonnegative(mono(((1,), 0)), 1) == Expression()
    assert evaluate(kill_nonnegative(mono(((1,), 1), ((1,), -1)), 1)) == vac
    assert evaluate(kill_nonnegative(mono(((1,), -1), ((1,), 2)), 1)) == 0
    with pytest.raises(DomainError):
        kill_nonnegative(mono(((1,), -1)), 1)


def test_replace_examples():
    g = GENS[1]
    m = mono(((2,), -1))
    out = replace_vector(m, 1, g, 1)
    assert evaluate(out) == B([2])
    assert all(filtration_level(k, 1) < filtration_level(m, 1) for k in out.keys())
    rep = mono(((1,), -3), coeff=Fraction(5, 2))
    assert replace_vector(rep, 1, g, 1) == Expression.of(rep)
    assert replace_vector(mono(((2,), -1), coeff=3), 1, g, 1) == out.scaled(3)
    with pytest.raises(DomainError):
        replace_vector(mono(((11,), -1)), 1, g, 1)


@pytest.mark.parametrize("N", (1, 2, 3))
def test_swap_and_replace_lower_the_level(N):
    rng = random.Random(N)
    g = GENS[N]
    for _ in range(40):
        m = random_monomial(rng, max_length=3)
        lvl = filtration_level(m, N)
        if m.length >= 2:
            out = swap_adjacent(m, 1, N)
            swapped = (m.modes[1], m.modes[0]) + m.modes[2:]
            assert all(filtration_level(k, N) < lvl for k in out.keys() if k != swapped)
            assert evaluate(out) == evaluate(m)
        if any(n >= 0 for _, n in m.modes):
            out = kill_nonnegative(m, N)
            assert all(filtration_level(k, N) < lvl for k in out.keys())
            assert evaluate(out) == evaluate(m)
        out = replace_vector(m, 1, g, N)
        assert evaluate(out) == evaluate(m)


def test_straighten_examples():
    e = Expression.vacuum(7)
    assert straighten(e, 2, GENS[2])[0] == e
    aa = Expression.of(mono(((1,), -1), ((1,), -1)))
    out, trace = straighten(aa, 1, GENS[1])
    assert evaluate(out) == B([1, 1])
    assert all(is_normal(k, 1, GENS[1]) for k in out.keys())
    assert trace.replay() == out


@pytest.mark.parametrize("N", (1, 2, 3))
def test_straighten_random(N):
    rng = random.Random(100 + N)
    eng = Straightener(N, GENS[N])
    for _ in range(60):
        m = random_monomial(rng, max_weight=8)
        out, trace = eng.straighten(Expression.of(m))
        assert evaluate(out) == evaluate(m)
        assert all(is_normal(k, N, GENS[N]) for k in out.keys())
        assert trace.replay() == out
        for step in trace.steps:
            assert check_step(step, N) == []


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 3), st.lists(st.tuples(st.integers(1, 3), st.integers(-5, 1)), min_size=1, max_size=3), st.data())
def test_straighten_hypothesis(N, shape, data):
    modes = tuple((data.draw(st.sampled_from(partitions(w))), n) for w, n in shape)
    if not 0 <= key_weight(modes) <= 10:
        return
    e = Expression({modes: 1})
    out, _ = straighten(e, N, GENS[N])
    assert evaluate(out) == evaluate(e)


def test_straighten_rejects_heavy_input():
    heavy = Expression.of(mono(((1,), -12)))
    with pytest.raises(DomainError):
        straighten(heavy, 1, GENS[1])
    with pytest.raises(DomainError):
        Straightener(2, GENS[1])


def test_guard_bound_holds_and_fires_when_broken(monkeypatch):
    # honest monomials satisfy -m1 <= weight + length, so the guard is silent
    eng = Straightener(2, GENS[2])
    pair = (((1,), -3), ((1,), -2))
    assert eng._compute_step(pair).kind == "straightenPair"
    import vsa.rewrite as rw
    monkeypatch.setattr(rw, "key_weight", lambda key: 0)
    with pytest.raises(TerminationGuardExceeded):
        Straightener(2, GENS[2])._compute_step(pair)


def test_trace_json_shape():
    e = Expression.of(mono(((1,), -2), ((1,), -2)))
    out, trace = straighten(e, 2, GENS[2])
    obj = trace.to_json()
    assert set(obj) == {"input", "steps", "output"}
    kinds = {s["kind"] for s in obj["steps"]}
    assert "straightenPair" in kinds
    pair = next(s for s in obj["steps"] if s["kind"] == "straightenPair")
    assert pair["M"] == 1 and set(pair) >= {"lemma", "before", "after"}
    assert Expression.from_json(obj["output"]) == out


def test_enumerate_examples():
    assert [m.modes for m in enumerate_normal_monomials(2, 0, GENS[2])] == [()]
    monos = enumerate_normal_monomials(2, 2, GENS[2])
    assert (((1,), -2),) in [m.modes for m in monos]
    assert all(m.length <= 1 for m in monos)
    assert all(is_normal(m.modes, 2, GENS[2]) and m.weight == 2 for m in monos)
    assert enumerate_normal_monomials(3, 7, GENS[3]) == enumerate_normal_monomials(3, 7, GENS[3])


def test_span_examples():
    assert span_check(1, 0, GENS[1]).to_json() == {"N": 1, "weight": 0, "count": 1, "rank": 1, "dim": 1, "ok": True}
    r = span_check(1, 5, GENS[1])
    assert (r.rank, r.dim, r.ok) == (7, 7, True)
    r = span_check(3, 10, GENS[3])
    assert (r.rank, r.dim, r.ok) == (42, 42, True)


@pytest.mark.parametrize("N", (1, 2, 3))
def test_span_all_weights(N):
    for w in range(9):
        assert span_check(N, w, GENS[N]).rank == graded_dim(w)
