from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from vsa.errors import DomainError
from vsa.fockspace import (
    CONFORMAL,
    HEISENBERG,
    FockVector,
    alpha_mode,
    associator_rhs,
    check_commutator,
    graded_dim,
    mode_action,
    partitions,
    sl2_action,
)

vac = FockVector.vacuum()
B = FockVector.basis


def virasoro(m, v):
    return mode_action(CONFORMAL, m + 1, v)


def basis_states(max_w):
    return [B(p) for w in range(max_w + 1) for p in partitions(w)]


states = st.integers(0, 4).flatmap(lambda w: st.sampled_from(partitions(w))).map(B)


def test_partitions_counts():
    assert [graded_dim(w) for w in range(11)] == [1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42]
    assert partitions(3) == ((1, 1, 1), (2, 1), (3,))
    assert graded_dim(-1) == 0


def test_alpha_examples():
    assert alpha_mode(-2, vac) == B([2])
    assert alpha_mode(1, B([1])) == vac
    assert alpha_mode(1, B([1, 1])) == 2 * B([1])
    assert alpha_mode(2, B([1, 1])) == 0
    assert alpha_mode(0, B([3, 1])) == 0


def test_mode_examples():
    assert mode_action(B([1]), -1, vac) == B([1])
    assert mode_action(B([1]), 1, B([1])) == vac
    assert mode_action(B([1, 1]), 1, B([1])) == 2 * B([1])
    assert mode_action(vac, -1, B([2, 1])) == B([2, 1])
    assert mode_action(vac, 0, B([2, 1])) == 0


@given(states)
def test_creation_property(u):
    assert mode_action(u, -1, vac) == u
    for n in range(0, 4):
        assert mode_action(u, n, vac) == 0


@given(states, st.integers(-5, 5), states)
def test_mode_weight(u, n, w):
    out = mode_action(u, n, w)
    if out:
        assert out.weight == u.weight + w.weight - n - 1


def test_sl2_examples():
    assert sl2_action(0, B([2, 1])) == 3 * B([2, 1])
    assert sl2_action(-1, vac) == 0
    assert sl2_action(1, B([1])) == 0
    assert sl2_action(-1, B([1])) == B([2])
    assert sl2_action(1, B([2])) == 2 * B([1])
    with pytest.raises(DomainError):
        sl2_action(2, vac)


@pytest.mark.parametrize("m", range(-3, 4))
@pytest.mark.parametrize("n", range(-3, 4))
def test_virasoro_relations_central_charge_one(m, n):
    # independent oracle: the conformal vector generates Virasoro at c = 1
    central = Fraction(m ** 3 - m, 12) if m + n == 0 else 0
    for w in basis_states(4):
        lhs = virasoro(m, virasoro(n, w)) - virasoro(n, virasoro(m, w))
        assert lhs == (m - n) * virasoro(m + n, w) + central * w


@given(states, st.integers(-4, 4), states)
def test_translation(u, n, w):
    assert mode_action(sl2_action(-1, u), n, w) == -n * mode_action(u, n - 1, w)


def test_commutator_examples():
    assert check_commutator(B([1]), B([1]), 1, -1, vac)
    assert check_commutator(vac, B([2, 1]), 2, -3, B([1]))
    assert check_commutator(B([2]), B([1]), 0, -2, B([1]))


@given(states, states, st.integers(-4, 4), st.integers(-4, 4), states)
def test_commutator_and_associativity(u, v, m, n, w):
    assert check_commutator(u, v, m, n, w)
    assert mode_action(mode_action(u, m, v), n, w) == associator_rhs(u, m, v, n, w)


def test_vector_arithmetic():
    x = FockVector({(1,): Fraction(1, 2), (2,): 3})
    assert x - x == 0
    assert (x + x) == 2 * x
    assert x.weights() == {1, 2}
    assert not x.is_homogeneous()
    with pytest.raises(DomainError):
        _ = x.weight
    assert x.component(2) == 3 * B([2])
    assert FockVector.from_json(x.to_json()) == x
    assert x.to_json()["terms"][0] == {"partition": [1], "coeff": "1/2"}


def test_canonical_rejects_nonpositive():
    with pytest.raises(DomainError):
        B([2, 0])
    assert B([1, 3, 2]) == B([3, 2, 1])


def test_backend_protocol():
    assert HEISENBERG.graded_dim(6) == 11
    assert len(HEISENBERG.basis(4)) == 5
    assert HEISENBERG.vacuum() == vac
    assert HEISENBERG.mode_action(B([1]), -1, vac) == B([1])
