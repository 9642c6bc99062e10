"""Acceptance gate: one exact check per criterion, each printing a PASS/FAIL line.

Run with ``pytest -s tests/test_acceptance.py`` to see the lines.
"""

import pytest

from vsa.verify import (
    check_coefficients,
    check_coefficients_column_system,
    check_difference_one_as_printed,
    check_generator_counts,
    check_matrix_identities,
    check_mode_identities,
    check_oracle_equivalence,
    check_pascal_row_fuzz,
    check_spanning,
    check_straightening_identities,
    check_subspace_chain,
    check_trace_invariants,
)

SEED = 0

# (id, check, time limit in seconds or None)
CRITERIA = [
    ("1", check_matrix_identities, 5),
    ("2", check_coefficients, 5),
    ("2-column-system", check_coefficients_column_system, 5),
    ("3", check_mode_identities, 60),
    ("4", check_straightening_identities, 120),
    ("4-difference-one-as-printed", check_difference_one_as_printed, 120),
    ("5", lambda: check_oracle_equivalence(SEED), 600),
    ("6", check_spanning, 600),
    ("7", lambda: check_trace_invariants(SEED), None),
    ("8", lambda: check_subspace_chain(SEED), 60),
    ("9", lambda: check_pascal_row_fuzz(SEED), 1),
    ("10", check_generator_counts, None),
]


@pytest.mark.parametrize("name,check,limit", CRITERIA, ids=[c[0] for c in CRITERIA])
def test_criterion(name, check, limit):
    result = check()
    within = limit is None or result.seconds < limit
    ok = result.ok and within
    timing = "" if limit is None else f", limit {limit}s"
    print(f"\n{'PASS' if ok else 'FAIL'} criterion {name}: {result.title} "
          f"[{result.seconds:.2f}s{timing}] {result.detail}")
    assert result.ok, result.detail
    assert within, f"took {result.seconds:.1f}s, limit {limit}s"
