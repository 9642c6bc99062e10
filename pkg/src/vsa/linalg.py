"""Exact linear algebra over the rationals.

Vectors are sparse dicts from a totally ordered key (partitions, in practice)
to rationals. Pivots are always taken at the smallest key still present, so
every reduction is deterministic.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Hashable, Iterable, Mapping


def _axpy(target: dict, scale, source: Mapping) -> None:
    # target += scale * source, dropping exact zeros
    for key, value in source.items():
        new = target.get(key, 0) + scale * value
        if new:
            target[key] = new
        else:
            target.pop(key, None)


class Echelon:
    """Incremental row echelon form that remembers how each row was built.

    ``add`` inserts a vector and reports whether it was independent of
    everything inserted so far.  ``express`` writes a vector as a combination
    of the independent inserted vectors, or returns ``None`` when it lies
    outside their span.
    """

    def __init__(self):
        self._rows: dict[Hashable, tuple[dict, dict]] = {}
        self._count = 0  # number of independent vectors accepted

    def __len__(self):
        return self._count

    @property
    def rank(self) -> int:
        return self._count

    def _reduce(self, vector: Mapping) -> tuple[dict, dict]:
        residue = {k: Fraction(v) for k, v in vector.items() if v}
        combo: dict[int, Fraction] = {}
        while True:
            hits = [k for k in residue if k in self._rows]
            if not hits:
                return residue, combo
            pivot = min(hits)
            row, row_combo = self._rows[pivot]
            scale = -residue[pivot]
            _axpy(residue, scale, row)
            _axpy(combo, scale, row_combo)

    def add(self, vector: Mapping) -> bool:
        residue, combo = self._reduce(vector)
        if not residue:
            return False
        pivot = min(residue)
        lead = residue[pivot]
        # residue = vector + sum combo[i] * accepted[i], and vector is accepted next
        combo[self._count] = Fraction(1)
        row = {k: v / lead for k, v in residue.items()}
        row_combo = {i: c / lead for i, c in combo.items() if c}
        self._rows[pivot] = (row, row_combo)
        self._count += 1
        return True

    def contains(self, vector: Mapping) -> bool:
        residue, _ = self._reduce(vector)
        return not residue

    def express(self, vector: Mapping) -> dict[int, Fraction] | None:
        """Coefficients ``c`` with ``vector == sum c[i] * accepted[i]``."""
        residue, combo = self._reduce(vector)
        if residue:
            return None
        return {i: -c for i, c in combo.items() if c}


def rank(vectors: Iterable[Mapping]) -> int:
    ech = Echelon()
    for v in vectors:
        ech.add(v)
    return ech.rank


# -- dense square systems ---------------------------------------------------

def _to_fraction_rows(rows):
    return [[Fraction(x) for x in row] for row in rows]


def determinant(rows) -> Fraction:
    a = _to_fraction_rows(rows)
    n = len(a)
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col]), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            det = -det
        det *= a[col][col]
        inv = 1 / a[col][col]
        for r in range(col + 1, n):
            factor = a[r][col] * inv
            if factor:
                a[r] = [x - factor * y for x, y in zip(a[r], a[col])]
    return det


def solve(rows, rhs) -> list[Fraction]:
    """Solve the square system ``rows @ x == rhs`` by Gauss-Jordan elimination."""
    a = _to_fraction_rows(rows)
    n = len(a)
    b = [Fraction(x) for x in rhs]
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col]), None)
        if pivot is None:
            raise ZeroDivisionError("singular system")
        a[col], a[pivot] = a[pivot], a[col]
        b[col], b[pivot] = b[pivot], b[col]
        inv = 1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        b[col] *= inv
        for r in range(n):
            if r != col and a[r][col]:
                factor = a[r][col]
                a[r] = [x - factor * y for x, y in zip(a[r], a[col])]
                b[r] -= factor * b[col]
    return b
