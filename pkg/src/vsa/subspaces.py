"""Graded pieces of the subspaces C_N(V) = span{u_{-N} v} and representatives
for the quotients V / C_{N+1}(V)."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from pathlib import Path

from vsa.fockspace import FockVector, Partition, mode_action, partitions
from vsa.linalg import Echelon
from vsa.errors import DomainError

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class CnBasis:
    N: int
    weight: int
    vectors: tuple[FockVector, ...]
    witnesses: tuple[tuple[FockVector, FockVector], ...]

    @property
    def dim(self) -> int:
        return len(self.vectors)


@lru_cache(maxsize=None)
def cn_basis(N: int, w: int) -> CnBasis:
    """Independent spanning family of C_N(V)_w with a witness ``(a, b)`` per vector.

    Candidates ``a_{-N} b`` run over basis pairs with wt a + wt b = w - N + 1,
    ordered by (wt a, a, b); the first independent ones are kept.
    """
    if N < 1:
        raise DomainError(f"N must be positive, got {N}")
    total = w - N + 1
    ech = Echelon()
    vectors, witnesses = [], []
    for wa in range(0, total + 1):
        for pa in partitions(wa):
            for pb in partitions(total - wa):
                a, b = FockVector.basis(pa), FockVector.basis(pb)
                vec = mode_action(a, -N, b)
                if vec and ech.add(vec.terms):
                    vectors.append(vec)
                    witnesses.append((a, b))
    return CnBasis(N, w, tuple(vectors), tuple(witnesses))


@dataclass
class _Decomposer:
    echelon: Echelon
    c_basis: CnBasis
    reps: tuple[Partition, ...]


@dataclass
class GeneratorSet:
    """Homogeneous representatives of a basis of V / C_{N+1}(V), per weight.

    ``N`` is the difference of the spanning set, so the quotient is by
    C_{N+1}.  Representatives are partition states chosen greedily in
    ascending tuple order.
    """

    N: int
    max_weight: int
    per_weight: dict[int, tuple[FockVector, ...]]
    cn_dims: dict[int, int]
    _decomposers: dict = field(default_factory=dict, repr=False, compare=False)
    _partition_cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        self._generators = {
            next(iter(v)) for reps in self.per_weight.values() for v in reps
        }

    def is_generator(self, p: Partition) -> bool:
        return p in self._generators

    def generators(self, w: int) -> tuple[FockVector, ...]:
        return self.per_weight[w]

    def _decomposer(self, w: int) -> _Decomposer:
        dec = self._decomposers.get(w)
        if dec is None:
            cb = cn_basis(self.N + 1, w)
            ech = Echelon()
            for vec in cb.vectors:
                ech.add(vec.terms)
            reps = tuple(next(iter(v)) for v in self.per_weight[w])
            for p in reps:
                if not ech.add({p: 1}):
                    raise DomainError(f"representative {p} is not independent mod C_{self.N + 1}")
            dec = self._decomposers[w] = _Decomposer(ech, cb, reps)
        return dec

    def decompose_partition(self, p: Partition):
        """Cached ``decompose`` of a single basis state."""
        hit = self._partition_cache.get(p)
        if hit is None:
            hit = self._partition_cache[p] = decompose(FockVector.basis(p), self.N, self)
        return hit

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "N": self.N,
            "maxWeight": self.max_weight,
            "weights": {
                str(w): {
                    "reps": [v.to_json() for v in self.per_weight[w]],
                    "cnDim": self.cn_dims[w],
                }
                for w in sorted(self.per_weight)
            },
        }

    @classmethod
    def from_json(cls, obj: dict) -> "GeneratorSet":
        if obj.get("schema") != SCHEMA_VERSION:
            raise DomainError(f"generator cache schema {obj.get('schema')!r} is not {SCHEMA_VERSION}")
        per_weight, dims = {}, {}
        for key, entry in obj["weights"].items():
            per_weight[int(key)] = tuple(FockVector.from_json(v) for v in entry["reps"])
            dims[int(key)] = int(entry["cnDim"])
        return cls(int(obj["N"]), int(obj["maxWeight"]), per_weight, dims)


def quotient_reps(N: int, max_weight: int) -> GeneratorSet:
    if N < 1:
        raise DomainError(f"N must be positive, got {N}")
    if max_weight < 0:
        raise DomainError("max_weight must be nonnegative")
    per_weight, dims = {}, {}
    for w in range(max_weight + 1):
        cb = cn_basis(N + 1, w)
        ech = Echelon()
        for vec in cb.vectors:
            ech.add(vec.terms)
        reps = [FockVector.basis(p) for p in partitions(w) if ech.add({p: 1})]
        per_weight[w] = tuple(reps)
        dims[w] = cb.dim
    return GeneratorSet(N, max_weight, per_weight, dims)


def decompose(u: FockVector, N: int, gens: GeneratorSet):
    """Split ``u`` as representatives plus explicit ``a_{-N-1} b`` terms.

    Returns ``(rep_combo, c_terms)`` where ``rep_combo`` maps representative
    partitions to coefficients and ``c_terms`` lists ``(lam, a, b)``, so that
    ``u == sum rep_combo + sum lam * a_{-N-1} b``.
    """
    if gens.N != N:
        raise DomainError(f"generator set built for N={gens.N}, not N={N}")
    if not u:
        raise DomainError("cannot decompose the zero vector")
    if not u.is_homogeneous():
        raise DomainError("decompose needs a homogeneous vector")
    w = u.weight
    if w > gens.max_weight:
        raise DomainError(f"weight {w} exceeds generator set max weight {gens.max_weight}")
    dec = gens._decomposer(w)
    combo = dec.echelon.express(u.terms)
    if combo is None:  # cannot happen: reps + C-basis span V_w
        raise DomainError("vector not in span of representatives and C-basis")
    ncb = dec.c_basis.dim
    rep_combo: dict[Partition, Fraction] = {}
    c_terms = []
    for idx in sorted(combo):
        lam = combo[idx]
        if idx < ncb:
            a, b = dec.c_basis.witnesses[idx]
            c_terms.append((lam, a, b))
        else:
            rep_combo[dec.reps[idx - ncb]] = lam
    rebuilt = FockVector(rep_combo)
    for lam, a, b in c_terms:
        rebuilt = rebuilt + lam * mode_action(a, -N - 1, b)
    if rebuilt != u:
        raise AssertionError("decomposition does not reproduce its input")
    return rep_combo, c_terms


def save_generator_set(gens: GeneratorSet, path: str | Path) -> None:
    Path(path).write_text(json.dumps(gens.to_json(), sort_keys=True, indent=1))


def load_generator_set(path: str | Path, N: int, max_weight: int) -> GeneratorSet | None:
    """Load a cached set, or ``None`` if absent or built for another (N, maxWeight, schema)."""
    path = Path(path)
    if not path.exists():
        return None
    obj = json.loads(path.read_text())
    if (obj.get("schema"), obj.get("N"), obj.get("maxWeight")) != (SCHEMA_VERSION, N, max_weight):
        return None
    return GeneratorSet.from_json(obj)


def generator_set(N: int, max_weight: int, cache: str | Path | None = None) -> GeneratorSet:
    if cache is not None:
        gens = load_generator_set(cache, N, max_weight)
        if gens is not None:
            return gens
    gens = quotient_reps(N, max_weight)
    if cache is not None:
        save_generator_set(gens, cache)
    return gens
