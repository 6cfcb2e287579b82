"""Partitions, M-modular diagrams and brute-force enumeration.

Enumeration here is deliberately naive: it is the oracle that the series
code in :mod:`partineq.qseries` is checked against, so it must not share
any machinery with it.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence

__all__ = [
    "Partition",
    "MModularDiagram",
    "Constraints",
    "ResidueViolation",
    "NoSuchColumn",
    "enumerate_partitions",
    "count_partitions",
    "nu",
    "split_ends",
    "split_classes",
    "attach_column",
    "remove_column",
    "has_k_columns",
    "tally_generator_multisets",
]


class ResidueViolation(ValueError):
    pass


class NoSuchColumn(ValueError):
    pass


@dataclass(frozen=True, order=False)
class Partition:
    """A multiset of positive parts, stored as ``((part, mult), ...)`` by descending part."""

    freq: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        items = self.freq.items() if isinstance(self.freq, Mapping) else self.freq
        merged: Counter = Counter()
        for p, k in items:
            if p < 1:
                raise ValueError(f"parts must be positive, got {p}")
            if k < 0:
                raise ValueError(f"negative multiplicity for part {p}")
            merged[p] += k
        norm = tuple(sorted(((p, k) for p, k in merged.items() if k), reverse=True))
        object.__setattr__(self, "freq", norm)

    @classmethod
    def from_parts(cls, parts: Iterable[int]) -> Partition:
        return cls(tuple(Counter(parts).items()))

    @property
    def parts(self) -> tuple[int, ...]:
        return tuple(p for p, k in self.freq for _ in range(k))

    @property
    def weight(self) -> int:
        return sum(p * k for p, k in self.freq)

    @property
    def num_parts(self) -> int:
        return sum(k for _, k in self.freq)

    def __len__(self) -> int:
        return self.num_parts

    @property
    def largest(self) -> int:
        return self.freq[0][0] if self.freq else 0

    def multiplicity(self, part: int) -> int:
        for p, k in self.freq:
            if p == part:
                return k
        return 0

    def is_distinct(self) -> bool:
        return all(k == 1 for _, k in self.freq)

    def __add__(self, other: Partition) -> Partition:
        c = Counter(dict(self.freq))
        c.update(dict(other.freq))
        return Partition(tuple(c.items()))

    def to_list(self) -> list[list[int]]:
        return [[p, k] for p, k in self.freq]

    @classmethod
    def from_list(cls, data: Sequence[Sequence[int]]) -> Partition:
        return cls(tuple((int(p), int(k)) for p, k in data))

    def __str__(self) -> str:
        if not self.freq:
            return "()"
        return ",".join(str(p) if k == 1 else f"{p}^{k}" for p, k in self.freq)

    def __repr__(self) -> str:
        return f"Partition({self})"


def nu(lam: Partition, j: int, M: int) -> int:
    """Number of parts of ``lam`` congruent to j mod M."""
    if not 0 <= j < M:
        raise ValueError(f"residue {j} outside [0, {M})")
    return sum(k for p, k in lam.freq if p % M == j)


# --------------------------------------------------------------------------
# M-modular diagrams


@dataclass(frozen=True)
class MModularDiagram:
    """Rows ``(quot, end)`` meaning a part ``quot*M + end``, largest first.

    Rows with ``quot == end == 0`` are legal: they stand for the nonnegative
    parts left behind when ends are stripped off.
    """

    modulus: int
    rows: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        rows = tuple((int(q), int(e)) for q, e in self.rows)
        for q, e in rows:
            if q < 0 or not 0 <= e < self.modulus:
                raise ValueError(f"bad row ({q}, {e}) for modulus {self.modulus}")
        rows = tuple(sorted(rows, key=lambda r: (r[0] * self.modulus + r[1], r[0]), reverse=True))
        object.__setattr__(self, "rows", rows)

    @classmethod
    def from_quotients(cls, quotients: Iterable[int], modulus: int) -> MModularDiagram:
        return cls(modulus, tuple((q, 0) for q in quotients))

    @classmethod
    def of_partition(cls, lam: Partition, modulus: int) -> MModularDiagram:
        return cls(modulus, tuple(divmod(p, modulus) for p in lam.parts))

    @property
    def quotients(self) -> tuple[int, ...]:
        return tuple(q for q, _ in self.rows)

    @property
    def num_rows(self) -> int:
        return len(self.rows)

    @property
    def zero_rows(self) -> int:
        return sum(1 for q, e in self.rows if q == 0 and e == 0)

    @property
    def weight(self) -> int:
        return sum(q * self.modulus + e for q, e in self.rows)

    def quotient(self, i: int) -> int:
        """1-based i-th largest quotient; 0 past the last row."""
        return self.rows[i - 1][0] if 1 <= i <= len(self.rows) else 0

    def column_gap(self, y: int) -> int:
        """How many columns of length exactly y the diagram has."""
        if y < 1:
            raise ValueError("column length must be >= 1")
        return self.quotient(y) - self.quotient(y + 1)

    def with_ends(self, end: int) -> list[int]:
        """Parts obtained by putting ``end`` on every row of an end-free diagram."""
        return [q * self.modulus + end for q, _ in self.rows]

    def render(self) -> str:
        lines = []
        for q, e in self.rows:
            cells = [str(self.modulus)] * q + ([str(e)] if e else [])
            lines.append(" ".join(cells) if cells else "0")
        return "\n".join(lines)


def attach_column(D: MModularDiagram, r: int) -> MModularDiagram:
    if not 0 < r <= D.num_rows:
        raise NoSuchColumn(f"cannot attach a column of length {r} to {D.num_rows} rows")
    rows = [(q + 1, e) if i < r else (q, e) for i, (q, e) in enumerate(D.rows)]
    return MModularDiagram(D.modulus, tuple(rows))


def remove_column(D: MModularDiagram, r: int) -> MModularDiagram:
    if not 0 < r <= D.num_rows or D.column_gap(r) < 1:
        raise NoSuchColumn(f"no column of length {r}")
    rows = [(q - 1, e) if i < r else (q, e) for i, (q, e) in enumerate(D.rows)]
    return MModularDiagram(D.modulus, tuple(rows))


def has_k_columns(D: MModularDiagram, y: int, k: int) -> bool:
    return D.column_gap(y) >= k


def split_classes(lam: Partition, M: int, shifts: Sequence[int]) -> list[MModularDiagram]:
    """Strip the end ``s`` from every part ``s + jM`` for each shift ``s``.

    Shifts must lie in distinct residue classes.  Raises ResidueViolation if
    some part is not of the form ``s + jM`` with ``j >= 0``.
    """
    residues = [s % M for s in shifts]
    if len(set(residues)) != len(residues):
        raise ResidueViolation(f"shifts {list(shifts)} share a residue mod {M}")
    buckets: list[list[int]] = [[] for _ in shifts]
    for p in lam.parts:
        r = p % M
        if r not in residues:
            raise ResidueViolation(f"part {p} is not congruent to any of {list(shifts)} mod {M}")
        i = residues.index(r)
        if p < shifts[i]:
            raise ResidueViolation(f"part {p} is smaller than its class start {shifts[i]}")
        buckets[i].append((p - shifts[i]) // M)
    return [MModularDiagram.from_quotients(b, M) for b in buckets]


def split_ends(lam: Partition, M: int, b: int) -> tuple[MModularDiagram, MModularDiagram, tuple[int, int]]:
    """Split a partition into parts = +-b (mod M) into its two end-free diagrams."""
    if not 0 < b < M:
        raise ValueError(f"need 0 < b < M, got b={b}, M={M}")
    Db, Dc = split_classes(lam, M, (b, M - b))
    return Db, Dc, (Db.num_rows, Dc.num_rows)


# --------------------------------------------------------------------------
# enumeration


@dataclass(frozen=True)
class Constraints:
    """Which partitions to enumerate.

    ``min_gap=g`` asks successive parts to differ by more than g (so g=0 is
    distinct parts).  ``class_gap=G`` asks successive parts inside one residue
    class mod ``modulus`` to differ by at least G.  ``max_mult`` caps the
    multiplicity of each part value by its residue.
    """

    modulus: int = 1
    residues: frozenset[int] | None = None
    max_part: int | None = None
    num_parts: int | None = None
    distinct: bool = False
    min_gap: int | None = None
    parts: frozenset[int] | None = None
    class_gap: int = 0
    max_mult: Mapping[int, int] | None = field(default=None, hash=False)

    def __post_init__(self):
        if self.modulus < 1:
            raise ValueError("modulus must be >= 1")
        if self.residues is not None:
            res = frozenset(self.residues)
            if any(not 0 <= r < self.modulus for r in res):
                raise ValueError(f"residues must lie in [0, {self.modulus})")
            object.__setattr__(self, "residues", res)
        if self.parts is not None:
            object.__setattr__(self, "parts", frozenset(self.parts))
        if self.min_gap is not None and self.min_gap < 0:
            raise ValueError("min_gap must be >= 0")
        if self.class_gap < 0:
            raise ValueError("class_gap must be >= 0")

    def allows(self, p: int) -> bool:
        if p < 1:
            return False
        if self.max_part is not None and p > self.max_part:
            return False
        if self.residues is not None and p % self.modulus not in self.residues:
            return False
        if self.parts is not None and p not in self.parts:
            return False
        return True


def enumerate_partitions(n: int, c: Constraints = Constraints()) -> list[Partition]:
    """All partitions of n obeying ``c``, in descending lexicographic order."""
    if n < 0:
        raise ValueError("n must be >= 0")
    return [Partition.from_parts(p) for p in _gen(n, c)]


def _gen(n: int, c: Constraints) -> Iterator[list[int]]:
    M = c.modulus
    cands = [p for p in range(n, 0, -1) if c.allows(p)]
    target = c.num_parts
    gap = c.min_gap
    cap_default = 1 if c.distinct else None
    picked: list[int] = []
    last_in_class: dict[int, int] = {}

    def cap(p: int) -> int | None:
        caps = []
        if cap_default is not None:
            caps.append(cap_default)
        if c.max_mult is not None and p % M in c.max_mult:
            caps.append(c.max_mult[p % M])
        return min(caps) if caps else None

    def rec(rem: int, start: int, run: int) -> Iterator[list[int]]:
        if rem == 0:
            if target is None or len(picked) == target:
                yield list(picked)
            return
        if target is not None and len(picked) >= target:
            return
        prev = picked[-1] if picked else None
        for i in range(start, len(cands)):
            p = cands[i]
            if p > rem:
                continue
            if target is not None and p * (target - len(picked)) < rem:
                break  # remaining parts are all <= p
            if prev is not None:
                if p == prev:
                    k = cap(p)
                    if k is not None and run >= k:
                        continue
                if gap is not None and prev - p <= gap:
                    continue
            r = p % M
            if c.class_gap and r in last_in_class and last_in_class[r] - p < c.class_gap:
                continue
            saved = last_in_class.get(r)
            picked.append(p)
            last_in_class[r] = p
            yield from rec(rem - p, i, run + 1 if p == prev else 1)
            picked.pop()
            if saved is None:
                del last_in_class[r]
            else:
                last_in_class[r] = saved

    yield from rec(n, 0, 0)


def count_partitions(N: int, c: Constraints = Constraints()) -> list[int]:
    """Counts of ``enumerate_partitions(n, c)`` for n = 0..N."""
    return [sum(1 for _ in _gen(n, c)) for n in range(N + 1)]


def tally_generator_multisets(gens: Sequence[tuple[int, bool, int]], N: int) -> dict[tuple[int, int], int]:
    """Brute-force coefficient table of a product given by its generators.

    Each generator ``(e, z, sign)`` may be used any number of times
    (``sign=+1``) or at most once (``sign=-1``); generators with equal
    exponents are distinct colours.  Returns ``{(m, n): count}`` where n is
    the total weight and m counts uses of z-generators.
    """
    gens = [g for g in gens if g[0] <= N]
    out: Counter = Counter()

    def rec(i: int, w: int, m: int) -> None:
        if i == len(gens):
            out[(m, w)] += 1
            return
        e, z, s = gens[i]
        top = 1 if s < 0 else (N - w) // e
        for k in range(min(top, (N - w) // e) + 1):
            rec(i + 1, w + k * e, m + (k if z else 0))

    rec(0, 0, 0)
    return dict(out)
