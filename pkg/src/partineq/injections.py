"""Executable partition injections and an exhaustive audit harness.

Two families live here:

* ``phi1`` / ``phiL`` send partitions into parts ``a + jM, b + jM`` to
  partitions into parts ``1 + jM, c + jM`` (``1 + c = a + b``, ``a`` not
  dividing ``b``).
* ``phik`` and its distinct-parts and gap-restricted variants send
  partitions into m parts congruent to +-b (mod M) to partitions into m
  parts congruent to +-a (mod M), one slice ``k = min(nu_b, nu_{M-b})`` at
  a time.

Every map comes with a classifier that recovers the case from the image, so
the audit can check that the cases are really separated.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from math import gcd
from typing import Any, Callable, Hashable, Iterable, Sequence

from .partitions import (
    Constraints,
    MModularDiagram,
    Partition,
    ResidueViolation,
    attach_column,
    enumerate_partitions,
    remove_column,
    split_classes,
    split_ends,
)

__all__ = [
    "CaseTag",
    "ParamViolation",
    "PreconditionViolation",
    "NotInImage",
    "InsufficientEnds",
    "DistinctnessViolation",
    "T11Params",
    "PairParams",
    "phi1",
    "phi1_image_case",
    "phiL",
    "phiL_split",
    "phiL_image_case",
    "phik",
    "phik_distinct",
    "phik_gap",
    "phik_image_case",
    "Report",
    "verify_injection",
    "t11_domain",
    "t11_codomain",
    "phik_domain",
]


class CaseTag(str, Enum):
    C1 = "1"
    C2 = "2"
    C3 = "3"
    C2A = "2a"
    C2B = "2b"
    SWAP = "swap"

    def __str__(self) -> str:
        return self.value


class ParamViolation(ValueError):
    pass


class PreconditionViolation(ValueError):
    pass


class NotInImage(ValueError):
    pass


class InsufficientEnds(RuntimeError):
    """Fewer ends than rows to receive them; the construction forbids this."""


class DistinctnessViolation(RuntimeError):
    pass


# --------------------------------------------------------------------------
# phi1 / phiL


@dataclass(frozen=True)
class T11Params:
    a: int
    b: int
    c: int
    M: int = 1
    L: int = 1

    def __post_init__(self):
        if not 1 < self.a < self.b < self.c:
            raise ParamViolation(f"need 1 < a < b < c, got a={self.a} b={self.b} c={self.c}")
        if 1 + self.c != self.a + self.b:
            raise ParamViolation(f"need 1 + c = a + b, got {1 + self.c} != {self.a + self.b}")
        if self.M < 1 or self.L < 0:
            raise ParamViolation("need M >= 1 and L >= 0")

    @property
    def d(self) -> int:
        return gcd(self.a, self.b)

    @property
    def divides(self) -> bool:
        """True in the excluded regime where a | b."""
        return self.b % self.a == 0

    def require_injective_regime(self) -> None:
        if self.divides:
            raise ParamViolation(f"a={self.a} divides b={self.b}; no injection exists")


def phi1(k: int, l: int, p: T11Params, corrected: bool = True) -> tuple[int, int, CaseTag]:
    """Image ``(nu_1, nu_c, case)`` of the partition ``(a^k, b^l)``.

    ``corrected=False`` tests divisibility by ``a`` instead of ``a/gcd(a, b)``,
    which collides as soon as gcd(a, b) > 1.
    """
    p.require_injective_regime()
    if k < 0 or l < 0:
        raise ValueError("multiplicities must be >= 0")
    a, b = p.a, p.b
    if k >= l:
        return l + a * (k - l), l, CaseTag.C1
    step = a // p.d if corrected else a
    if (l - k) % step:
        return k + b * (l - k), k, CaseTag.C2
    # at least two excess b's here, since a/d > 1
    assert l - k >= 2 or not corrected
    return k + 1 + b * (l - k - 1) - a, k + 1, CaseTag.C3


def phi1_image_case(nu1: int, nuc: int, p: T11Params) -> CaseTag:
    a, b = p.a, p.b
    x = nu1 - nuc
    if x % a == 0:
        return CaseTag.C1
    if x % b == 0:
        return CaseTag.C2
    if x % a == (-b) % a and x % b == (-a) % b:
        return CaseTag.C3
    raise NotInImage(f"({nu1}, {nuc}) matches no case")


def phiL_split(lam_a: MModularDiagram, lam_b: MModularDiagram, p: T11Params,
               corrected: bool = True) -> tuple[MModularDiagram, MModularDiagram, CaseTag]:
    """Core of phiL on end-free diagrams: returns the 1-class and c-class diagrams."""
    k, l = lam_a.num_rows, lam_b.num_rows
    nu1, nuc, tag = phi1(k, l, p, corrected)
    if tag is CaseTag.C1:
        ones_host, c_host = lam_a, lam_b
    else:
        ones_host, c_host = lam_b, lam_a
    spare1 = nu1 - ones_host.num_rows
    sparec = nuc - c_host.num_rows
    if spare1 < 0 or sparec < 0:
        raise InsufficientEnds(f"case {tag}: {nu1} 1-ends for {ones_host.num_rows} rows, "
                               f"{nuc} c-ends for {c_host.num_rows} rows")
    mu1 = MModularDiagram.from_quotients(ones_host.quotients + (0,) * spare1, p.M)
    muc = MModularDiagram.from_quotients(c_host.quotients + (0,) * sparec, p.M)
    return mu1, muc, tag


def _as_pair(lam: Partition | tuple[Partition, Partition], p: T11Params):
    if isinstance(lam, Partition):
        return split_classes(lam, p.M, (p.a, p.b))
    pa, pb = lam
    da, = split_classes(pa, p.M, (p.a,))
    db, = split_classes(pb, p.M, (p.b,))
    return da, db


def phiL(lam: Partition | tuple[Partition, Partition], p: T11Params,
         corrected: bool = True) -> tuple[Partition | tuple[Partition, Partition], CaseTag]:
    """Apply phiL to a partition into parts ``a + jM, b + jM`` (``j < L``).

    A plain Partition is accepted when a and b differ mod M; otherwise pass
    the pair ``(a-class parts, b-class parts)`` and a pair is returned.
    """
    da, db = _as_pair(lam, p)
    for D in (da, db):
        if D.num_rows and D.quotient(1) > p.L - 1:
            raise PreconditionViolation(f"a part exceeds the range allowed by L={p.L}")
    mu1, muc, tag = phiL_split(da, db, p, corrected)
    img1 = Partition.from_parts(mu1.with_ends(1))
    imgc = Partition.from_parts(muc.with_ends(p.c))
    if isinstance(lam, Partition):
        return img1 + imgc, tag
    return (img1, imgc), tag


def phiL_image_case(mu: Partition | tuple[Partition, Partition], p: T11Params) -> CaseTag:
    if isinstance(mu, Partition):
        d1, dc = split_classes(mu, p.M, (1, p.c))
    else:
        d1, = split_classes(mu[0], p.M, (1,))
        dc, = split_classes(mu[1], p.M, (p.c,))
    return phi1_image_case(d1.num_rows, dc.num_rows, p)


# --------------------------------------------------------------------------
# phi_k family


@dataclass(frozen=True)
class PairParams:
    """``1 <= a < b < M/2`` with ``gcd(b, M) = 1`` and length L."""

    a: int
    b: int
    M: int
    L: int = 1

    def __post_init__(self):
        if not (1 <= self.a < self.b and 2 * self.b < self.M):
            raise ParamViolation(f"need 1 <= a < b < M/2, got a={self.a} b={self.b} M={self.M}")
        if gcd(self.b, self.M) != 1:
            raise ParamViolation(f"need gcd(b, M) = 1, got gcd({self.b}, {self.M}) = {gcd(self.b, self.M)}")
        if self.L < 0:
            raise ParamViolation("need L >= 0")

    @property
    def half_classes(self) -> bool:
        """Whether weights nM + M/2 are also covered (M even, a odd)."""
        return self.M % 2 == 0 and self.a % 2 == 1

    def excess_ok(self, excess: int) -> bool:
        if excess % self.M == 0:
            return True
        return self.half_classes and excess % self.M == self.M // 2


def _phik_core(lam: Partition, p: PairParams, k: int | None, columns: int):
    M, a, b = p.M, p.a, p.b
    try:
        Db, Dc, (nb, nc) = split_ends(lam, M, b)
    except ResidueViolation as exc:
        raise PreconditionViolation(str(exc)) from exc
    for D, top in ((Db, p.L - 1), (Dc, p.L - 1)):
        if D.num_rows and D.quotient(1) > top:
            raise PreconditionViolation(f"largest part of {lam} exceeds LM - b = {p.L * M - b}")
    m = nb + nc
    slice_k = min(nb, nc)
    if k is not None and k != slice_k:
        raise PreconditionViolation(f"{lam} lies in slice k={slice_k}, not k={k}")
    k = slice_k
    if nb == nc:
        parts = Db.with_ends(a) + Dc.with_ends(M - a)
        return Partition.from_parts(parts), CaseTag.SWAP
    excess = m - 2 * k
    if not p.excess_ok(excess):
        raise PreconditionViolation(f"m - 2k = {excess} is not in an admissible class mod {M}")
    y, ry = divmod((b - a) * excess, M)
    z, rz = divmod((M - b - a) * excess, M)
    assert ry == 0 and rz == 0 and 0 < y < m - k and 0 < z < m - k
    if nc == k:
        Db2 = attach_column(Db, y)
        parts = Db2.with_ends(a) + Dc.with_ends(M - a)
        tag = CaseTag.C1
    elif Dc.column_gap(y) < columns:
        Dc2 = attach_column(Dc, z)
        parts = Dc2.with_ends(a) + Db.with_ends(M - a)
        tag = CaseTag.C2A
    else:
        Dc2 = remove_column(Dc, y)
        parts = Db.with_ends(a) + Dc2.with_ends(M - a)
        tag = CaseTag.C2B
    return Partition.from_parts(parts), tag


def phik(lam: Partition, p: PairParams, k: int | None = None) -> tuple[Partition, CaseTag]:
    """The slice-k injection for fixed part count; ``k`` defaults to lam's slice."""
    return _phik_core(lam, p, k, 1)


def phik_distinct(lam: Partition, p: PairParams, k: int | None = None) -> tuple[Partition, CaseTag]:
    """Distinct-parts variant: Cases 2a/2b split on two columns of length y."""
    if not lam.is_distinct():
        raise PreconditionViolation(f"{lam} has repeated parts")
    mu, tag = _phik_core(lam, p, k, 2)
    if not mu.is_distinct():
        raise DistinctnessViolation(f"{lam} -> {mu} repeats a part")
    return mu, tag


def _class_gap_ok(lam: Partition, M: int, d: int) -> bool:
    if d == 0:
        return True
    last: dict[int, int] = {}
    for q in lam.parts:
        r = q % M
        if r in last and last[r] - q < d * M:
            return False
        last[r] = q
    return True


def phik_gap(lam: Partition, p: PairParams, k: int | None = None, d: int = 0) -> tuple[Partition, CaseTag]:
    """Gap variant: parts in one residue class differ by at least dM.

    Cases 2a/2b split on whether d+1 columns of length y are present, so
    d=0 is ``phik`` and d=1 is ``phik_distinct``.
    """
    if d < 0:
        raise ValueError("d must be >= 0")
    if not _class_gap_ok(lam, p.M, d):
        raise PreconditionViolation(f"{lam} violates the same-class gap {d}M")
    mu, tag = _phik_core(lam, p, k, d + 1)
    if not _class_gap_ok(mu, p.M, d):
        raise PreconditionViolation(f"{lam} -> {mu} breaks the same-class gap {d}M")
    return mu, tag


def phik_image_case(mu: Partition, p: PairParams, k: int | None = None, columns: int = 1) -> CaseTag:
    try:
        Da, Dc, (na, nc) = split_ends(mu, p.M, p.a)
    except ResidueViolation as exc:
        raise NotInImage(str(exc)) from exc
    slice_k = min(na, nc)
    if k is not None and k != slice_k:
        raise NotInImage(f"{mu} lies in slice k={slice_k}, not k={k}")
    if na == nc:
        return CaseTag.SWAP
    excess = na + nc - 2 * slice_k
    y, r = divmod((p.b - p.a) * excess, p.M)
    if r or y < 1:
        raise NotInImage(f"{mu}: column length {(p.b - p.a) * excess}/{p.M} is not a positive integer")
    if na > nc:
        return CaseTag.C1 if Da.column_gap(y) >= columns else CaseTag.C2A
    return CaseTag.C2B


# --------------------------------------------------------------------------
# domains


def t11_domain(p: T11Params, n: int) -> list[tuple[Partition, Partition]]:
    """Pairs (a-class parts, b-class parts) of total weight n.

    Pairs rather than merged partitions so that a = b (mod M) is handled as
    the two-coloured count that the product actually counts.
    """
    return _two_class(n, p.M, p.L, p.a, p.b)


def t11_codomain(p: T11Params, n: int) -> list[tuple[Partition, Partition]]:
    return _two_class(n, p.M, p.L, 1, p.c)


def _two_class(n: int, M: int, L: int, s: int, t: int) -> list[tuple[Partition, Partition]]:
    ps = frozenset(s + j * M for j in range(L))
    pt = frozenset(t + j * M for j in range(L))
    out = []
    for w in range(n, -1, -1):
        left = enumerate_partitions(w, Constraints(parts=ps))
        if not left:
            continue
        right = enumerate_partitions(n - w, Constraints(parts=pt))
        out.extend((x, y) for x in left for y in right)
    return out


def phik_domain(p: PairParams, n: int, m: int, k: int | None = None, d: int = 0,
                shift: int | None = None, top: int | None = None) -> list[Partition]:
    """Partitions of n into m parts = +-shift (mod M), largest part <= top,
    same-class parts at least dM apart; optionally restricted to slice k.

    Defaults describe the source side: shift b, top LM - b.
    """
    shift = p.b if shift is None else shift
    top = p.L * p.M - p.b if top is None else top
    c = Constraints(modulus=p.M, residues=frozenset({shift % p.M, (-shift) % p.M}),
                    max_part=top, num_parts=m, class_gap=d * p.M)
    lams = enumerate_partitions(n, c)
    if k is None:
        return lams
    out = []
    for lam in lams:
        nb = sum(1 for q in lam.parts if q % p.M == shift % p.M)
        if min(nb, m - nb) == k:
            out.append(lam)
    return out


# --------------------------------------------------------------------------
# audit harness


def _weight(x: Any) -> int:
    if isinstance(x, Partition):
        return x.weight
    if isinstance(x, MModularDiagram):
        return x.weight
    return sum(_weight(y) for y in x)


def _nparts(x: Any) -> int:
    if isinstance(x, Partition):
        return x.num_parts
    return sum(_nparts(y) for y in x)


def _fmt(x: Any) -> str:
    if isinstance(x, (Partition, MModularDiagram)):
        return str(x)
    if isinstance(x, tuple) and all(isinstance(y, Partition) for y in x):
        merged = Partition()
        for y in x:
            merged = merged + y
        return str(merged)
    return str(x)


def _to_json(x: Any):
    if isinstance(x, Partition):
        return x.to_list()
    if isinstance(x, tuple):
        return [_to_json(y) for y in x]
    return x


@dataclass
class Report:
    """Outcome of an exhaustive injection audit; failures are data."""

    domain_size: int = 0
    well_defined: bool = True
    weight_preserving: bool = True
    part_count_preserving: bool | None = None
    injective: bool = True
    case_histogram: Counter = field(default_factory=Counter)
    table: list[tuple[Any, str, Any]] = field(default_factory=list)
    failures: list[dict] = field(default_factory=list)
    collisions: list[tuple[Any, list[Any]]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return (self.well_defined and self.weight_preserving and self.injective
                and self.part_count_preserving is not False)

    def merge(self, other: Report) -> Report:
        """Combine audits of disjoint domain shards."""
        out = Report(
            domain_size=self.domain_size + other.domain_size,
            well_defined=self.well_defined and other.well_defined,
            weight_preserving=self.weight_preserving and other.weight_preserving,
            part_count_preserving=_and3(self.part_count_preserving, other.part_count_preserving),
            case_histogram=self.case_histogram + other.case_histogram,
            table=self.table + other.table,
            failures=self.failures + other.failures,
        )
        seen: dict[Hashable, list[Any]] = {}
        for pre, _, img in out.table:
            seen.setdefault(img, []).append(pre)
        out.collisions = [(img, pres) for img, pres in seen.items() if len(pres) > 1]
        out.injective = self.injective and other.injective and not out.collisions
        return out

    def to_dict(self, with_table: bool = True) -> dict:
        d = {
            "passed": self.passed,
            "domain_size": self.domain_size,
            "well_defined": self.well_defined,
            "weight_preserving": self.weight_preserving,
            "part_count_preserving": self.part_count_preserving,
            "injective": self.injective,
            "case_histogram": {str(k): v for k, v in sorted(self.case_histogram.items(), key=lambda kv: str(kv[0]))},
            "failures": self.failures,
            "collisions": [{"image": _to_json(img), "preimages": [_to_json(x) for x in pres]}
                           for img, pres in self.collisions],
        }
        if with_table:
            d["table"] = [{"preimage": _to_json(pre), "case": str(tag), "image": _to_json(img)}
                          for pre, tag, img in self.table]
        return d

    def render_table(self) -> str:
        """Mapping table as ``preimage ->case image``, one row per line."""
        rows = [(_fmt(pre), str(tag), _fmt(img)) for pre, tag, img in self.table]
        w = max((len(r[0]) for r in rows), default=0)
        return "".join(f"{pre.ljust(w)}  ->{tag}  {img}\n" for pre, tag, img in rows)


def _and3(x: bool | None, y: bool | None) -> bool | None:
    if x is None:
        return y
    if y is None:
        return x
    return x and y


def verify_injection(domain: Iterable[Any], fn: Callable[[Any], tuple[Any, Any]],
                     codomain_pred: Callable[[Any], bool] = lambda _: True, *,
                     check_part_count: bool = False,
                     classify: Callable[[Any], Any] | None = None) -> Report:
    """Run ``fn`` over a finite domain and record every proof obligation.

    ``fn`` returns ``(image, case_tag)``.  With ``classify`` the image-side
    case classifier is also checked against the tag.
    """
    rep = Report(part_count_preserving=True if check_part_count else None)
    seen: dict[Hashable, list[Any]] = {}
    for x in domain:
        rep.domain_size += 1
        try:
            img, tag = fn(x)
        except Exception as exc:  # a failed obligation is data, not a crash
            rep.well_defined = False
            rep.failures.append({"kind": "exception", "preimage": _to_json(x),
                                 "detail": f"{type(exc).__name__}: {exc}"})
            continue
        rep.table.append((x, tag, img))
        rep.case_histogram[str(tag)] += 1
        seen.setdefault(img, []).append(x)
        if not codomain_pred(img):
            rep.well_defined = False
            rep.failures.append({"kind": "codomain", "preimage": _to_json(x), "image": _to_json(img)})
        if _weight(img) != _weight(x):
            rep.weight_preserving = False
            rep.failures.append({"kind": "weight", "preimage": _to_json(x), "image": _to_json(img)})
        if check_part_count and _nparts(img) != _nparts(x):
            rep.part_count_preserving = False
            rep.failures.append({"kind": "part_count", "preimage": _to_json(x), "image": _to_json(img)})
        if classify is not None:
            try:
                back = classify(img)
            except Exception as exc:
                back = f"{type(exc).__name__}"
            if back != tag:
                rep.well_defined = False
                rep.failures.append({"kind": "case_separation", "preimage": _to_json(x),
                                     "image": _to_json(img), "tag": str(tag), "classified": str(back)})
    rep.collisions = [(img, pres) for img, pres in seen.items() if len(pres) > 1]
    rep.injective = not rep.collisions
    return rep
