"""Theorem checkers: series expansion, enumeration and injection audits side by side.

Every checker returns a :class:`CheckResult`.  Nonnegativity claims are
finite-degree certificates: "pass" means no negative coefficient in the
claimed classes up to the stated truncation.
"""

from __future__ import annotations

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from math import gcd
from typing import Any, Iterable, Sequence

from .antitelescope import KR_MOD, KR_P, KR_Q, anti_telescope, kr_term_certificate
from .injections import (
    PairParams,
    ParamViolation,
    Report,
    T11Params,
    phiL,
    phiL_image_case,
    phik_domain,
    phik_gap,
    phik_image_case,
    t11_domain,
    verify_injection,
)
from .partitions import Constraints, Partition, count_partitions, enumerate_partitions
from .qseries import (
    Extra,
    Factor,
    ProductSpec,
    QPoly,
    ZQPoly,
    _apply_zq,
    expand,
    first_negative,
)

__all__ = [
    "FAMILIES",
    "CheckResult",
    "TheoremParams",
    "run_check",
    "check_T11",
    "check_T12",
    "check_T13",
    "check_P21",
    "check_BG53",
    "check_BGrizzell",
    "check_KR",
    "t12_difference",
    "t13_difference",
    "claimed_residues",
    "remark_tuples",
    "search_remark",
]

log = logging.getLogger(__name__)

FAMILIES = ("T1.1", "T1.2", "T1.3", "P2.1", "BG5.3", "BGrizzell", "KR3.1", "KR3.2")


@dataclass
class CheckResult:
    family: str
    params: dict
    status: str  # "pass", "fail" or "inconclusive"
    N: int
    first_violation: tuple[int | None, int, int] | None = None
    residues_checked: list[int] | None = None
    expected_known: bool = False
    notes: list[str] = field(default_factory=list)
    details: dict = field(default_factory=dict)
    elapsed: float = 0.0

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_dict(self, timing: bool = False) -> dict:
        fv = None
        if self.first_violation is not None:
            m, n, v = self.first_violation
            fv = {"m": m, "n": n, "value": v}
        d = {
            "family": self.family,
            "params": self.params,
            "status": self.status,
            "passed": self.passed,
            "N": self.N,
            "first_violation": fv,
            "residues_checked": self.residues_checked,
            "expected_known": self.expected_known,
            "notes": self.notes,
            "details": _jsonable(self.details),
        }
        if timing:
            d["elapsed"] = round(self.elapsed, 3)
        return d


def _jsonable(x: Any):
    if isinstance(x, Report):
        return x.to_dict(with_table=False)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, Partition):
        return x.to_list()
    return x


def _status(ok: bool) -> str:
    return "pass" if ok else "fail"


# --------------------------------------------------------------------------
# product-difference nonnegativity with a phiL audit


def _t11_cod_pred(p: T11Params):
    ones = frozenset(1 + j * p.M for j in range(p.L))
    cs = frozenset(p.c + j * p.M for j in range(p.L))

    def pred(mu) -> bool:
        m1, mc = mu
        return all(x in ones for x in m1.parts) and all(x in cs for x in mc.parts)

    return pred


def audit_t11(p: T11Params, W: int, left: QPoly, right: QPoly, diff: QPoly,
              corrected: bool = True) -> dict:
    """Exhaustive phiL audit for weights <= W, cross-checked against the series."""
    pred = _t11_cod_pred(p)
    cnt1 = count_partitions(W, Constraints(parts=frozenset(1 + j * p.M for j in range(p.L))))
    cntc = count_partitions(W, Constraints(parts=frozenset(p.c + j * p.M for j in range(p.L))))
    report = Report()
    disagreements = []
    for w in range(W + 1):
        dom = t11_domain(p, w)
        rep = verify_injection(dom, lambda x: phiL(x, p, corrected), pred,
                               classify=lambda mu: phiL_image_case(mu, p))
        report = report.merge(rep)
        images = len({img for _, _, img in rep.table})
        cod = sum(cnt1[i] * cntc[w - i] for i in range(w + 1))
        if not (right[w] == len(dom) and left[w] == cod and diff[w] == cod - images):
            disagreements.append({"n": w, "series_left": left[w], "series_right": right[w],
                                  "codomain_count": cod, "domain_count": len(dom), "images": images})
    report.table = []  # the full table is only wanted for single examples
    return {"audit_weight": W, "audit": report, "count_disagreements": disagreements,
            "counts_agree": not disagreements}


def check_T11(a: int, b: int, c: int, M: int, L: int, N: int = 120, audit_weight: int = 50,
              audit: bool = True) -> CheckResult:
    t0 = time.perf_counter()
    p = T11Params(a, b, c, M, L)
    left = expand(ProductSpec.reciprocal((1, c), M, L), N)
    right = expand(ProductSpec.reciprocal((a, b), M, L), N)
    diff = left - right
    neg = first_negative(diff)
    res = CheckResult("T1.1", {"a": a, "b": b, "c": c, "M": M, "L": L}, _status(neg is None), N,
                      first_violation=neg)
    if p.divides:
        res.notes.append(f"a={a} divides b={b}: outside the hypotheses, negative coefficients are expected")
        res.expected_known = neg is not None
    elif audit and L > 0:
        W = min(N, audit_weight)
        info = audit_t11(p, W, left, right, diff)
        res.details.update(info)
        if not (info["audit"].passed and info["counts_agree"]):
            res.status = "fail"
    res.elapsed = time.perf_counter() - t0
    return res


# --------------------------------------------------------------------------
# two-variable differences with a fixed number of parts


def claimed_residues(a: int, M: int) -> list[int]:
    """q-degree classes mod M on which nonnegativity is asserted."""
    out = [0]
    if M % 2 == 0 and a % 2 == 1:
        out.append(M // 2)
    return out


def t12_difference(a: int, b: int, M: int, L: int, N: int, extra: str = "z") -> ZQPoly:
    """``1/((zq^a, zq^(M-a); q^M)_L (1 - X q^(LM+a))) - 1/(zq^b, zq^(M-b); q^M)_L``.

    ``extra`` picks X: ``"z"`` (X = z), ``"plain"`` (X = 1) or ``"none"`` (no
    extra factor at all).
    """
    if extra not in ("z", "plain", "none"):
        raise ValueError(f"unknown extra mode {extra!r}")
    extras = () if extra == "none" else (Extra(L * M + a, extra == "z", 1),)
    left = ProductSpec(M, L, (Factor(a, True), Factor(M - a, True)), extras)
    right = ProductSpec.reciprocal((b, M - b), M, L, z=True)
    return expand(left, N) - expand(right, N)


def t13_difference(a: int, b: int, M: int, L: int, N: int, extra: bool = True) -> ZQPoly:
    """``(-zq^a, -zq^(M-a); q^M)_L (1 + zq^(LM+a)) - (-zq^b, -zq^(M-b); q^M)_L``."""
    extras = (Extra(L * M + a, True, -1),) if extra else ()
    left = ProductSpec(M, L, (Factor(a, True, -1), Factor(M - a, True, -1)), extras)
    right = ProductSpec.distinct((b, M - b), M, L, z=True)
    return expand(left, N) - expand(right, N)


def _class_negatives(D: ZQPoly, M: int, residues: Sequence[int]):
    claimed, other = [], []
    for (m, n), v in D.items():
        if v < 0:
            (claimed if n % M in residues else other).append((m, n, v))
    claimed.sort(key=lambda t: (t[1], t[0]))
    other.sort(key=lambda t: (t[1], t[0]))
    return claimed, other


def audit_phik(p: PairParams, W: int, d: int, residues: Sequence[int],
               left: ZQPoly | None = None, right: ZQPoly | None = None) -> dict:
    """Per-slice audits of the gap-d injection on every claimed weight <= W.

    When series are passed, domain and codomain counts are compared with
    them coefficient by coefficient.
    """
    M = p.M
    top_dst = p.L * M + p.a
    report = Report()
    per_slice = []
    disagreements = []
    for w in range(W + 1):
        if w % M not in residues:
            continue
        for m in range(w + 1):
            src = phik_domain(p, w, m, d=d)
            dst = phik_domain(p, w, m, d=d, shift=p.a, top=top_dst)
            if left is not None and (left.coeff(m, w) != len(dst) or right.coeff(m, w) != len(src)):
                disagreements.append({"m": m, "n": w, "series_left": left.coeff(m, w), "codomain": len(dst),
                                      "series_right": right.coeff(m, w), "domain": len(src)})
            if not src:
                continue
            dst_set = set(dst)
            for k in range(m // 2 + 1):
                dom = [lam for lam in src if min(_nu(lam, p.b, M), m - _nu(lam, p.b, M)) == k]
                if not dom:
                    continue
                rep = verify_injection(
                    dom, lambda lam, k=k: phik_gap(lam, p, k, d),
                    lambda mu, k=k: mu in dst_set and min(_nu(mu, p.a, M), m - _nu(mu, p.a, M)) == k
                    and mu.largest <= top_dst,
                    check_part_count=True,
                    classify=lambda mu, k=k: phik_image_case(mu, p, k, columns=d + 1),
                )
                per_slice.append({"n": w, "m": m, "k": k, "size": rep.domain_size, "passed": rep.passed})
                rep.table = []
                report = report.merge(rep)
    return {"audit_weight": W, "audit": report, "slices": len(per_slice),
            "failed_slices": [s for s in per_slice if not s["passed"]],
            "count_disagreements": disagreements, "counts_agree": not disagreements}


def _nu(lam: Partition, j: int, M: int) -> int:
    return sum(1 for x in lam.parts if x % M == j % M)


def _check_pair(family: str, a: int, b: int, M: int, L: int, N: int, audit_weight: int | None,
                extra: str = "z") -> CheckResult:
    t0 = time.perf_counter()
    p = PairParams(a, b, M, L)
    residues = claimed_residues(a, M)
    if family == "T1.2":
        D = t12_difference(a, b, M, L, N, extra)
        d = 0
    else:
        D = t13_difference(a, b, M, L, N, extra != "none")
        d = 1
    claimed, other = _class_negatives(D, M, residues)
    params = {"a": a, "b": b, "M": M, "L": L}
    if family == "T1.2":
        params["extra"] = extra
    elif extra == "none":
        params["extra"] = "none"
    res = CheckResult(family, params, _status(not claimed), N,
                      first_violation=claimed[0] if claimed else None, residues_checked=residues)
    res.details["off_class_negatives"] = len(other)
    if other:
        res.notes.append(f"{len(other)} negative coefficients outside the claimed classes (not asserted)")
    if family == "T1.2" and extra != "z":
        res.notes.append("extra factor without z: part counts of the injection's codomain are not matched; "
                         "negatives here are a property of the printed form, not of the injection")
        res.expected_known = bool(claimed)
    if audit_weight and extra == "z":
        W = min(N, audit_weight)
        # the bivariate expansion doubles as the counting oracle for the slices
        if family == "T1.2":
            Dl = expand(ProductSpec(M, L, (Factor(a, True), Factor(M - a, True)), (Extra(L * M + a, True),)), W)
            Dr = expand(ProductSpec.reciprocal((b, M - b), M, L, z=True), W)
        else:
            Dl = expand(ProductSpec(M, L, (Factor(a, True, -1), Factor(M - a, True, -1)),
                                    (Extra(L * M + a, True, -1),)), W)
            Dr = expand(ProductSpec.distinct((b, M - b), M, L, z=True), W)
        info = audit_phik(p, W, d, residues, Dl, Dr)
        res.details.update(info)
        if not (info["audit"].passed and info["counts_agree"]):
            res.status = "fail"
    res.elapsed = time.perf_counter() - t0
    return res


def check_T12(a: int, b: int, M: int, L: int, N: int = 120, audit_weight: int | None = None,
              extra: str = "z") -> CheckResult:
    """Fixed-part-count inequality; ``c(m, n) >= 0`` for n in the claimed classes."""
    return _check_pair("T1.2", a, b, M, L, N, audit_weight, extra)


def check_T13(a: int, b: int, M: int, L: int, N: int = 120, audit_weight: int | None = None,
              extra: bool = True) -> CheckResult:
    """Distinct-parts analogue, ``d(m, n) >= 0`` in the claimed classes."""
    return _check_pair("T1.3", a, b, M, L, N, audit_weight, "z" if extra else "none")


def check_P21(a: int, b: int, M: int, L: int, d: int, bound: int = 45, gap_mode: str = "class",
              audit: bool = True) -> CheckResult:
    """Gap-restricted counts compared by enumeration (no product form exists).

    ``gap_mode="class"``: parts in one residue class differ by at least dM
    (d=0 unrestricted, d=1 distinct).  ``gap_mode="global"``: all successive
    parts differ by more than dM; counts only, no injection is claimed.
    """
    t0 = time.perf_counter()
    if d < 0:
        raise ParamViolation("d must be >= 0")
    if gap_mode not in ("class", "global"):
        raise ValueError(f"unknown gap mode {gap_mode!r}")
    p = PairParams(a, b, M, L)
    residues = claimed_residues(a, M)
    viol = []
    for w in range(bound + 1):
        if w % M not in residues:
            continue
        for m in range(w + 1):
            A = _p_d(w, m, a, L * M + a, M, d, gap_mode)
            B = _p_d(w, m, b, L * M - b, M, d, gap_mode)
            if A < B:
                viol.append((m, w, A - B))
    viol.sort(key=lambda t: (t[1], t[0]))
    res = CheckResult("P2.1", {"a": a, "b": b, "M": M, "L": L, "d": d, "gap_mode": gap_mode},
                      _status(not viol), bound, first_violation=viol[0] if viol else None,
                      residues_checked=residues)
    if audit and gap_mode == "class":
        info = audit_phik(p, bound, d, residues)
        res.details.update(info)
        if not info["audit"].passed:
            res.status = "fail"
    res.elapsed = time.perf_counter() - t0
    return res


def _p_d(n: int, m: int, shift: int, top: int, M: int, d: int, mode: str) -> int:
    res = frozenset({shift % M, (-shift) % M})
    if mode == "class":
        c = Constraints(M, res, top, m, class_gap=d * M)
    else:
        c = Constraints(M, res, top, m, min_gap=d * M)
    return len(enumerate_partitions(n, c))


# --------------------------------------------------------------------------
# quoted families


def check_BG53(r: int, M: int, L: int, N: int = 120) -> CheckResult:
    """``1/(q, q^(M-1); q^M)_L - 1/(q^r, q^(M-r); q^M)_L``, nonnegative iff r does not divide M-r."""
    t0 = time.perf_counter()
    if not (1 <= r and 2 * r < M):
        raise ParamViolation(f"need 1 <= r < M/2, got r={r}, M={M}")
    if L < 1:
        raise ParamViolation("need L >= 1")
    diff = expand(ProductSpec.reciprocal((1, M - 1), M, L), N) - expand(ProductSpec.reciprocal((r, M - r), M, L), N)
    neg = first_negative(diff)
    params = {"r": r, "M": M, "L": L}
    expect_nonneg = (M - r) % r != 0
    if r == 1:
        res = CheckResult("BG5.3", params, _status(neg is None), N, first_violation=neg)
        res.notes.append("r = 1: both products coincide, the difference is identically zero")
    elif expect_nonneg:
        res = CheckResult("BG5.3", params, _status(neg is None), N, first_violation=neg)
    else:
        res = CheckResult("BG5.3", params, "pass" if neg else "inconclusive", N)
        res.details["expected_negative"] = True
        res.details["witness"] = None if neg is None else {"n": neg[1], "value": neg[2]}
        if neg is None:
            res.notes.append(f"r divides M-r but no negative coefficient up to q^{N}")
    res.elapsed = time.perf_counter() - t0
    return res


def check_BGrizzell(octuple: Sequence[int], N: int = 120) -> CheckResult:
    t0 = time.perf_counter()
    if len(octuple) != 8 or any(int(v) < 1 for v in octuple):
        raise ParamViolation(f"need eight positive integers, got {list(octuple)}")
    L, m, x, y, z, r, s, u = (int(v) for v in octuple)
    left = expand(ProductSpec.reciprocal((x, y, z, r * x + s * y + u * z), m, L), N)
    right = expand(ProductSpec.reciprocal((r * x, s * y, u * z, x + y + z), m, L), N)
    neg = first_negative(left - right)
    res = CheckResult("BGrizzell", dict(zip("L m x y z r s u".split(), (L, m, x, y, z, r, s, u))),
                      _status(neg is None), N, first_violation=neg)
    res.elapsed = time.perf_counter() - t0
    return res


KR31_LEFT = (1, 4, 5, 9, 11)
KR31_RIGHT = (1, 5, 7, 8, 9)
KR32_LEFT = (1, 3, 7, 8, 11)
KR32_RIGHT = (3, 4, 5, 7, 11)


def check_KR(which: str, N: int = 300) -> CheckResult:
    """Mod-12 product differences, by direct expansion and by the proof route.

    ``"3.1"`` goes through anti-telescoping of ``(q, q^4, q^11)`` against
    ``(q, q^7, q^8)`` times ``1/(q^5, q^9; q^12)_inf``.  ``"3.2"`` multiplies the
    finite difference for ``(a, b, c, M) = (4, 5, 8, 12)`` by
    ``1/(q^3, q^7, q^11; q^12)_inf``.
    """
    t0 = time.perf_counter()
    which = str(which)
    M = KR_MOD
    L = max(1, (N - 1) // M + 1)  # every generator <= N is included
    if which == "3.1":
        direct = expand(ProductSpec.reciprocal(KR31_LEFT, M, None), N) - expand(ProductSpec.reciprocal(KR31_RIGHT, M, None), N)
        terms = anti_telescope(ProductSpec.reciprocal(KR_P, M, L), ProductSpec.reciprocal(KR_Q, M, L), L, N)
        total = QPoly.zero(N)
        bad_terms = []
        for t in terms:
            total = total + t.series
            if first_negative(t.series) is not None:
                bad_terms.append(t.j)
        route = total * expand(ProductSpec.reciprocal((5, 9), M, None), N)
        route_ok = not bad_terms
        details = {"route": "anti-telescoping", "L": L, "negative_terms": bad_terms}
    elif which == "3.2":
        direct = expand(ProductSpec.reciprocal(KR32_LEFT, M, None), N) - expand(ProductSpec.reciprocal(KR32_RIGHT, M, None), N)
        finite = check_T11(4, 5, 8, M, L, N, audit=False)
        fdiff = expand(ProductSpec.reciprocal((1, 8), M, L), N) - expand(ProductSpec.reciprocal((4, 5), M, L), N)
        route = fdiff * expand(ProductSpec.reciprocal((3, 7, 11), M, None), N)
        route_ok = finite.passed
        details = {"route": "finite difference (4,5,8,12) times 1/(q^3,q^7,q^11;q^12)_inf", "L": L,
                   "finite_difference_nonnegative": finite.passed}
    else:
        raise ParamViolation(f"unknown KR inequality {which!r}; use 3.1 or 3.2")
    neg = first_negative(direct)
    agree = route == direct
    details.update({"direct_nonnegative": neg is None, "route_nonnegative": first_negative(route) is None,
                    "route_equals_direct": agree})
    ok = neg is None and route_ok and agree and first_negative(route) is None
    res = CheckResult(f"KR{which}", {"which": which}, _status(ok), N, first_violation=neg, details=details)
    res.elapsed = time.perf_counter() - t0
    return res


# --------------------------------------------------------------------------
# distinct-parts search without the extra factor


def remark_tuples(max_M: int) -> list[tuple[int, int, int]]:
    """All (a, b, M) with 1 <= a < b < M/2, gcd(b, M) = 1 and M <= max_M."""
    out = []
    for M in range(1, max_M + 1):
        for b in range(1, M):
            if 2 * b >= M or gcd(b, M) != 1:
                continue
            for a in range(1, b):
                out.append((a, b, M))
    return out


def _remark_one(args: tuple[int, int, int, int, int]) -> list[tuple[int, int, int, int, int, int, int]]:
    a, b, M, max_L, N = args
    left: dict[int, list[int]] = {0: [1] + [0] * N}
    right: dict[int, list[int]] = {0: [1] + [0] * N}
    found = []
    prev: list[tuple[int, int, int]] | None = None
    for L in range(1, max_L + 1):
        base = (L - 1) * M
        new = [e for e in (base + a, base + M - a, base + b, base + M - b) if e <= N]
        if new or prev is None:
            for e in (base + a, base + M - a):
                if e <= N:
                    _apply_zq(left, e, -1, N)
            for e in (base + b, base + M - b):
                if e <= N:
                    _apply_zq(right, e, -1, N)
            negs = []
            for m in sorted(set(left) | set(right)):
                lr = left.get(m)
                rr = right.get(m)
                for n in range(0, N + 1, M):
                    v = (lr[n] if lr else 0) - (rr[n] if rr else 0)
                    if v < 0:
                        negs.append((m, n, v))
            prev = negs
        found.extend((a, b, M, L, m, n, v) for m, n, v in prev)
    return found


def search_remark(max_M: int, max_L: int, max_nM: int, workers: int = 1) -> list[dict]:
    """Every negative ``d'(m, nM)`` of the distinct-parts difference without
    its extra factor, over all admissible (a, b, M) and 1 <= L <= max_L.

    Sorted by (M, a, b, L, n, m) regardless of ``workers``.
    """
    if max_M < 1 or max_L < 1 or max_nM < 0:
        return []
    jobs = [(a, b, M, max_L, max_nM) for a, b, M in remark_tuples(max_M)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_remark_one, jobs))
    else:
        chunks = []
        for i, job in enumerate(jobs, 1):
            chunks.append(_remark_one(job))
            log.info("search: %d/%d tuples done (a,b,M)=%s", i, len(jobs), job[:3])
    rows = [r for chunk in chunks for r in chunk]
    rows.sort(key=lambda r: (r[2], r[0], r[1], r[3], r[5], r[4]))
    return [{"a": a, "b": b, "M": M, "L": L, "m": m, "n": n, "value": v} for a, b, M, L, m, n, v in rows]


# --------------------------------------------------------------------------
# dispatcher


@dataclass(frozen=True)
class TheoremParams:
    """One checker invocation, as the CLI sees it."""

    family: str
    N: int = 120
    a: int | None = None
    b: int | None = None
    c: int | None = None
    M: int | None = None
    L: int | None = None
    d: int | None = None
    r: int | None = None
    octuple: tuple[int, ...] | None = None
    which: str | None = None
    extra: str = "z"
    gap_mode: str = "class"
    audit_weight: int | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ParamViolation(f"unknown family {self.family!r}; choose from {', '.join(FAMILIES)}")
        if self.N < 0:
            raise ParamViolation("N must be >= 0")
        need = {
            "T1.1": ("a", "b", "c", "M", "L"),
            "T1.2": ("a", "b", "M", "L"),
            "T1.3": ("a", "b", "M", "L"),
            "P2.1": ("a", "b", "M", "L", "d"),
            "BG5.3": ("r", "M", "L"),
            "BGrizzell": ("octuple",),
            "KR3.1": (),
            "KR3.2": (),
        }[self.family]
        missing = [k for k in need if getattr(self, k) is None]
        if missing:
            raise ParamViolation(f"{self.family} needs {', '.join('--' + k for k in missing)}")


def run_check(tp: TheoremParams) -> CheckResult:
    f = tp.family
    if f == "T1.1":
        return check_T11(tp.a, tp.b, tp.c, tp.M, tp.L, tp.N,
                         audit_weight=50 if tp.audit_weight is None else tp.audit_weight)
    if f == "T1.2":
        return check_T12(tp.a, tp.b, tp.M, tp.L, tp.N, tp.audit_weight, tp.extra)
    if f == "T1.3":
        return check_T13(tp.a, tp.b, tp.M, tp.L, tp.N, tp.audit_weight, tp.extra != "none")
    if f == "P2.1":
        return check_P21(tp.a, tp.b, tp.M, tp.L, tp.d, tp.N, tp.gap_mode)
    if f == "BG5.3":
        return check_BG53(tp.r, tp.M, tp.L, tp.N)
    if f == "BGrizzell":
        return check_BGrizzell(tp.octuple, tp.N)
    return check_KR(f[2:], tp.N)
