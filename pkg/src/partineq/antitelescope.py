"""Anti-telescoping of product differences and the G_i recurrence.

For two families ``P(j) = (q^p1, q^p2, ...; q^M)_j`` and ``Q(j)`` likewise,

    1/P(L) - 1/Q(L) = sum_{j=1..L} [Q(j)/Q(j-1) - P(j)/P(j-1)] / (Q(L)/Q(j-1) * P(j))

and each summand can be inspected on its own.  The mod-12 family
``P = (q, q^4, q^11; q^12)``, ``Q = (q, q^7, q^8; q^12)`` also gets a
hand-cancelled closed form whose nonnegativity is visible from its shape.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .injections import Report, verify_injection
from .partitions import Constraints, Partition, enumerate_partitions
from .qseries import (
    DivisionError,
    Extra,
    ProductSpec,
    QPoly,
    expand,
    expand_generators,
    first_negative,
    pochhammer,
)

__all__ = [
    "TelescopeTerm",
    "anti_telescope",
    "KR_P",
    "KR_Q",
    "KR_MOD",
    "kr_term_certificate",
    "MismatchError",
    "GSequence",
    "g_sequence",
    "kr5_series",
    "kr5_injection_check",
]

KR_MOD = 12
KR_P = (1, 4, 11)
KR_Q = (1, 7, 8)


class MismatchError(AssertionError):
    pass


@dataclass(frozen=True)
class TelescopeTerm:
    j: int
    series: QPoly
    denominator: ProductSpec  # reciprocal product the bracket is divided by
    bracket: QPoly  # Q(j)/Q(j-1) - P(j)/P(j-1), a polynomial

    @property
    def lowest_degree(self) -> int | None:
        return self.series.valuation()


def _level(shifts: Sequence[int], M: int, j: int) -> list[int]:
    """Exponents of the level-j factors ``q^(s + (j-1)M)``."""
    return [s + (j - 1) * M for s in shifts]


def anti_telescope(P: ProductSpec, Q: ProductSpec, L: int, N: int) -> list[TelescopeTerm]:
    """The L summands of ``1/P(L) - 1/Q(L)`` truncated at N.

    Only the shifts and modulus of P and Q are used; their lengths are
    ignored in favour of L.
    """
    if P.modulus != Q.modulus:
        raise ValueError("P and Q need the same modulus")
    if L < 1:
        raise ValueError("L must be >= 1")
    M = P.modulus
    ps = [f.shift for f in P.factors]
    qs = [f.shift for f in Q.factors]
    terms = []
    for j in range(1, L + 1):
        bracket = pochhammer(_level(qs, M, j), N) - pochhammer(_level(ps, M, j), N)
        tail = tuple(Extra(e) for i in range(j, L + 1) for e in _level(qs, M, i))
        denom = ProductSpec(M, j, tuple(P.factors), tail)
        series = bracket * expand(denom, N)
        terms.append(TelescopeTerm(j, series, denom, bracket))
    return terms


def kr_term_certificate(j: int, L: int, N: int) -> tuple[QPoly, dict]:
    """Closed form of the j-th mod-12 term after the visible cancellations.

    The bracket equals ``q^(12(j-1)) q^4 (1-q^3)(1-q^4)`` times the shared
    factor ``(1 - q^(12j-11))``.  That factor and ``(1-q^4)`` cancel against
    the denominator, and ``(1-q^3)/(1-q) = 1+q+q^2`` uses up the ``(1-q)`` of
    P(j), leaving a reciprocal product times a polynomial with nonnegative
    coefficients.  The result is compared with the generic term.
    """
    if not 1 <= j <= L:
        raise ValueError("need 1 <= j <= L")
    M = KR_MOD
    denom = [e for i in range(j, L + 1) for e in _level(KR_Q, M, i)]
    denom += [e for i in range(1, j + 1) for e in _level(KR_P, M, i)]
    cancelled = [12 * j - 11, 4, 1]
    for e in cancelled:
        denom.remove(e)
    lead = 12 * (j - 1) + 4
    numer = QPoly.from_terms({lead: 1, lead + 1: 1, lead + 2: 1}, N)
    series = numer * expand_generators(((e, False, 1) for e in denom), N)

    generic = anti_telescope(ProductSpec.reciprocal(KR_P, M, L), ProductSpec.reciprocal(KR_Q, M, L), L, N)[j - 1]
    if series != generic.series:
        raise MismatchError(f"closed form and generic term differ at j={j}")
    neg = first_negative(series)
    cert = {
        "j": j,
        "lowest_degree": series.valuation(),
        "numerator": f"q^{lead}(1+q+q^2)",
        "cancelled_factors": [f"1-q^{12 * j - 11}", "1-q^4", "1-q (turns 1-q^3 into 1+q+q^2)"],
        "nonnegative": neg is None,
        "first_negative": None if neg is None else {"n": neg[1], "value": neg[2]},
    }
    return series, cert


# --------------------------------------------------------------------------
# G_i recurrence


@dataclass(frozen=True)
class GSequence:
    """``G_1, G_2`` and ``G_i = (G_{i-2} - G_{i-1}) / q^(i-2)``.

    ``truncs[i-1]`` is the degree to which ``G_i`` is actually known: each
    division by ``q^(i-2)`` costs that many degrees.
    """

    terms: tuple[QPoly, ...]
    N: int

    @property
    def truncs(self) -> tuple[int, ...]:
        return tuple(g.trunc for g in self.terms)

    def __getitem__(self, i: int) -> QPoly:
        """1-based access, ``seq[1]`` is G_1."""
        if i < 1:
            raise IndexError("G_i is indexed from 1")
        return self.terms[i - 1]

    def __len__(self) -> int:
        return len(self.terms)

    def hypothesis_violations(self) -> list[dict]:
        """Every way some G_i fails ``1 + sum_{n >= i} g_{i,n} q^n`` with g >= 0."""
        bad = []
        for i, g in enumerate(self.terms, start=1):
            if g[0] != 1:
                bad.append({"i": i, "n": 0, "value": g[0], "kind": "constant term"})
            for n in range(1, min(i, g.trunc + 1)):
                if g[n] != 0:
                    bad.append({"i": i, "n": n, "value": g[n], "kind": "low degree"})
            for n in range(i, g.trunc + 1):
                if g[n] < 0:
                    bad.append({"i": i, "n": n, "value": g[n], "kind": "negative"})
        return bad


def g_sequence(imax: int, N: int) -> GSequence:
    if imax < 2:
        raise ValueError("imax must be >= 2")
    if N < imax:
        raise ValueError("N must be >= imax")
    g1 = expand(ProductSpec.reciprocal((1, 4), 5, None), N)
    g2 = expand(ProductSpec.reciprocal((2, 3), 5, None), N)
    terms = [g1, g2]
    for i in range(3, imax + 1):
        diff = terms[i - 3] - terms[i - 2]
        try:
            terms.append(diff.divide_q(i - 2))
        except DivisionError as exc:
            raise DivisionError(f"G_{i}: {exc}") from exc
    return GSequence(tuple(terms), N)


# --------------------------------------------------------------------------
# the mod-4 pair with capped multiplicities


def kr5_series(residue: int, N: int) -> QPoly:
    """``1/(q^2;q^4)_inf * prod_n (1 + q^e + q^2e)`` over ``e = 4n + residue``."""
    c = list(expand(ProductSpec.reciprocal((2,), 4, None), N).coeffs)
    e = residue
    while e <= N:
        for n in range(N, e - 1, -1):
            c[n] += c[n - e] + (c[n - 2 * e] if n >= 2 * e else 0)
        e += 4
    return QPoly(c, N)


def _kr5_constraints(residue: int) -> Constraints:
    return Constraints(modulus=4, residues=frozenset({2, residue}), max_mult={residue: 2})


def _kr5_map(lam: Partition) -> tuple[Partition, str]:
    moved = [p for p in lam.parts if p % 4 == 3]
    kept = [p for p in lam.parts if p % 4 != 3]
    return Partition.from_parts(kept + [p - 2 for p in moved] + [2] * len(moved)), "move"


def kr5_injection_check(N: int, audit_weight: int = 40) -> dict:
    """Difference of the two mod-4 products plus an audit of ``4n+3 -> (4n+1, 2)``."""
    a = kr5_series(1, N)
    b = kr5_series(3, N)
    diff = a - b
    neg = first_negative(diff)
    W = min(N, audit_weight)
    src = _kr5_constraints(3)
    dst = _kr5_constraints(1)
    report = Report()
    counts_ok = True
    mismatches = []
    for w in range(W + 1):
        dom = enumerate_partitions(w, src)
        cod = enumerate_partitions(w, dst)
        if len(dom) != b[w] or len(cod) != a[w]:
            counts_ok = False
            mismatches.append({"n": w, "domain": len(dom), "series_b": b[w],
                               "codomain": len(cod), "series_a": a[w]})
        cod_set = set(cod)
        report = report.merge(verify_injection(dom, _kr5_map, cod_set.__contains__))
    return {
        "N": N,
        "difference_nonnegative": neg is None,
        "first_negative": None if neg is None else {"n": neg[1], "value": neg[2]},
        "audit_weight": W,
        "audit": report,
        "counts_match_series": counts_ok,
        "count_mismatches": mismatches,
        "passed": neg is None and report.passed and counts_ok,
    }
