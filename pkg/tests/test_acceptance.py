"""Acceptance criteria, one test each.

Each criterion prints ``ACCEPTANCE <k> PASS|FAIL: <detail>`` in the pytest
terminal summary; ``python3 tests/test_acceptance.py`` prints the same lines.
"""

from __future__ import annotations

import pathlib
import time

import pytest

from partineq.antitelescope import KR_MOD, KR_P, KR_Q, anti_telescope, g_sequence, kr_term_certificate
from partineq.cli import example_2_1_audit, render_example_2_1
from partineq.inequalities import (
    KR31_LEFT,
    KR31_RIGHT,
    KR32_LEFT,
    KR32_RIGHT,
    check_KR,
    check_P21,
    check_T11,
    check_T12,
    check_T13,
    remark_tuples,
    search_remark,
    t12_difference,
)
from partineq.partitions import tally_generator_multisets
from partineq.qseries import Extra, Factor, ProductSpec, QPoly, expand, first_negative, generators, pochhammer, rr_sum_side

GOLDEN = pathlib.Path(__file__).parent / "golden" / "example_2_1.txt"
RESULTS: dict[int, tuple[bool, str]] = {}


def record(k: int, ok: bool, detail: str) -> None:
    RESULTS[k] = (ok, detail)
    print(f"ACCEPTANCE {k} {'PASS' if ok else 'FAIL'}: {detail}")


def t11_tuples(max_M: int = 12):
    for M in range(1, max_M + 1):
        for c in range(3, 2 * M + 1):
            for a in range(2, c):
                b = 1 + c - a
                if a < b < c and b % a:
                    yield a, b, c, M


# --------------------------------------------------------------------------


def criterion_1():
    t0 = time.perf_counter()
    table = render_example_2_1()
    rep = example_2_1_audit()
    dt = time.perf_counter() - t0
    ok = table == GOLDEN.read_text() and rep.passed and rep.domain_size == 23 and dt < 1.0
    return ok, f"phi_L table at (52,10,2,4,6,9): {rep.domain_size} rows, golden match {table == GOLDEN.read_text()}, {dt:.2f}s"


def criterion_2():
    f = expand(ProductSpec.reciprocal((1, 5), 6, 1), 10) - expand(ProductSpec.reciprocal((2, 4), 6, 1), 10)
    return f[4] == -1, f"coefficient of q^4 is {f[4]}"


def criterion_3():
    D = t12_difference(2, 3, 7, 2, 70, extra="none")
    ms = sorted(m for (m, n), v in D.items() if n == 70 and m <= 20 and v < 0)
    return ms == [7, 13, 16, 18], f"negative z^m q^70 (m <= 20) at m = {ms}"


def criterion_4():
    t0 = time.perf_counter()
    scaled = {(r["a"], r["b"], r["M"]) for r in search_remark(8, 8, 120)}
    t_scaled = time.perf_counter() - t0
    t0 = time.perf_counter()
    full_rows = search_remark(12, 20, 250)
    t_full = time.perf_counter() - t0
    full = sorted({(r["a"], r["b"], r["M"]) for r in full_rows}, key=lambda t: (t[2], t))
    ok = scaled == {(1, 2, 5)} and t_scaled < 120 and full == [(1, 2, 5)] and t_full < 1800
    return ok, (f"scaled (8,8,120): {sorted(scaled)} in {t_scaled:.1f}s; "
                f"full (12,20,250): {full} in {t_full:.1f}s")


def criterion_5():
    n = bad = 0
    first = None
    for a, b, c, M in t11_tuples():
        for L in (1, 2, 3):
            r = check_T11(a, b, c, M, L, 120, audit_weight=50)
            n += 1
            if not (r.passed and r.details["counts_agree"] and r.details["audit"].passed):
                bad += 1
                first = first or (a, b, c, M, L)
    return bad == 0, f"{n} instances (M <= 12, c <= 2M, L <= 3), failures {bad}, first {first}"


def criterion_6():
    n = 0
    bad = []
    for a, b, M in remark_tuples(9):
        for L in (1, 2, 3):
            runs = [check_T12(a, b, M, L, 45, audit_weight=45), check_T13(a, b, M, L, 45, audit_weight=45)]
            runs += [check_P21(a, b, M, L, d, 45) for d in (0, 1, 2)]
            for r in runs:
                n += 1
                if not r.passed:
                    bad.append((r.family, a, b, M, L, r.params.get("d")))
    return not bad, f"{n} checks over (a,b,M) with M <= 9, L <= 3, d <= 2, weights <= 45; failures {bad[:3]}"


def criterion_7():
    N = 300
    ok = True
    for L in range(1, 11):
        P, Q = ProductSpec.reciprocal(KR_P, KR_MOD, L), ProductSpec.reciprocal(KR_Q, KR_MOD, L)
        terms = anti_telescope(P, Q, L, N)
        total = QPoly.zero(N)
        for t in terms:
            total = total + t.series
            ok &= first_negative(t.series) is None
        ok &= total == expand(P, N) - expand(Q, N)
    for j in range(1, 11):
        _, cert = kr_term_certificate(j, 10, N)  # raises on mismatch
        ok &= cert["nonnegative"]
    bracket = QPoly.from_terms({4: 1, 7: -1, 8: -1, 11: 1}, 20)
    ok &= bracket == QPoly.monomial(4, 20) * pochhammer([3, 4], 20)
    return ok, "L = 1..10, N = 300: sums exact, terms nonnegative, closed forms match, bracket identity exact"


def criterion_8():
    details = []
    ok = True
    for which in ("3.1", "3.2"):
        t0 = time.perf_counter()
        r = check_KR(which, 300)
        dt = time.perf_counter() - t0
        ok &= r.passed and dt < 60
        details.append(f"KR{which} {r.status} in {dt:.1f}s")
    return ok, "; ".join(details)


def criterion_9():
    G = g_sequence(20, 300)
    rec = True
    for i in range(3, 21):
        rhs = G[i - 2] - G[i - 1]
        lhs = QPoly([0] * (i - 2) + list(G[i].coeffs), G[i].trunc + i - 2)
        rec &= lhs == rhs
    viol = G.hypothesis_violations()
    return rec and not viol, f"i <= 20, G_20 certified to q^{G[20].trunc}, recurrence exact {rec}, violations {len(viol)}"


def _used_specs():
    specs = {ProductSpec.reciprocal((1, 5), 6, 1), ProductSpec.reciprocal((2, 4), 6, 1)}
    for s in ((1, 4), (2, 3)):
        specs.add(ProductSpec.reciprocal(s, 5, None))
    for s in (KR31_LEFT, KR31_RIGHT, KR32_LEFT, KR32_RIGHT, (5, 9), (3, 7, 11)):
        specs.add(ProductSpec.reciprocal(s, 12, None))
    for L in range(1, 11):
        specs.add(ProductSpec.reciprocal(KR_P, KR_MOD, L))
        specs.add(ProductSpec.reciprocal(KR_Q, KR_MOD, L))
    for a, b, c, M in t11_tuples():
        for L in (1, 2, 3):
            specs.add(ProductSpec.reciprocal((1, c), M, L))
            specs.add(ProductSpec.reciprocal((a, b), M, L))
    for a, b, M in remark_tuples(12):
        for L in range(1, 21):
            specs.add(ProductSpec.distinct((a, M - a), M, L, z=True))
            specs.add(ProductSpec.distinct((b, M - b), M, L, z=True))
            if M <= 9 and L <= 3:
                specs.add(ProductSpec.reciprocal((b, M - b), M, L, z=True))
                specs.add(ProductSpec(M, L, (Factor(a, True), Factor(M - a, True)), (Extra(L * M + a, True),)))
                specs.add(ProductSpec(M, L, (Factor(a, True, -1), Factor(M - a, True, -1)), (Extra(L * M + a, True, -1),)))
    specs.add(ProductSpec.reciprocal((2, 5), 7, 2, z=True))
    specs.add(ProductSpec.reciprocal((3, 4), 7, 2, z=True))
    return specs


def criterion_10():
    N = 40
    specs = _used_specs()
    bad = []
    for spec in sorted(specs, key=lambda s: s.dumps()):
        f = expand(spec, N)
        tally = tally_generator_multisets(generators(spec, N), N)
        if spec.bivariate:
            got = {k: v for k, v in f.items() if v}
        else:
            got = {(0, n): v for n, v in enumerate(f.coeffs) if v}
        if got != {k: v for k, v in tally.items() if v}:
            bad.append(spec.dumps())
    return not bad, f"{len(specs)} distinct products vs brute-force multiset enumeration to weight {N}; mismatches {len(bad)}"


def criterion_11():
    N = 200
    s1, s2 = rr_sum_side(1, N), rr_sum_side(2, N)
    ok1 = s1 == expand(ProductSpec.reciprocal((1, 4), 5, None), N)
    ok2 = s2 == expand(ProductSpec.reciprocal((2, 3), 5, None), N)
    nonneg = first_negative(s1 - s2) is None
    return ok1 and ok2 and nonneg, f"N = 200: sum = product for v=1 {ok1}, v=2 {ok2}; difference nonnegative {nonneg}"


CRITERIA = {k: globals()[f"criterion_{k}"] for k in range(1, 12)}


@pytest.mark.parametrize("k", sorted(CRITERIA))
def test_acceptance(k):
    ok, detail = CRITERIA[k]()
    record(k, ok, detail)
    assert ok, detail


if __name__ == "__main__":
    for k in sorted(CRITERIA):
        record(k, *CRITERIA[k]())
