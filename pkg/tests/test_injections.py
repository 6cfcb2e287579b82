import pytest

from partineq.injections import (
    CaseTag,
    DistinctnessViolation,
    NotInImage,
    PairParams,
    ParamViolation,
    PreconditionViolation,
    T11Params,
    phi1,
    phi1_image_case,
    phiL,
    phiL_image_case,
    phik,
    phik_distinct,
    phik_domain,
    phik_gap,
    phik_image_case,
    t11_codomain,
    t11_domain,
    verify_injection,
)
from partineq.partitions import Partition

P = Partition.from_parts


def test_params_validation():
    with pytest.raises(ParamViolation):
        T11Params(2, 4, 6)  # 1 + c != a + b
    with pytest.raises(ParamViolation):
        T11Params(3, 2, 4)
    assert T11Params(4, 6, 9, 10, 2).d == 2
    with pytest.raises(ParamViolation):
        T11Params(2, 4, 5, 6, 1).require_injective_regime()
    with pytest.raises(ParamViolation):
        PairParams(2, 3, 6)  # gcd(b, M) != 1
    with pytest.raises(ParamViolation):
        PairParams(1, 3, 5)  # b >= M/2


@pytest.mark.parametrize("a,b,c", [(4, 6, 9), (3, 5, 7), (2, 5, 6), (4, 9, 12), (6, 9, 14)])
def test_phi1_cases_disjoint_and_injective(a, b, c):
    p = T11Params(a, b, c)
    seen = {}
    for k in range(61):
        for l in range(61):
            nu1, nuc, tag = phi1(k, l, p)
            assert nu1 + c * nuc == a * k + b * l
            assert phi1_image_case(nu1, nuc, p) == tag
            assert (nu1, nuc) not in seen, (k, l, seen.get((nu1, nuc)))
            seen[(nu1, nuc)] = (k, l)


def test_uncorrected_map_collides():
    p = T11Params(4, 6, 9, 10, 2)
    x, y = P([4] * 7 + [6] * 4), P([4] * 4 + [6] * 6)
    assert phiL(x, p, corrected=False)[0] == phiL(y, p, corrected=False)[0] == P([1] * 16 + [9] * 4)
    assert phiL(x, p) == (P([1] * 16 + [9] * 4), CaseTag.C1)
    assert phiL(y, p) == (P([1] * 7 + [9] * 5), CaseTag.C3)


def test_uncorrected_map_fails_audit():
    p = T11Params(4, 6, 9, 10, 2)
    dom = [x + y for x, y in t11_domain(p, 52)]
    rep = verify_injection(dom, lambda lam: phiL(lam, p, corrected=False))
    assert not rep.injective and rep.collisions


def test_example_rows():
    p = T11Params(4, 6, 9, 10, 2)
    assert phiL(P([16, 16, 16, 4]), p) == (P([11, 11, 11, 9, 9, 1]), CaseTag.C3)
    assert phiL(P([16] + [6] * 6), p) == (P([11] + [1] * 41), CaseTag.C2)
    assert phiL_image_case(P([19, 19] + [1] * 14), p) == CaseTag.C1


@pytest.mark.parametrize("a,b,c,M,L", [(4, 6, 9, 10, 2), (2, 5, 6, 3, 2), (3, 4, 6, 4, 3), (2, 3, 4, 5, 1), (5, 7, 11, 6, 2)])
def test_phiL_audit(a, b, c, M, L):
    p = T11Params(a, b, c, M, L)
    for n in range(0, 41):
        cod = set(t11_codomain(p, n))
        rep = verify_injection(t11_domain(p, n), lambda x: phiL(x, p), cod.__contains__,
                               classify=lambda mu: phiL_image_case(mu, p))
        assert rep.passed, rep.failures[:3]


def test_phiL_rejects_out_of_range():
    p = T11Params(4, 6, 9, 10, 1)
    with pytest.raises(PreconditionViolation):
        phiL(P([14]), p)  # 14 = 4 + 10 needs L >= 2


def test_phik_examples():
    p = PairParams(1, 2, 5, 2)
    assert phik(P([2, 3]), p) == (P([4, 1]), CaseTag.SWAP)
    assert phik(P([2] * 5), p) == (P([6, 1, 1, 1, 1]), CaseTag.C1)
    assert phik(P([3] * 5), p) == (P([6, 6, 1, 1, 1]), CaseTag.C2A)
    assert phik_image_case(P([6, 6, 1, 1, 1]), p) == CaseTag.C2A
    with pytest.raises(PreconditionViolation):
        phik(P([2, 3]), p, k=0)
    with pytest.raises(NotInImage):
        phik_image_case(P([2]), p)


def test_phik_distinct_rejects_repeats():
    p = PairParams(1, 2, 5, 2)
    with pytest.raises(PreconditionViolation):
        phik_distinct(P([2, 2]), p)
    assert phik_distinct(P([2, 3]), p)[0].is_distinct()
    assert issubclass(DistinctnessViolation, RuntimeError)


@pytest.mark.parametrize("a,b,M,L,d", [(1, 2, 5, 2, 0), (1, 3, 8, 2, 0), (2, 3, 7, 2, 1), (1, 2, 5, 3, 1), (1, 4, 9, 1, 2), (1, 3, 8, 2, 2)])
def test_phik_gap_audit(a, b, M, L, d):
    p = PairParams(a, b, M, L)
    for n in range(0, 41):
        if not p.excess_ok(n):
            continue
        for m in range(n + 1):
            dst = set(phik_domain(p, n, m, d=d, shift=a, top=L * M + a))
            for k in range(m // 2 + 1):
                dom = phik_domain(p, n, m, k=k, d=d)
                rep = verify_injection(dom, lambda lam: phik_gap(lam, p, k, d), dst.__contains__,
                                       check_part_count=True,
                                       classify=lambda mu: phik_image_case(mu, p, k, columns=d + 1))
                assert rep.passed, (n, m, k, rep.failures[:3])


def test_report_render_and_dict():
    p = T11Params(4, 6, 9, 10, 2)
    dom = [x + y for x, y in t11_domain(p, 20)]
    rep = verify_injection(dom, lambda lam: phiL(lam, p))
    d = rep.to_dict()
    assert d["passed"] and d["domain_size"] == len(dom) == len(d["table"])
    assert rep.render_table().count("\n") == len(dom)


def test_failures_are_data():
    dom = [P([1]), P([2]), P([3])]
    rep = verify_injection(dom, lambda x: (P([x.weight]), "c") if x.weight < 3 else 1 / 0)
    assert rep.injective and not rep.well_defined
    assert any(f["kind"] == "exception" for f in rep.failures)
