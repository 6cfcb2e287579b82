import pytest

from partineq.antitelescope import (
    KR_MOD,
    KR_P,
    KR_Q,
    anti_telescope,
    g_sequence,
    kr5_injection_check,
    kr5_series,
    kr_term_certificate,
)
from partineq.qseries import ProductSpec, QPoly, expand, first_negative, pochhammer


def _pq(L):
    return ProductSpec.reciprocal(KR_P, KR_MOD, L), ProductSpec.reciprocal(KR_Q, KR_MOD, L)


@pytest.mark.parametrize("L", [1, 2, 5])
def test_terms_sum_to_difference(L):
    P, Q = _pq(L)
    terms = anti_telescope(P, Q, L, 120)
    total = QPoly.zero(120)
    for t in terms:
        total = total + t.series
        assert first_negative(t.series) is None
    assert total == expand(P, 120) - expand(Q, 120)


def test_generic_families_telescope():
    P = ProductSpec.reciprocal((1, 8), 7, 3)
    Q = ProductSpec.reciprocal((2, 7), 7, 3)
    total = QPoly.zero(60)
    for t in anti_telescope(P, Q, 3, 60):
        total = total + t.series
    assert total == expand(P, 60) - expand(Q, 60)


def test_first_term_starts_at_q4():
    t = anti_telescope(*_pq(1), 1, 30)[0]
    assert t.lowest_degree == 4 and t.series[4] == 1


def test_bracket_factorization():
    N = 20
    bracket = QPoly.from_terms({4: 1, 7: -1, 8: -1, 11: 1}, N)
    assert bracket == QPoly.monomial(4, N) * pochhammer([3, 4], N)
    t = anti_telescope(*_pq(2), 2, N)[0]
    assert t.bracket == pochhammer([1], N) * bracket  # shared factor 1 - q^(12j-11)


@pytest.mark.parametrize("j", [1, 2, 3])
def test_closed_form(j):
    series, cert = kr_term_certificate(j, 3, 100)
    assert cert["nonnegative"] and cert["lowest_degree"] == 12 * (j - 1) + 4
    assert series == anti_telescope(*_pq(3), 3, 100)[j - 1].series


def test_g_sequence():
    G = g_sequence(8, 80)
    assert list(G[3].coeffs[:6]) == [1, 0, 0, 1, 1, 1]
    assert G.truncs[:4] == (80, 80, 79, 77)
    assert not G.hypothesis_violations()


def test_g_sequence_args():
    with pytest.raises(ValueError):
        g_sequence(1, 10)


def test_kr5():
    assert kr5_series(1, 10)[1] == 1 and kr5_series(3, 10)[1] == 0
    out = kr5_injection_check(60, audit_weight=20)
    assert out["passed"] and out["audit"].injective
