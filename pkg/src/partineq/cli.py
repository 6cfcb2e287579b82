"""Command-line front end.

Exit codes: 0 when every check passed (or a preset matched its documented
expectation), 1 when a violation was found, 2 on usage or precondition errors.
Reports go to stdout; progress and errors go to stderr.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass
from typing import Callable, Sequence

from . import __version__
from .antitelescope import (
    KR_MOD,
    KR_P,
    KR_Q,
    anti_telescope,
    g_sequence,
    kr5_injection_check,
    kr_term_certificate,
)
from .injections import (
    InsufficientEnds,
    NotInImage,
    ParamViolation,
    PreconditionViolation,
    T11Params,
    phiL,
    phiL_image_case,
    t11_domain,
    verify_injection,
)
from .inequalities import (
    FAMILIES,
    CheckResult,
    TheoremParams,
    check_T11,
    run_check,
    search_remark,
    t12_difference,
)
from .partitions import ResidueViolation
from .qseries import (
    NonUnitConstantTerm,
    ProductSpec,
    QPoly,
    expand,
    first_negative,
    pochhammer,
    rr_sum_side,
)

log = logging.getLogger("partineq")

USAGE_ERRORS = (ParamViolation, PreconditionViolation, ResidueViolation, NotInImage,
                InsufficientEnds, NonUnitConstantTerm, ValueError, OSError)


class Outcome:
    """A report plus the exit code it implies."""

    def __init__(self, title: str, payload: dict, ok: bool, table: str | None = None):
        self.title = title
        self.payload = payload
        self.ok = ok
        self.table = table

    def emit(self, fmt: str, out) -> int:
        if fmt == "json":
            out.write(json.dumps({"report": self.title, **self.payload}, indent=2, sort_keys=True) + "\n")
        else:
            out.write(f"# {self.title}\n")
            out.write(self.table if self.table is not None else _kv_table(self.payload))
        return 0 if self.ok else 1


def _kv_table(d: dict, indent: str = "") -> str:
    if not d:
        return ""
    w = max(len(str(k)) for k in d)
    lines = []
    for k, v in d.items():
        if isinstance(v, dict) and v:
            lines.append(f"{indent}{k}:\n" + _kv_table(v, indent + "  ").rstrip("\n"))
        else:
            if isinstance(v, (list, tuple)):
                v = json.dumps(v, sort_keys=True)
            lines.append(f"{indent}{str(k).ljust(w)}  {v}")
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# commands


def _load_spec(path: str) -> ProductSpec:
    with open(path, encoding="utf-8") as fh:
        return ProductSpec.loads(fh.read())


def cmd_expand(args) -> Outcome:
    if not args.spec or len(args.spec) != 1:
        raise ValueError("expand takes exactly one --spec")
    spec = _load_spec(args.spec[0])
    f = expand(spec, args.N)
    payload = {"spec": spec.to_dict(), "N": args.N, "series": str(f), "coefficients": f.to_dict()}
    return Outcome("expand", payload, True, str(f) + "\n")


def cmd_diff(args) -> Outcome:
    if not args.spec or len(args.spec) != 2:
        raise ValueError("diff takes exactly two --spec files")
    s1, s2 = (_load_spec(p) for p in args.spec)
    f = expand(s1, args.N) - expand(s2, args.N)
    neg = first_negative(f)
    payload = {
        "left": s1.to_dict(), "right": s2.to_dict(), "N": args.N,
        "series": str(f), "nonnegative": neg is None,
        "first_negative": None if neg is None else {"m": neg[0], "n": neg[1], "value": neg[2]},
    }
    table = f"{f}\nnonnegative to q^{args.N}: {neg is None}\n"
    if neg is not None:
        table += f"first negative: m={neg[0]} n={neg[1]} value={neg[2]}\n"
    return Outcome("diff", payload, neg is None, table)


def _params_from_args(args) -> TheoremParams:
    if args.family is None:
        raise ValueError("verify needs --family")
    octuple = tuple(args.octuple) if args.octuple else None
    which = args.family[2:] if args.family.startswith("KR") else None
    return TheoremParams(family=args.family, N=args.N, a=args.a, b=args.b, c=args.c, M=args.M, L=args.L,
                         d=args.d, r=args.r, octuple=octuple, which=which, extra=args.extra,
                         gap_mode=args.gap_mode, audit_weight=args.audit_weight)


def _result_outcome(res: CheckResult, title: str | None = None, ok: bool | None = None) -> Outcome:
    d = res.to_dict()
    return Outcome(title or f"verify {res.family}", d, res.status != "fail" if ok is None else ok)


def cmd_verify(args) -> Outcome:
    return _result_outcome(run_check(_params_from_args(args)))


def antitelescope_report(L: int, N: int) -> tuple[dict, bool]:
    P = ProductSpec.reciprocal(KR_P, KR_MOD, L)
    Q = ProductSpec.reciprocal(KR_Q, KR_MOD, L)
    terms = anti_telescope(P, Q, L, N)
    total = QPoly.zero(N)
    for t in terms:
        total = total + t.series
    direct = expand(P, N) - expand(Q, N)
    rows = []
    certs_ok = True
    for t in terms:
        series, cert = kr_term_certificate(t.j, L, N)
        certs_ok &= series == t.series and cert["nonnegative"]
        rows.append({"j": t.j, "lowest_degree": t.lowest_degree, "nonnegative": first_negative(t.series) is None,
                     "numerator": cert["numerator"], "cancelled_factors": cert["cancelled_factors"]})
    bracket = QPoly.from_terms({4: 1, 7: -1, 8: -1, 11: 1}, N)
    factored = QPoly.monomial(4, N) * pochhammer([3, 4], N)
    payload = {
        "L": L, "N": N,
        "sum_equals_difference": total == direct,
        "all_terms_nonnegative": all(r["nonnegative"] for r in rows),
        "closed_forms_match": certs_ok,
        "bracket_identity": bracket == factored,
        "terms": rows,
    }
    ok = payload["sum_equals_difference"] and payload["all_terms_nonnegative"] and certs_ok and payload["bracket_identity"]
    return payload, ok


def cmd_antitelescope(args) -> Outcome:
    L = 10 if args.L is None else args.L
    if L < 1:
        raise ParamViolation("need L >= 1")
    payload, ok = antitelescope_report(L, args.N)
    return Outcome("antitelescope", payload, ok)


def empirical_report(imax: int, N: int) -> tuple[dict, bool]:
    G = g_sequence(imax, N)
    recurrence = True
    for i in range(3, imax + 1):
        rhs = G[i - 2] - G[i - 1]
        lhs = QPoly([0] * (i - 2) + list(G[i].coeffs), G[i].trunc + i - 2)
        recurrence &= lhs.trunc == rhs.trunc and lhs == rhs
    viol = G.hypothesis_violations()
    payload = {
        "imax": imax, "N": N,
        "certified_truncations": {str(i): G[i].trunc for i in range(1, imax + 1)},
        "recurrence_exact": recurrence,
        "hypothesis_holds": not viol,
        "violations": viol[:20],
    }
    return payload, recurrence and not viol


def cmd_empirical(args) -> Outcome:
    payload, ok = empirical_report(args.imax, args.N)
    return Outcome("empirical", payload, ok)


def cmd_search(args) -> Outcome:
    rows = search_remark(args.max_M, args.max_L, args.max_nM, args.workers)
    tuples = sorted({(r["a"], r["b"], r["M"]) for r in rows}, key=lambda t: (t[2], t[0], t[1]))
    payload = {"bounds": {"M": args.max_M, "L": args.max_L, "nM": args.max_nM},
               "tuples_with_negatives": [list(t) for t in tuples], "negatives": rows}
    return Outcome("search", payload, not rows, _search_table(payload))


def _search_table(payload: dict) -> str:
    b = payload["bounds"]
    lines = [f"bounds: M <= {b['M']}, L <= {b['L']}, nM <= {b['nM']}"]
    lines.append("tuples with negative d'(m, nM): " + (", ".join(str(tuple(t)) for t in payload["tuples_with_negatives"]) or "none"))
    lines.append(f"{'a':>3} {'b':>3} {'M':>3} {'L':>3} {'m':>4} {'n':>5} {'value':>6}")
    for r in payload["negatives"]:
        lines.append(f"{r['a']:>3} {r['b']:>3} {r['M']:>3} {r['L']:>3} {r['m']:>4} {r['n']:>5} {r['value']:>6}")
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# presets


def example_2_1_audit():
    """phi_L audit at (n, M, L, a, b, c) = (52, 10, 2, 4, 6, 9), preimages in descending order."""
    p = T11Params(4, 6, 9, 10, 2)
    dom = sorted((x + y for x, y in t11_domain(p, 52)), key=lambda lam: lam.parts, reverse=True)
    return verify_injection(dom, lambda lam: phiL(lam, p), classify=lambda mu: phiL_image_case(mu, p))


def render_example_2_1() -> str:
    return example_2_1_audit().render_table()


@dataclass(frozen=True)
class Preset:
    name: str
    anchor: str
    expectation: str
    run: Callable[[argparse.Namespace], tuple[dict, bool, str | None]]


def _p_table(args):
    rep = example_2_1_audit()
    return rep.to_dict(), rep.passed and rep.domain_size == 23, rep.render_table()


def _p_divisible(args):
    res = check_T11(2, 4, 5, 6, 1, 20)
    d = res.to_dict()
    ok = res.first_violation == (None, 4, -1) and res.expected_known
    return d, ok, None


def _p_no_extra(args):
    D = t12_difference(2, 3, 7, 2, 70, extra="none")
    at70 = sorted(m for (m, n), v in D.items() if v < 0 and n == 70 and m <= 20)
    values = {str(m): D.coeff(m, 70) for m in at70}
    d = {"params": {"a": 2, "b": 3, "M": 7, "L": 2, "N": 70},
         "negative_m_at_n70": at70, "values": values,
         "expected_m": [7, 13, 16, 18]}
    return d, at70 == [7, 13, 16, 18], None


def _search_preset(M: int, L: int, nM: int):
    def run(args):
        rows = search_remark(M, L, nM, args.workers)
        tuples = sorted({(r["a"], r["b"], r["M"]) for r in rows}, key=lambda t: (t[2], t[0], t[1]))
        expected = [(1, 2, 5)]
        unexpected = [t for t in tuples if t not in expected]
        for r in rows:
            r["expected_known"] = (r["a"], r["b"], r["M"]) in expected
        d = {"bounds": {"M": M, "L": L, "nM": nM}, "tuples_with_negatives": [list(t) for t in tuples],
             "expected_tuples": [list(t) for t in expected],
             "unexpected_tuples": [list(t) for t in unexpected], "negatives": rows}
        return d, tuples == expected, _search_table(d) + f"unexpected tuples: {unexpected or 'none'}\n"
    return run


def _p_antitelescope(args):
    d, ok = antitelescope_report(10, 300)
    return d, ok, None


def _kr(which: str):
    def run(args):
        res = run_check(TheoremParams(family=f"KR{which}", N=300, which=which))
        return res.to_dict(), res.passed, None
    return run


def _p_mod4(args):
    d = kr5_injection_check(300)
    d["audit"] = d["audit"].to_dict(with_table=False)
    return d, d["passed"], None


def _p_empirical(args):
    d, ok = empirical_report(20, 300)
    return d, ok, None


def _p_rr(args):
    N = 200
    out = {}
    ok = True
    for v, shifts in ((1, (1, 4)), (2, (2, 3))):
        s = rr_sum_side(v, N)
        prod = expand(ProductSpec.reciprocal(shifts, 5, None), N)
        out[f"variant_{v}"] = {"sum_equals_product": s == prod}
        ok &= s == prod
    diff = rr_sum_side(1, N) - rr_sum_side(2, N)
    out["difference_nonnegative"] = first_negative(diff) is None
    out["N"] = N
    return out, ok and out["difference_nonnegative"], None


PRESETS: dict[str, Preset] = {p.name: p for p in (
    Preset("phiL-table", "phi_L on (n,M,L,a,b,c) = (52,10,2,4,6,9), all 23 preimages with case tags",
           "23 rows, injective, case tags separated", _p_table),
    Preset("divisible-counterexample", "T1.1 with a | b: (a,b,c,M,L) = (2,4,5,6,1)",
           "coefficient of q^4 is -1", _p_divisible),
    Preset("no-extra-factor", "T1.2 without its extra factor at (a,b,M,L) = (2,3,7,2)",
           "negatives at n = 70, m <= 20 exactly for m in {7, 13, 16, 18}", _p_no_extra),
    Preset("remark-search", "distinct-parts difference without its extra factor, M <= 12, L <= 20, nM <= 250",
           "negatives only at (a,b,M) = (1,2,5)", _search_preset(12, 20, 250)),
    Preset("remark-search-scaled", "same search with M <= 8, L <= 8, nM <= 120",
           "negatives only at (a,b,M) = (1,2,5)", _search_preset(8, 8, 120)),
    Preset("antitelescope", "anti-telescoping of (q,q^4,q^11;q^12)_L against (q,q^7,q^8;q^12)_L, L = 10, N = 300",
           "terms sum to the difference, each term nonnegative", _p_antitelescope),
    Preset("kr-anti-telescoped", "KR3.1: 1/(q,q^4,q^5,q^9,q^11;q^12) - 1/(q,q^5,q^7,q^8,q^9;q^12), N = 300",
           "nonnegative directly and via anti-telescoping", _kr("3.1")),
    Preset("kr-via-finite", "KR3.2: 1/(q,q^3,q^7,q^8,q^11;q^12) - 1/(q^3,q^4,q^5,q^7,q^11;q^12), N = 300",
           "nonnegative directly and via the (4,5,8,12) finite difference", _kr("3.2")),
    Preset("kr-mod4", "1/(q^2;q^4) prod(1+q^e+q^2e), e = 1 versus e = 3 mod 4, N = 300",
           "nonnegative, 4n+3 -> (4n+1, 2) injective", _p_mod4),
    Preset("g-recurrence", "G_i = (G_{i-2} - G_{i-1})/q^(i-2) from the Rogers-Ramanujan products, i <= 20, N = 300",
           "G_i = 1 + O(q^i) with nonnegative coefficients", _p_empirical),
    Preset("rogers-ramanujan", "sum sides against product sides, N = 200",
           "both identities hold, G_1 - G_2 nonnegative", _p_rr),
)}


def cmd_preset(args) -> Outcome:
    name = args.name or args.preset
    if args.list or not name:
        lines = [f"{p.name.ljust(24)}  {p.anchor}" for p in PRESETS.values()]
        return Outcome("presets", {"presets": {p.name: p.anchor for p in PRESETS.values()}}, True, "\n".join(lines) + "\n")
    if name not in PRESETS:
        raise ValueError(f"unknown preset {name!r}; see 'preset --list'")
    pr = PRESETS[name]
    log.info("running preset %s", name)
    payload, ok, table = pr.run(args)
    payload = {"preset": pr.name, "anchor": pr.anchor, "expectation": pr.expectation,
               "matches_expectation": ok, "result": payload}
    if table is not None:
        table = f"anchor: {pr.anchor}\nexpectation: {pr.expectation}\nmatches: {ok}\n{table}"
    return Outcome(f"preset {pr.name}", payload, ok, table)


# --------------------------------------------------------------------------
# argument parsing


def _positive_int(s: str) -> int:
    v = int(s)
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {s}")
    return v


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="partineq", description="Exact checks of partition inequalities.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "table"), default="table")
    common.add_argument("--N", type=_positive_int, default=120, help="q-truncation degree")
    common.add_argument("--workers", type=int, default=1)
    common.add_argument("-v", "--verbose", action="store_true", help="progress on stderr")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("expand", parents=[common], help="expand one product")
    p.add_argument("--spec", action="append", metavar="FILE")
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("diff", parents=[common], help="first product minus second")
    p.add_argument("--spec", action="append", metavar="FILE")
    p.set_defaults(func=cmd_diff)

    p = sub.add_parser("verify", parents=[common], help="run one theorem checker")
    p.add_argument("--family", choices=FAMILIES)
    for flag in ("a", "b", "c", "M", "L", "d", "r"):
        p.add_argument(f"--{flag}", type=int)
    p.add_argument("--octuple", type=int, nargs=8, metavar="K", help="L m x y z r s u")
    p.add_argument("--extra", choices=("z", "plain", "none"), default="z",
                   help="T1.2 extra factor: with z (default), without z, or absent")
    p.add_argument("--gap-mode", choices=("class", "global"), default="class")
    p.add_argument("--audit-weight", type=_positive_int)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("antitelescope", parents=[common], help="mod-12 anti-telescoping certificate")
    p.add_argument("--L", type=int)
    p.set_defaults(func=cmd_antitelescope, N=300)

    p = sub.add_parser("empirical", parents=[common], help="G_i recurrence hypothesis")
    p.add_argument("--imax", type=int, default=20)
    p.set_defaults(func=cmd_empirical, N=300)

    p = sub.add_parser("search", parents=[common], help="negatives of the distinct-parts difference without extra factor")
    p.add_argument("--max-M", type=_positive_int, default=12)
    p.add_argument("--max-L", type=_positive_int, default=20)
    p.add_argument("--max-nM", type=_positive_int, default=250)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("preset", parents=[common], help="named reproduction experiments")
    p.add_argument("name", nargs="?")
    p.add_argument("--preset", metavar="NAME")
    p.add_argument("--list", action="store_true")
    p.set_defaults(func=cmd_preset)
    return ap


def run(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    handler = logging.StreamHandler(err)
    handler.setFormatter(logging.Formatter("%(message)s"))
    root = logging.getLogger("partineq")
    root.handlers[:] = [handler]
    root.setLevel(logging.INFO if args.verbose else logging.WARNING)
    if args.workers < 1:
        err.write("partineq: --workers must be >= 1\n")
        return 2
    try:
        outcome = args.func(args)
    except USAGE_ERRORS as exc:
        err.write(f"partineq: {type(exc).__name__}: {exc}\n")
        return 2
    return outcome.emit(args.format, out)


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
