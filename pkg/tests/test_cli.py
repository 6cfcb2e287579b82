import io
import json

import pytest

from partineq.cli import PRESETS, render_example_2_1, run
from partineq.qseries import ProductSpec


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def spec_files(tmp_path):
    def write(name, spec):
        p = tmp_path / name
        p.write_text(spec.dumps())
        return str(p)
    return write


def test_expand_empty_product(spec_files):
    path = spec_files("empty.json", ProductSpec(1, None, ()))
    code, out, _ = call("expand", "--spec", path, "--N", "5")
    assert code == 0 and out.splitlines()[-1] == "1"


def test_expand_json(spec_files):
    path = spec_files("rr.json", ProductSpec.reciprocal((1, 4), 5, None))
    code, out, _ = call("expand", "--spec", path, "--N", "6", "--format", "json")
    assert code == 0 and json.loads(out)["coefficients"]["coeffs"] == [1, 1, 1, 1, 2, 2, 3]


def test_diff_exit_codes(spec_files):
    a = spec_files("a.json", ProductSpec.reciprocal((1, 5), 6, 1))
    b = spec_files("b.json", ProductSpec.reciprocal((2, 4), 6, 1))
    code, out, _ = call("diff", "--spec", a, "--spec", b, "--N", "10", "--format", "json")
    assert code == 1 and json.loads(out)["first_negative"] == {"m": None, "n": 4, "value": -1}
    code, _, _ = call("diff", "--spec", b, "--spec", b, "--N", "10")
    assert code == 0


def test_verify_divisible_counterexample():
    code, out, _ = call("verify", "--family", "T1.1", "--a", "2", "--b", "4", "--c", "5",
                        "--M", "6", "--L", "1", "--N", "20", "--format", "json")
    d = json.loads(out)
    assert code == 1 and d["first_violation"]["n"] == 4 and d["expected_known"]


def test_verify_pass():
    code, _, _ = call("verify", "--family", "T1.3", "--a", "1", "--b", "2", "--M", "5", "--L", "2", "--N", "40")
    assert code == 0


def test_usage_errors():
    assert call("verify", "--family", "T1.1", "--a", "3", "--b", "2", "--c", "4", "--M", "5", "--L", "1")[0] == 2
    assert call("verify", "--family", "BG5.3", "--M", "7")[0] == 2
    assert call("expand", "--spec", "/nonexistent.json")[0] == 2
    assert call("bogus")[0] == 2
    assert call("preset", "no-such-preset")[0] == 2
    code, out, err = call("verify", "--family", "T1.1", "--a", "1", "--b", "2", "--c", "2", "--M", "5", "--L", "1")
    assert code == 2 and err and not out


def test_deterministic_json():
    argv = ("verify", "--family", "T1.1", "--a", "4", "--b", "6", "--c", "9", "--M", "10", "--L", "2",
            "--N", "60", "--format", "json")
    assert call(*argv)[1] == call(*argv)[1]


def test_search_command():
    code, out, _ = call("search", "--max-M", "6", "--max-L", "6", "--max-nM", "80", "--format", "json")
    assert code == 1 and json.loads(out)["tuples_with_negatives"] == [[1, 2, 5]]


def test_example_table_matches_golden(golden_dir):
    assert render_example_2_1() == (golden_dir / "example_2_1.txt").read_text()


def test_example_table_properties():
    rows = render_example_2_1().splitlines()
    assert len(rows) == 23
    assert rows[0].split() == ["16^3,4", "->3", "11^3,9^2,1"]
    images = [r.split()[-1] for r in rows]
    assert len(set(images)) == 23


def test_preset_headers_name_their_anchor():
    code, out, _ = call("preset", "--list")
    assert code == 0 and all(name in out for name in PRESETS)
    code, out, _ = call("preset", "divisible-counterexample")
    assert code == 0 and out.startswith("# preset divisible-counterexample")
    d = json.loads(call("preset", "no-extra-factor", "--format", "json")[1])
    assert d["anchor"] and d["matches_expectation"]


def test_progress_goes_to_stderr():
    code, out, err = call("search", "--max-M", "5", "--max-L", "2", "--max-nM", "20", "-v", "--format", "json")
    assert "search:" in err and "search:" not in out
    json.loads(out)
