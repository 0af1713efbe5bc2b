import json

import numpy as np
import pytest

from dlab.autos import Overshear, Word, invert, word_to_json
from dlab.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_check_ok(capsys):
    code, out, _ = run(capsys, "check", "--name", "counterexample-n2")
    assert code == 0
    assert json.loads(out)["pass"] is True


def test_check_unknown(capsys):
    code, _, err = run(capsys, "check", "--name", "bogus")
    assert code == 2 and "unknown check" in err


def test_check_failure_exit_code(capsys):
    # an unreachable threshold makes the check fail, not crash
    code, out, _ = run(capsys, "check", "--name", "transcendental-growth", "--config", '{"threshold": 1e9, "samples": 2000}')
    assert code == 1 and json.loads(out)["pass"] is False


def test_tchar_csv(capsys):
    code, out, _ = run(
        capsys, "tchar", "--poly", "-1,0,0,0,1", "--expr", "z", "--r-start", "100",
        "--factor", "10", "--steps", "5", "--samples", "20000", "--seed", "42",
    )
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "r,mean,stderr,n_samples,n_skipped,seed"
    rows = [l.split(",") for l in lines[1:]]
    assert len(rows) == 5
    r = np.log([float(x[0]) for x in rows])
    m = np.array([float(x[1]) for x in rows])
    assert 1.8 <= np.polyfit(r, m, 1)[0] <= 2.2


def test_tchar_json(capsys):
    code, out, _ = run(capsys, "tchar", "--poly", "-1,0,1", "--expr", "x*exp(z)", "--steps", "2", "--samples", "1000", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert len(data) == 2 and data[0]["valid"]


@pytest.mark.parametrize(
    "argv,needle",
    [
        (["tchar", "--poly", "0,0,1", "--expr", "z"], "multiple zero"),
        (["tchar", "--poly", "-1,0,1", "--expr", "z+"], "byte offset"),
        (["tchar", "--poly", "-1,0,1", "--expr", "z", "--samples", "10"], "samples"),
    ],
)
def test_tchar_input_errors(capsys, argv, needle):
    code, _, err = run(capsys, *argv)
    assert code == 2 and needle in err


def test_usage_errors(capsys):
    assert run(capsys)[0] == 2
    assert run(capsys, "tchar", "--poly", "-1,0,1")[0] == 2
    assert run(capsys, "tchar", "--poly", "-1,0,1", "--expr", "z", "--steps", "0")[0] == 2


def test_word_reduce_and_apply(tmp_path, capsys):
    O = Overshear("0.5*x", "1+x")
    f = tmp_path / "w.json"
    f.write_text(word_to_json(Word((O, invert(O)))))
    code, out, _ = run(capsys, "word", "reduce", "--file", str(f))
    assert code == 0 and json.loads(out) == {"letters": []}

    code, out, _ = run(capsys, "word", "apply", "--file", str(f), "--point", "2,7.5,2")
    assert code == 0
    P = {k: complex(v.replace("i", "j")) for k, v in json.loads(out).items()}
    assert abs(P["x"] - 2) < 1e-9 and abs(P["y"] - 7.5) < 1e-9 and abs(P["z"] - 2) < 1e-9

    code, _, err = run(capsys, "word", "apply", "--file", str(f), "--point", "1,1,1")
    assert code == 2 and "off surface" in err


def test_word_normalform(tmp_path, capsys):
    f = tmp_path / "w.json"
    f.write_text(json.dumps({"letters": [{"kind": "overshear", "side": "first", "f": "0", "g": "1"}, {"kind": "involution"}]}))
    code, out, _ = run(capsys, "word", "normalform", "--file", str(f))
    d = json.loads(out)
    assert code == 0 and set(d) == {"normal_form", "conjugator"}


def test_word_bad_file(tmp_path, capsys):
    code, _, err = run(capsys, "word", "reduce", "--file", str(tmp_path / "missing.json"))
    assert code == 2 and "cannot read" in err
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    assert run(capsys, "word", "reduce", "--file", str(bad))[0] == 2


def test_jacobian(tmp_path, capsys):
    f = tmp_path / "w.json"
    f.write_text(json.dumps({"letters": [{"kind": "involution"}]}))
    code, out, _ = run(capsys, "jacobian", "--poly", "-1,0,0,0,1", "--file", str(f), "--point", "2,7.5,2")
    assert code == 0
    assert json.loads(out)["abs"] == pytest.approx(1, rel=1e-6)
