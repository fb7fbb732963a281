import csv
import io
import json

import pytest

from dworklab.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def records(out):
    return [json.loads(line) for line in out.splitlines() if line]


def test_classify_s5(capsys):
    code, out = run(capsys, "classify", "--n", "4", "--N", "5", "--p", "2")
    (rec,) = records(out)
    assert code == 0
    assert rec["schema"] == "dworklab/1"
    assert rec["verdict"] == "S5" and rec["order"] == "120"


def test_classify_dihedral(capsys):
    code, out = run(capsys, "classify", "--n", "2", "--N", "7", "--p", "2")
    assert code == 0 and records(out)[0]["verdict"] == "D14"


def test_classify_even_N_is_usage_error(capsys):
    assert run(capsys, "classify", "--n", "4", "--N", "6", "--p", "2")[0] == 64


def test_classify_field_too_large(capsys):
    assert run(capsys, "classify", "--n", "4", "--N", "19", "--p", "2")[0] == 3


def test_verify_reci(capsys):
    code, out = run(capsys, "verify", "reci", "--n", "4", "--t", "2", "--q-max", "200")
    recs = records(out)
    assert code == 0
    assert recs[-1]["kind"] == "summary" and recs[-1]["fail"] == 0
    for r in recs:
        assert json.loads(json.dumps(r)) == r


def test_verify_dtotal_small(capsys):
    code, out = run(capsys, "verify", "dtotal", "--t", "3", "--q-max", "14")
    recs = [r for r in records(out) if r["kind"] == "report" and r["pass"] is not None]
    assert code == 0 and recs and all(r["pass"] for r in recs)


def test_verify_isogeny_variant(capsys):
    _, out = run(capsys, "verify", "isogeny", "--t", "2", "--variant", "both")
    (var,) = [r for r in records(out) if r["kind"] == "variant"]
    assert var["resolution"] == {"t3": False, "t5": True}


def test_verify_unknown(capsys):
    assert run(capsys, "verify", "nothing")[0] == 64


def test_count_examples(capsys):
    code, out = run(capsys, "count", "trinomial", "--n", "4", "--t", "0", "--q", "3")
    assert code == 0 and records(out)[0]["count"] == 1
    code, out = run(capsys, "count", "zt", "--n", "4", "--t", "2", "--q", "11")
    assert records(out)[0]["count"] == 895


def test_count_skip_is_data(capsys):
    code, out = run(capsys, "count", "zt", "--n", "4", "--t", "1", "--q", "11")
    rec = records(out)[0]
    assert code == 0 and rec["good"] is False and rec["skip_reason"]


def test_count_quintic_budget(capsys):
    assert run(capsys, "count", "quintic", "--t", "2", "--q", "41")[0] == 3


def test_count_bad_q(capsys):
    assert run(capsys, "count", "zt", "--q", "12")[0] == 64


def test_threads_byte_identical(capsys):
    _, a = run(capsys, "--threads", "1", "verify", "appendixC", "--t", "2", "--q-max", "60")
    _, b = run(capsys, "--threads", "4", "verify", "appendixC", "--t", "2", "--q-max", "60")
    assert a == b


def test_env_threads(capsys, monkeypatch):
    monkeypatch.setenv("DWORKLAB_THREADS", "3")
    _, a = run(capsys, "verify", "reci", "--q-max", "40")
    monkeypatch.delenv("DWORKLAB_THREADS")
    _, b = run(capsys, "verify", "reci", "--q-max", "40")
    assert a == b


def test_csv_output(capsys):
    code, out = run(capsys, "--format", "csv", "verify", "reci", "--q-max", "30")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and rows[0]["schema"] == "dworklab/1"
    assert rows[-1]["kind"] == "summary"
