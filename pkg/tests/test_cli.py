import csv
import json

import pytest

from discres import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_count_examples(capsys):
    code, out, _ = run(capsys, "count", "--kind", "disc", "--n", "2", "--Q", "1", "--v", "0", "--gamma", "100")
    assert code == 0
    rows = list(csv.DictReader(out.splitlines()))
    assert rows[0]["count"] == "16" and rows[0]["threshold"] == "100" and rows[0]["elapsed_s"] == ""

    code, out, _ = run(capsys, "count", "--kind", "disc", "--n", "2", "--Q", "1", "--v", "1",
                       "--gamma", "1/2")
    assert list(csv.DictReader(out.splitlines()))[0]["count"] == "0"

    code, out, _ = run(capsys, "count", "--kind", "res", "--n", "1", "--Q", "1", "--w", "0")
    assert list(csv.DictReader(out.splitlines()))[0]["count"] == "16"


def test_count_header_and_json(capsys):
    _, out, _ = run(capsys, "count", "--kind", "disc", "--n", "2", "--Q", "3", "--Q", "5", "--v", "1/2")
    assert out.splitlines()[0] == "kind,n,Q,threshold,count,total,elapsed_s"
    assert len(out.splitlines()) == 3
    _, out, _ = run(capsys, "count", "--kind", "disc", "--n", "2", "--Q", "3", "--v", "1/2",
                    "--format", "json", "--timing")
    obj = json.loads(out)[0]
    assert list(obj) == ["kind", "n", "Q", "threshold", "count", "total", "elapsed_s"]
    assert isinstance(obj["elapsed_s"], float)


@pytest.mark.parametrize("argv, needle", [
    (["--v", "3"], "range of v is [0, n-1]"),
    (["--v", "1/2", "--Q", "3"], "strictly ascending"),
])
def test_count_usage_errors(capsys, argv, needle):
    code, _, err = run(capsys, "count", "--kind", "disc", "--n", "2", "--Q", "5", *argv)
    assert code == 2 and needle in err


def test_decimal_rejected(capsys):
    with pytest.raises(SystemExit) as info:
        cli.main(["count", "--kind", "disc", "--n", "2", "--Q", "5", "--v", "0.5"])
    assert info.value.code == 2


def test_resource_cap_exit_code(capsys):
    code, _, _ = run(capsys, "count", "--kind", "disc", "--n", "2", "--Q", "5", "--v", "0",
                     "--chunks", "4", "--max-enumerated", "100")
    assert code == 3


def test_workers_env_default(monkeypatch):
    monkeypatch.setenv("DISCRES_WORKERS", "3")
    args = cli.build_parser().parse_args(["count", "--kind", "disc", "--n", "2", "--Q", "2", "--v", "0"])
    assert args.workers == 3


def test_count_byte_identical_across_workers(capsys, tmp_path):
    outs = []
    for w in ("1", "3"):
        path = tmp_path / f"w{w}.csv"
        run(capsys, "count", "--kind", "disc", "--n", "3", "--Q", "4", "--Q", "6", "--v", "1/4",
            "--workers", w, "--out", str(path))
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]


def test_exponents(capsys):
    code, out, _ = run(capsys, "exponents", "--kind", "disc", "--n", "3", "--v", "3/5")
    assert code == 0 and json.loads(out)["exponent"] == "3"
    code, out, _ = run(capsys, "exponents", "--kind", "res", "--n", "2", "--w", "1")
    assert json.loads(out)["exponent"] == "4"
    code, _, err = run(capsys, "exponents", "--kind", "disc", "--n", "2", "--v", "5")
    assert code == 2 and "range of v" in err


def write_csv(path, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["kind", "n", "Q", "threshold", "count", "total", "elapsed_s"])
        for Q, c in rows:
            w.writerow(["disc", 2, Q, 1, c, 1, ""])


def test_fit(capsys, tmp_path):
    path = tmp_path / "c.csv"
    write_csv(path, [(10, 1000), (20, 8000), (40, 64000)])
    code, out, _ = run(capsys, "fit", str(path), "--predicted", "3")
    assert code == 0 and json.loads(out)["verdict"] == "PASS"

    write_csv(path, [(10, 100), (100, 25119)])  # slope 2.4
    code, out, _ = run(capsys, "fit", str(path), "--predicted", "3", "--tol", "0.25")
    assert code == 1 and json.loads(out)["verdict"] == "FAIL"

    write_csv(path, [(10, 1000)])
    code, _, err = run(capsys, "fit", str(path), "--predicted", "3")
    assert code == 2 and "at least two" in err

    path.write_text("not,a,count,file\n1,2,3,4\n")
    code, _, err = run(capsys, "fit", str(path), "--predicted", "3")
    assert code == 2 and "malformed" in err


def test_verify_suites(capsys):
    code, out, _ = run(capsys, "verify", "lemma4", "--samples", "200", "--seed", "1")
    assert code == 0 and json.loads(out)["failures"] == 0
    a = run(capsys, "verify", "lemma3b", "--seed", "42", "--samples", "100")
    b = run(capsys, "verify", "lemma3b", "--seed", "42", "--samples", "100")
    assert a == b and a[0] == 0
    code, out, _ = run(capsys, "verify", "nearcurve", "--T", "2", "--eps", "0.3")
    assert code == 0 and out.strip() == "6"


def test_verify_unknown_suite():
    with pytest.raises(SystemExit) as info:
        cli.main(["verify", "lemma9"])
    assert info.value.code == 2


def test_staircase(capsys):
    code, out, _ = run(capsys, "staircase", "--n", "4", "--x", "1", "--x", "6", "--x", "4", "--x", "14/5")
    rows = list(csv.DictReader(out.splitlines()))
    assert code == 0
    assert [(r["x"], r["d"], r["k"]) for r in rows] == [
        ("1", "2", "2"), ("6", "5", "4"), ("4", "4", "3"), ("14/5", "3", "2")]
