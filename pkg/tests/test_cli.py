import csv
import io
import json
import subprocess
import sys

from tamelambda.cli import CSV_COLUMNS, main


def run(capsys, *argv):
    code = main(list(argv) + ["--no-header"])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_profile(capsys):
    code, out, _ = run(capsys, "profile", "--p", "2", "--ell", "31", "--json")
    doc = json.loads(out)
    assert code == 0 and doc["result"]["N"] == 3 and doc["result"]["P"] == 8
    assert set(doc) == {"schema_version", "query", "result", "verification"}
    code, out, _ = run(capsys, "profile", "--p", "3", "--ell", "2", "--json")
    assert json.loads(out)["result"]["P"] == 1


def test_profile_rejects_equal_primes(capsys):
    code, _, err = run(capsys, "profile", "--p", "3", "--ell", "3")
    assert code == 2 and "ℓ must differ from p" in err


def test_five_prime_set_json(capsys):
    code, out, _ = run(capsys, "lambda-q", "--p", "2", "--S", "3,5,7,31,79", "--json")
    doc = json.loads(out)
    assert code == 0 and doc["result"]["lambda"] == 0
    assert doc["result"]["P"] == {"3": 1, "5": 1, "7": 2, "31": 8, "79": 4}


def test_json_round_trip(capsys):
    _, out, _ = run(capsys, "lambda-q", "--p", "3", "--S", "7,13", "--json")
    doc = json.loads(out)
    rendered = json.dumps(doc, sort_keys=True, ensure_ascii=False)
    assert rendered == out.strip()
    assert json.loads(rendered) == doc


def test_lambda_q_with_oracle(capsys):
    code, out, _ = run(capsys, "lambda-q", "--p", "3", "--S", "7,13", "--verify", "oracle",
                       "--max-level", "3", "--json")
    ver = json.loads(out)["verification"]
    assert code == 0 and ver["lambda"] == 1 and ver["verdict"] == "OK"


def test_lambda_q_rejects_wild_prime(capsys):
    assert run(capsys, "lambda-q", "--p", "3", "--S", "3,7")[0] == 2


def test_non_prime_in_S(capsys):
    code, _, err = run(capsys, "lambda-q", "--p", "3", "--S", "7,9")
    assert code == 2 and "not prime" in err


def test_max_level_beyond_cap_is_resource_error(capsys):
    code, _, err = run(capsys, "lambda-q", "--p", "3", "--S", "7", "--verify", "oracle",
                       "--max-level", "9")
    assert code == 4 and "cap" in err


def test_lambda_quad(capsys):
    code, out, _ = run(capsys, "lambda-quad", "--p", "3", "--disc", "-3", "--S", "7", "--json")
    assert code == 0 and json.loads(out)["result"]["lambda"] == 0
    code, out, _ = run(capsys, "lambda-quad", "--p", "2", "--disc", "-20", "--json")
    assert code == 0 and json.loads(out)["result"]["lambda"] == 0
    assert run(capsys, "lambda-quad", "--p", "3", "--disc", "-4", "--S", "2")[0] == 2
    assert run(capsys, "lambda-quad", "--p", "3", "--disc", "-12", "--S", "7")[0] == 2


def test_lambda_quad_uses_analytic_lambda0(capsys):
    code, out, _ = run(capsys, "lambda-quad", "--p", "3", "--disc", "-8", "--S", "7",
                       "--verify", "oracle", "--json")
    doc = json.loads(out)
    assert code == 0
    assert doc["result"]["lambda_0"] == 1 and doc["verification"]["verdict"] == "OK"


def test_orders(capsys):
    code, out, _ = run(capsys, "order", "--ell", "61", "--json")
    assert code == 0 and json.loads(out)["result"]["order"] == 9
    assert run(capsys, "order", "--ell", "73")[0] == 2
    code, out, _ = run(capsys, "order2", "--ell", "7", "--json")
    assert code == 0 and json.loads(out)["result"]["order"] == 1


def test_order_with_oracle(capsys):
    code, out, _ = run(capsys, "order", "--ell", "61", "--verify", "oracle", "--json")
    ver = json.loads(out)["verification"]
    assert code == 0 and ver["order"] == 9 and ver["verdict"] == "OK"


def test_unit_power_subcommand(capsys):
    code, out, _ = run(capsys, "check-corollary4", "--p", "3", "--ell", "7", "--n", "0",
                       "--json")
    res = json.loads(out)["result"]
    assert code == 0 and not res["all_pass"]
    assert {v["pass"] for v in res["verdicts"]} == {True, False}
    assert run(capsys, "check-corollary4", "--p", "3", "--ell", "19", "--n", "1")[0] == 2


def test_csv_columns_are_stable(capsys):
    _, out, _ = run(capsys, "lambda-q", "--p", "2", "--S", "3,5,7,31,79", "--csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == CSV_COLUMNS["lambda-q"]
    assert all(len(r) == len(rows[0]) for r in rows)
    assert rows[1][:4] == ["2", "3;5;7;31;79", "0", "1;1;2;8;4"]


def test_scan_witnesses(capsys):
    code, out, _ = run(capsys, "scan", "--kind", "lambda-witness", "--p", "3",
                       "--range", "2:60", "--targets", "0,1,2,3", "--json")
    rows = json.loads(out)["result"]
    assert code == 0 and [r["lambda"] for r in rows] == [0, 1, 2, 3]


def test_scan_orders_and_jobs_are_deterministic(capsys):
    _, one, _ = run(capsys, "scan", "--kind", "order", "--range", "2:1000", "--csv")
    _, many, _ = run(capsys, "scan", "--kind", "order", "--range", "2:1000", "--csv",
                     "--jobs", "3")
    assert one == many
    rows = list(csv.DictReader(io.StringIO(one)))
    assert rows and all(int(r["ell"]) % 9 in (4, 7) for r in rows)


def test_empty_scan(capsys):
    code, out, _ = run(capsys, "scan", "--kind", "profile", "--p", "3", "--range", "10:10",
                       "--json")
    assert code == 0 and json.loads(out)["result"] == []


def test_header_goes_to_stderr(capsys):
    main(["profile", "--p", "3", "--ell", "7"])
    out = capsys.readouterr()
    assert out.err.startswith("# tamelambda") and "#" not in out.out


def test_module_entry_point_is_byte_identical():
    cmd = [sys.executable, "-m", "tamelambda", "lambda-q", "--p", "2", "--S", "3,5,7",
           "--json", "--no-header"]
    a = subprocess.run(cmd, capture_output=True, check=True)
    b = subprocess.run(cmd, capture_output=True, check=True)
    assert a.stdout == b.stdout and a.stderr == b""
