"""Command-line interface: subcommands, exit codes, file formats."""

import json
import subprocess
import sys

from padicdyn.certify import Certificate
from padicdyn.mapfile import load_map_file, parse_map_config


def run_cli(*args):
    return subprocess.run([sys.executable, "-m", "padicdyn.cli", *args],
                          capture_output=True, text=True)


def write_map(path, body):
    path.write_text(json.dumps(body))
    return str(path)


QUAD = {"n": 1, "numerators": ["x1^2 + 1"], "prime": 3, "lift": "naive",
        "kmax": 8, "search_budget": 20}


def test_map_file_parsing(tmp_path):
    path = write_map(tmp_path / "m.json", QUAD)
    cfg = load_map_file(path)
    assert cfg.map.n == 1 and cfg.prime == 3 and cfg.lift == "naive"
    assert cfg.precision == 64 and cfg.m_max == 6      # defaults
    try:
        parse_map_config({"numerators": ["x1"]})
        raise AssertionError("missing n accepted")
    except ValueError:
        pass


def test_certify_and_verify_roundtrip(tmp_path):
    mp = write_map(tmp_path / "m.json", QUAD)
    cert_path = str(tmp_path / "cert.json")
    res = run_cli("certify", "--map", mp, "--out", cert_path)
    assert res.returncode == 0, res.stderr
    assert "period bound N = 9" in res.stdout
    cert = Certificate.load(cert_path)
    assert cert.data["witness"] == ["2"]
    # bit-exact round trip of the stored file
    with open(cert_path, encoding="utf-8") as fh:
        text = fh.read()
    assert Certificate.from_json_text(text).json_text() == text

    res2 = run_cli("verify", "--cert", cert_path)
    assert res2.returncode == 0, res2.stderr
    assert "certificate is valid" in res2.stdout


def test_verify_rejects_tampered_certificate(tmp_path):
    mp = write_map(tmp_path / "m.json", QUAD)
    cert_path = str(tmp_path / "cert.json")
    assert run_cli("certify", "--map", mp, "--out", cert_path).returncode == 0
    cert = Certificate.load(cert_path)
    cert.data["period_bound"]["bound"] = 7
    cert.save(cert_path)
    res = run_cli("verify", "--cert", cert_path)
    assert res.returncode == 3
    assert "INVALID" in res.stderr


def test_no_witness_exit_code(tmp_path):
    mp = write_map(tmp_path / "id.json",
                   {"n": 1, "numerators": ["x1"], "search_budget": 6})
    res = run_cli("certify", "--map", mp, "--out", str(tmp_path / "c.json"))
    assert res.returncode == 2
    assert "finite-order suspected" in res.stderr


def test_interpolate_report(tmp_path):
    mp = write_map(tmp_path / "m.json", QUAD)
    out = str(tmp_path / "report.txt")
    res = run_cli("interpolate", "--map", mp, "--point", "2", "--out", out)
    assert res.returncode == 0, res.stderr
    with open(out, encoding="utf-8") as fh:
        text = fh.read()
    assert "classification: non_preperiodic" in text
    assert "certified analytic on p^1 Z_p: True" in text
    assert "v_r(b_k)" in text


def test_cli_overrides_take_precedence(tmp_path):
    mp = write_map(tmp_path / "m.json",
                   {"n": 1, "numerators": ["x1^2"], "prime": 5, "kmax": 8,
                    "search_budget": 20})
    out = str(tmp_path / "cert7.json")
    res = run_cli("certify", "--map", mp, "--prime", "7", "--out", out)
    assert res.returncode == 0, res.stderr
    cert = Certificate.load(out)
    assert cert.data["context"]["p"] == 7


def test_auto_prime_on_extension_center_hints_a_fallback(tmp_path):
    # auto-selection prefers p=5 for x^2+1, whose clear periodic points live
    # in F_25; rational witness search cannot run there and the CLI should
    # point at the usable fallback prime 3
    mp = write_map(tmp_path / "m.json",
                   {"n": 1, "numerators": ["x1^2 + 1"], "search_budget": 10})
    res = run_cli("certify", "--map", mp, "--out", str(tmp_path / "c.json"))
    assert res.returncode == 1
    assert "--prime" in res.stderr and "3" in res.stderr


def test_bad_inputs_exit_one(tmp_path):
    res = run_cli("certify", "--map", str(tmp_path / "missing.json"),
                  "--out", str(tmp_path / "c.json"))
    assert res.returncode == 1
    mp = write_map(tmp_path / "bad.json",
                   {"n": 1, "numerators": ["x1^2"], "prime": 4})
    res2 = run_cli("certify", "--map", mp,
                   "--out", str(tmp_path / "c.json"))
    assert res2.returncode == 1
    mp3 = write_map(tmp_path / "indet.json", QUAD)
    res3 = run_cli("interpolate", "--map", mp3, "--point", "3",
                   "--out", str(tmp_path / "r.txt"))
    assert res3.returncode == 1
    assert "outside" in res3.stderr
