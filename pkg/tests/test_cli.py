#!/usr/bin/env python3
"""
Tests for the centralfn command-line interface
"""

import sys
import os
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import io
import json

import pandas as pd
import pytest

import centralfn
from core.algebra.exactmath import RANK2_ALPHABET, RANK3_ALPHABET, poly_parse
from core.config import get_settings
from core.services import cf_cache


def run(capsys, *argv):
    code = centralfn.main(list(argv))
    return code, capsys.readouterr().out


@pytest.fixture(autouse=True)
def isolated_settings(monkeypatch):
    """No cache directory or log file leaks in from the environment"""
    monkeypatch.delenv("CF_CACHE_DIR", raising=False)
    monkeypatch.delenv("CF_LOG_FILE", raising=False)
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.mark.parametrize("algorithm", ["combinatorial", "tensorial", "both"])
def test_compute_index_form(capsys, algorithm):
    """Index (1,1,0,2,1,1) by every engine"""
    code, out = run(capsys, "compute", "--rank", "3", "--index", "1,1,0,2,1,1", "--algorithm", algorithm)
    assert code == 0
    assert out == "1/2*t1*t2 + 1/2*t12\n"


def test_compute_raw_label(capsys):
    code, out = run(capsys, "compute", "--raw-label", "1,1,0,0,0,0")
    assert code == 0
    assert out.strip() == "t1*t2 - t12"


@pytest.mark.parametrize("argv, expected", [
    (("--rank", "1", "--label", "3"), "x^3 - 2*x"),
    (("--rank", "2", "--label", "1,1,2"), "x*y - 1/2*z"),
    (("--rank", "2", "--label", "1,1,2", "--algorithm", "tensorial"), "x*y - 1/2*z"),
    (("--rank", "1", "--label", "2", "--algorithm", "tensorial"), "x^2 - 1"),
])
def test_compute_low_rank(capsys, argv, expected):
    code, out = run(capsys, "compute", *argv)
    assert code == 0
    assert out.strip() == expected


def test_compute_json_round_trips(capsys):
    """JSON output parses back to the golden polynomial"""
    code, out = run(capsys, "compute", "--index", "1,1,1,1,2,1", "--format", "json")
    assert code == 0
    expected = poly_parse("1/2*t1*t2*t3 - 1/2*t12*t3 - t2*t13 + t123", RANK3_ALPHABET)
    assert poly_parse(out) == expected


@pytest.mark.parametrize("argv", [
    ("compute", "--rank", "3", "--index", "1,1,1,2,1,1"),
    ("compute", "--index", "1,1,0,2,3,1"),
    ("compute", "--raw-label", "1,1,1,1,1,1"),
    ("compute", "--index", "1,2"),
    ("compute", "--rank", "2", "--label", "1,1"),
    ("compute", "--index", "a,b"),
    ("compute",),
    ("enumerate",),
    ("verify",),
    ("barbell", "--label", "1,2,4"),
])
def test_bad_input_exits_with_two(capsys, argv):
    """Inadmissible labels and malformed arguments"""
    code, out = run(capsys, *argv)
    assert code == 2
    assert out == ""


def test_enumerate_count_only(capsys):
    code, out = run(capsys, "enumerate", "--order", "3", "--count-only")
    assert code == 0
    assert out == "20\n"


def test_enumerate_text(capsys):
    code, out = run(capsys, "enumerate", "--order", "1")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[-1] == "count: 3"
    assert "1,0,0,1,1,1: t1" in lines


def test_enumerate_csv(capsys):
    """One row per function with index, label and polynomial columns"""
    code, out = run(capsys, "enumerate", "--order", "2", "--format", "csv")
    assert code == 0
    frame = pd.read_csv(io.StringIO(out), dtype=str)
    assert list(frame.columns) == ["index", "label", "polynomial"]
    assert len(frame) == 9
    row = frame[frame["index"] == "1,1,0,0,1,1"].iloc[0]
    assert row["label"] == "1,1,0,0,0,0"
    assert row["polynomial"] == "t1*t2 - t12"


def test_enumerate_json(capsys):
    """A list of records with embedded JSON polynomials"""
    code, out = run(capsys, "enumerate", "--order", "1", "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert len(payload) == 3
    assert {record["index"] for record in payload} == {"1,0,0,1,1,1", "0,1,0,1,1,1", "0,0,1,1,1,1"}
    assert poly_parse(json.dumps(payload[0]["polynomial"])).total_degree() == 1


def test_verify_golden(capsys):
    code, out = run(capsys, "verify", "--golden")
    assert code == 0
    assert out.splitlines() == ["golden: PASS", "loop coefficients: PASS"]


def test_verify_single_label(capsys):
    code, out = run(capsys, "verify", "--index", "1,1,0,2,1,1", "--trials", "2", "--seed", "3")
    assert code == 0
    assert out.splitlines() == ["1,1,0,2,2,2: PASS (2/2)", "verified 1/1 labels"]


def test_verify_order(capsys):
    code, out = run(capsys, "verify", "--order", "2", "--trials", "2")
    assert code == 0
    assert out.splitlines()[-1] == "verified 9/9 labels"


def test_barbell(capsys):
    code, out = run(capsys, "barbell", "--label", "2,2,4")
    assert code == 0
    expected = poly_parse("z^2 - x*y*z + 1/6*x^2*y^2 + 1/3*x^2 + 1/3*y^2 - 4/3", RANK2_ALPHABET)
    assert out.strip() == str(expected)
    assert out.startswith("1/6*x^2*y^2 - x*y*z")


def test_help_exits_cleanly(capsys):
    code, out = run(capsys, "--help")
    assert code == 0
    assert "centralfn enumerate --order 3 --count-only" in out


def test_cache_dir_persists_functions(capsys, monkeypatch, tmp_path):
    """With CF_CACHE_DIR set, computed functions land on disk"""
    monkeypatch.setenv("CF_CACHE_DIR", str(tmp_path))
    get_settings.cache_clear()
    code, _ = run(capsys, "compute", "--index", "1,1,0,2,1,1")
    assert code == 0
    data = (tmp_path / cf_cache.CACHE_FILENAME).read_bytes()
    assert ("rank3", (1, 1, 0, 2, 2, 2)) in cf_cache.decode_records(data)


def test_interrupt_has_its_own_exit_code(capsys, monkeypatch):
    """Ctrl-C is not reported as a verification failure"""
    def interrupted(request):
        raise KeyboardInterrupt

    monkeypatch.setattr(centralfn, "run_compute", interrupted)
    code, out = run(capsys, "compute", "--index", "1,1,0,2,1,1")
    assert code == centralfn.EXIT_INTERRUPTED == 130
    assert code != centralfn.EXIT_VERIFY_FAILED
    assert out == ""
