import csv

import numpy as np
import pytest

from mixlearn.cli import cli_dispatch
from mixlearn.fileio import read_dataset

BINOMIAL_SPEC = """\
family=binomial-p
k=2
eps=1/2
min_index=0
max_index=2
indices=1,2
n=10
"""

POISSON_SPEC_A = """\
family=poisson
indices=1,4
min_index=0
max_index=5
"""

POISSON_SPEC_B = """\
family=poisson
indices=2,3
min_index=0
max_index=5
"""


@pytest.fixture
def spec_file(tmp_path):
    path = tmp_path / "spec.txt"
    path.write_text(BINOMIAL_SPEC)
    return path


def test_simulate_then_learn_round_trip(tmp_path, spec_file, capsys):
    data_path = tmp_path / "data.txt"
    rc = cli_dispatch([
        "simulate", "--spec", str(spec_file), "--samples", "200000",
        "--seed", "42", "--out", str(data_path),
    ])
    assert rc == 0
    data = read_dataset(data_path)
    assert len(data) == 200000
    rc = cli_dispatch([
        "learn", "--method", "moments", "--family", "binomial-p",
        "--k", "2", "--data", str(data_path), "--eps", "1/2",
        "--max-index", "2", "--n", "10", "--truth", "1,2",
    ])
    out = capsys.readouterr().out
    assert rc == 0
    assert "recovered=1,2" in out
    assert "success=true" in out


def test_simulate_is_reproducible(tmp_path, spec_file):
    p1, p2 = tmp_path / "a.txt", tmp_path / "b.txt"
    for p in (p1, p2):
        assert cli_dispatch([
            "simulate", "--spec", str(spec_file), "--samples", "500",
            "--seed", "7", "--out", str(p),
        ]) == 0
    assert np.array_equal(read_dataset(p1).values, read_dataset(p2).values)


def test_simulate_family_cross_check(tmp_path, spec_file, capsys):
    rc = cli_dispatch([
        "simulate", "--family", "poisson", "--spec", str(spec_file),
        "--samples", "10", "--seed", "1", "--out", str(tmp_path / "x.txt"),
    ])
    assert rc == 2  # usage error with a one-line reason
    assert "error:" in capsys.readouterr().err


def test_plan_samples_output(capsys):
    rc = cli_dispatch([
        "plan-samples", "--family", "binomial-p", "--k", "2", "--T", "2",
        "--scheme", "chebyshev", "--eps", "1/2", "--max-index", "2",
        "--n", "10",
    ])
    out = capsys.readouterr().out
    assert rc == 0
    assert "t=518400" in out


def test_verify_identifiability_with_csv(tmp_path, capsys):
    audit = tmp_path / "audit.csv"
    rc = cli_dispatch([
        "verify-identifiability", "--n", "4", "--mode", "sets",
        "--csv", str(audit),
    ])
    out = capsys.readouterr().out
    assert rc == 0
    assert "T_minimal=" in out
    with open(audit) as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["object", "signature"]
    assert len(rows) == 1 + 2**4


def test_tv_exact_and_bound(tmp_path, capsys):
    a = tmp_path / "a.txt"
    b = tmp_path / "b.txt"
    a.write_text(POISSON_SPEC_A)
    b.write_text(POISSON_SPEC_B)
    rc = cli_dispatch(["tv", "exact", "--spec-a", str(a), "--spec-b", str(b)])
    out = capsys.readouterr().out
    assert rc == 0
    tv_hi = float([l for l in out.splitlines() if l.startswith("tv_hi=")][0][6:])
    rc = cli_dispatch([
        "tv", "bound", "--spec-a", str(a), "--spec-b", str(b), "--L", "1",
    ])
    out = capsys.readouterr().out
    assert rc == 0
    value = float([l for l in out.splitlines() if l.startswith("value=")][0][6:])
    assert value <= tv_hi + 1e-12


def test_tv_littlewood(capsys):
    rc = cli_dispatch([
        "tv", "littlewood", "--coeffs", "1,1,1,1", "--L", "2",
    ])
    out = capsys.readouterr().out
    assert rc == 0
    assert "arc_max=4.0" in out


def test_tv_littlewood_bad_coeffs(capsys):
    rc = cli_dispatch(["tv", "littlewood", "--coeffs", "1,2", "--L", "2"])
    assert rc == 1  # domain error: coefficient outside {-1,0,1}


def test_tv_survey_csv(tmp_path, capsys):
    out_csv = tmp_path / "survey.csv"
    rc = cli_dispatch([
        "tv", "survey", "--family", "poisson", "--k", "2",
        "--max-index", "3", "--out", str(out_csv),
    ])
    assert rc == 0
    with open(out_csv) as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["pair_a", "pair_b", "tv_lo", "tv_hi",
                       "charfn_bound", "witness_t"]
    assert len(rows) == 1 + 15


def test_experiment_end_to_end(tmp_path, capsys):
    config = tmp_path / "config.txt"
    config.write_text(
        "family=poisson\nmethod=mde\neps=1\nmin_index=0\nmax_index=5\n"
        "k=2\ntruth=1,4\nsamples=20000\ntrials=3\nseed=99\n"
    )
    out_dir = tmp_path / "out"
    rc = cli_dispatch([
        "experiment", "--config", str(config), "--out", str(out_dir),
    ])
    assert rc == 0
    with open(out_dir / "trials.csv") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["trial", "seed", "recovered", "success",
                       "delta_or_residual"]
    assert len(rows) == 4
    summary = (out_dir / "summary.txt").read_text()
    assert summary.startswith("successes=")


def test_usage_error_exit_code():
    assert cli_dispatch(["learn", "--method", "bogus", "--family",
                         "poisson", "--k", "2", "--data", "x",
                         "--max-index", "5"]) == 2


def test_domain_error_exit_code(tmp_path, capsys):
    missing = tmp_path / "missing.txt"
    rc = cli_dispatch([
        "learn", "--method", "mde", "--family", "poisson", "--k", "2",
        "--data", str(missing), "--max-index", "5",
    ])
    assert rc == 1


def test_unknown_subcommand_is_usage_error():
    assert cli_dispatch(["frobnicate"]) == 2
