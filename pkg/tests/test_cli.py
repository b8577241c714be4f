"""Exit codes, report shapes and determinism of the command line."""

import json

import numpy as np
import pytest

from wavefock import cli
from wavefock.filterbank import FilterBank
from wavefock.fock import ChoiMatrix
from wavefock.laurent import LaurentPoly


def run(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    return code, json.loads(out), err


# ----------------------------------------------------------------------
# verify


def test_verify_haar_passes(capsys):
    code, doc, _ = run_json(capsys, "verify", "--builtin", "haar")
    assert code == 0
    assert doc["verdicts"]["cuntz"] is True


def test_verify_stretched_haar_fails(capsys):
    # self-dual frame with constant 2: isometry residual is exactly 1
    code, doc, _ = run_json(capsys, "verify", "--builtin", "stretched-haar")
    assert code == 1
    assert doc["verdicts"]["cuntz"] is False
    assert doc["self_residuals"][0][0] == pytest.approx(1.0, abs=1e-12)


def test_verify_biorthogonal_pair(capsys):
    code, doc, _ = run_json(
        capsys, "verify", "--builtin", "random-biorthogonal", "N=3", "seed=2"
    )
    assert code == 0
    assert doc["verdicts"]["biorthogonal"] is True


def test_verify_malformed_json(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, out, err = run(capsys, "verify", "--input", str(bad))
    assert code == 2
    assert "error:" in err


def test_verify_unknown_builtin(capsys):
    code, _, err = run(capsys, "verify", "--builtin", "no-such-bank")
    assert code == 2
    assert "no-such-bank" in err


def test_verify_bad_builtin_param(capsys):
    assert run(capsys, "verify", "--builtin", "haar", "junk")[0] == 2


def test_verify_requires_input(capsys):
    assert run(capsys, "verify")[0] == 2


# ----------------------------------------------------------------------
# loop


def test_loop_haar_constant(capsys):
    code, doc, _ = run_json(capsys, "loop", "--builtin", "haar")
    assert code == 0
    root = 1.0 / np.sqrt(2.0)
    expected = [[root, root], [root, -root]]
    for i in range(2):
        for j in range(2):
            terms = doc["A"]["entries"][i][j]
            assert len(terms) == 1
            exp, re, im = terms[0]
            assert exp == 0 and im == 0.0
            assert re == pytest.approx(expected[i][j], abs=1e-15)
    assert doc["Atilde_exact"] is True


def test_loop_identity_gives_monomials(tmp_path, capsys):
    code, loop_doc, _ = run_json(capsys, "loop", "--builtin", "identity-loop")
    path = tmp_path / "loop.json"
    path.write_text(json.dumps(loop_doc["A"]))
    code, bank_doc, _ = run_json(
        capsys, "loop", "--direction", "from-loop", "--input", str(path)
    )
    assert code == 0
    bank = FilterBank.from_json(bank_doc)
    for i, m in enumerate(bank.filters):
        assert (m - LaurentPoly.monomial(i)).coeff_norm() == 0.0


def test_loop_round_trip_identical(tmp_path, capsys):
    _, doc, _ = run_json(
        capsys, "loop", "--builtin", "random-orthogonal", "N=3", "seed=11"
    )
    path = tmp_path / "loop.json"
    path.write_text(json.dumps(doc["A"]))
    code, rebuilt, _ = run_json(
        capsys, "loop", "--direction", "from-loop", "--input", str(path)
    )
    assert code == 0
    from wavefock.corpus import builtin_bank

    direct = builtin_bank("random-orthogonal", {"N": 3, "seed": 11}).to_json()
    assert rebuilt == direct


def test_loop_singular_exits_one(tmp_path, capsys):
    m = LaurentPoly({0: 1.0, 1: 1.0})
    path = tmp_path / "bank.json"
    path.write_text(json.dumps(FilterBank(2, [m, m]).to_json()))
    code, _, err = run(capsys, "loop", "--input", str(path))
    assert code == 1
    assert "SINGULAR_LOOP" in err


# ----------------------------------------------------------------------
# anchor


def test_anchor_haar(capsys):
    code, doc, _ = run_json(capsys, "anchor", "--builtin", "haar", "--modes", "4")
    assert code == 0
    assert doc["anchor"]["dimension"] == 2
    assert doc["depths"]["0"] == 0
    assert doc["depths"]["4"] == 3
    assert doc["cyclicity"]["reconstruction_residual"] < 1e-9


def test_anchor_seeded_regression(capsys):
    code, doc, _ = run_json(
        capsys, "anchor", "--builtin", "random-causal-pair", "seed=7", "--modes", "4"
    )
    assert code == 0
    assert doc["anchor"]["dimension"] == 6
    assert doc["depths"] == {
        "-4": 0, "-3": 0, "-2": 0, "-1": 0, "0": 0, "1": 1, "2": 1, "3": 1, "4": 2,
    }


def test_anchor_rejects_unstructured_bank(tmp_path, capsys):
    rng = np.random.default_rng(0)
    from wavefock.corpus import random_bank

    path = tmp_path / "bank.json"
    path.write_text(json.dumps(random_bank(2, rng).to_json()))
    code, _, err = run(capsys, "anchor", "--input", str(path))
    assert code == 1
    assert "NOT_RECONSTRUCTIVE" in err


# ----------------------------------------------------------------------
# fock


def test_fock_cuntz(capsys):
    code, doc, _ = run_json(capsys, "fock", "--builtin", "cuntz", "N=2", "K=3")
    assert code == 0
    assert doc["fock"]["quotient_dims"] == [1, 2, 4, 8]
    assert doc["tstar"]["vacuum_residual"] < 1e-12
    assert doc["tstar"]["general_residual"] < 1e-12


def test_fock_collapse(capsys):
    code, doc, _ = run_json(capsys, "fock", "--builtin", "collapse", "N=2", "K=3")
    assert code == 0
    assert doc["fock"]["quotient_dims"] == [1, 2, 4, 8]
    assert doc["choi"]["rank"] == 2


def test_fock_bank_cor6(capsys):
    code, doc, _ = run_json(
        capsys, "fock", "--builtin", "haar", "--grid", "8", "--levels", "2"
    )
    assert code == 0
    assert doc["cor6"]["residual"] < 1e-10
    assert doc["cor6"]["quotient_dims"] == [8, 16, 32]


def test_fock_not_psd_exits_one(tmp_path, capsys):
    path = tmp_path / "choi.json"
    path.write_text(json.dumps(ChoiMatrix.from_matrix(-np.eye(2)).to_json()))
    code, _, err = run(capsys, "fock", "--input", str(path))
    assert code == 1
    assert "NOT_PSD" in err


def test_fock_cap_is_config_error(capsys):
    code, _, err = run(
        capsys, "fock", "--builtin", "haar", "--grid", "32", "--levels", "5"
    )
    assert code == 2


# ----------------------------------------------------------------------
# output formats and determinism


def test_csv_output(capsys):
    code, out, _ = run(capsys, "verify", "--builtin", "haar", "--csv")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "key,value"
    keys = {line.split(",")[0] for line in lines[1:]}
    assert "verdicts.cuntz" in keys


def test_reports_byte_identical(capsys):
    args = ("fock", "--builtin", "random-psd", "N=3", "rank=2", "seed=5")
    _, first, _ = run(capsys, *args)
    _, second, _ = run(capsys, *args)
    assert first == second


def test_output_file(tmp_path, capsys):
    path = tmp_path / "report.json"
    code, out, _ = run(capsys, "verify", "--builtin", "haar", "--output", str(path))
    assert code == 0
    assert out == ""
    assert json.loads(path.read_text())["verdicts"]["cuntz"] is True


def test_bad_tolerance_is_config_error(capsys):
    code, _, err = run(capsys, "verify", "--builtin", "haar", "--tolerance", "-1")
    assert code == 2


# ----------------------------------------------------------------------
# acceptance


def test_acceptance_command(capsys):
    code, doc, err = run_json(capsys, "acceptance")
    assert code == 0
    assert doc["passed"] is True
    assert len(doc["criteria"]) == 11
    assert "11/11 criteria passed" in err
