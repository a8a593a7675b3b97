import json

import numpy as np
import pytest

from entmono.cli import main
from entmono.states import save_state
from entmono.catalog import resolve_state, ghz


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_eval_w_221(capsys):
    code, out, err = run(capsys, "eval", "--state", "w", "--ranks", "2,2,1")
    assert code == 0
    assert "0.666667" in out


def test_eval_ghz_full_rank(capsys):
    code, out, err = run(
        capsys, "eval", "--state", "ghz", "--ranks", "2,2,2", "--json"
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["value"] == pytest.approx(1.0, abs=1e-12)
    assert payload["converged"] is True
    assert payload["ranks"] == [2, 2, 2]


def test_eval_rank_exceeds_dimension(capsys):
    code, out, err = run(capsys, "eval", "--state", "w", "--ranks", "3,1,1")
    assert code == 2
    assert "error" in err


def test_eval_unknown_state(capsys):
    code, out, err = run(capsys, "eval", "--state", "nope", "--ranks", "1,1,1")
    assert code == 2


def test_eval_bad_flag(capsys):
    code, out, err = run(capsys, "eval", "--state", "w")  # missing --ranks
    assert code == 2


def test_eval_nonconvergence_exit_code(capsys):
    code, out, err = run(
        capsys, "eval", "--state", "w", "--ranks", "1,1,1",
        "--max-iters", "1", "--tol", "1e-14", "--json",
    )
    assert code == 3
    payload = json.loads(out)  # value still printed, flagged
    assert payload["converged"] is False
    assert 0.0 <= payload["value"] <= 4 / 9 + 1e-9


def test_eval_from_file(tmp_path, capsys):
    path = tmp_path / "ghz.json"
    save_state(ghz(), path)
    code, out, err = run(capsys, "eval", "--state", str(path), "--ranks", "1,1,1")
    assert code == 0
    assert "0.5" in out


def test_eval_haar_spec(capsys):
    code, out, err = run(
        capsys, "eval", "--state", "haar:2x2:7", "--ranks", "1,1", "--json"
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["dims"] == [2, 2]


def test_invariants_kempe1(capsys):
    code, out, err = run(capsys, "invariants", "--state", "kempe1")
    assert code == 0
    assert "0.561724" in out
    assert "0.342586" in out


def test_invariants_ghz_tangle(capsys):
    code, out, err = run(capsys, "invariants", "--state", "ghz", "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["tangle"] == pytest.approx(1.0, abs=1e-12)
    assert payload["invariants"]["I4_1"] == pytest.approx(0.5, abs=1e-12)


def test_invariants_defs_slot_mismatch(tmp_path, capsys):
    defs = tmp_path / "my.inv"
    defs.write_text("# four-party expression\npsi[i,j,k,l] * psi*[i,j,k,l]\n")
    code, out, err = run(
        capsys, "invariants", "--state", "bell-prod", "--defs", str(defs)
    )
    assert code == 2
    assert "error" in err


def test_invariants_defs_evaluated(tmp_path, capsys):
    defs = tmp_path / "my.inv"
    defs.write_text("\n# norm squared\npsi[i,j,k] * psi*[i,j,k]\n")
    code, out, err = run(
        capsys, "invariants", "--state", "w", "--defs", str(defs), "--json"
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["defs"][0]["value"][0] == pytest.approx(1.0, abs=1e-12)


def test_compare_slocc_w_ghz(capsys):
    code, out, err = run(
        capsys, "compare", "--a", "w", "--b", "ghz", "--mode", "slocc",
        "--restarts", "16",
    )
    assert code == 0
    assert "0.666667" in out


def test_compare_copies_kempe(capsys):
    code, out, err = run(
        capsys, "compare", "--a", "kempe1", "--b", "kempe2", "--mode", "copies"
    )
    assert code == 0
    assert "no feasible (C1,C2) up to (4,4)" in out


def test_compare_dlocc_self(capsys):
    code, out, err = run(
        capsys, "compare", "--a", "ghz", "--b", "ghz", "--mode", "dlocc",
        "--restarts", "8",
    )
    assert code == 0
    assert "incommensurable: no" in out


def test_json_outputs_are_reproducible(capsys):
    args = (
        "compare", "--a", "w", "--b", "ghz", "--mode", "dlocc",
        "--restarts", "8", "--seed", "5", "--json",
    )
    code1, out1, _ = run(capsys, *args)
    code2, out2, _ = run(capsys, *args)
    assert code1 == code2 == 0
    assert out1 == out2
    payload = json.loads(out1)
    assert set(payload) >= {"pairs", "witnesses", "incommensurable", "mode"}


def test_resolve_state_catalog_names():
    for name in ("ghz", "w", "bell-prod", "kempe1", "kempe2"):
        s = resolve_state(name)
        assert s.dims == (2, 2, 2)
        assert np.isfinite(s.amps).all()
