import pytest

from entmono.errors import NotNormalized, NotSimpleForm, StructureMismatch
from entmono.locc import (
    RankItem,
    compare_dlocc,
    copy_ratio_feasibility,
    default_rank_items,
    slocc_bound,
)
from entmono.monotones import SolverConfig
from entmono.rng import haar_random_state
from entmono.states import StateTensor, new_state

CFG = SolverConfig(restarts=16, seed=3)


def test_default_rank_items_three_qubits():
    items = default_rank_items((2, 2, 2))
    fine = [it for it in items if it.grouping is None]
    coarse = [it for it in items if it.grouping is not None]
    assert len(fine) == 8
    # three two-block splits, each with 2*4 rank pairs
    assert len(coarse) == 24
    keys = {it.key() for it in items}
    assert "(2,2,1)" in keys
    assert "[0|12](1,2)" in keys


def test_w_and_ghz_incommensurable(w, ghz):
    report = compare_dlocc(w, ghz, cfg=CFG)
    assert "(2,2,1)" in report.a_to_b_blocked
    assert "(1,1,1)" in report.b_to_a_blocked
    assert report.incommensurable
    rows = {r.item.key(): r for r in report.rows}
    assert rows["(2,2,1)"].e_a == pytest.approx(2 / 3, abs=1e-6)
    assert rows["(2,2,1)"].e_b == pytest.approx(0.5, abs=1e-6)
    assert rows["(1,1,1)"].e_a == pytest.approx(4 / 9, abs=1e-6)
    assert rows["(1,1,1)"].e_b == pytest.approx(0.5, abs=1e-6)


def test_compare_mirrored(w, ghz):
    fwd = compare_dlocc(w, ghz, cfg=CFG)
    rev = compare_dlocc(ghz, w, cfg=CFG)
    assert set(fwd.a_to_b_blocked) == set(rev.b_to_a_blocked)
    assert set(fwd.b_to_a_blocked) == set(rev.a_to_b_blocked)
    assert fwd.incommensurable == rev.incommensurable


def test_compare_self_is_clean(ghz):
    report = compare_dlocc(ghz, ghz, cfg=CFG)
    assert not report.a_to_b_blocked
    assert not report.b_to_a_blocked
    assert not report.incommensurable


def test_compare_structure_mismatch(ghz):
    with pytest.raises(StructureMismatch):
        compare_dlocc(ghz, haar_random_state((2, 2), 1), cfg=CFG)


def test_compare_report_dict(w, ghz):
    d = compare_dlocc(w, ghz, cfg=CFG).to_dict()
    assert set(d) == {"pairs", "witnesses", "incommensurable"}
    assert {"rank", "E_a", "E_b"} == set(d["pairs"][0])


def test_slocc_w_to_ghz(w, ghz):
    report = slocc_bound(w, ghz, cfg=CFG)
    assert report.overall == pytest.approx(2 / 3, abs=1e-6)


def test_slocc_ghz_to_w_true_value(ghz, w):
    # minimum over ranks is (1 - 1/2) / (1 - 4/9) = 9/10, attained at
    # (1,1,1) and the (2,1,1) family
    report = slocc_bound(ghz, w, cfg=CFG)
    assert report.overall == pytest.approx(0.9, abs=1e-6)


def test_slocc_corollary_forbids(bell_prod, ghz):
    report = slocc_bound(bell_prod, ghz, cfg=CFG)
    rows = {r.item.key(): r for r in report.rows}
    row = rows["(2,2,1)"]
    assert row.e_a == pytest.approx(1.0, abs=1e-9)
    assert row.e_b == pytest.approx(0.5, abs=1e-6)
    assert row.bound == pytest.approx(0.0, abs=1e-8)
    assert report.overall == pytest.approx(0.0, abs=1e-8)


def test_slocc_self_never_forbidden(ghz, w):
    for state in (ghz, w):
        report = slocc_bound(state, state, cfg=CFG)
        assert report.overall is None or report.overall == pytest.approx(1.0, abs=1e-6)
        assert report.overall is not None  # entangled: some rank constrains


def test_slocc_self_product_state_unconstrained():
    prod = new_state([2, 2], [1, 0, 0, 0])
    report = slocc_bound(prod, prod, cfg=CFG)
    assert report.overall is None


def test_slocc_bounds_clamped(w, ghz):
    report = slocc_bound(ghz, w, cfg=CFG)
    for row in report.rows:
        if row.bound is not None:
            assert row.bound >= 0.0
    assert 0.0 <= report.overall <= 1.0


def test_slocc_rejects_unnormalized(ghz):
    scaled = StateTensor(ghz.dims, 0.5 * ghz.amps)
    with pytest.raises(NotNormalized):
        slocc_bound(scaled, ghz, cfg=CFG)


def test_copy_ratio_kempe_empty(kempe1, kempe2):
    report = copy_ratio_feasibility(
        kempe1, kempe2, ("I4_1", "I4_2", "I4_3", "I6"), cmax=4
    )
    assert report.feasible == ()
    assert report.odot_check_passed


def test_copy_ratio_self_diagonal(kempe1):
    report = copy_ratio_feasibility(kempe1, kempe1, ("I4_1", "I6"), cmax=4)
    assert set(report.feasible) >= {(c, c) for c in range(1, 5)}
    # I4_1 is strictly inside (0, 1), so off-diagonal powers differ
    assert set(report.feasible) == {(c, c) for c in range(1, 5)}


def test_copy_ratio_ghz_vs_basis_state(ghz):
    basis = new_state([2, 2, 2], [1, 0, 0, 0, 0, 0, 0, 0])
    report = copy_ratio_feasibility(ghz, basis, ("I4_1",), cmax=4)
    assert report.feasible == ()


def test_copy_ratio_single_copy_matches_direct_equality(kempe1, kempe2):
    report = copy_ratio_feasibility(kempe1, kempe2, ("I4_1",), cmax=1)
    # equality of the invariant at one copy each
    assert report.feasible == ((1, 1),)


def test_copy_ratio_rejects_non_simple(ghz, w):
    with pytest.raises(NotSimpleForm):
        copy_ratio_feasibility(ghz, w, ("psi[i,j,k] * psi*[j,i,k]",))


def test_copy_ratio_rejects_unnormalized(ghz):
    scaled = StateTensor(ghz.dims, 2.0 * ghz.amps)
    with pytest.raises(NotNormalized):
        copy_ratio_feasibility(scaled, ghz, ("I4_1",))


def test_copy_ratio_cmax_range(ghz, w):
    with pytest.raises(ValueError):
        copy_ratio_feasibility(ghz, w, ("I4_1",), cmax=9)


def test_explicit_rank_items(w, ghz):
    items = [RankItem(None, (2, 2, 1)), RankItem(None, (1, 1, 1))]
    report = compare_dlocc(w, ghz, rank_items=items, cfg=CFG)
    assert len(report.rows) == 2
