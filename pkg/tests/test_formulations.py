import numpy as np
import pytest
from scipy.optimize import linprog

from conftest import DIAG, EYE, ONES, random_rank
from ginv.errors import ConfigError, DimensionError
from ginv.formulations import (
    BUDGET_SLACK,
    ProblemKind,
    build,
    dump_reduced_data,
    epigraph_lp,
    export_lp,
    factored_lp,
    objective_p1,
    objective_p21,
)
from ginv.matcore import norm_1, norm_21, svd
from ginv.matio import read_csv
from ginv.solvers import solve_p123
from ginv.structure import h_from_z


@pytest.mark.parametrize("Z, expected", [([[0.0]], 1 / np.sqrt(2)), ([[0.5]], 1 / np.sqrt(2))])
def test_objective_p21_ones(Z, expected):
    assert objective_p21(svd(ONES), Z) == pytest.approx(expected)


def test_objective_p21_identity():
    assert objective_p21(svd(EYE), np.zeros((0, 2))) == pytest.approx(2.0)


@pytest.mark.parametrize(
    "A, Z, expected", [(ONES, [[0.0]], 1.0), (ONES, [[0.5]], 1.0), (DIAG, [[1.0]], 1.5)]
)
def test_objective_p1_examples(A, Z, expected):
    assert objective_p1(svd(A), Z) == pytest.approx(expected)


def test_objective_shape_check():
    with pytest.raises(DimensionError):
        objective_p1(svd(ONES), np.zeros((2, 2)))


def test_reduced_objectives_match_full_norms(rng):
    A = random_rank(rng, 12, 8, 3)
    F = svd(A)
    for _ in range(100):
        Z = rng.standard_normal((5, 3)) * rng.exponential()
        H = h_from_z(F, Z)
        assert objective_p21(F, Z) == pytest.approx(norm_21(H), rel=1e-10)
        assert objective_p1(F, Z) == pytest.approx(norm_1(H), rel=1e-10)


def test_build_dims(inst_40):
    _, A = inst_40
    assert build(ProblemKind.P21, svd(A, rank=10)).dims == (10, 10)
    assert build("P123", svd(ONES)).dims == (1, 1)


def test_build_budget_rules():
    F = svd(ONES)
    p = build(ProblemKind.P21_L1, F, 0.70711)
    assert p.budget == pytest.approx(0.70711 * (1 + BUDGET_SLACK))
    assert p.is_feasible([[0.0]])
    with pytest.raises(ConfigError):
        build(ProblemKind.P21_L1, F)
    with pytest.raises(ConfigError):
        build(ProblemKind.P21_L1, F, -1.0)
    with pytest.raises(ConfigError):
        build(ProblemKind.P21, F, 1.0)
    with pytest.raises(ConfigError):
        build(ProblemKind.P21, F).budget


def test_lp_encodings_agree(rng):
    A = random_rank(rng, 8, 6, 3)
    F = svd(A)
    c, A_ub, b_ub, bounds = epigraph_lp(F)
    epi = linprog(c, A_ub=A_ub, b_ub=b_ub, bounds=bounds, method="highs")
    c, A_eq, b_eq, bounds, sl = factored_lp(F)
    fac = linprog(c, A_eq=A_eq, b_eq=b_eq, bounds=bounds, method="highs")
    assert epi.status == 0 and fac.status == 0
    assert epi.fun == pytest.approx(fac.fun, rel=1e-8)
    Z = fac.x[sl["Z"]].reshape((3, 3), order="F")
    assert objective_p1(F, Z) == pytest.approx(fac.fun, rel=1e-8)


def test_epigraph_point_is_feasible(rng):
    # the auxiliary variable at |H| satisfies both inequality families
    F = svd(random_rank(rng, 5, 4, 2))
    Z = rng.standard_normal((2, 2))
    c, A_ub, b_ub, _ = epigraph_lp(F)
    x = np.concatenate([np.abs(h_from_z(F, Z)).ravel(order="F"), Z.ravel(order="F")])
    assert np.all(A_ub @ x <= b_ub + 1e-12)
    assert c @ x == pytest.approx(objective_p1(F, Z))


def test_export_counts(tmp_path, inst_40):
    assert export_lp(svd(ONES), tmp_path / "a.mps") == (5, 8)
    _, A = inst_40
    assert export_lp(svd(A, rank=10), tmp_path / "b.mps") == (900, 1600)
    text = (tmp_path / "a.mps").read_text().splitlines()
    assert text[0].startswith("NAME") and text[-1] == "ENDATA"
    rows = text[text.index("ROWS") + 1:text.index("COLUMNS")]
    assert len(rows) == 1 + 8


def test_export_rejects_other_kinds(tmp_path):
    with pytest.raises(ConfigError):
        export_lp(build(ProblemKind.P21, svd(ONES)), tmp_path / "x.mps")


def _highs_optimum(path):
    highspy = pytest.importorskip("highspy")
    h = highspy.Highs()
    h.setOptionValue("output_flag", False)
    h.readModel(str(path))
    h.run()
    assert h.getModelStatus() == highspy.HighsModelStatus.kOptimal
    return h.getInfo().objective_function_value


@pytest.mark.parametrize("A, expected", [(ONES, 1.0), (EYE, 2.0), (DIAG, 0.5)])
def test_exported_lp_optimum(tmp_path, A, expected):
    export_lp(svd(A), tmp_path / "p.mps")
    assert _highs_optimum(tmp_path / "p.mps") == pytest.approx(expected, rel=1e-9)


def test_exported_lp_matches_in_process_solver(tmp_path, rng):
    for m, n, r in [(20, 20, 5), (16, 10, 4), (10, 12, 6)]:
        F = svd(random_rank(rng, m, n, r))
        export_lp(F, tmp_path / "p.mps")
        ours = solve_p123(build(ProblemKind.P123, F)).objective
        theirs = _highs_optimum(tmp_path / "p.mps")
        assert abs(ours - theirs) <= 1e-6 * abs(theirs)


def test_dump_reduced_data(tmp_path, rng):
    F = svd(random_rank(rng, 6, 5, 2))
    paths = dump_reduced_data(F, tmp_path / "d")
    assert [p.name for p in paths] == ["G.csv", "V2.csv", "U1.csv"]
    assert np.array_equal(read_csv(paths[0]), F.G)
    assert np.array_equal(read_csv(paths[1]), F.V2)
