import numpy as np
import pytest

from conftest import DIAG, EYE, ONES, random_rank
from ginv.bench import InstanceSpec, generate
from ginv.errors import ConfigError, DimensionError, SizeCapError
from ginv.formulations import ProblemKind, Status, build, objective_p21
from ginv.localsearch import build_ah_symmetric, local_search
from ginv.matcore import mp_pseudoinverse, norm_1, norm_21, property_residuals, svd
from ginv.solvers import (
    SolverConfig,
    column_variant,
    oracle_small,
    solve,
    solve_p21,
    solve_p21_l1,
    solve_p123,
    solve_p123_full,
)
from ginv.structure import gamma_from_H, h_from_z


def p21(A, **kw):
    return solve_p21(build(ProblemKind.P21, svd(A, **kw)))


def p123(A, cfg=None, **kw):
    return solve_p123(build(ProblemKind.P123, svd(A, **kw)), cfg)


def p21_l1(A, **kw):
    F = svd(A, **kw)
    anchor = solve_p21(build(ProblemKind.P21, F))
    return anchor, solve_p21_l1(build(ProblemKind.P21_L1, F, anchor.objective), anchor=anchor)


def test_config_validation():
    with pytest.raises(ConfigError):
        SolverConfig(solver_tol=0)
    with pytest.raises(ConfigError):
        SolverConfig(p123_method="simplex")
    with pytest.raises(ConfigError):
        SolverConfig(relaxation=2.0)


def test_kind_mismatch():
    with pytest.raises(ConfigError):
        solve_p21(build(ProblemKind.P123, svd(ONES)))


# -- analytic examples ----------------------------------------------------------


@pytest.mark.parametrize("A, expected", [(ONES, 1 / np.sqrt(2)), (DIAG, 0.5), (EYE, 2.0)])
def test_p21_examples(A, expected):
    sol = p21(A)
    assert sol.status is Status.OPTIMAL
    assert sol.objective == pytest.approx(expected, abs=1e-7)
    assert sol.objective == pytest.approx(norm_21(sol.H), rel=1e-12)


def test_p21_analytic_points():
    assert np.allclose(p21(DIAG).H, [[0.5, 0], [0, 0]], atol=1e-7)
    assert np.allclose(p21(EYE).H, EYE)
    # on ones(2,2) every Z in [-0.5, 0.5] is optimal
    assert abs(p21(ONES).Z[0, 0]) <= 0.5 + 1e-7


@pytest.mark.parametrize("A, expected", [(ONES, 1.0), (DIAG, 0.5), (EYE, 2.0)])
@pytest.mark.parametrize("method", ["lp", "splitting"])
def test_p123_examples(A, expected, method):
    sol = p123(A, SolverConfig(p123_method=method))
    assert sol.status is Status.OPTIMAL
    assert sol.objective == pytest.approx(expected, abs=1e-7)


def test_p123_diag_at_zero():
    assert np.allclose(p123(DIAG).Z, 0, atol=1e-9)


@pytest.mark.parametrize("A, expected", [(ONES, 1.0), (DIAG, 0.5), (EYE, 2.0)])
def test_p21_l1_examples(A, expected):
    anchor, sol = p21_l1(A)
    assert sol.status is Status.OPTIMAL
    assert sol.objective == pytest.approx(expected, abs=1e-7)
    assert objective_p21(svd(A), sol.Z) <= anchor.objective * (1 + 1e-8) + 1e-15


def test_p21_l1_diag_is_pseudoinverse():
    _, sol = p21_l1(DIAG)
    assert np.allclose(sol.H, mp_pseudoinverse(svd(DIAG)), atol=1e-7)


def test_p21_l1_infeasible_budget():
    F = svd(ONES)
    sol = solve_p21_l1(build(ProblemKind.P21_L1, F, 0.5))
    assert sol.status is Status.INFEASIBLE


def test_dispatcher():
    F = svd(ONES)
    assert solve(build("P21", F)).objective == pytest.approx(1 / np.sqrt(2), abs=1e-7)
    assert solve(build("P123", F)).objective == pytest.approx(1.0, abs=1e-7)
    assert solve(build("P21_L1", F, 0.7071068)).objective == pytest.approx(1.0, abs=1e-7)


# -- oracle ---------------------------------------------------------------------


@pytest.mark.parametrize(
    "A, kind, expected",
    [(ONES, "P21", 1 / np.sqrt(2)), (ONES, "P123", 1.0), (DIAG, "P21", 0.5), (DIAG, "P123", 0.5)],
)
def test_oracle_examples(A, kind, expected):
    assert oracle_small(build(kind, svd(A))) == pytest.approx(expected, abs=1e-6)


def test_oracle_budgeted():
    F = svd(ONES)
    assert oracle_small(build("P21_L1", F, 1 / np.sqrt(2))) == pytest.approx(1.0, abs=1e-6)


def test_oracle_size_limit(rng):
    with pytest.raises(DimensionError):
        oracle_small(build("P21", svd(random_rank(rng, 4, 4, 2))))


def test_oracle_agreement_random_small(rng):
    shapes = [(2, 2, 1), (3, 2, 1), (2, 3, 1), (4, 3, 2), (3, 3, 2)]
    for m, n, r in shapes:
        for _ in range(4):
            A = random_rank(rng, m, n, r)
            F = svd(A, rank=r)
            sol21 = solve_p21(build("P21", F))
            assert sol21.objective == pytest.approx(oracle_small(build("P21", F)), abs=1e-4)
            assert solve_p123(build("P123", F)).objective == pytest.approx(
                oracle_small(build("P123", F)), abs=1e-4
            )
            prob = build("P21_L1", F, sol21.objective)
            assert solve_p21_l1(prob, anchor=sol21).objective == pytest.approx(
                oracle_small(prob), abs=1e-4
            )


# -- structural guarantees ------------------------------------------------------


def test_p21_residuals_and_blocks():
    for seed in range(3):
        A = generate(InstanceSpec(40, 20, 10, 0.5, seed))
        F = svd(A, rank=10)
        sol = solve_p21(build("P21", F))
        r = property_residuals(A, sol.H)
        tol = 1e-6 * np.linalg.norm(A)
        assert max(r.p1, r.p2, r.p3) <= tol
        g = gamma_from_H(F, sol.H)
        assert np.linalg.norm(g.Y) <= 1e-6 * np.linalg.norm(F.Dinv)
        assert np.linalg.norm(g.W) <= 1e-6 * np.linalg.norm(F.Dinv)


def test_solution_objective_consistency(inst_40):
    _, A = inst_40
    F = svd(A, rank=10)
    for sol in (solve_p21(build("P21", F)), solve_p123(build("P123", F))):
        assert np.allclose(sol.H, h_from_z(F, sol.Z))
        assert sol.objective == pytest.approx(build(
            "P21" if sol.method.startswith("p21") else "P123", F).objective(sol.Z), rel=1e-8)


def test_dr_merit_nonincreasing(inst_40):
    _, A = inst_40
    F = svd(A, rank=10)
    for sol in (solve_p21(build("P21", F)),
                solve_p123(build("P123", F), SolverConfig(p123_method="splitting"))):
        merit = np.asarray(sol.info["merit"])
        assert len(merit) == sol.iterations
        assert np.all(np.diff(merit) <= 1e-12)


def test_dr_certified_gap(inst_40):
    _, A = inst_40
    sol = solve_p21(build("P21", svd(A, rank=10)))
    gap = sol.objective - sol.info["lower_bound"]
    assert -1e-12 <= gap <= 1e-8 * (1 + sol.objective)


def test_splitting_matches_lp(rng):
    F = svd(random_rank(rng, 12, 8, 3))
    lp = solve_p123(build("P123", F), SolverConfig(p123_method="lp"))
    dr = solve_p123(build("P123", F), SolverConfig(p123_method="splitting"))
    assert dr.status is Status.OPTIMAL
    assert dr.objective == pytest.approx(lp.objective, rel=1e-6)


def test_iteration_limit_status(inst_40):
    _, A = inst_40
    sol = solve_p21(build("P21", svd(A, rank=10)), SolverConfig(max_iters=5))
    assert sol.status is Status.ITER_LIMIT
    assert property_residuals(A, sol.H).p1 <= 1e-8 * np.linalg.norm(A)


def test_orderings(inst_40):
    _, A = inst_40
    F = svd(A, rank=10)
    h21 = solve_p21(build("P21", F))
    h123 = solve_p123(build("P123", F))
    hl1 = solve_p21_l1(build("P21_L1", F, h21.objective), anchor=h21)
    H_ls = build_ah_symmetric(A, local_search(A, rank=10).T)
    others = [h123.H, hl1.H, H_ls, F.G]
    assert all(norm_21(h21.H) <= norm_21(H) + 1e-6 for H in others)
    assert all(norm_1(h123.H) <= norm_1(H) + 1e-6 for H in [h21.H, hl1.H, H_ls, F.G])
    assert norm_1(hl1.H) <= norm_1(h21.H) + 1e-6


# -- independent conic solver cross-checks ---------------------------------------


def _clarabel(F, kind, budget=None):
    cp = pytest.importorskip("cvxpy")
    n, r = F.n, F.r
    Z = cp.Variable((n - r, r))
    M = F.V1 / F.sigma[:r] + F.V2 @ Z
    if kind == "P21":
        prob = cp.Problem(cp.Minimize(cp.sum(cp.norm(M, 2, axis=1))))
    else:
        cons = [] if budget is None else [cp.sum(cp.norm(M, 2, axis=1)) <= budget]
        prob = cp.Problem(cp.Minimize(cp.sum(cp.abs(M @ F.U1.T))), cons)
    prob.solve(solver="CLARABEL")
    return prob.value


@pytest.mark.parametrize("seed", [1, 2])
def test_against_conic_solver(seed):
    A = generate(InstanceSpec(40, 20, 10, 0.5, seed))
    F = svd(A, rank=10)
    h21 = solve_p21(build("P21", F))
    assert h21.objective == pytest.approx(_clarabel(F, "P21"), rel=1e-6)
    assert solve_p123(build("P123", F)).objective == pytest.approx(_clarabel(F, "P123"), rel=1e-6)
    prob = build("P21_L1", F, h21.objective)
    ours = solve_p21_l1(prob, anchor=h21).objective
    ref = _clarabel(F, "P21_L1", prob.budget)
    # the relaxed optimum sits below the anchor by O(1e-4) relative at most
    assert ref <= ours + 1e-6 * ours
    assert ours - ref <= 1e-4 * ours


# -- unreduced LP and column variant ----------------------------------------------


@pytest.mark.parametrize("A, expected", [(ONES, 1.0), (EYE, 2.0)])
def test_full_lp_examples(A, expected):
    assert solve_p123_full(A).objective == pytest.approx(expected, abs=1e-8)


def test_full_lp_matches_reduced(rng):
    for _ in range(3):
        A = random_rank(rng, 6, 4, 2)
        full = solve_p123_full(A)
        reduced = p123(A)
        assert abs(full.objective - reduced.objective) <= 1e-6 * (1 + reduced.objective)
        r = property_residuals(A, full.H)
        assert max(r.p1, r.p2, r.p3) <= 1e-6 * np.linalg.norm(A)


def test_full_lp_size_cap():
    with pytest.raises(SizeCapError):
        solve_p123_full(np.ones((60, 60)))


def test_column_variant_examples():
    sol = column_variant(ONES)
    assert sol.objective == pytest.approx(1 / np.sqrt(2), abs=1e-7)
    assert norm_21(sol.H.T) == pytest.approx(1 / np.sqrt(2), abs=1e-7)
    assert np.allclose(column_variant(EYE).H, EYE)
    assert np.allclose(column_variant(DIAG).H, [[0.5, 0], [0, 0]], atol=1e-7)


def test_column_variant_residuals(rng):
    A = random_rank(rng, 20, 12, 5)
    r = property_residuals(A, column_variant(A).H)
    tol = 1e-6 * np.linalg.norm(A)
    assert max(r.p1, r.p2, r.p4) <= tol
