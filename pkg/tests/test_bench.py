import dataclasses
import json

import numpy as np
import pytest

from conftest import EYE, ONES
from ginv.bench import (
    METHODS,
    InstanceSpec,
    InverseReport,
    _sprand,
    SuiteConfig,
    generate,
    ratio_study,
    render_table,
    reports_from_jsonl,
    reports_to_jsonl,
    run_method,
    run_suite,
)
from ginv.errors import BoundViolation, ConfigError, RankError
from ginv.matcore import nonzero_rows, norm_0, norm_1, norm_21, property_residuals, svd
from ginv.solvers import SolverConfig


def test_spec_validation_and_parse():
    assert InstanceSpec.parse("40x20x10") == InstanceSpec(40, 20, 10)
    assert InstanceSpec.parse("4,3,2", 1.0, 7) == InstanceSpec(4, 3, 2, 1.0, 7)
    for bad in ("4x3", "ax3x2", "4x3x5"):
        with pytest.raises(ConfigError):
            InstanceSpec.parse(bad)
    with pytest.raises(ConfigError):
        InstanceSpec(4, 3, 2, density=0.0)


def test_generate_small():
    spec = InstanceSpec(4, 3, 2, 1.0, 7)
    A = generate(spec)
    assert A.shape == (4, 3) and svd(A).r == 2
    assert np.array_equal(A, generate(spec))


def test_generate_moderate_size():
    A = generate(InstanceSpec(40, 20, 10, 0.5, 1))
    assert svd(A).r == 10
    assert np.all(A >= 0)


def test_generate_reseeds_on_rank_failure():
    # seed 1 at this density draws rank-deficient factors; seed 2 is used instead
    first = np.random.default_rng(1)
    B, C = _sprand(first, 6, 4, 0.3), _sprand(first, 4, 6, 0.3)
    assert not np.any(B @ C) or svd(B @ C).r < 4
    A = generate(InstanceSpec(6, 6, 4, 0.3, 1))
    assert svd(A).r == 4
    assert np.array_equal(A, generate(InstanceSpec(6, 6, 4, 0.3, 2)))


def test_generate_gives_up():
    with pytest.raises(RankError):
        generate(InstanceSpec(5, 5, 5, 0.01, 0))


def test_run_method_ones():
    ls = run_method(ONES, "LS")
    assert (ls.nzr, ls.norm1) == (1, pytest.approx(1.0))
    assert ls.norm21 == pytest.approx(1 / np.sqrt(2))
    for method in METHODS:
        rep = run_method(ONES, method)
        assert rep.status == "Optimal", method
        assert rep.residuals[0] <= 1e-8


def test_run_method_identity():
    for method in METHODS:
        rep = run_method(EYE, method)
        assert (rep.nzr, rep.norm1) == (2, pytest.approx(2.0)), method


def test_unknown_method():
    with pytest.raises(ConfigError):
        run_method(ONES, "SIMPLEX")


def test_errors_become_statuses():
    cfg = SuiteConfig(solver=SolverConfig(full_size_cap=10))
    rep = run_method(generate(InstanceSpec(8, 6, 3)), "P123_FULL", cfg)
    assert rep.status == "Error" and rep.norm1 is None


def test_report_metrics_match_recomputation():
    spec = InstanceSpec(40, 20, 10, 0.5, 1)
    A = generate(spec)
    for rep in run_suite([spec], ["P21", "P123", "LS", "MP"]):
        assert rep.nzr == nonzero_rows(rep.H)
        assert rep.norm0 == norm_0(rep.H)
        assert rep.norm1 == norm_1(rep.H)
        assert rep.norm21 == norm_21(rep.H)
        assert rep.residuals == tuple(property_residuals(A, rep.H))
        assert rep.residuals[0] <= 1e-6 * np.linalg.norm(A)


def test_table_patterns():
    spec = InstanceSpec(40, 20, 10, 0.5, 2)
    reps = {r.method: r for r in run_suite([spec], ["P21", "P123", "LS"])}
    assert reps["P21"].nzr >= 10 and reps["LS"].nzr == 10
    assert reps["P21"].norm21 <= reps["P123"].norm21 <= reps["LS"].norm21
    assert reps["P123"].norm1 <= reps["P21"].norm1


def test_jsonl_round_trip():
    reps = run_suite([InstanceSpec(6, 4, 2, 1.0, 3)], ["P21", "LS"])
    text = reports_to_jsonl(reps)
    back = reports_from_jsonl(text)
    assert back == reps  # H is excluded from comparison
    keys = list(json.loads(text.splitlines()[0]))
    assert keys[:7] == ["instance", "m", "n", "r", "seed", "method", "status"]
    assert "time_s" not in reports_to_jsonl(reps, timing=False)


def test_suite_order_and_parallel_determinism():
    specs = [InstanceSpec(8, 6, 3, 0.8, s) for s in (1, 2)]
    methods = ["LS", "P21", "MP"]
    serial = run_suite(specs, methods, workers=1)
    parallel = run_suite(specs, methods, workers=2)
    assert [(r.seed, r.method) for r in serial] == [(s, m) for s in (1, 2) for m in methods]
    assert reports_to_jsonl(serial, timing=False) == reports_to_jsonl(parallel, timing=False)
    for a, b in zip(serial, parallel):
        assert np.array_equal(a.H, b.H)


def test_ratio_study_examples():
    reps = [run_method(ONES, "LS"), run_method(ONES, "P123")]
    (res,) = ratio_study(reps)
    assert res.ratio == pytest.approx(1.0) and res.r == 1
    reps = [run_method(EYE, "LS"), run_method(EYE, "P123")]
    assert ratio_study(reps)[0].ratio == pytest.approx(1.0)


def test_ratio_study_random():
    specs = [InstanceSpec(40, 20, 10, 0.5, 1)]
    (res,) = ratio_study(run_suite(specs, ["LS", "P123"]))
    assert 1.0 - 1e-9 <= res.ratio <= 10


def test_ratio_study_errors():
    with pytest.raises(ConfigError):
        ratio_study([run_method(ONES, "LS")])
    ls = dataclasses.replace(run_method(ONES, "LS"), norm1=5.0)
    with pytest.raises(BoundViolation):
        ratio_study([ls, run_method(ONES, "P123")])


def test_render_table():
    reps = run_suite([InstanceSpec(6, 4, 2, 1.0, 3)], ["P21", "LS"])
    reps.append(InverseReport("6,4,2", 6, 4, 2, 3, "P123_FULL", "TimeLimit"))
    reps[1] = dataclasses.replace(reps[1], status="IterLimit")
    lines = render_table(reps).splitlines()
    assert "NZR" in lines[0] and "||H||_2,1" in lines[0]
    assert lines[2].startswith("6,4,2") and lines[3].startswith(" ")
    assert lines[3].rstrip().endswith("*")
    assert lines[4].split()[1:] == ["-", "-", "-", "-", "*"]
