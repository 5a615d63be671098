import mpmath
import numpy as np
import pytest
import sympy

from octic_monodromy.config import RunConfig
from octic_monodromy.pipeline import MonodromyPipeline, run
from octic_monodromy.reference import S_M1


def _config(**values) -> RunConfig:
    return RunConfig(**values).validate()


def test_cones_stage_from_printed_matrices():
    report = run(_config(stages=("cones",)))
    assert report.ok
    assert report.provenance == {"cones": "printed"}
    cones = report.stages["cones"]
    assert all(cones["nilpotents_match_printed"].values())
    assert all(cone["matches_printed"] for cone in cones["cones"].values())
    assert cones["cones"]["45"]["label"] == "<I1|II1|II0>"
    assert set(cones["hodge_diamonds"]) == {"I1", "I2", "II0", "II1", "IV2"}


def test_amodel_stage():
    report = run(_config(stages=("amodel",)))
    result = report.stages["amodel"]
    assert result["pairing_is_minus_Q"]
    assert result["mum_commute"]
    assert result["mum_symplectic"]
    assert result["residues_match_printed"]
    assert result["mum_match_first_list"]
    re, im = result["yukawa_constant"]
    assert float(re) == 0
    assert float(im) == pytest.approx(-1 / (2 * float(mpmath.pi) ** 3))
    assert len(im) > 30


def test_transport_stage_records_loops():
    progress = []
    pipeline = MonodromyPipeline(_config(stages=("transport",), loops=("l1", "l2"), steps=4000,
                                         threads=2),
                                 progress_callback=lambda *args: progress.append(args))
    report = pipeline.run()
    loops = report.stages["transport"]["loops"]
    assert sorted(loops) == ["l1", "l2"]
    expected = np.array(sympy.N(S_M1).tolist(), dtype=complex)
    assert np.max(np.abs(loops["l1"]["matrix"] - expected)) < 1e-2
    assert loops["l1"]["steps"] == 4000
    assert loops["l1"]["reconstructed"] is False
    assert progress[-1] == ("transport", 2, 2)


def test_transport_failures_are_recorded_per_loop():
    report = run(_config(stages=("transport",), loops=("l1",), steps=1000, max_error=1e-30))
    assert report.stages["transport"]["loops"] == {}
    assert [f["error"] for f in report.failures] == ["ConvergenceFailure"]
    assert report.failures[0]["stage"] == "transport"


def test_snap_without_conifold_loop_uses_printed_matrix():
    report = run(_config(stages=("snap",), loops=("l1",), steps=1000, max_error=1e-30))
    assert report.stages["snap"]["R"]["S_con1_source"] == "printed S_con1"
    assert report.stages["snap"]["matrices"] == {}
    assert abs(report.stages["snap"]["R"]["free_entries"]["R12"] - 2.349j) < 0.01
    assert report.stages["snap"]["R"]["diagnostics"]["printed_distance"] < 0.25


@pytest.mark.slow
def test_snap_stage_reproduces_integral_lists():
    report = run(_config(stages=("snap", "cones"), loops=("l1", "l2"), steps=10 ** 5))
    for label in ("l1", "l2"):
        entry = report.stages["snap"]["matrices"][label]
        assert entry["matches_first_list"]
        assert entry["matches_second_list"]
    assert report.provenance["cones"].startswith("computed for T_m1, T_m2")


def test_fan_stage_is_cancellable():
    calls = []

    def should_continue():
        calls.append(1)
        return len(calls) < 4

    report = run(_config(stages=("cones", "fan")), should_continue=should_continue)
    assert "cones" in report.stages
    assert report.provenance["fan"] == "reference cones"
    assert len(report.stages["fan"]["verdicts"]) == 1


def test_cancelled_run_is_empty():
    pipeline = MonodromyPipeline(_config(stages=("amodel",)), should_continue=lambda: False)
    assert pipeline.run().stages == {}
    assert pipeline.cancelled


def test_stage_reports_merge_into_the_combined_run():
    combined = run(_config(stages=("amodel", "cones", "fan")))
    merged = run(_config(stages=("amodel",))).merge(run(_config(stages=("cones", "fan"))))
    assert merged.config != combined.config
    merged.config = combined.config
    assert merged.to_json() == combined.to_json()


def test_repeated_runs_are_byte_identical():
    config = dict(stages=("amodel", "transport", "cones"), loops=("l1",), steps=1000)
    assert run(_config(**config)).to_json() == run(_config(**config)).to_json()


def test_threaded_transport_stops_submitting_when_cancelled():
    calls = []

    def should_continue():
        calls.append(1)
        return len(calls) <= 3

    pipeline = MonodromyPipeline(_config(stages=("transport",), loops=("l1", "l2", "con1"),
                                         steps=1000, threads=2),
                                 should_continue=should_continue)
    loops = pipeline.run().stages["transport"]["loops"]
    assert pipeline.cancelled
    assert "con1" not in loops
    assert set(loops) <= {"l1", "l2"}
