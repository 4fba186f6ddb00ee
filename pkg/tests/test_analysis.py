import json

import pytest

from delib_agent.analysis.benchmark import (
    EPISODE_COLUMNS,
    episode_table,
    exception_pairs,
    failure_histogram,
    find_run_configs,
    run_one,
    run_suite,
    summary_table,
    timing_table,
    write_report,
)
from delib_agent.executor.episode import canonical_subgoals
from delib_agent.monitor.subgoals import save_subgoals
from delib_agent.sim.templates import receptacle_full_scene


def _row(episode, task, success, gc, plw_sr, plw_gc, category=None, kinds=()):
    return {
        "episode": episode,
        "task": task,
        "success": success,
        "goal_condition_rate": gc,
        "plw_success": plw_sr,
        "plw_goal_condition_rate": plw_gc,
        "length": 20,
        "reference_length": 10,
        "failure_category": category,
        "failed_actions": 1,
        "plan_calls": 3,
        "exceptions": len(kinds),
        "recoveries": len(kinds),
        "error": None,
        "exception_kinds": sorted(kinds),
    }


@pytest.fixture
def rows():
    return [
        _row("ep_c", "Coffee", False, 0.0, 0.0, 0.0, "InteractionFailure",
             ["HandOccupied", "ReceptacleFull", "NoEffectObserved"]),
        _row("ep_a", "Toast", True, 1.0, 0.5, 0.5, kinds=["NoEffectObserved"]),
        _row("ep_b", "Toast", False, 0.5, 0.0, 0.5, "InteractionFailure",
             ["ReceptacleFull", "HandOccupied"]),
        {
            "episode": "ep_d",
            "task": None,
            "success": False,
            "error": "InvalidRunConfig: bad",
            "failure_category": "Other",
        },
    ]


@pytest.fixture
def timings():
    return [
        {"episode": "ep_a", "subgoal": "(Bread, isSliced)", "status": "Solved", "objects": 4,
         "plan_length": 3, "expanded": 9, "pruning": True, "seconds": 0.1},
        {"episode": "ep_b", "subgoal": "(Mug, isClean)", "status": "Solved", "objects": 5,
         "plan_length": 5, "expanded": 20, "pruning": True, "seconds": 0.4},
    ]


def _suite(tmp_path, episodes=("ep_0",)):
    scene, task = receptacle_full_scene()
    scene.save(tmp_path / "scene.json")
    task.save(tmp_path / "task.json")
    save_subgoals(canonical_subgoals(task), tmp_path / "subgoals.json")
    for episode in episodes:
        (tmp_path / "suite" / episode).mkdir(parents=True)
        record = {
            "scene": "../../scene.json",
            "task": "../../task.json",
            "subgoals": "../../subgoals.json",
            "budget": {"max_steps": 10},
        }
        (tmp_path / "suite" / episode / "run.json").write_text(json.dumps(record))
    return tmp_path / "suite"


class TestTables:
    def test_episode_table_fills_missing_columns(self, rows):
        table = episode_table(rows)
        assert list(table.columns) == EPISODE_COLUMNS
        assert list(table.episode) == ["ep_a", "ep_b", "ep_c", "ep_d"]

    def test_summary_per_task_and_overall(self, rows):
        summary = summary_table(episode_table(rows))
        assert list(summary.index) == ["Coffee", "Toast", "all"]
        assert summary.loc["Toast", "episodes"] == 2
        assert summary.loc["Toast", "SR"] == 0.5
        assert summary.loc["Toast", "GC"] == 0.75
        assert summary.loc["Toast", "PLW_SR"] == 0.25
        assert summary.loc["all", "episodes"] == 4
        assert summary.loc["all", "SR"] == 0.25
        assert summary.loc["all", "GC"] == 0.375

    def test_failure_histogram(self, rows):
        histogram = failure_histogram(episode_table(rows))
        assert list(zip(histogram.failure_category, histogram.episodes)) == [
            ("InteractionFailure", 2),
            ("Other", 1),
        ]

    def test_exception_pairs(self, rows):
        pairs = exception_pairs(rows)
        assert [tuple(r) for r in pairs.itertuples(index=False)] == [
            ("HandOccupied", "NoEffectObserved", 1),
            ("HandOccupied", "ReceptacleFull", 2),
            ("NoEffectObserved", "ReceptacleFull", 1),
        ]

    def test_timing_table_columns(self, timings):
        table = timing_table(timings)
        assert list(table.columns)[-1] == "seconds"
        assert len(table) == 2

    def test_write_report(self, tmp_path, rows, timings):
        report = write_report(tmp_path / "report", rows, timings)
        for name in ("episodes", "summary", "failures", "exception_pairs", "plan_times"):
            assert (tmp_path / "report" / f"{name}.csv").exists()
        assert "Median plan time: 0.2500s over 2 planner calls" in report
        assert "1 episodes could not run:" in report
        assert "  ep_d: InvalidRunConfig: bad" in report

    def test_report_without_timings(self, tmp_path, rows):
        report = write_report(tmp_path, rows, [])
        assert "over 0 planner calls" in report


class TestSuite:
    def test_run_configs_are_found_sorted(self, tmp_path):
        suite = _suite(tmp_path, episodes=("ep_1", "ep_0"))
        assert find_run_configs(suite) == [
            suite / "ep_0" / "run.json",
            suite / "ep_1" / "run.json",
        ]

    def test_broken_config_becomes_an_error_row(self, tmp_path):
        (tmp_path / "ep_x").mkdir()
        (tmp_path / "ep_x" / "run.json").write_text("[]")
        row, timings = run_one(tmp_path / "ep_x" / "run.json")
        assert row["episode"] == "ep_x"
        assert row["error"].startswith("InvalidRunConfig")
        assert row["failure_category"] == "Other"
        assert timings == []

    def test_run_one_writes_episode_outputs(self, tmp_path):
        suite = _suite(tmp_path)
        path = suite / "ep_0" / "run.json"
        row, timings = run_one(path, {"replanning": False}, tmp_path / "out")
        assert row["error"] is None
        assert row["task"] == "ReceptacleFull"
        assert not row["success"]
        assert (tmp_path / "out" / "ep_0" / "metrics.json").exists()
        assert all(t["episode"] == "ep_0" for t in timings)

    def test_run_suite_sorts_rows(self, tmp_path):
        (tmp_path / "b").mkdir()
        (tmp_path / "a").mkdir()
        (tmp_path / "b" / "run.json").write_text("{")
        (tmp_path / "a" / "run.json").write_text("{")
        rows, timings = run_suite(find_run_configs(tmp_path))
        assert [r["episode"] for r in rows] == ["a", "b"]
        assert timings == []
