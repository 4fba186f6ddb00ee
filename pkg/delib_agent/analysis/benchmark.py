"""Runs a suite of episodes and aggregates their metrics."""
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import pandas as pd

from delib_agent import logger
from delib_agent.executor.run import RunConfig, execute
from delib_agent.utils.utils import cooccurrence_graph, flatten_lists

EPISODE_COLUMNS = [
    "episode",
    "task",
    "success",
    "goal_condition_rate",
    "plw_success",
    "plw_goal_condition_rate",
    "length",
    "reference_length",
    "failure_category",
    "failed_actions",
    "plan_calls",
    "exceptions",
    "recoveries",
    "error",
]


def find_run_configs(suite_dir):
    """Paths of every `run.json` under a suite directory, sorted."""
    return sorted(Path(suite_dir).rglob("run.json"))


def run_one(path, overrides=None, out_dir=None):
    """Runs one episode of a suite; never raises.

    Args:
        path (Path): A run.json file.
        overrides (dict): RunConfig fields to replace, e.g. the ablation switches.
        out_dir (Path): Where the episode's trace and metrics go.

    Returns:
        (tuple) The episode row and its planner timings.

    """
    path = Path(path)
    episode = path.parent.name
    row = {"episode": episode, "task": None, "success": False, "error": None}
    timings = []
    try:
        run_config = RunConfig.load(path)
        for name, value in (overrides or {}).items():
            setattr(run_config, name, value)
        if out_dir is not None:
            run_config.out = str(Path(out_dir) / episode)
        result = execute(run_config)
        metrics = result.metrics
        row.update({k: metrics.get(k) for k in EPISODE_COLUMNS if k in metrics})
        row["exceptions"] = sum(metrics["exceptions"].values())
        row["recoveries"] = sum(metrics["recoveries"].values())
        row["exception_kinds"] = sorted(metrics["exceptions"])
        timings = [dict(t, episode=episode) for t in result.trace.timings]
    except Exception as e:
        logger.warning(f"Episode {episode} could not run: {e}")
        row.update(error=f"{type(e).__name__}: {e}", failure_category="Other")
    return row, timings


def run_suite(paths, jobs=1, overrides=None, out_dir=None):
    """Runs every episode, in parallel when `jobs` > 1.

    Returns:
        (tuple) Episode rows sorted by episode name, and all planner timings.

    """
    args = [(p, overrides, out_dir) for p in paths]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as executor:
            results = list(executor.map(run_one, *zip(*args)))
    else:
        results = [run_one(*a) for a in args]
    rows = sorted((r for r, _ in results), key=lambda r: r["episode"])
    timings = flatten_lists([t for _, t in results])
    return rows, timings


def episode_table(rows):
    table = pd.DataFrame(rows)
    for column in EPISODE_COLUMNS:
        if column not in table:
            table[column] = None
    return table[EPISODE_COLUMNS].sort_values("episode").reset_index(drop=True)


def _scores(frame):
    return pd.Series(
        {
            "episodes": len(frame),
            "SR": frame.success.astype(float).mean(),
            "GC": frame.goal_condition_rate.astype(float).fillna(0.0).mean(),
            "PLW_SR": frame.plw_success.astype(float).fillna(0.0).mean(),
            "PLW_GC": frame.plw_goal_condition_rate.astype(float).fillna(0.0).mean(),
        }
    )


def summary_table(episodes):
    """SR, GC and their path-length-weighted versions per task and overall.

    Args:
        episodes (`pd.DataFrame`): Output of `episode_table`.

    Returns:
        (`pd.DataFrame`) One row per task, then an `all` row.

    """
    rows = [_scores(frame).rename(task) for task, frame in episodes.groupby("task", sort=True)]
    rows.append(_scores(episodes).rename("all"))
    table = pd.DataFrame(rows)
    table["episodes"] = table.episodes.astype(int)
    table.index.name = "task"
    return table.round(4)


def failure_histogram(episodes):
    """Unsuccessful episodes per failure category."""
    failed = episodes[~episodes.success.astype(bool)]
    counts = failed.failure_category.fillna("Other").value_counts()
    table = counts.rename_axis("failure_category").reset_index(name="episodes")
    return table.sort_values(["episodes", "failure_category"], ascending=[False, True])


def exception_pairs(rows):
    """How often two exception kinds occur in the same episode."""
    graph = cooccurrence_graph([r.get("exception_kinds", []) for r in rows])
    table = pd.DataFrame(
        [(a, b, n) for (a, b), n in sorted(graph.items())], columns=["first", "second", "episodes"]
    )
    return table


def timing_table(timings):
    columns = ["episode", "subgoal", "status", "objects", "plan_length", "expanded", "pruning"]
    return pd.DataFrame(timings, columns=columns + ["seconds"])


def write_report(out_dir, rows, timings):
    """Writes the benchmark CSVs and returns the pretty text report.

    `episodes.csv`, `summary.csv`, `failures.csv` and `exception_pairs.csv`
    depend only on seeds and settings; wall-clock planner timings go to
    `plan_times.csv` on their own.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    episodes = episode_table(rows)
    summary = summary_table(episodes)
    failures = failure_histogram(episodes)
    times = timing_table(timings)
    episodes.to_csv(out / "episodes.csv", index=False)
    summary.to_csv(out / "summary.csv")
    failures.to_csv(out / "failures.csv", index=False)
    exception_pairs(rows).to_csv(out / "exception_pairs.csv", index=False)
    times.to_csv(out / "plan_times.csv", index=False)

    median = times.seconds.median() if len(times) else float("nan")
    lines = [
        summary.to_string(),
        "",
        "Failures:",
        failures.to_string(index=False) if len(failures) else "  none",
        "",
        f"Median plan time: {median:.4f}s over {len(times)} planner calls",
    ]
    errors = episodes[episodes.error.notna()]
    if len(errors):
        lines += ["", f"{len(errors)} episodes could not run:"]
        lines += [f"  {e.episode}: {e.error}" for e in errors.itertuples()]
    logger.info(f"Benchmark of {len(episodes)} episodes written to {out}")
    return "\n".join(lines)
