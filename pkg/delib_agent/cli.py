# -*- coding: utf-8 -*-
"""The `delib` command line.

Exit codes:
    0: success (plan found, task completed, files written)
    1: usage, configuration or parse error
    2: the planner proved the goal unreachable
    3: the planner timed out
    4: the episode ran but the task failed
    5: a trajectory could not be annotated
"""
import json
import sys
from pathlib import Path

import click

from delib_agent import logger
from delib_agent.analysis.benchmark import find_run_configs, run_suite, write_report
from delib_agent.executor.errors import InvalidRunConfig
from delib_agent.executor.run import RunConfig, execute
from delib_agent.monitor.annotate import TrajectoryRecord, annotate_subgoals
from delib_agent.monitor.errors import InconsistentTrajectory
from delib_agent.monitor.subgoals import Subgoal, save_subgoals
from delib_agent.pddl import ground, parse_domain, parse_problem
from delib_agent.pddl.errors import PDDLError, PDDLSyntaxError
from delib_agent.planner.plans import PlanStatus
from delib_agent.planner.search import search_plan
from delib_agent.sim.errors import GenerationFailure, SimulationError
from delib_agent.sim.generator import generate_scene
from delib_agent.sim.templates import TEMPLATES
from delib_agent.utils.utils import seed_range

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NO_SOLUTION = 2
EXIT_TIMEOUT = 3
EXIT_TASK_FAILED = 4
EXIT_INCONSISTENT = 5

RUN_OPTIONS = (
    "scene",
    "task",
    "subgoals",
    "dialog",
    "lexicon",
    "seed",
    "timeout",
    "out",
    "dump_plans",
    "dump_frames",
    "trajectory",
)

PLAN_EXIT = {
    PlanStatus.SOLVED: EXIT_OK,
    PlanStatus.GOAL_ALREADY_SATISFIED: EXIT_OK,
    PlanStatus.NO_SOLUTION: EXIT_NO_SOLUTION,
    PlanStatus.TIMEOUT: EXIT_TIMEOUT,
}


def _fail(message, code=EXIT_USAGE):
    click.echo(f"Error: {message}", err=True)
    sys.exit(code)


def _read(path):
    try:
        return Path(path).read_text()
    except OSError as e:
        _fail(f"cannot read {path}: {e}")


def _parse_error(path, error):
    if isinstance(error, PDDLSyntaxError) and error.line is not None:
        location = f"{path}:{error.line}:{error.column}"
        expected = f" (expected {error.expected})" if error.expected else ""
        return f"{location}: {error.message}{expected}"
    return f"{path}: {error}"


@click.group()
def cli():
    """Plans, runs and scores household agent episodes."""


@cli.command()
@click.argument("domain_file", type=click.Path(exists=True, dir_okay=False))
@click.argument("problem_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--timeout", type=float, default=None, help="Search seconds.")
@click.option("--uniform-cost", is_flag=True, help="Order the search by plan cost alone.")
def plan(domain_file, problem_file, timeout, uniform_cost):
    """Solves a PDDL problem and prints one action per line."""
    try:
        domain = parse_domain(_read(domain_file))
    except PDDLError as e:
        logger.error(f"Cannot parse {domain_file}: {e}")
        _fail(_parse_error(domain_file, e))
    try:
        problem = parse_problem(_read(problem_file), domain)
        task = ground(domain, problem)
    except PDDLError as e:
        logger.error(f"Cannot parse {problem_file}: {e}")
        _fail(_parse_error(problem_file, e))

    outcome = search_plan(task, timeout=timeout, uniform_cost=uniform_cost or None)
    logger.info(f"{outcome.status.value} in {outcome.elapsed:.3f}s")
    if outcome.solved:
        for line in outcome.plan.to_lines():
            click.echo(line)
        click.echo(f"; cost = {outcome.plan.cost}")
    else:
        click.echo(f"; {outcome.status.value}")
    sys.exit(PLAN_EXIT[outcome.status])


@cli.command()
@click.option("--config", "config_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--scene", type=click.Path(), help="SceneSpec JSON.")
@click.option("--task", type=click.Path(), help="TaskSpec JSON.")
@click.option("--template", help="Generate the scene from this task template.")
@click.option("--distractors", type=int, default=None)
@click.option("--p-hidden", type=float, default=None)
@click.option("--subgoals", type=click.Path(), help="Subgoal list JSON.")
@click.option("--dialog", type=click.Path(), help="Dialog turns.")
@click.option("--lexicon", type=click.Path(), help="Dialog patterns, YAML or JSON.")
@click.option("--seed", type=int, default=None)
@click.option("--noise", default=None, help="Noise settings as JSON.")
@click.option("--timeout", type=float, default=None, help="Planner seconds per call.")
@click.option("--max-steps", type=int, default=None)
@click.option("--out", type=click.Path(), help="Directory for the trace and metrics.")
@click.option("--dump-plans", type=click.Path())
@click.option("--dump-frames", type=click.Path())
@click.option("--trajectory", type=click.Path(), help="Where to save the state trajectory.")
@click.option("--no-pruning", is_flag=True)
@click.option("--no-replanning", is_flag=True)
@click.option("--last-subgoal-only", is_flag=True)
def run(config_file, template, distractors, p_hidden, noise, max_steps, **options):
    """Runs one episode; exits 0 when the task is completed and 4 otherwise."""
    try:
        run_config = RunConfig.load(config_file) if config_file else RunConfig()
    except InvalidRunConfig as e:
        _fail(e)
    for name in RUN_OPTIONS:
        if options[name] is not None:
            setattr(run_config, name, options[name])
    if noise is not None:
        try:
            run_config.noise = json.loads(noise)
        except ValueError as e:
            _fail(f"--noise is not JSON: {e}")
    if max_steps is not None:
        run_config.budget = dict(run_config.budget, max_steps=max_steps)
    if template is not None:
        run_config.generator = {"template": template, "seed": run_config.seed}
    if run_config.generator is not None:
        if distractors is not None:
            run_config.generator["distractors"] = distractors
        if p_hidden is not None:
            run_config.generator["p_hidden"] = p_hidden
    run_config.pruning = run_config.pruning and not options["no_pruning"]
    run_config.replanning = run_config.replanning and not options["no_replanning"]
    run_config.last_subgoal_only = run_config.last_subgoal_only or options["last_subgoal_only"]

    try:
        result = execute(run_config)
    except (InvalidRunConfig, SimulationError) as e:
        _fail(e)
    metrics = result.metrics
    summary = {k: metrics[k] for k in ("task", "success", "goal_condition_rate", "length")}
    summary["failure_category"] = metrics["failure_category"]
    click.echo(json.dumps(summary, sort_keys=True))
    sys.exit(EXIT_OK if result.success else EXIT_TASK_FAILED)


@cli.command()
@click.argument("suite", type=click.Path(exists=True, file_okay=False))
@click.option("--jobs", type=int, default=1, show_default=True)
@click.option("--out", type=click.Path(), default=None, help="Defaults to SUITE/results.")
@click.option("--no-pruning", is_flag=True)
@click.option("--no-replanning", is_flag=True)
@click.option("--last-subgoal-only", is_flag=True)
def bench(suite, jobs, out, no_pruning, no_replanning, last_subgoal_only):
    """Runs every run.json under SUITE and prints SR, GC and their PLW versions."""
    paths = find_run_configs(suite)
    if not paths:
        _fail(f"no run.json found under {suite}")
    overrides = {}
    if no_pruning:
        overrides["pruning"] = False
    if no_replanning:
        overrides["replanning"] = False
    if last_subgoal_only:
        overrides["last_subgoal_only"] = True
    out = Path(out) if out is not None else Path(suite) / "results"
    logger.info(f"Running {len(paths)} episodes with {jobs} jobs, overrides {overrides}")
    rows, timings = run_suite(paths, jobs=jobs, overrides=overrides, out_dir=out / "episodes")
    click.echo(write_report(out, rows, timings))


@cli.command()
@click.argument("trajectory", type=click.Path(exists=True, dir_okay=False))
@click.option("--out", type=click.Path(), default=None, help="Label file; stdout when unset.")
def annotate(trajectory, out):
    """Labels each goal condition with the step that first satisfies it."""
    try:
        record = TrajectoryRecord.load(trajectory)
    except (ValueError, KeyError, TypeError) as e:
        _fail(f"cannot read {trajectory}: {e}")
    try:
        labels = annotate_subgoals(record)
    except InconsistentTrajectory as e:
        logger.error(f"{trajectory}: {e}")
        _fail(e, EXIT_INCONSISTENT)
    text = json.dumps([{"step": step, "subgoal": s.to_dict()} for step, s in labels], indent=1)
    if out is None:
        click.echo(text)
    else:
        Path(out).write_text(text)
        logger.info(f"Wrote {len(labels)} subgoal labels to {out}")


@cli.command()
@click.option("--out", type=click.Path(file_okay=False), required=True)
@click.option(
    "--template",
    "templates",
    multiple=True,
    type=click.Choice(sorted(TEMPLATES)),
    help="Repeat for several; all templates when unset.",
)
@click.option("--episodes", type=int, default=1, show_default=True, help="Seeds per template.")
@click.option("--seed", type=int, default=0, show_default=True, help="First seed.")
@click.option("--distractors", type=int, default=0, show_default=True)
@click.option("--p-hidden", type=float, default=0.0, show_default=True)
@click.option("--noise", default=None, help="Noise settings as JSON, copied into every run.json.")
def generate(out, templates, episodes, seed, distractors, p_hidden, noise):
    """Writes a suite directory of generated episodes for `delib bench`."""
    try:
        noise = json.loads(noise) if noise else {}
    except ValueError as e:
        _fail(f"--noise is not JSON: {e}")
    out = Path(out)
    written = 0
    for template in templates or sorted(TEMPLATES):
        for episode_seed in seed_range(seed, episodes):
            try:
                generated = generate_scene(template, episode_seed, distractors, p_hidden)
            except GenerationFailure as e:
                logger.warning(f"Skipping: {e}")
                continue
            folder = out / f"{template}_{episode_seed:03d}"
            folder.mkdir(parents=True, exist_ok=True)
            generated.scene.save(folder / "scene.json")
            generated.task.save(folder / "task.json")
            subgoals = [Subgoal.from_dict(s) for s in generated.task.subgoals]
            save_subgoals(subgoals, folder / "subgoals.json")
            RunConfig(
                scene="scene.json",
                task="task.json",
                subgoals="subgoals.json",
                seed=episode_seed,
                noise=dict(noise),
            ).save(folder / "run.json")
            written += 1
    click.echo(f"Wrote {written} episodes to {out}")
    if not written:
        sys.exit(EXIT_USAGE)


if __name__ == "__main__":
    cli()
