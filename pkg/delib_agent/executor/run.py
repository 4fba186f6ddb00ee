"""Run configurations: what one episode needs, as a JSON file."""
import json
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Optional

import yaml

from delib_agent import logger
from delib_agent.executor.budget import Budget
from delib_agent.executor.episode import EpisodeSettings, run_episode
from delib_agent.executor.errors import InvalidRunConfig
from delib_agent.monitor.dialog import Lexicon
from delib_agent.monitor.errors import MonitorError
from delib_agent.monitor.subgoals import load_subgoals
from delib_agent.sim.generator import generate_scene
from delib_agent.sim.noise import NoiseConfig
from delib_agent.sim.scene import SceneSpec, TaskSpec

PATH_FIELDS = (
    "scene",
    "task",
    "subgoals",
    "dialog",
    "lexicon",
    "out",
    "dump_plans",
    "dump_frames",
    "trajectory",
)


@dataclass
class RunConfig:
    """One episode: scene, task, subgoal source, noise, seeds and switches.

    The scene comes from a file or from the generator (`generator` holds
    template, seed, distractors and p_hidden). Subgoals come from exactly one
    of a subgoal file or a dialog file.
    """

    scene: Optional[str] = None
    task: Optional[str] = None
    generator: Optional[dict] = None
    subgoals: Optional[str] = None
    dialog: Optional[str] = None
    lexicon: Optional[str] = None
    noise: dict = field(default_factory=dict)
    seed: int = 0
    budget: dict = field(default_factory=dict)
    timeout: Optional[float] = None
    out: Optional[str] = None
    dump_plans: Optional[str] = None
    dump_frames: Optional[str] = None
    trajectory: Optional[str] = None
    pruning: bool = True
    replanning: bool = True
    last_subgoal_only: bool = False

    def validate(self):
        """Raises InvalidRunConfig on contradictory or missing settings."""
        if (self.scene is None) == (self.generator is None):
            raise InvalidRunConfig("Give either a scene file or generator settings")
        if self.scene is not None and self.task is None:
            raise InvalidRunConfig("A scene file needs a task file")
        if (self.subgoals is None) == (self.dialog is None):
            raise InvalidRunConfig("Give exactly one subgoal source: a subgoal file or a dialog")
        if self.lexicon is not None and self.dialog is None:
            raise InvalidRunConfig("A lexicon only applies to dialog input")
        if self.generator is not None and "template" not in self.generator:
            raise InvalidRunConfig("Generator settings need a template")
        try:
            NoiseConfig.from_dict(self.noise)
        except (TypeError, ValueError) as e:
            raise InvalidRunConfig(f"Bad noise settings: {e}")
        self.budget_caps()
        if self.timeout is not None and self.timeout <= 0:
            raise InvalidRunConfig(f"timeout must be positive, got {self.timeout}")
        return self

    def budget_caps(self):
        try:
            return Budget.from_config(self.budget)
        except TypeError as e:
            raise InvalidRunConfig(f"Bad budget settings: {e}")

    def settings(self):
        return EpisodeSettings(
            seed=self.seed,
            noise=dict(self.noise),
            budget=self.budget_caps(),
            timeout=self.timeout,
            pruning=self.pruning,
            replanning=self.replanning,
            last_subgoal_only=self.last_subgoal_only,
            dump_plans=self.dump_plans,
            dump_frames=self.dump_frames,
            record_trajectory=self.trajectory is not None,
        )

    def to_dict(self):
        return asdict(self)

    @classmethod
    def from_dict(cls, record, base=None):
        """Builds a config; relative paths resolve against `base`."""
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(record) - known)
        if unknown:
            raise InvalidRunConfig(f"Unknown run settings {unknown}")
        values = dict(record)
        if base is not None:
            for name in PATH_FIELDS:
                if values.get(name) is not None:
                    values[name] = str(Path(base) / values[name])
        return cls(**values)

    @classmethod
    def load(cls, path):
        path = Path(path)
        try:
            record = json.loads(path.read_text())
        except (OSError, ValueError) as e:
            raise InvalidRunConfig(f"Cannot read {path}: {e}")
        return cls.from_dict(record, base=path.parent)

    def save(self, path):
        Path(path).write_text(json.dumps(self.to_dict(), indent=1, sort_keys=True))


def read_dialog(path):
    """Dialog turns from a JSON/YAML list or a text file with one turn per line."""
    text = Path(path).read_text()
    try:
        turns = yaml.safe_load(text)
    except yaml.YAMLError:
        turns = None
    if isinstance(turns, list):
        return [str(t) for t in turns]
    return [line for line in text.splitlines() if line.strip()]


def load_episode(run_config):
    """The scene and task a run config names.

    Returns:
        (tuple) SceneSpec, TaskSpec.

    """
    if run_config.generator is not None:
        generated = generate_scene(**run_config.generator)
        return generated.scene, generated.task
    try:
        return SceneSpec.load(run_config.scene), TaskSpec.load(run_config.task)
    except (OSError, ValueError, KeyError, TypeError) as e:
        raise InvalidRunConfig(f"Cannot load scene or task: {e}")


def execute(run_config):
    """Runs the episode of a run config and writes its outputs.

    Writes `trace.jsonl`, `metrics.json` and `timings.csv` into `out` when
    it is set. The state trajectory goes to `trajectory` for later
    subgoal annotation.

    Returns:
        (EpisodeResult)

    Raises:
        InvalidRunConfig: Contradictory settings or unreadable inputs.

    """
    run_config.validate()
    scene, task = load_episode(run_config)
    subgoals, dialog, lexicon = None, None, None
    try:
        if run_config.subgoals is not None:
            subgoals = load_subgoals(run_config.subgoals)
        else:
            dialog = read_dialog(run_config.dialog)
            if run_config.lexicon is not None:
                lexicon = Lexicon.load(run_config.lexicon)
    except (OSError, ValueError, KeyError, MonitorError) as e:
        raise InvalidRunConfig(f"Cannot read the subgoal source: {e}")

    result = run_episode(scene, task, subgoals, dialog, lexicon, settings=run_config.settings())
    if run_config.trajectory is not None:
        Path(run_config.trajectory).parent.mkdir(parents=True, exist_ok=True)
        result.trajectory.save(run_config.trajectory)
    if run_config.out is not None:
        out = Path(run_config.out)
        out.mkdir(parents=True, exist_ok=True)
        result.trace.write(out / "trace.jsonl")
        result.trace.write_timings(out / "timings.csv")
        (out / "metrics.json").write_text(json.dumps(result.metrics, indent=1, sort_keys=True))
        logger.info(f"Wrote trace and metrics of {scene.name} to {out}")
    return result
