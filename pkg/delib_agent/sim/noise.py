"""Seeded perturbations of actions and observations."""
from dataclasses import asdict, dataclass

import numpy as np

from delib_agent import config


@dataclass(frozen=True)
class NoiseConfig:
    p_action_fail: float = 0.0
    p_detection_drop: float = 0.0
    p_state_flip: float = 0.0
    depth_sigma: float = 0.0

    def __post_init__(self):
        for name in ("p_action_fail", "p_detection_drop", "p_state_flip"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {value}")
        if self.depth_sigma < 0:
            raise ValueError("depth_sigma must be nonnegative")

    @classmethod
    def from_dict(cls, record=None):
        merged = dict(config["sim"]["noise"])
        merged.update(record or {})
        return cls(**merged)

    def to_dict(self):
        return asdict(self)

    @property
    def silent(self):
        return not any(asdict(self).values())


class NoiseModel:
    """Draws every perturbation from one generator seeded per episode.

    A zero probability never consumes a draw, so a silent model leaves runs
    identical to noiseless ones.
    """

    def __init__(self, noise, seed=0):
        self.config = noise
        self.rng = np.random.default_rng(seed)

    def _event(self, p):
        if p <= 0.0:
            return False
        if p >= 1.0:
            return True
        return bool(self.rng.random() < p)

    def swallow_action(self):
        """True when the next manipulation silently does nothing."""
        return self._event(self.config.p_action_fail)

    def perturb_depth(self, depth):
        if self.config.depth_sigma <= 0.0:
            return depth
        noisy = depth + self.rng.normal(0.0, self.config.depth_sigma, size=depth.shape)
        return np.where(depth > 0, np.maximum(noisy, 1e-3), 0.0)

    def dropped(self, keys):
        """Frame keys whose detection is lost."""
        return [k for k in keys if self._event(self.config.p_detection_drop)]

    def flip_labels(self, labels):
        return {
            name: (not value) if self._event(self.config.p_state_flip) else value
            for name, value in labels.items()
        }


def inject_noise(noise=None, seed=0):
    """Builds the perturbation source of one environment.

    Args:
        noise (NoiseConfig or dict): Probabilities and depth sigma.
        seed (int): Seed of the episode.

    Returns:
        (NoiseModel)

    """
    if not isinstance(noise, NoiseConfig):
        noise = NoiseConfig.from_dict(noise)
    return NoiseModel(noise, seed)
