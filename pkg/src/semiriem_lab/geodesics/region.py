"""Star-shaped regions in a tangent space."""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True, eq=False)
class StarRegion:
    """
    Star-shaped region about the origin of T_qM with a constant radius profile.

    The radius is measured in the Euclidean norm of the tangent components.
    """

    center: np.ndarray
    radius: float
    margin: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "center", np.asarray(self.center, dtype=float))
        if self.radius <= 0:
            raise ValueError("radius must be positive")

    @property
    def dim(self) -> int:
        return self.center.size

    def radius_profile(self, direction: np.ndarray) -> float:
        return self.radius - self.margin

    def contains(self, v) -> bool:
        v = np.asarray(v, dtype=float)
        length = float(np.linalg.norm(v))
        if length == 0.0:
            return True
        return length <= self.radius_profile(v / length)

    def sample(self, rng: np.random.Generator) -> np.ndarray:
        """Uniform direction on the coordinate sphere, uniform radius."""
        direction = rng.standard_normal(self.dim)
        direction /= np.linalg.norm(direction)
        return direction * rng.uniform(0.0, self.radius_profile(direction))
