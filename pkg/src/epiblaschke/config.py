"""Numerical tolerances shared by the classifiers."""

from __future__ import annotations

from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Tolerances:
    """Slack used to turn continuous data into discrete answers.

    ``boundary`` decides whether a fixed point sits on the unit circle,
    ``parabolic`` whether a boundary multiplier equals one, ``band`` whether a
    parameter lies on the parabolic curve for point queries and
    ``raster_band`` the same for raster cross-validation.
    """

    boundary: float = 1e-8
    parabolic: float = 1e-8
    multiplier_imag: float = 1e-8
    second_derivative: float = 1e-8
    residual: float = 1e-9
    neutral: float = 1e-8
    band: float = 1e-6
    raster_band: float = 1e-3
    validation_steps: int = 10_000
    validation_radius: float = 1e-4

    def __post_init__(self):
        for name in ("boundary", "parabolic", "multiplier_imag", "second_derivative",
                     "residual", "neutral", "band", "raster_band", "validation_radius"):
            if not getattr(self, name) > 0:
                raise ValueError(f"tolerance {name!r} must be positive")
        if self.validation_steps < 1:
            raise ValueError("validation_steps must be positive")

    def with_(self, **changes) -> "Tolerances":
        return replace(self, **changes)


DEFAULT = Tolerances()
