"""Run configuration shared by the pipeline and the command line."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields

STEP2_MODES = ("paper-literal", "corrected", "both")


@dataclass
class RunConfig:
    g: int = 0
    h: int = 0
    cap_radius: float = math.pi / 4.0
    step2_mode: str = "both"
    fd_step: float = 1e-4
    samples_per_stratum: int = 256
    partner_samples: int = 4
    sweep_samples: int = 1000
    quadrature_target: float = 1e-7
    threshold: float = 0.0
    seed: int = 0
    json_out: str | None = None
    markdown_out: str | None = None

    def validate(self) -> None:
        if self.g < 0 or self.h < 0:
            raise ValueError("genera must be non-negative")
        if self.step2_mode not in STEP2_MODES:
            raise ValueError(f"step2_mode must be one of {STEP2_MODES}")
        for name in (
            "cap_radius",
            "fd_step",
            "quadrature_target",
        ):
            if getattr(self, name) <= 0.0:
                raise ValueError(f"{name} must be positive")
        for name in ("samples_per_stratum", "partner_samples", "sweep_samples"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be at least 1")

    def echo(self) -> dict:
        """Everything that affects verification results (not output paths)."""
        out = {}
        for f_ in fields(self):
            if f_.name in ("json_out", "markdown_out"):
                continue
            out[f_.name] = getattr(self, f_.name)
        return out

    @property
    def step2_modes(self) -> tuple[str, ...]:
        if self.step2_mode == "both":
            return ("paper-literal", "corrected")
        return (self.step2_mode,)
