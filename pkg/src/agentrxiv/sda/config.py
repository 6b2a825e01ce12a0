"""Configuration for the dual-sampling engine."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass
class SdaConfig:
    t_low: float = 0.1
    t_high: float = 1.0
    tau_init: float = 0.8
    tau_min: float = 0.5
    tau_max: float = 0.95
    window: int = 20
    kappa: float = 1.0

    def __post_init__(self):
        if not (0.0 <= self.tau_min <= self.tau_init <= self.tau_max <= 1.0):
            raise ValueError("require 0 <= tau_min <= tau_init <= tau_max <= 1")
        if not self.t_low < self.t_high:
            raise ValueError("require t_low < t_high")
        if self.window < 1:
            raise ValueError("window must be >= 1")

    @classmethod
    def from_dict(cls, data: dict) -> "SdaConfig":
        return cls(**{k: v for k, v in data.items() if k in cls.__dataclass_fields__})
