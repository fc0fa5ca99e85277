"""Budget configuration and presets."""

from __future__ import annotations

import os
from dataclasses import asdict, dataclass, replace

PROFILE_ENV = "FORGE_BUDGET_PROFILE"


@dataclass(frozen=True)
class Config:
    nu_cap: int = 4096          # largest nu candidate tried by the search
    ball_cap: int = 2_000_000   # vertex cap for any marked ball
    closure_cap: int = 200_000  # element cap for permutation group closures
    escape_stages: int = 2      # stages checked per support-escape report
    seed: int = 0

    def __post_init__(self):
        for name in ("nu_cap", "ball_cap", "closure_cap", "escape_stages"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")

    def to_json(self) -> dict:
        return asdict(self)

    def with_overrides(self, **kw) -> Config:
        return replace(self, **{k: v for k, v in kw.items() if v is not None})


PROFILES = {
    "small": Config(nu_cap=512, ball_cap=100_000, closure_cap=20_000),
    "default": Config(),
    "large": Config(nu_cap=65536, ball_cap=20_000_000, closure_cap=2_000_000, escape_stages=3),
}


def load_config(profile: str | None = None, **overrides) -> Config:
    profile = profile or os.environ.get(PROFILE_ENV, "default")
    if profile not in PROFILES:
        raise ValueError(f"unknown budget profile {profile!r}; choose from {sorted(PROFILES)}")
    return PROFILES[profile].with_overrides(**overrides)
