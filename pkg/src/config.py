"""Runtime settings: numeric tolerances, sampling defaults, logging switches."""

import os
from functools import lru_cache
from typing import List

from pydantic import BaseModel, Field

ENV_PREFIX = "KNOTYY_"


class Settings(BaseModel):
    """Tunable knobs, overridable through KNOTYY_* environment variables."""

    residual_tol: float = Field(1e-9, description="relative residual accepted for closed forms")
    newton_tol: float = Field(1e-12, description="Newton stopping residual")
    newton_max_iter: int = 100
    continuation_checkpoints: List[float] = Field(default_factory=lambda: [1.0, 10.0, 100.0, 1000.0])
    continuation_steps_per_decade: int = 24
    limit_ratio_factor: float = 3.0

    markov_samples: int = 200
    markov_max_strands: int = 4
    markov_max_length: int = 8
    seed: int = 20240611

    log_level: str = "INFO"
    progress: bool = True


def load_settings() -> Settings:
    overrides = {}
    for name, field in Settings.model_fields.items():
        raw = os.getenv(ENV_PREFIX + name.upper())
        if raw is None:
            continue
        if field.annotation is bool:
            overrides[name] = raw.strip().lower() in ("1", "true", "yes", "on")
        elif name == "continuation_checkpoints":
            overrides[name] = [float(x) for x in raw.split(",") if x.strip()]
        else:
            overrides[name] = raw
    return Settings(**overrides)


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    return load_settings()
