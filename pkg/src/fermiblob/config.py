"""Run-wide defaults (Planck constant, tolerances, grid size, seed)."""

from __future__ import annotations

import contextlib
import contextvars
import dataclasses
from dataclasses import dataclass


@dataclass(frozen=True)
class RunConfig:
    hbar: float = 1.0
    tol: float = 1e-8
    grid_points: int = 2048
    seed: int = 0

    def __post_init__(self):
        if not self.hbar > 0:
            raise ValueError(f"hbar must be positive, got {self.hbar}")
        if self.grid_points < 16:
            raise ValueError(f"grid_points must be >= 16, got {self.grid_points}")


_current: contextvars.ContextVar[RunConfig] = contextvars.ContextVar(
    "fermiblob_config", default=RunConfig()
)


def get_config() -> RunConfig:
    return _current.get()


def set_config(**changes) -> RunConfig:
    """Replace fields of the active configuration and return the new one."""
    cfg = dataclasses.replace(_current.get(), **changes)
    _current.set(cfg)
    return cfg


@contextlib.contextmanager
def using(**changes):
    """Temporarily override configuration fields::

        with using(hbar=0.5):
            capacity(ellipsoid)
    """
    token = _current.set(dataclasses.replace(_current.get(), **changes))
    try:
        yield _current.get()
    finally:
        _current.reset(token)


def resolve_hbar(hbar: float | None) -> float:
    if hbar is None:
        return _current.get().hbar
    if not hbar > 0:
        raise ValueError(f"hbar must be positive, got {hbar}")
    return float(hbar)
