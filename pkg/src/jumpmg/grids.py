"""Time grids for sample paths.

Two kinds are supported:

* ``events`` -- the integers 1..N, stored as int64 so jump times never go
  through float equality.  The process starts at 0 at (implicit) time 0.
* ``uniform`` -- 0, h, 2h, ..., T with h dividing T.  Used for the
  hazard-construction paths and Brownian components.
"""

from dataclasses import dataclass

import numpy as np

EVENTS = "events"
UNIFORM = "uniform"


class GridError(ValueError):
    pass


@dataclass(frozen=True)
class TimeGrid:
    kind: str
    times: np.ndarray
    step: float | None = None

    def __post_init__(self):
        t = self.times
        if t.ndim != 1 or t.size == 0:
            raise GridError("grid needs at least one time point")
        if not np.all(np.isfinite(t.astype(np.float64))):
            raise GridError("grid times must be finite")
        if np.any(np.diff(t.astype(np.float64)) <= 0):
            raise GridError("grid times must be strictly increasing")
        if float(t[0]) < 0:
            raise GridError("grid times must be nonnegative")
        if self.kind == EVENTS:
            if t.dtype != np.int64 or t[0] != 1 or np.any(np.diff(t) != 1):
                raise GridError("event grid must be the integers 1..N")
        elif self.kind == UNIFORM:
            if self.step is None or self.step <= 0:
                raise GridError("uniform grid needs a positive step")
        else:
            raise GridError(f"unknown grid kind {self.kind!r}")
        t.flags.writeable = False

    @staticmethod
    def events(n: int) -> "TimeGrid":
        if n < 1:
            raise GridError("event grid needs n >= 1")
        return TimeGrid(EVENTS, np.arange(1, n + 1, dtype=np.int64))

    @staticmethod
    def uniform(horizon: float, step: float) -> "TimeGrid":
        if step <= 0 or horizon <= 0:
            raise GridError("horizon and step must be positive")
        n = round(horizon / step)
        if not np.isclose(n * step, horizon, rtol=1e-9, atol=0.0):
            raise GridError("step must divide the horizon")
        return TimeGrid(UNIFORM, np.linspace(0.0, horizon, n + 1), step=step)

    @property
    def horizon(self) -> float:
        return float(self.times[-1])

    @property
    def n_points(self) -> int:
        return int(self.times.size)

    def times_f64(self) -> np.ndarray:
        return self.times.astype(np.float64)

    def window_start(self, window_frac: float) -> int:
        """First index of the final window (horizon*(1-frac), horizon]."""
        if not 0.0 < window_frac < 1.0:
            raise GridError("window fraction must be in (0, 1)")
        cut = self.horizon * (1.0 - window_frac)
        return int(np.searchsorted(self.times_f64(), cut, side="right"))

    def same_as(self, other: "TimeGrid") -> bool:
        return (
            self.kind == other.kind
            and self.times.shape == other.times.shape
            and bool(np.all(self.times == other.times))
        )
