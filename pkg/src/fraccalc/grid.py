"""Uniform-grid function values and fractional orders.

A :class:`GridFunction` is the package's working representation of a function
on ``[t0, t1]``: values at ``n`` equally spaced nodes.  Index 0 is special —
several operators produce outputs that blow up at the left endpoint, and such
results carry ``singular_start=True`` with the index-0 value stored as NaN
(serialized as the token ``sing`` in CSV).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DataError, InvalidParameterError


@dataclass(frozen=True)
class FracOrder:
    """A fractional order alpha >= 0 together with its integer ceiling."""

    alpha: float

    def __post_init__(self) -> None:
        a = float(self.alpha)
        if not (math.isfinite(a) and a >= 0.0):
            raise InvalidParameterError(f"order must be finite and >= 0, got {self.alpha}")
        object.__setattr__(self, "alpha", a)

    @property
    def ceil_alpha(self) -> int:
        return math.ceil(self.alpha)

    @property
    def is_integer(self) -> bool:
        return self.alpha == math.floor(self.alpha)


def as_order(order: FracOrder | float) -> FracOrder:
    return order if isinstance(order, FracOrder) else FracOrder(float(order))


@dataclass(frozen=True)
class GridFunction:
    """Values of a function at ``n`` uniform nodes on ``[t0, t1]``.

    ``values[1:]`` must be finite.  If ``singular_start`` is set, ``values[0]``
    is normalized to NaN and means "unbounded as t -> t0"; otherwise
    ``values[0]`` must be finite as well.
    """

    t0: float
    t1: float
    values: np.ndarray
    singular_start: bool = False
    _skip_checks: bool = field(default=False, repr=False)

    def __post_init__(self) -> None:
        if self._skip_checks:
            return
        t0 = float(self.t0)
        t1 = float(self.t1)
        if not (math.isfinite(t0) and math.isfinite(t1) and t1 > t0):
            raise DataError(f"need finite t1 > t0, got [{self.t0}, {self.t1}]")
        vals = np.array(self.values, dtype=float, copy=True)
        if vals.ndim != 1 or vals.size < 2:
            raise DataError(f"values must be a 1-D array with at least 2 nodes, got shape {vals.shape}")
        if not np.all(np.isfinite(vals[1:])):
            raise DataError("values must be finite at every node past index 0")
        if self.singular_start:
            vals[0] = np.nan
        elif not np.isfinite(vals[0]):
            raise DataError("values[0] is not finite; pass singular_start=True to mark it")
        vals.flags.writeable = False
        object.__setattr__(self, "t0", t0)
        object.__setattr__(self, "t1", t1)
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "singular_start", bool(self.singular_start))

    @property
    def n(self) -> int:
        return int(self.values.size)

    @property
    def h(self) -> float:
        return (self.t1 - self.t0) / (self.n - 1)

    def times(self) -> np.ndarray:
        return np.linspace(self.t0, self.t1, self.n)

    def with_values(self, values: np.ndarray, singular_start: bool = False) -> "GridFunction":
        """Same grid, new data."""
        if np.asarray(values).shape != self.values.shape:
            raise DataError("with_values requires data of identical length")
        return GridFunction(self.t0, self.t1, values, singular_start)

    def subsample(self, stride: int) -> "GridFunction":
        """Every ``stride``-th node (node 0 and node n-1 included).

        Requires ``(n - 1) % stride == 0`` so the endpoints survive.
        """
        if stride < 1 or (self.n - 1) % stride != 0:
            raise DataError(f"stride {stride} does not divide the grid with {self.n} nodes")
        return GridFunction(self.t0, self.t1, self.values[::stride], self.singular_start)
