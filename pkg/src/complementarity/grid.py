"""Uniform cell-centred box grids, fields on them, and quadrature functionals."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import ContractError, InputDomainError, ResourceError

DEFAULT_MAX_NODES = 5000


def _frozen(a) -> np.ndarray:
    arr = np.array(a, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class DomainGrid:
    """Midpoint-rule discretization of the box [0, box_side*scale]^dimension.

    Nodes are cell centres, weights are cell volumes.  ``box_side`` is the
    side at scale 1; members of the nested family differ only in ``scale``.
    ``axis`` holds the 1D cell centres when the nodes are their full tensor
    product (last coordinate varying fastest), and is None otherwise.
    """

    dimension: int
    nodes: np.ndarray
    weights: np.ndarray
    scale: float
    box_side: float
    cells_per_axis: int
    axis: np.ndarray | None = None

    def __post_init__(self):
        object.__setattr__(self, "nodes", _frozen(self.nodes).reshape(-1, self.dimension))
        object.__setattr__(self, "weights", _frozen(self.weights))
        if len(self.nodes) != len(self.weights):
            raise ContractError("nodes and weights differ in length")
        if not np.all(self.weights > 0):
            raise InputDomainError("quadrature weights must be positive")
        if self.axis is not None:
            object.__setattr__(self, "axis", _frozen(self.axis))

    @property
    def measure(self) -> float:
        return math.fsum(self.weights)

    @property
    def side(self) -> float:
        return self.box_side * self.scale

    @property
    def n_nodes(self) -> int:
        return len(self.weights)

    def same_as(self, other: "DomainGrid") -> bool:
        if self is other:
            return True
        return (
            self.dimension == other.dimension
            and np.array_equal(self.nodes, other.nodes)
            and np.array_equal(self.weights, other.weights)
        )

    def field(self, values) -> "Field":
        return Field(self, values)

    def constant(self, c: float = 1.0) -> "Field":
        return Field(self, np.full(self.n_nodes, float(c)))

    def zeros(self) -> "Field":
        return self.constant(0.0)


def _check_positive(name, value):
    if not (isinstance(value, (int, float, np.floating, np.integer)) and math.isfinite(value) and value > 0):
        raise InputDomainError(f"{name} must be positive and finite, got {value!r}")


def build_grid(dimension: int, box_side: float, cells_per_axis: int, scale: float = 1.0,
               max_nodes: int = DEFAULT_MAX_NODES) -> DomainGrid:
    """Uniform cell-centred grid on a box of side ``box_side * scale``.

    >>> g = build_grid(1, 1.0, 4, 1.0)
    >>> g.nodes.ravel().tolist(), g.weights.tolist()
    ([0.125, 0.375, 0.625, 0.875], [0.25, 0.25, 0.25, 0.25])
    """
    if dimension not in (1, 2, 3):
        raise InputDomainError(f"dimension must be 1, 2 or 3, got {dimension!r}")
    if isinstance(cells_per_axis, bool) or int(cells_per_axis) != cells_per_axis or cells_per_axis < 1:
        raise InputDomainError(f"cells_per_axis must be >= 1, got {cells_per_axis!r}")
    _check_positive("box_side", box_side)
    _check_positive("scale", scale)
    n = int(cells_per_axis)
    count = n ** dimension
    if count > max_nodes:
        raise ResourceError(f"grid would have {count} nodes, cap is {max_nodes}")

    side = box_side * scale
    h = side / n
    centres = (np.arange(n) + 0.5) * h
    nodes = np.array(list(itertools.product(centres, repeat=dimension)), dtype=float)
    weights = np.full(count, h ** dimension)
    return DomainGrid(dimension, nodes, weights, float(scale), float(box_side), n, centres)


def scale_domain(g: DomainGrid, r: float) -> DomainGrid:
    """Member of the nested family at scale ``r``: nodes dilated about the box corner."""
    _check_positive("scale", r)
    factor = r / g.scale
    if factor == 1.0:
        return g
    return DomainGrid(
        g.dimension,
        g.nodes * factor,
        g.weights * factor ** g.dimension,
        float(r),
        g.box_side,
        g.cells_per_axis,
        None if g.axis is None else g.axis * factor,
    )


@dataclass(frozen=True, eq=False)
class Field:
    """One real value per grid node."""

    grid: DomainGrid
    values: np.ndarray

    def __post_init__(self):
        vals = _frozen(self.values).ravel()
        if len(vals) != self.grid.n_nodes:
            raise ContractError(f"field has {len(vals)} values for {self.grid.n_nodes} nodes")
        if not np.all(np.isfinite(vals)):
            raise InputDomainError("field values must be finite")
        object.__setattr__(self, "values", vals)

    def _other(self, other) -> np.ndarray:
        if isinstance(other, Field):
            _same_grid(self, other)
            return other.values
        return NotImplemented

    def __add__(self, other):
        vals = self._other(other)
        if vals is NotImplemented:
            return NotImplemented
        return Field(self.grid, self.values + vals)

    def __sub__(self, other):
        vals = self._other(other)
        if vals is NotImplemented:
            return NotImplemented
        return Field(self.grid, self.values - vals)

    def __neg__(self):
        return Field(self.grid, -self.values)

    def __mul__(self, c):
        if isinstance(c, Field):
            return NotImplemented
        return Field(self.grid, self.values * float(c))

    __rmul__ = __mul__

    def norm(self) -> float:
        return math.sqrt(max(inner_product(self, self), 0.0))

    def total_charge(self) -> float:
        return total_charge(self)


def _same_grid(f: Field, g: Field) -> None:
    if not f.grid.same_as(g.grid):
        raise ContractError("fields live on different grids")


def total_charge(f: Field) -> float:
    return float(np.dot(f.grid.weights, f.values))


def mean_value(f: Field) -> float:
    return total_charge(f) / f.grid.measure


def inner_product(f: Field, g: Field) -> float:
    """Weighted L2 product sum_a w_a f_a g_a."""
    _same_grid(f, g)
    return float(np.dot(f.grid.weights * f.values, g.values))


def integrate(g: DomainGrid, func) -> float:
    """Midpoint-rule integral of ``func(nodes)`` over the grid's box."""
    return float(np.dot(g.weights, np.asarray(func(g.nodes), dtype=float)))
