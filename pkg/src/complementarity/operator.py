"""Discretized interaction operator and the interaction functional."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import pdist, squareform

from .errors import ContractError, ResourceError
from .grid import DEFAULT_MAX_NODES, DomainGrid, Field
from .kernel import Kernel


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    """Kernel matrix K[a, b] = R(|x_a - x_b|) on a grid.

    The operator acts by collocation with the grid's quadrature weights,
    ``(R f)_a = sum_b K[a, b] w_b f_b``.
    """

    grid: DomainGrid
    kernel: Kernel
    entries: np.ndarray

    @property
    def n(self) -> int:
        return self.grid.n_nodes

    def symmetrized(self) -> np.ndarray:
        """S = diag(sqrt w) K diag(sqrt w), similar to K diag(w)."""
        sw = np.sqrt(self.grid.weights)
        s = sw[:, None] * self.entries * sw[None, :]
        return 0.5 * (s + s.T)

    def check_field(self, f: Field) -> None:
        if not f.grid.same_as(self.grid):
            raise ContractError("field is not on the operator's grid")


def assemble_operator(g: DomainGrid, k: Kernel, max_nodes: int = DEFAULT_MAX_NODES) -> OperatorMatrix:
    if g.n_nodes > max_nodes:
        raise ResourceError(f"operator on {g.n_nodes} nodes exceeds cap {max_nodes}")
    if g.n_nodes == 1:
        entries = np.array([[k.profile(np.float64(0.0))]], dtype=float)
    else:
        # condensed form holds each unordered pair once, so K is exactly symmetric
        condensed = k.profile(pdist(g.nodes))
        entries = squareform(condensed, checks=False)
        np.fill_diagonal(entries, k.profile(np.float64(0.0)))
    entries.setflags(write=False)
    return OperatorMatrix(g, k, entries)


def apply_operator(M: OperatorMatrix, f: Field) -> Field:
    M.check_field(f)
    return Field(M.grid, M.entries @ (M.grid.weights * f.values))


def interaction_force(M: OperatorMatrix, f: Field, g: Field) -> float:
    """Double quadrature sum_a sum_b w_a f_a K[a, b] w_b g_b."""
    M.check_field(f)
    M.check_field(g)
    w = M.grid.weights
    return float((w * f.values) @ (M.entries @ (w * g.values)))


def r_one(M: OperatorMatrix) -> Field:
    """The operator applied to the constant field 1."""
    return apply_operator(M, M.grid.constant(1.0))


def r_one_max(M: OperatorMatrix) -> float:
    return float(np.max(np.abs(r_one(M).values)))
