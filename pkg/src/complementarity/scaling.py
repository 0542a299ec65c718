"""Nested-domain study: how spectra, F-matrices and R1 change as the domain shrinks."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ComplementarityError, InputDomainError
from .grid import DEFAULT_MAX_NODES, DomainGrid, scale_domain
from .kernel import Kernel
from .operator import assemble_operator, r_one_max
from .spectral import eigendecompose, f_matrix

N_LAMBDAS = 3


@dataclass(frozen=True)
class ScalingRow:
    r: float
    mes_q: float
    lambdas: tuple[float, ...] = ()
    f_max: float = math.nan
    r1_max: float = math.nan
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.error is None

    @property
    def c_ratio(self) -> float:
        return self.f_max / self.mes_q


@dataclass(frozen=True)
class ScalingStudy:
    rows: list
    modes: tuple

    @property
    def good_rows(self) -> list:
        return [r for r in self.rows if r.ok]

    @property
    def partial(self) -> bool:
        return len(self.good_rows) < len(self.rows)

    @property
    def slope(self) -> float | None:
        """Least-squares slope of log f_max against log mes_q; None with fewer than two usable rows."""
        pts = [(r.mes_q, r.f_max) for r in self.good_rows if r.f_max > 0]
        if len({m for m, _ in pts}) < 2:
            return None
        x = np.log([m for m, _ in pts])
        y = np.log([f for _, f in pts])
        return float(np.polyfit(x, y, 1)[0])

    @property
    def c_constant(self) -> float | None:
        rows = self.good_rows
        return max(r.c_ratio for r in rows) if rows else None

    @property
    def c_spread(self) -> float | None:
        """max c_ratio / median c_ratio."""
        rows = self.good_rows
        if not rows:
            return None
        ratios = [r.c_ratio for r in rows]
        return max(ratios) / float(np.median(ratios))

    @property
    def r0(self) -> float:
        return max(r.r for r in self.rows)

    @property
    def c0(self) -> float | None:
        """max |R1| on the largest domain, which bounds |R1| on every smaller one."""
        rows = [r for r in self.good_rows if r.r == self.r0]
        return rows[0].r1_max if rows else None


def scaling_row(kernel: Kernel, grid: DomainGrid, r: float, modes, max_nodes: int = DEFAULT_MAX_NODES) -> ScalingRow:
    g = scale_domain(grid, r)
    try:
        M = assemble_operator(g, kernel, max_nodes)
        n = min(g.n_nodes, max(N_LAMBDAS, max(modes)))
        dec = eigendecompose(M, n)
        fm = f_matrix(M, dec, modes)
    except ComplementarityError as exc:
        return ScalingRow(r, g.measure, error=str(exc))
    lambdas = tuple(float(x) for x in dec.eigenvalues[:N_LAMBDAS])
    return ScalingRow(r, g.measure, lambdas, fm.max_abs, r_one_max(M))


def scaling_study(kernel: Kernel, grid: DomainGrid, scales, modes=(1, 2, 3),
                  max_nodes: int = DEFAULT_MAX_NODES) -> ScalingStudy:
    """One independent row per scale: fresh grid, operator, decomposition and F-matrix.

    Node count stays fixed across scales so only the domain size varies.
    A failing scale yields a row with ``error`` set; the study carries on.
    """
    scales = [float(s) for s in scales]
    if not scales:
        raise InputDomainError("no scales given")
    if any(not (math.isfinite(s) and s > 0) for s in scales):
        raise InputDomainError("scales must be positive")
    modes = tuple(int(m) for m in modes)
    rows = [scaling_row(kernel, grid, s, modes, max_nodes) for s in scales]
    return ScalingStudy(rows, modes)
