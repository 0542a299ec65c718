"""Eigensystem of the discretized operator, the neutral projection and the F-matrix.

Mode indices in the public API are 1-based: mode 1 is the most negative
eigenvalue.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import ContractError, InputDomainError, NumericError
from .grid import DomainGrid, Field, mean_value, total_charge
from .kernel import KernelFamily
from .operator import OperatorMatrix, interaction_force, r_one

EIGEN_RESIDUAL_TOL = 1e-8
ORTHONORMALITY_TOL = 1e-10
DEGENERACY_GAP = 1e-6


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    grid: DomainGrid
    eigenvalues: np.ndarray
    vectors: np.ndarray  # column n holds the values of eigenfield n+1
    method: str = "dense"

    @property
    def n_modes(self) -> int:
        return len(self.eigenvalues)

    def _col(self, i: int) -> int:
        if isinstance(i, bool) or int(i) != i or not 1 <= i <= self.n_modes:
            raise ContractError(f"mode index {i!r} outside 1..{self.n_modes}")
        return int(i) - 1

    def eigenvalue(self, i: int) -> float:
        return float(self.eigenvalues[self._col(i)])

    def eigenfield(self, i: int) -> Field:
        return Field(self.grid, self.vectors[:, self._col(i)])

    @property
    def eigenfields(self) -> list[Field]:
        return [self.eigenfield(i) for i in range(1, self.n_modes + 1)]

    def gram(self) -> np.ndarray:
        """Weighted Gram matrix of the eigenfields (identity up to rounding)."""
        wv = self.grid.weights[:, None] * self.vectors
        return self.vectors.T @ wv

    def orthonormality_error(self) -> float:
        return float(np.max(np.abs(self.gram() - np.eye(self.n_modes))))

    def residuals(self, M: OperatorMatrix) -> np.ndarray:
        """Weighted norms of R e_i - lambda_i e_i."""
        w = self.grid.weights
        r = M.entries @ (w[:, None] * self.vectors) - self.vectors * self.eigenvalues[None, :]
        return np.sqrt(np.sum(w[:, None] * r * r, axis=0))

    def coefficients(self, f: Field) -> np.ndarray:
        if not f.grid.same_as(self.grid):
            raise ContractError("field is not on the decomposition's grid")
        return self.vectors.T @ (self.grid.weights * f.values)

    def with_flipped(self, *modes: int) -> "SpectralDecomposition":
        """Copy with the sign of the given eigenfields reversed."""
        v = np.array(self.vectors)
        for i in modes:
            v[:, self._col(i)] *= -1.0
        v.setflags(write=False)
        return SpectralDecomposition(self.grid, self.eigenvalues, v, self.method)

    def degenerate_modes(self, rel_gap: float = DEGENERACY_GAP) -> set[int]:
        """Modes whose eigenvalue lies within rel_gap*|lambda_1| of a neighbour."""
        lam = self.eigenvalues
        if len(lam) < 2:
            return set()
        tol = rel_gap * abs(lam[0])
        close = np.abs(np.diff(lam)) < tol
        out = set()
        for n in np.flatnonzero(close):
            out.update((int(n) + 1, int(n) + 2))
        return out


def _fix_signs(vectors: np.ndarray) -> np.ndarray:
    for c in range(vectors.shape[1]):
        col = vectors[:, c]
        big = np.abs(col) > 1e-10 * np.max(np.abs(col))
        first = int(np.argmax(big))
        if col[first] < 0:
            vectors[:, c] = -col
    return vectors


def _dense_eigh(M: OperatorMatrix, n_modes: int):
    try:
        lam, v = np.linalg.eigh(M.symmetrized())
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"eigensolver failed: {exc}") from exc
    return lam[:n_modes], v[:, :n_modes]


def separable(M: OperatorMatrix) -> bool:
    """True when K is a Kronecker power of one 1D Gaussian matrix (tensor grid, Gaussian kernel)."""
    g = M.grid
    return M.kernel.family is KernelFamily.GAUSSIAN and g.axis is not None and g.n_nodes == len(g.axis) ** g.dimension


def _tensor_eigh(M: OperatorMatrix, n_modes: int):
    """Eigenpairs from the 1D factor: S = -amplitude * (h G1) (x) ... (x) (h G1).

    Every eigenvalue is -amplitude times a product of positive 1D
    eigenvalues, so signs and relative accuracy survive even where the
    full matrix is singular to working precision.  Returns None if a 1D
    eigenvalue is not positive.
    """
    g, k = M.grid, M.kernel
    x = g.axis
    h = g.side / len(x)
    diff = x[:, None] - x[None, :]
    s1 = h * np.exp(-(diff * diff) / (2.0 * k.width * k.width))
    mu, u = np.linalg.eigh(s1)
    if mu[0] <= 0:
        return None
    prod = mu
    for _ in range(g.dimension - 1):
        prod = np.multiply.outer(prod, mu)
    lam = -k.amplitude * prod.ravel()
    order = np.argsort(lam, kind="stable")[:n_modes]
    n = len(x)
    vectors = np.empty((g.n_nodes, n_modes))
    for col, flat in enumerate(order):
        idx = np.unravel_index(flat, (n,) * g.dimension)
        vec = u[:, idx[0]]
        for a in idx[1:]:
            vec = np.kron(vec, u[:, a])
        vectors[:, col] = vec
    return lam[order], vectors


def eigendecompose(M: OperatorMatrix, n_modes: int | None = None, *, require_negative: bool = True,
                   residual_tol: float = EIGEN_RESIDUAL_TOL, method: str = "auto") -> SpectralDecomposition:
    """Leading ``n_modes`` eigenpairs of the operator, most negative first.

    ``method="dense"`` solves the symmetric similar matrix
    diag(sqrt w) K diag(sqrt w).  ``"tensor"`` factors a Gaussian kernel on
    a tensor grid into 1D problems; ``"auto"`` picks it whenever possible.
    Eigenfields come back orthonormal in the weighted inner product, each
    with its first non-negligible component positive.

    Raises NumericError if a residual exceeds ``residual_tol * |lambda_1|``
    or, with ``require_negative``, if any retained eigenvalue is >= 0.
    """
    n = M.n
    if n_modes is None:
        n_modes = n
    if isinstance(n_modes, bool) or int(n_modes) != n_modes or not 1 <= n_modes <= n:
        raise InputDomainError(f"n_modes must be in 1..{n}, got {n_modes!r}")
    if method not in ("auto", "dense", "tensor"):
        raise InputDomainError(f"unknown eigensolver method {method!r}")
    n_modes = int(n_modes)

    pair = None
    used = "dense"
    if method in ("auto", "tensor"):
        if separable(M):
            pair = _tensor_eigh(M, n_modes)
            used = "tensor"
        if pair is None and method == "tensor":
            raise NumericError("tensor eigensolver not applicable to this operator")
    if pair is None:
        pair = _dense_eigh(M, n_modes)
        used = "dense"
    lam, v = pair

    lam = np.array(lam, dtype=float)
    vectors = _fix_signs(v / np.sqrt(M.grid.weights)[:, None])
    lam.setflags(write=False)
    vectors.setflags(write=False)
    dec = SpectralDecomposition(M.grid, lam, vectors, used)

    scale = float(np.max(np.abs(lam)))
    res = dec.residuals(M)
    worst = float(np.max(res))
    if worst > residual_tol * scale:
        raise NumericError(
            "eigen residual check failed",
            {"max_residual": worst, "limit": residual_tol * scale, "mode": int(np.argmax(res)) + 1, "method": used},
        )
    if require_negative and np.any(lam >= 0):
        bad = np.flatnonzero(lam >= 0)
        raise NumericError(
            f"{len(bad)} retained eigenvalues are not negative; the kernel matrix is numerically "
            "rank deficient at this resolution, retain fewer modes",
            {"first_bad_mode": int(bad[0]) + 1, "value": float(lam[bad[0]]), "method": used},
        )
    return dec


def project_neutral(f: Field) -> Field:
    """Subtract the mean value: orthogonal projection onto zero-total-charge fields."""
    return Field(f.grid, f.values - mean_value(f))


def is_neutral(f: Field, tol: float) -> bool:
    if not tol >= 0:
        raise InputDomainError("tolerance must be nonnegative")
    scale = max(1.0, f.norm() * math.sqrt(f.grid.measure))
    return abs(total_charge(f)) <= tol * scale


@dataclass(frozen=True, eq=False)
class FMatrix:
    """F[i, j] = (R Pr e_i, Pr e_j) - lambda_i delta_ij over a set of modes."""

    indices: tuple[int, ...]
    entries: np.ndarray
    mes_q: float

    def __getitem__(self, ij) -> float:
        i, j = ij
        try:
            return float(self.entries[self.indices.index(i), self.indices.index(j)])
        except ValueError:
            raise ContractError(f"F-matrix does not cover modes ({i}, {j})") from None

    @property
    def max_abs(self) -> float:
        return float(np.max(np.abs(self.entries)))

    @property
    def asymmetry(self) -> float:
        return float(np.max(np.abs(self.entries - self.entries.T)))


def projected_modes(dec: SpectralDecomposition, modes) -> np.ndarray:
    cols = np.array([dec._col(i) for i in modes], dtype=int)
    v = dec.vectors[:, cols]
    w = dec.grid.weights
    means = (w @ v) / dec.grid.measure
    return v - means[None, :]


def f_matrix(M: OperatorMatrix, dec: SpectralDecomposition, modes=None) -> FMatrix:
    """F-matrix from its definition, one projected eigenfield pair at a time."""
    if not M.grid.same_as(dec.grid):
        raise ContractError("operator and decomposition are on different grids")
    modes = tuple(range(1, dec.n_modes + 1)) if modes is None else tuple(int(i) for i in modes)
    if not modes:
        raise ContractError("empty mode set")
    p = projected_modes(dec, modes)
    w = M.grid.weights
    rp = M.entries @ (w[:, None] * p)
    a = rp.T @ (w[:, None] * p)  # a[m, n] = (R Pr e_m, Pr e_n)
    lam = np.array([dec.eigenvalue(i) for i in modes])
    entries = a - np.diag(lam)
    entries.setflags(write=False)
    return FMatrix(modes, entries, M.grid.measure)


def spectral_interaction(dec: SpectralDecomposition, f: Field, g: Field) -> float:
    """sum_n lambda_n (f, e_n)(g, e_n); equals the interaction force for a full basis."""
    return float(np.sum(dec.eigenvalues * dec.coefficients(f) * dec.coefficients(g)))


@dataclass(frozen=True)
class SchwartzBounds:
    """Cauchy-Schwarz style bounds next to the quantities they bound.

    ``rhs_bound = |lambda_1| + 2*c0`` bounds every |F[i, j]|: expanding the
    definition gives three terms bounded by |lambda_i|, ||R1||/sqrt(mes) and
    |(R1, 1)|/mes respectively, and the last two are each at most c0.
    Because |lambda_1| <= c0 as well, rhs_bound <= 3*c0 = O(mes Q).
    """

    avg_bound: float
    r1_bound: float
    c0: float
    rhs_bound: float
    mes_q: float
    max_total_charge: float
    max_r1_projection: float
    f_max: float

    @property
    def c_constant(self) -> float:
        return self.rhs_bound / self.mes_q

    @property
    def holds(self) -> bool:
        slack = 1e-12
        return (
            self.max_total_charge <= self.avg_bound * (1 + slack)
            and self.max_r1_projection <= self.r1_bound * (1 + slack)
            and self.f_max <= self.rhs_bound * (1 + slack)
        )


def schwartz_bounds(dec: SpectralDecomposition, M: OperatorMatrix) -> SchwartzBounds:
    mes = M.grid.measure
    r1 = r_one(M)
    c0 = float(np.max(np.abs(r1.values)))
    charges = dec.grid.weights @ dec.vectors
    projections = dec.coefficients(r1)
    fm = f_matrix(M, dec)
    return SchwartzBounds(
        avg_bound=math.sqrt(mes),
        r1_bound=r1.norm(),
        c0=c0,
        rhs_bound=abs(dec.eigenvalue(1)) + 2.0 * c0,
        mes_q=mes,
        max_total_charge=float(np.max(np.abs(charges))),
        max_r1_projection=float(np.max(np.abs(projections))),
        f_max=fm.max_abs,
    )


def oracle_discrepancy(M: OperatorMatrix, dec: SpectralDecomposition, f: Field, g: Field) -> tuple[float, float, float]:
    """Double-sum and spectral-sum interactions and their relative gap.

    The gap is normalized by max(|I(f, g)|, sqrt(I(f, f) I(g, g))), the
    Cauchy-Schwarz bound of the definite form, so nearly orthogonal pairs
    do not blow it up.
    """
    direct = interaction_force(M, f, g)
    spectral = spectral_interaction(dec, f, g)
    scale = max(abs(direct), math.sqrt(abs(interaction_force(M, f, f) * interaction_force(M, g, g))))
    gap = abs(direct - spectral)
    return direct, spectral, gap / scale if scale > 0 else gap
