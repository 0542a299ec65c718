"""The two-pair quartet, its ten interactions, the admissible mixing window
and the search for a concrete witness."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ComplementarityError, ContractError, InputDomainError
from .grid import DEFAULT_MAX_NODES, DomainGrid, Field, scale_domain
from .kernel import Kernel
from .operator import OperatorMatrix, assemble_operator, interaction_force
from .spectral import SpectralDecomposition, eigendecompose, f_matrix, project_neutral

FIELD_NAMES = ("phi", "Phi", "psi", "Psi")

# (name, row, col, required sign); rows/cols index FIELD_NAMES
PAIRS = (
    ("phi_Phi", 0, 1, +1),
    ("psi_Psi", 2, 3, +1),
    ("phi_psi", 0, 2, -1),
    ("phi_Psi", 0, 3, -1),
    ("Phi_psi", 1, 2, -1),
    ("Phi_Psi", 1, 3, -1),
    ("phi_phi", 0, 0, -1),
    ("Phi_Phi", 1, 1, -1),
    ("psi_psi", 2, 2, -1),
    ("Psi_Psi", 3, 3, -1),
)
PAIR_NAMES = tuple(p[0] for p in PAIRS)
DEFAULT_MARGIN_FLOOR_REL = 1e-8


@dataclass(frozen=True, eq=False)
class Quartet:
    i: int
    j: int
    k: int
    alpha: float
    phi: Field
    phi_cap: Field
    psi: Field
    psi_cap: Field

    @property
    def fields(self) -> tuple[Field, Field, Field, Field]:
        return (self.phi, self.phi_cap, self.psi, self.psi_cap)


def build_quartet(dec: SpectralDecomposition, i: int, j: int, k: int, alpha: float,
                  *, diagnostic: bool = False) -> Quartet:
    """phi = Pr e_i + a Pr e_k, Phi = -Pr e_i + a Pr e_k, and likewise psi, Psi with e_j.

    ``alpha = 0`` is accepted only with ``diagnostic=True``.
    """
    if len({i, j, k}) != 3:
        raise ContractError(f"mode indices must be pairwise distinct, got ({i}, {j}, {k})")
    if not math.isfinite(alpha) or alpha < 0 or (alpha == 0 and not diagnostic):
        raise InputDomainError(f"alpha must be positive, got {alpha!r}")
    pi = project_neutral(dec.eigenfield(i))
    pj = project_neutral(dec.eigenfield(j))
    pk = alpha * project_neutral(dec.eigenfield(k))
    return Quartet(i, j, k, float(alpha), pi + pk, pk - pi, pj + pk, pk - pj)


@dataclass(frozen=True)
class Verdict:
    verdict: bool
    worst_margin: float
    worst_pair: str
    failing: tuple[str, ...]


def margins_from_matrix(matrix) -> dict[str, float]:
    m = np.asarray(matrix, dtype=float)
    if m.shape != (4, 4):
        raise ContractError("interaction matrix must be 4x4")
    return {name: sign * float(m[r, c]) for name, r, c, sign in PAIRS}


def verify_complementarity(report, margin_floor: float = 0.0) -> Verdict:
    """Check the sign pattern: both key pairs attract, every other pair repels.

    Accepts an InteractionReport or a bare 4x4 matrix ordered (phi, Phi, psi, Psi).
    A pair passes when its signed margin exceeds ``margin_floor``.
    """
    if margin_floor < 0:
        raise InputDomainError("margin floor must be nonnegative")
    matrix = report.matrix if isinstance(report, InteractionReport) else report
    margins = margins_from_matrix(matrix)
    failing = tuple(n for n in PAIR_NAMES if not margins[n] > margin_floor)
    worst_pair = min(PAIR_NAMES, key=lambda n: margins[n])
    return Verdict(not failing, margins[worst_pair], worst_pair, failing)


def _reconstruct(lam: dict[str, float], F, i: int, j: int, k: int, a: float) -> dict[str, float]:
    li, lj, lk = lam["i"], lam["j"], lam["k"]
    shared = a * a * (lk + F[k, k])
    fij, fik, fjk = F[i, j], F[i, k], F[j, k]
    fkj = F[k, j]
    return {
        "phi_Phi": -li - F[i, i] + shared,
        "psi_Psi": -lj - F[j, j] + shared,
        "phi_psi": fij + a * (fkj + fik) + shared,
        "phi_Psi": -fij + a * (fik - fkj) + shared,
        "Phi_psi": -fij + a * (fkj - fik) + shared,
        "Phi_Psi": fij - a * (fkj + fik) + shared,
        "phi_phi": li + F[i, i] + 2 * a * fik + shared,
        "Phi_Phi": li + F[i, i] - 2 * a * fik + shared,
        "psi_psi": lj + F[j, j] + 2 * a * fjk + shared,
        "Psi_Psi": lj + F[j, j] - 2 * a * fjk + shared,
    }


@dataclass(frozen=True, eq=False)
class InteractionReport:
    """Direct and (lambda, F)-reconstructed interactions of a quartet.

    ``discrepancy[name]`` is |direct - reconstructed| divided by the
    Cauchy-Schwarz scale sqrt(|I(p,p)| |I(q,q)|) of the pair, which bounds
    |I(p,q)| for a definite form.
    """

    i: int
    j: int
    k: int
    alpha: float
    matrix: np.ndarray
    direct: dict
    reconstructed: dict
    discrepancy: dict
    lambdas: dict
    f_max: float
    margin_floor: float
    margins: dict
    verdict: bool
    worst_margin: float
    worst_pair: str
    failing: tuple

    @property
    def max_discrepancy(self) -> float:
        return max(self.discrepancy.values())

    @property
    def matrix_asymmetry(self) -> float:
        m = self.matrix
        scale = np.sqrt(np.abs(np.outer(np.diag(m), np.diag(m))))
        return float(np.max(np.abs(m - m.T) / scale))


def quartet_interactions(M: OperatorMatrix, dec: SpectralDecomposition, q: Quartet,
                         margin_floor: float = 0.0) -> InteractionReport:
    for f in q.fields:
        M.check_field(f)
    fields = q.fields
    matrix = np.array([[interaction_force(M, a, b) for b in fields] for a in fields])
    direct = {name: float(matrix[r, c]) for name, r, c, _ in PAIRS}

    F = f_matrix(M, dec, (q.i, q.j, q.k))
    lam = {"i": dec.eigenvalue(q.i), "j": dec.eigenvalue(q.j), "k": dec.eigenvalue(q.k)}
    recon = _reconstruct(lam, F, q.i, q.j, q.k, q.alpha)
    discrepancy = {}
    for name, r, c, _ in PAIRS:
        scale = math.sqrt(abs(matrix[r, r] * matrix[c, c]))
        diff = abs(direct[name] - recon[name])
        discrepancy[name] = diff / scale if scale > 0 else diff

    v = verify_complementarity(matrix, margin_floor)
    return InteractionReport(
        q.i, q.j, q.k, q.alpha, matrix, direct, recon, discrepancy, lam, F.max_abs,
        margin_floor, margins_from_matrix(matrix), v.verdict, v.worst_margin, v.worst_pair, v.failing,
    )


@dataclass(frozen=True)
class FeasibleWindow:
    """Open interval of mixing parameters for which the leading terms dominate.

    With rho(a) = f_max (1 + a)^2 bounding every remainder, a is admissible when
    a^2 |lambda_k| - rho(a) > floor and min(|lambda_i|, |lambda_j|) - a^2 |lambda_k| - rho(a) > floor.
    """

    alpha_low: float
    alpha_high: float
    f_max: float
    margin_floor: float = 0.0

    @property
    def empty(self) -> bool:
        return not self.alpha_low < self.alpha_high

    def contains(self, alpha: float) -> bool:
        return not self.empty and self.alpha_low < alpha < self.alpha_high

    def remainder_bound(self, alpha: float) -> float:
        return self.f_max * (1.0 + alpha) ** 2

    def as_dict(self) -> dict:
        if self.empty:
            return {"low": None, "high": None}
        return {"low": self.alpha_low, "high": self.alpha_high}


def _upper_root(a: float, b: float, c: float) -> float:
    """Larger real root of a x^2 + b x + c with a != 0; nan if the roots are complex."""
    disc = b * b - 4 * a * c
    if disc < 0:
        return math.nan
    sq = math.sqrt(disc)
    q = -0.5 * (b + sq) if b >= 0 else -0.5 * (b - sq)
    if q == 0:
        return 0.0
    return max(q / a, c / q)


def feasible_alpha(lambda_i: float, lambda_j: float, lambda_k: float, f_max: float,
                   margin_floor: float = 0.0) -> FeasibleWindow:
    """Admissible alpha in (0, 1); an empty window is a valid answer."""
    for name, lam in (("lambda_i", lambda_i), ("lambda_j", lambda_j), ("lambda_k", lambda_k)):
        if not lam < 0:
            raise ContractError(f"{name} must be negative, got {lam!r}")
    if not f_max >= 0 or not margin_floor >= 0:
        raise InputDomainError("f_max and margin_floor must be nonnegative")
    lk = -lambda_k
    lead = min(-lambda_i, -lambda_j)
    f = f_max

    # shared-mode repulsion: (lk - f) a^2 - 2 f a - (f + floor) > 0; value at 0 is <= 0
    if lk - f > 0:
        low = max(0.0, _upper_root(lk - f, -2 * f, -(f + margin_floor)))
    else:
        low = math.inf
    # key-pair attraction: -(lk + f) a^2 - 2 f a + (lead - f - floor) > 0; decreasing for a > 0
    c = lead - f - margin_floor
    high = min(1.0, _upper_root(-(lk + f), -2 * f, c)) if c > 0 else 0.0

    if not low < high:
        low = high = math.nan
    return FeasibleWindow(low, high, float(f_max), float(margin_floor))


@dataclass(frozen=True, eq=False)
class Candidate:
    i: int
    j: int
    k: int
    alpha: float
    scale: float
    mes_q: float
    window: FeasibleWindow
    report: InteractionReport

    @property
    def key(self):
        return (-self.report.worst_margin, self.i, self.j, self.k, self.alpha, self.scale)

    def to_dict(self) -> dict:
        r = self.report
        return {
            "i": self.i,
            "j": self.j,
            "k": self.k,
            "alpha": self.alpha,
            "scale": self.scale,
            "mes_q": self.mes_q,
            "lambda": dict(r.lambdas),
            "f_max": r.f_max,
            "window": self.window.as_dict(),
            "interactions": {n: r.direct[n] for n in PAIR_NAMES},
            "margins": {n: r.margins[n] for n in PAIR_NAMES},
            "verdict": r.verdict,
            "worst_margin": r.worst_margin,
        }


def evaluate_candidate(M: OperatorMatrix, dec: SpectralDecomposition, i: int, j: int, k: int,
                       alpha: float, margin_floor: float | None = None) -> Candidate:
    """Quartet, direct check and admissible window for one (i, j, k, alpha) on one grid."""
    if margin_floor is None:
        margin_floor = DEFAULT_MARGIN_FLOOR_REL * abs(dec.eigenvalue(1))
    q = build_quartet(dec, i, j, k, alpha)
    report = quartet_interactions(M, dec, q, margin_floor)
    window = feasible_alpha(report.lambdas["i"], report.lambdas["j"], report.lambdas["k"],
                            report.f_max, margin_floor)
    return Candidate(i, j, k, float(alpha), dec.grid.scale, dec.grid.measure, window, report)


@dataclass(frozen=True, eq=False)
class SearchResult:
    best: Candidate | None
    evaluated: int
    window_checks: list = field(default_factory=list)  # candidates with alpha inside a nonempty window
    failed_scales: dict = field(default_factory=dict)

    @property
    def found(self) -> bool:
        return self.best is not None and self.best.report.verdict

    @property
    def counterexamples(self) -> list:
        return [c for c in self.window_checks if not c.report.verdict]


def candidate_triples(modes, exclude=()):
    """Triples (i, j, k) with i < j and k distinct from both; the swap i<->j only relabels the pairs."""
    modes = sorted(set(int(m) for m in modes) - set(exclude))
    for i, j in itertools.combinations(modes, 2):
        for k in modes:
            if k != i and k != j:
                yield i, j, k


def search_parameters(kernel: Kernel, grid: DomainGrid, candidate_modes, alpha_grid, scales, *,
                      skip_degenerate: bool = False, margin_floor_rel: float = DEFAULT_MARGIN_FLOOR_REL,
                      max_nodes: int = DEFAULT_MAX_NODES) -> SearchResult:
    """Grid search over mode triples, mixing parameters and domain scales.

    Every tuple is checked directly.  The best candidate maximizes the worst
    margin; ties go to the lexicographically smaller (i, j, k, alpha, scale).
    If nothing passes, ``best`` is the least-bad candidate and ``found`` is False.
    """
    candidate_modes = sorted(set(int(m) for m in candidate_modes))
    alpha_grid = [float(a) for a in alpha_grid]
    scales = [float(s) for s in scales]
    if len(candidate_modes) < 3:
        raise InputDomainError("need at least three candidate modes")
    if not alpha_grid:
        raise InputDomainError("alpha grid is empty")
    if not scales:
        raise InputDomainError("scale list is empty")
    if any(not 0 < a < 1 for a in alpha_grid):
        raise InputDomainError("alpha values must lie in (0, 1)")
    if min(candidate_modes) < 1:
        raise InputDomainError("mode indices start at 1")

    best = None
    evaluated = 0
    inside = []
    failed = {}
    for s in scales:
        g = scale_domain(grid, s)
        try:
            M = assemble_operator(g, kernel, max_nodes)
            dec = eigendecompose(M, max(candidate_modes))
        except ComplementarityError as exc:
            failed[s] = str(exc)
            continue
        floor = margin_floor_rel * abs(dec.eigenvalue(1))
        exclude = dec.degenerate_modes() if skip_degenerate else ()
        for i, j, k in candidate_triples(candidate_modes, exclude):
            for a in alpha_grid:
                c = evaluate_candidate(M, dec, i, j, k, a, floor)
                evaluated += 1
                if c.window.contains(a):
                    inside.append(c)
                if best is None or c.key < best.key:
                    best = c
    return SearchResult(best, evaluated, inside, failed)
