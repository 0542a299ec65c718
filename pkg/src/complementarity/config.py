"""Line-oriented run configuration: ``section.key = value`` with ``#`` comments."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields

from .errors import ConfigError, ComplementarityError
from .kernel import Kernel, KernelFamily

FORMATS = ("csv", "json")


def _int(text):
    try:
        return int(text, 10)
    except ValueError:
        raise ValueError(f"expected an integer, got {text!r}") from None


def _float(text):
    try:
        value = float(text)
    except ValueError:
        raise ValueError(f"expected a number, got {text!r}") from None
    if not math.isfinite(value):
        raise ValueError(f"expected a finite number, got {text!r}")
    return value


def _bool(text):
    low = text.lower()
    if low in ("true", "yes", "on", "1"):
        return True
    if low in ("false", "no", "off", "0"):
        return False
    raise ValueError(f"expected a boolean, got {text!r}")


def _float_list(text):
    """Comma list, or an inclusive range ``start:stop:step``."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError("range must be start:stop:step")
        start, stop, step = (_float(p) for p in parts)
        if step <= 0 or stop < start:
            raise ValueError("range needs step > 0 and stop >= start")
        count = int(math.floor((stop - start) / step + 1e-9)) + 1
        return [round(start + n * step, 12) for n in range(count)]
    return [_float(p) for p in text.split(",") if p.strip()]


def _int_list(text):
    """Comma list, or an inclusive range ``a-b``."""
    text = text.strip()
    if "-" in text and "," not in text:
        lo, hi = (_int(p.strip()) for p in text.split("-", 1))
        if hi < lo:
            raise ValueError("empty index range")
        return list(range(lo, hi + 1))
    return [_int(p.strip()) for p in text.split(",") if p.strip()]


def _formats(text):
    out = [p.strip().lower() for p in text.split(",") if p.strip()]
    bad = [p for p in out if p not in FORMATS]
    if bad:
        raise ValueError(f"unknown output format(s) {bad}, choose from {list(FORMATS)}")
    return out


def _family(text):
    try:
        return KernelFamily.parse(text)
    except ComplementarityError as exc:
        raise ValueError(str(exc)) from None


def _positive(v):
    if isinstance(v, list):
        if not v:
            return "must not be empty"
        return None if all(x > 0 for x in v) else "entries must be > 0"
    return None if v > 0 else "must be > 0"


def _at_least_one(v):
    if isinstance(v, list):
        if not v:
            return "must not be empty"
        return None if all(x >= 1 for x in v) else "entries must be >= 1"
    return None if v >= 1 else "must be >= 1"


def _unit_open(v):
    if not v:
        return "must not be empty"
    return None if all(0 < x < 1 for x in v) else "entries must lie in (0, 1)"


def _nonneg(v):
    return None if v >= 0 else "must be >= 0"


def _dimension(v):
    return None if v in (1, 2, 3) else "must be 1, 2 or 3"


# dotted key -> (attribute, parser, validator or None)
SCHEMA = {
    "kernel.family": ("kernel_family", _family, None),
    "kernel.amplitude": ("kernel_amplitude", _float, _positive),
    "kernel.width": ("kernel_width", _float, _positive),
    "grid.dimension": ("grid_dimension", _int, _dimension),
    "grid.box_side": ("grid_box_side", _float, _positive),
    "grid.cells_per_axis": ("grid_cells_per_axis", _int, _at_least_one),
    "grid.scale": ("grid_scale", _float, _positive),
    "grid.max_nodes": ("grid_max_nodes", _int, _at_least_one),
    "modes.i": ("mode_i", _int, _at_least_one),
    "modes.j": ("mode_j", _int, _at_least_one),
    "modes.k": ("mode_k", _int, _at_least_one),
    "modes.candidates": ("mode_candidates", _int_list, _at_least_one),
    "alpha.value": ("alpha_value", _float, _positive),
    "alpha.grid": ("alpha_grid", _float_list, _unit_open),
    "search.scales": ("search_scales", _float_list, _positive),
    "search.skip_degenerate": ("search_skip_degenerate", _bool, None),
    "scan.scales": ("scan_scales", _float_list, _positive),
    "oracle.pairs": ("oracle_pairs", _int, _at_least_one),
    "output.directory": ("output_directory", str, None),
    "output.formats": ("output_formats", _formats, None),
    "tolerances.eigen_residual": ("tol_eigen_residual", _float, _positive),
    "tolerances.neutrality": ("tol_neutrality", _float, _nonneg),
    "tolerances.margin_floor": ("tol_margin_floor", _float, _nonneg),
    "tolerances.oracle": ("tol_oracle", _float, _positive),
}


@dataclass
class RunConfig:
    kernel_family: KernelFamily = KernelFamily.GAUSSIAN
    kernel_amplitude: float = 1.0
    kernel_width: float = 0.5
    grid_dimension: int = 3
    grid_box_side: float = 1.0
    grid_cells_per_axis: int = 6
    grid_scale: float = 1.0
    grid_max_nodes: int = 5000
    mode_i: int = 1
    mode_j: int = 2
    mode_k: int = 3
    mode_candidates: list = field(default_factory=lambda: [1, 2, 3, 4, 5])
    alpha_value: float = 0.05
    alpha_grid: list = field(default_factory=lambda: _float_list("0.05:0.5:0.05"))
    search_scales: list = field(default_factory=lambda: [0.5, 0.3, 0.2])
    search_skip_degenerate: bool = False
    scan_scales: list = field(default_factory=lambda: [1.0, 0.5, 0.25, 0.125])
    oracle_pairs: int = 10
    output_directory: str = "out"
    output_formats: list = field(default_factory=lambda: list(FORMATS))
    tol_eigen_residual: float = 1e-8
    tol_neutrality: float = 1e-10
    tol_margin_floor: float | None = None  # None: 1e-8 * |lambda_1| of the grid in use
    tol_oracle: float = 1e-8

    @property
    def kernel(self) -> Kernel:
        return Kernel(self.kernel_family, self.kernel_amplitude, self.kernel_width)

    @property
    def modes(self) -> tuple[int, int, int]:
        return (self.mode_i, self.mode_j, self.mode_k)

    def echo(self, include_output: bool = True) -> dict:
        """Dotted-key view of every setting, suitable for reproducing the run."""
        attrs = {attr: key for key, (attr, _, _) in SCHEMA.items()}
        out = {}
        for f in fields(self):
            key = attrs[f.name]
            if not include_output and key.startswith("output."):
                continue
            value = getattr(self, f.name)
            if isinstance(value, KernelFamily):
                value = value.value
            out[key] = list(value) if isinstance(value, list) else value
        return out


def parse_config(text: str) -> RunConfig:
    """Parse and validate a configuration; omitted keys take their defaults.

    Raises ConfigError naming the offending line and key.
    """
    cfg = RunConfig()
    seen: dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError("expected 'section.key = value'", line=lineno)
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in SCHEMA:
            raise ConfigError("unknown key", line=lineno, key=key)
        if key in seen:
            raise ConfigError(f"duplicate key (first set on line {seen[key]})", line=lineno, key=key)
        if not value:
            raise ConfigError("missing value", line=lineno, key=key)
        attr, parse, check = SCHEMA[key]
        try:
            parsed = parse(value)
        except ValueError as exc:
            raise ConfigError(str(exc), line=lineno, key=key) from None
        problem = check(parsed) if check else None
        if problem:
            raise ConfigError(problem, line=lineno, key=key)
        setattr(cfg, attr, parsed)
        seen[key] = lineno

    given = [k for k in ("modes.i", "modes.j", "modes.k") if k in seen]
    if given and len(given) < 3:
        missing = next(k for k in ("modes.i", "modes.j", "modes.k") if k not in seen)
        raise ConfigError("missing required key (modes.i, modes.j and modes.k go together)", key=missing)
    if len(set(cfg.modes)) != 3:
        names = ("modes.i", "modes.j", "modes.k")
        for a in range(3):
            for b in range(a + 1, 3):
                if cfg.modes[a] == cfg.modes[b]:
                    raise ConfigError(
                        f"{names[a]} and {names[b]} must be distinct",
                        line=seen.get(names[b]), key=names[b],
                    )
    if len(set(cfg.mode_candidates)) < 3:
        raise ConfigError("need at least three distinct candidate modes",
                          line=seen.get("modes.candidates"), key="modes.candidates")
    if not cfg.alpha_value < 1:
        raise ConfigError("must lie in (0, 1)", line=seen.get("alpha.value"), key="alpha.value")
    return cfg
