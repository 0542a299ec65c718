import pytest

from complementarity import ConfigError, KernelFamily
from complementarity.config import RunConfig, parse_config

MINIMAL = """
# kernel and grid only
kernel.family = gaussian
grid.dimension = 3
"""


def test_minimal_config_gets_defaults():
    cfg = parse_config(MINIMAL)
    assert cfg.kernel_family is KernelFamily.GAUSSIAN
    assert (cfg.kernel_amplitude, cfg.kernel_width) == (1.0, 0.5)
    assert (cfg.grid_dimension, cfg.grid_box_side, cfg.grid_cells_per_axis) == (3, 1.0, 6)
    assert cfg.modes == (1, 2, 3)
    assert cfg.tol_margin_floor is None
    assert cfg.alpha_grid == [0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5]
    assert cfg == parse_config("")


def test_full_config():
    cfg = parse_config("""
kernel.family = inverse_multiquadric   # trailing comment
kernel.amplitude = 2.5
kernel.width = 0.2
grid.dimension = 2
grid.box_side = 0.7
grid.cells_per_axis = 9
grid.scale = 0.5
modes.i = 4
modes.j = 2
modes.k = 7
modes.candidates = 1-8
alpha.value = 0.3
alpha.grid = 0.1, 0.2
search.scales = 1, 0.5
search.skip_degenerate = yes
scan.scales = 1:2:0.5
oracle.pairs = 3
output.directory = results
output.formats = json
tolerances.margin_floor = 1e-12
""")
    assert cfg.kernel.family is KernelFamily.INVERSE_MULTIQUADRIC
    assert cfg.modes == (4, 2, 7)
    assert cfg.mode_candidates == list(range(1, 9))
    assert cfg.alpha_grid == [0.1, 0.2]
    assert cfg.scan_scales == [1.0, 1.5, 2.0]
    assert cfg.search_skip_degenerate is True
    assert cfg.output_formats == ["json"]
    assert cfg.tol_margin_floor == 1e-12


@pytest.mark.parametrize(
    "text,key,line,fragment",
    [
        ("grid.cells_per_axis = 0", "grid.cells_per_axis", 1, "must be >= 1"),
        ("kernel.width = -1", "kernel.width", 1, "must be > 0"),
        ("\nkernel.colour = red", "kernel.colour", 2, "unknown key"),
        ("grid.box_side = abc", "grid.box_side", 1, "expected a number"),
        ("grid.dimension = 2.5", "grid.dimension", 1, "integer"),
        ("kernel.family = coulomb", "kernel.family", 1, "unknown kernel family"),
        ("alpha.grid = 0.5, 1.5", "alpha.grid", 1, "(0, 1)"),
        ("kernel.width = 1\nkernel.width = 2", "kernel.width", 2, "duplicate"),
        ("kernel.width =", "kernel.width", 1, "missing value"),
        ("grid.scale = nan", "grid.scale", 1, "finite"),
    ],
)
def test_errors_name_line_and_key(text, key, line, fragment):
    with pytest.raises(ConfigError) as exc:
        parse_config(text)
    assert exc.value.key == key
    assert exc.value.line == line
    assert fragment in str(exc.value)
    assert key in str(exc.value)


def test_modes_must_be_distinct():
    with pytest.raises(ConfigError) as exc:
        parse_config("modes.i = 2\nmodes.j = 2\nmodes.k = 3")
    assert "modes.i and modes.j must be distinct" in str(exc.value)
    assert exc.value.line == 2


def test_modes_go_together():
    with pytest.raises(ConfigError) as exc:
        parse_config("modes.i = 2\nmodes.j = 5")
    assert exc.value.key == "modes.k"
    assert "missing required key" in str(exc.value)


def test_line_without_equals():
    with pytest.raises(ConfigError) as exc:
        parse_config("kernel.width 3")
    assert exc.value.line == 1


def test_echo_round_trip():
    cfg = parse_config("kernel.width = 0.25\nmodes.i = 3\nmodes.j = 1\nmodes.k = 2")
    text = "\n".join(
        f"{k} = {', '.join(map(str, v)) if isinstance(v, list) else v}"
        for k, v in cfg.echo().items()
        if v is not None
    )
    assert parse_config(text) == cfg
    assert "output.directory" not in RunConfig().echo(include_output=False)
