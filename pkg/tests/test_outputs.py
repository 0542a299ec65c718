import json
import math

import numpy as np
import pytest

from complementarity import build_grid
from complementarity.outputs import (
    Lcg64,
    dumps,
    random_field,
    write_csv,
    write_field_csv,
    write_operator_csv,
)


def test_lcg_sequence():
    rng = Lcg64(0)
    assert rng.next_u64() == 1442695040888963407
    assert rng.next_u64() == (1442695040888963407 * 6364136223846793005 + 1442695040888963407) % 2**64


def test_lcg_uniform_range_and_reproducible():
    a = Lcg64(42).uniforms(1000)
    assert np.all((a >= 0) & (a < 1))
    np.testing.assert_array_equal(a, Lcg64(42).uniforms(1000))
    assert not np.array_equal(a, Lcg64(43).uniforms(1000))
    assert Lcg64(7).uniform() == (((7 * 6364136223846793005 + 1442695040888963407) % 2**64) >> 11) / 2.0**53


def test_random_field_bounds():
    f = random_field(build_grid(2, 1.0, 4), Lcg64(3))
    assert np.all(np.abs(f.values) <= 1)


def test_json_full_precision_round_trip():
    x = 0.1 + 0.2
    doc = {"a": x, "b": [1, True, None, math.nan], "c": {"s": "q\"uote"}, "d": np.float64(1 / 3)}
    text = dumps(doc)
    back = json.loads(text)
    assert back["a"] == x and back["d"] == 1 / 3
    assert back["b"] == [1, True, None, None]
    assert "0.30000000000000004" in text


def test_csv_writers(tmp_path):
    n = write_csv(tmp_path / "t.csv", ["index", "lambda"], [(1, -0.5), (2, 1 / 3)])
    assert n == 2
    lines = (tmp_path / "t.csv").read_text().splitlines()
    assert lines[0] == "index,lambda"
    assert float(lines[2].split(",")[1]) == 1 / 3

    g = build_grid(2, 1.0, 2)
    write_field_csv(tmp_path / "f.csv", g.constant(2.0))
    assert (tmp_path / "f.csv").read_text().splitlines()[0] == "node_index,x1,x2,value"

    m = np.arange(9.0).reshape(3, 3)
    assert write_operator_csv(tmp_path / "op.csv", m) == 6
    rows = (tmp_path / "op.csv").read_text().splitlines()
    assert rows[0] == "row,col,value"
    assert all(int(r.split(",")[0]) >= int(r.split(",")[1]) for r in rows[1:])
    assert not list(tmp_path.glob(".*tmp"))
