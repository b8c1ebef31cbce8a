import json
import re

import numpy as np
import pytest

from activecorners import builtin_job
from activecorners import region as rg
from activecorners.jobs import BUILTIN
from activecorners.serialize import (
    SerializeError, expand_clamps, from_json, region_plot, serialize, to_cas, to_json, to_latex,
)


@pytest.fixture(scope="module")
def formulas():
    return {name: builtin_job(name).compile() for name in BUILTIN}


@pytest.mark.parametrize("name", BUILTIN)
def test_json_round_trip(formulas, name):
    f = formulas[name]
    assert from_json(to_json(f, {"job": name})) == f


def test_json_document_shape(formulas):
    doc = json.loads(to_json(formulas["fig1"], {"job": "fig1"}))
    assert doc["format"] == "activecorners-region"
    assert doc["variables"] == ["x", "y"]
    assert doc["meta"] == {"job": "fig1"}
    top = doc["formula"]
    assert top["op"] == "or"
    assert {t["kind"] for t in top["terms"]} == {"segment", "notch"}
    leaf = top["terms"][0]["terms"][0]
    assert set(leaf) == {"op", "cmp", "lhs"}


@pytest.mark.parametrize("text", [
    "[]",
    '{"format": "other", "version": 1}',
    '{"format": "activecorners-region", "version": 9, "formula": {}}',
    '{"format": "activecorners-region", "version": 1, "formula": {"op": "xor"}}',
    '{"format": "activecorners-region", "version": 1, "formula": {"op": "cmp", "cmp": "<=0", "lhs": "x +"}}',
    "not json",
])
def test_json_rejects(text):
    with pytest.raises(SerializeError):
        from_json(text)


def test_latex_descent_clause(formulas):
    tex = to_latex(formulas["fig1"])
    assert tex.startswith("\\begin{multline*}")
    first = tex.split("\\vee")[0]
    assert "x + 2 \\geq 0" in first
    assert "x - 7 \\leq 0" in first
    assert first.count("\\begin{cases}") == 2
    assert "\\leq 0" in first and "\\wedge" in first
    assert tex.count("\\vee") == 3


def test_latex_uses_surd_and_fractions(formulas):
    tex = to_latex(formulas["uav"])
    assert "\\sqrt{" in tex
    assert "\\frac{" in tex or "\\sqrt{3}" in tex
    assert "clamp" not in tex


@pytest.mark.parametrize("name", BUILTIN)
def test_cas_operator_inventory(formulas, name):
    text = to_cas(formulas[name])
    assert "clamp" not in text and "Piecewise" not in text
    assert "Min[" not in text and "Max[" not in text
    stripped = re.sub(r"Sqrt\[|[xy]|\d+\.?\d*(\*\^-?\d+)?|&&|\|\||<=|>=|[-+*/^()\]\s]", "", text)
    assert stripped == ""


@pytest.mark.parametrize("name", BUILTIN)
def test_expanded_clamps_are_equivalent(formulas, name):
    f = formulas[name]
    g = expand_clamps(f)
    job = builtin_job(name)
    x0, x1, y0, y1 = job.window
    X, Y = np.meshgrid(np.linspace(x0, x1, 181), np.linspace(y0, y1, 181))
    a = rg.evaluate_grid(f, X, Y)
    b = rg.evaluate_grid(g, X, Y)
    near = rg.min_abs_atom(f, X, Y) < 1e-9
    assert np.array_equal(a[~near], b[~near])


def test_region_plot_command(formulas):
    text = region_plot(formulas["fig1"], (-5, 20, -12, 5))
    assert text.startswith("RegionPlot[")
    assert text.rstrip().endswith("{x, -5.0, 20.0}, {y, -12.0, 5.0}]")


def test_serialize_dispatch(formulas):
    f = formulas["fig1"]
    assert serialize(f, "json") == to_json(f)
    assert serialize(f, "latex") == to_latex(f)
    with pytest.raises(SerializeError):
        serialize(f, "yaml")
