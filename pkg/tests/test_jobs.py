import math

import pytest

from activecorners.geometry import rectangle
from activecorners.jobs import BUILTIN, JobError, builtin_job, parse_job
from activecorners.oracle import validate
from activecorners import region as rg

BASE = {
    "trajectory": {"pieces": [{"f": "x^2/4", "domain": [-2, 2]}]},
    "validation": {"grid": [-5, 5, -3, 5, 0.05], "step": 0.001},
}


@pytest.mark.parametrize("name", BUILTIN)
def test_builtin_jobs_load(name):
    job = builtin_job(name)
    assert job.name == name and job.grid is not None


def test_constants_chain_and_expressions():
    job = parse_job(dict(BASE, constants={"a": 2, "b": "a/3"}, polygon={"rectangle": ["b", "sqrt(a)"]}))
    assert job.polygon == rectangle(job.constants["b"], math.sqrt(2))


def test_obstacle_inflates():
    job = parse_job(dict(BASE, polygon={"rectangle": [1, 0.5]}, obstacle={"rectangle": [0.25, 0.25]}))
    assert set(job.polygon.vertices) == set(rectangle(1.25, 0.75).vertices)
    rep = validate(job.compile(), job.trajectory, job.objects, job.oracle_config())
    assert rep.passed, rep.summary()


def test_union_job_validates():
    poly = {"union": [
        {"vertices": [[-1, -1], [1, -1], [1, -0.5], [-1, -0.5]]},
        {"vertices": [[-1, -0.5], [-0.5, -0.5], [-0.5, 1], [-1, 1]]},
    ]}
    job = parse_job(dict(BASE, polygon=poly))
    assert len(job.objects) == 2
    with pytest.raises(JobError):
        job.polygon
    rep = validate(job.compile(), job.trajectory, job.objects, job.oracle_config())
    assert rep.passed, rep.summary()


def test_x_of_y_job_validates():
    doc = {
        "polygon": {"regular_ngon": {"n": 6, "inscribed_radius": 0.5, "rotation": 10}},
        "trajectory": {"pieces": [{"orientation": "x_of_y", "f": "sin(pi/6)*y^2 - 1", "domain": [-2, 2]}]},
        "validation": {"grid": [-3, 4, -3, 3, 0.05], "step": 0.001},
    }
    job = parse_job(doc)
    f = job.compile()
    assert rg.evaluate(f, (-1, 0))
    rep = validate(f, job.trajectory, job.objects, job.oracle_config())
    assert rep.passed, rep.summary()


@pytest.mark.parametrize("patch, field", [
    ({"polygon": {"rectangle": [1]}}, "polygon.rectangle"),
    ({"polygon": {"rectangle": [1, 1], "vertices": []}}, "polygon"),
    ({"polygon": {"regular_ngon": {"n": "six", "circumradius": 1}}}, "polygon.regular_ngon.n"),
    ({"polygon": {"regular_ngon": {"n": 6}}}, "polygon.regular_ngon"),
    ({"polygon": {"rectangle": [1, 1]}, "constants": {"x": 1}}, "constants.x"),
    ({"polygon": {"rectangle": [1, 1]}, "outputs": ["pdf"]}, "outputs[0]"),
    ({"polygon": {"rectangle": [1, 1]}, "validation": {"grid": [0, 1, 0, 1]}}, "validation.grid"),
    ({}, "polygon"),
])
def test_job_errors_name_field(patch, field):
    with pytest.raises(JobError) as info:
        parse_job(dict(BASE, **patch))
    assert info.value.path == field
