import pathlib

import pytest

from normplane.corpus import corpus_norms, double_drop_curve, drop_curve
from normplane.curves import build_natural_param, unit_sphere

SPECS_DIR = pathlib.Path(__file__).resolve().parents[1] / "specs"


@pytest.fixture(scope="session")
def corpus():
    return corpus_norms()


@pytest.fixture(scope="session")
def params(corpus):
    # natural parameterizations are pure and reusable; build each sphere once
    return {name: build_natural_param(unit_sphere(n)) for name, n in corpus.items()}


@pytest.fixture(scope="session")
def drop():
    return drop_curve()


@pytest.fixture(scope="session")
def double_drop():
    return double_drop_curve()


@pytest.fixture(scope="session")
def specs_dir():
    return SPECS_DIR
