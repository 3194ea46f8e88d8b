from fractions import Fraction

import pytest
from hypothesis import settings, strategies as st

from eopladder import families as fam
from eopladder.cli import DEFAULT_CONFIG, GridConfig
from eopladder.families import FamilySpec
from eopladder.ratcore import Poly

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

JACOBI_POINTS = [("1/2", "3/2"), ("1", "3"), ("2/3", "7/3"), ("3/2", "1/2"), ("1", "2")]
LAGUERRE_POINTS = ["1/2", "1", "5/2", "4"]


def grid_specs() -> list[FamilySpec]:
    """Acceptance grid plus the extra admissible Xm Jacobi points."""
    return GridConfig.from_dict(DEFAULT_CONFIG).specs


def structural_specs() -> list[FamilySpec]:
    out = []
    for s in grid_specs():
        try:
            fam.check_structure(s)
        except fam.FamilyError:
            continue
        out.append(s)
    return out


def admissible_specs() -> list[FamilySpec]:
    return [s for s in grid_specs() if fam.validation_error(s) is None]


rationals = st.fractions(min_value=-5, max_value=5, max_denominator=7)
small_rationals = st.fractions(min_value=-3, max_value=3, max_denominator=5)


@st.composite
def polys(draw, max_degree=8, nonzero=False):
    coeffs = draw(st.lists(small_rationals, min_size=0, max_size=max_degree + 1))
    p = Poly(coeffs)
    if nonzero and p.is_zero():
        p = Poly([draw(st.fractions(min_value=1, max_value=3, max_denominator=4))])
    return p


@pytest.fixture(scope="session")
def grid():
    return grid_specs()



def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for number in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[number])
