import random

import pytest

from cslrank.exactlin import Matrix, Scalar
from cslrank.lattice import random_lattice


def sympy_matrix(A: Matrix):
    import sympy

    return sympy.Matrix(
        [[sympy.Rational(a.re.numerator, a.re.denominator) + sympy.I * sympy.Rational(a.im.numerator, a.im.denominator)
          for a in row] for row in A.entries]
    )


def lattices(count, seed, max_n=8):
    rng = random.Random(seed)
    return [random_lattice(rng.randint(1, max_n), rng) for _ in range(count)]


@pytest.fixture
def rng():
    return random.Random(12345)


def scalar(re, im=0):
    return Scalar(re, im)


_criteria = {}


def pytest_runtest_logreport(report):
    if report.when != "call":
        return
    props = dict(report.user_properties)
    if "criterion" in props:
        _criteria[props["criterion"]] = (report.outcome, props)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(_criteria):
        outcome, props = _criteria[k]
        status = "PASS" if outcome == "passed" else "FAIL"
        secs = props.get("seconds", "?")
        terminalreporter.write_line(f"criterion {k}: {status}  {props['title']}  [{secs} s]")
