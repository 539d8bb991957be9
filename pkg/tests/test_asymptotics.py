import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from semiprime import DomainError, accumulate_series, build_prime_table
from semiprime.asymptotics import (
    STATISTICS,
    ResidualRow,
    boundedness_check,
    main_term,
    normalizer,
    residual_report,
    stabilization,
)

EE = math.e**math.e


def test_main_term_examples():
    assert main_term("sum_recip", EE) == pytest.approx(0.5, rel=1e-14)
    assert main_term("psi", 100) == pytest.approx(152.718, abs=1e-3)
    assert main_term("sum_log2n", EE) == pytest.approx(EE * math.e, rel=1e-14)
    assert main_term("sum_log2n", EE) == pytest.approx(41.193, abs=1e-3)


@pytest.mark.parametrize("statistic", STATISTICS)
def test_main_term_domain(statistic):
    with pytest.raises(DomainError):
        main_term(statistic, 3.99)
    assert normalizer(statistic, 4) > 0


@pytest.mark.parametrize("statistic", STATISTICS)
@given(st.floats(4, 1e12), st.floats(1e-6, 1e3))
def test_main_term_increasing(statistic, x, dx):
    assert main_term(statistic, x + dx * x * 1e-3 + 1e-9 * x) > main_term(statistic, x)


def test_report_rows_at_ten():
    s = accumulate_series([10], build_prime_table(10))
    rows = residual_report(s)
    assert [r.statistic for r in rows] == sorted(STATISTICS)
    psi = next(r for r in rows if r.statistic == "psi")
    assert psi.actual == pytest.approx(5.8861, abs=1e-4)
    assert psi.main_term == pytest.approx(10 * math.log(math.log(10)), rel=1e-15)
    assert psi.residual == pytest.approx(-2.4542, abs=1e-4)
    assert psi.normalized_residual == pytest.approx(-0.24542, abs=1e-5)
    for r in rows:
        assert r.residual == r.actual - r.main_term
        assert r.residual + r.main_term == pytest.approx(r.actual, rel=1e-15)
        assert r.normalizer > 0


def test_normalizers():
    x = 1e6
    assert normalizer("psi", x) == x
    assert normalizer("sum_logn", x) == x
    assert normalizer("sum_log2n", x) == x * math.log(x)
    assert normalizer("sum_recip", x) == math.log(math.log(x))
    assert normalizer("sum_logn_over_n", x) == math.log(x)
    assert normalizer("sum_upsilon_over_n", x) == math.log(x)


def _row(nr, statistic="psi"):
    return ResidualRow(10.0, statistic, nr, 0.0, nr, 1.0, nr)


def test_boundedness_examples():
    assert boundedness_check([_row(0.0)], bound=0.1)["psi"].passed
    assert not boundedness_check([_row(6.0)], bound=5)["psi"].passed
    assert not boundedness_check([_row(-6.0)], bound=5)["psi"].passed
    assert boundedness_check([_row(5.0)], bound=5)["psi"].passed
    with pytest.raises(DomainError):
        boundedness_check([], 5)


def test_psi_bounded_desk_grid(table_1e4):
    s = accumulate_series(np.geomspace(1e4, 1e6, 5), table_1e4)
    rows = residual_report(s, ("psi",))
    assert boundedness_check(rows, 5)["psi"].passed
    assert all(d < 0.5 for d in stabilization(rows, "psi"))
