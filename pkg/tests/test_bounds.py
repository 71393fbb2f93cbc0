import json
import math
from importlib import resources

import pytest

from bcasc.bounds import (
    BoundError,
    Regime,
    composite_bound,
    levenshtein_bound,
    mukkavilli_bound,
    mwbe_possible,
    orthoplex_bound,
    welch_bound,
)
from bcasc.codes import Field

REFERENCE = json.loads(resources.files("bcasc").joinpath("data/reference.json").read_text())


@pytest.mark.parametrize("n, m, expected", [(4, 16, 0.4472), (3, 9, 0.5), (3, 4, 0.3333)])
def test_welch(n, m, expected):
    assert welch_bound(n, m) == pytest.approx(expected, abs=5e-5)


def test_welch_needs_m_greater_than_n():
    with pytest.raises(BoundError, match="M > N"):
        welch_bound(3, 3)


@pytest.mark.parametrize(
    "n, m, field, expected",
    [
        (3, 9, Field.COMPLEX, True),
        (3, 10, Field.COMPLEX, False),
        (3, 6, Field.REAL, True),
        (3, 7, Field.REAL, False),
    ],
)
def test_mwbe_possible(n, m, field, expected):
    assert mwbe_possible(n, m, field) is expected


@pytest.mark.parametrize("n, expected", [(3, 0.577350269189626), (4, 0.5), (1, 1.0)])
def test_orthoplex(n, expected):
    assert orthoplex_bound(n) == pytest.approx(expected, abs=1e-15)


@pytest.mark.parametrize(
    "n, m, expected, tol",
    [(4, 64, 0.6000, 5e-5), (3, 13, 0.591607978309962, 1e-12), (3, 16, 0.6202, 5e-5)],
)
def test_levenshtein_complex(n, m, expected, tol):
    assert levenshtein_bound(n, m) == pytest.approx(expected, abs=tol)


def test_levenshtein_absent_when_numerator_negative():
    assert levenshtein_bound(3, 4) is None  # 8 - 12 < 0
    assert levenshtein_bound(3, 4, Field.REAL) is None  # 12 - 15 < 0
    assert levenshtein_bound(3, 5, Field.REAL) == 0.0
    assert levenshtein_bound(3, 6, Field.REAL) == pytest.approx(math.sqrt(3 / 15))


def test_mukkavilli():
    assert mukkavilli_bound(2, 8) == pytest.approx(0.75, abs=1e-15)
    assert mukkavilli_bound(3, 39) == pytest.approx(1 - 2 / math.sqrt(39), abs=1e-15)
    assert mukkavilli_bound(3, 39) == pytest.approx(0.679744, abs=1e-6)
    assert mukkavilli_bound(3, 39) > levenshtein_bound(3, 39)
    assert mukkavilli_bound(3, 38) < levenshtein_bound(3, 38)
    for n in range(2, 7):
        assert mukkavilli_bound(n, 2 ** (n - 1)) == pytest.approx(0.0, abs=1e-15)
    with pytest.raises(BoundError):
        mukkavilli_bound(1, 4)


@pytest.mark.parametrize(
    "n, m, value, regime",
    [(3, 16, 0.6202, Regime.ORTHOPLEX), (2, 8, 0.7500, Regime.LARGE_M), (5, 16, 0.3830, Regime.WELCH)],
)
def test_composite_examples(n, m, value, regime):
    b = composite_bound(n, m)
    assert round(b.composite, 4) == value
    assert b.regime is regime


@pytest.mark.parametrize("n", range(2, 9))
def test_composite_equals_welch_on_boundary(n):
    b = composite_bound(n, n * n)
    assert b.regime is Regime.WELCH
    assert b.composite == b.welch


@pytest.mark.parametrize("n", range(2, 9))
def test_orthoplex_regime_dominates_orthoplex(n):
    for m in range(n * n + 1, 2 * (n * n - 1) + 1):
        b = composite_bound(n, m)
        assert b.regime is Regime.ORTHOPLEX
        assert b.orthoplex >= 0
        assert b.composite >= b.orthoplex


@pytest.mark.parametrize("target", ["table1", "table2"])
def test_published_composite_columns(target):
    for row in REFERENCE[target]["rows"]:
        assert round(composite_bound(row["n"], row["m"]).composite, 4) == row["bound"], row


def test_lower_bound_curve_n3():
    fig = REFERENCE["fig2"]
    assert fig["m"] == list(range(4, 34))
    for m, expected in zip(fig["m"], fig["bound"]):
        assert composite_bound(3, m).composite == pytest.approx(expected, abs=1e-9)


def test_bound_values_in_unit_interval():
    for n in range(2, 8):
        for m in range(n + 1, 3 * n * n):
            b = composite_bound(n, m)
            for v in (b.welch, b.orthoplex, b.levenshtein, b.mukkavilli, b.composite):
                assert v is None or 0 <= v < 1


def test_real_field_is_flagged_extension():
    b = composite_bound(3, 7, Field.REAL)
    assert b.extension and not composite_bound(3, 7).extension
    assert b.regime is Regime.ORTHOPLEX  # 6 < 7 <= 10
    assert composite_bound(3, 6, Field.REAL).regime is Regime.WELCH
    assert composite_bound(3, 11, Field.REAL).regime is Regime.LARGE_M


def test_one_dimensional_lines_always_coincide():
    b = composite_bound(1, 3)
    assert b.mukkavilli is None
    assert b.composite == pytest.approx(1.0)
