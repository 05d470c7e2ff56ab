import math
import os
from pathlib import Path

import pytest

import sftroof

DATA = Path(os.environ.get("SFTROOF_DATA", Path(__file__).resolve().parents[2] / "data"))
GOLDEN = [[1, 1], [1, 0]]


def test_entropy_and_counts():
    assert sftroof.entropy(GOLDEN) == pytest.approx(math.log((1 + 5 ** 0.5) / 2), abs=1e-12)
    assert sftroof.language_counts(GOLDEN, 4) == ["2", "3", "5", "8"]
    assert sftroof.essentialize([[1, 1], [0, 0]]) == [[1, 0], [0, 0]]


def test_parry_measure():
    pi, kernel, h = sftroof.parry_measure(GOLDEN)
    assert pi[0] == pytest.approx(0.7236, abs=1e-4)
    assert kernel[1] == pytest.approx([1.0, 0.0], abs=1e-12)


def test_roof_values():
    roof = sftroof.Roof(GOLDEN)
    assert roof.c == 2.5
    assert roof.a(1) == pytest.approx(math.log(2) + 2.5)
    q = roof.q(200)
    assert q[0] == pytest.approx(math.exp(-2.5) / 2, rel=1e-12)
    assert max(q) < 1
    assert roof.birkhoff_sup([1, 1]) == pytest.approx(-roof.a(1) - roof.h_y)
    root, residual, lo, hi = roof.pressure_root(60, 1e-10)
    assert lo <= root <= hi
    assert abs(residual) <= 1e-10


def test_report_from_file():
    roof = sftroof.Roof.from_file(str(DATA / "two_components.json"))
    report = roof.report(n=30)
    assert report["multiplicity"] == 2


def test_errors():
    with pytest.raises(sftroof.SftroofError):
        sftroof.Roof([[1, 0], [0, 0]])
    with pytest.raises(ValueError):
        sftroof.Roof(GOLDEN, c=1.0)


def test_lemma():
    lhs, rhs, holds = sftroof.lemma_inequality([1, 2, 3, 4, 5], 3, 2)
    assert (lhs, rhs, holds) == (15.0, 15.0, True)
    b = sftroof.random_subadditive(10, 3)
    assert b == sftroof.random_subadditive(10, 3)
