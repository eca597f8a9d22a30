from fractions import Fraction

import numpy as np
import pytest

from summat import specs
from summat.core import truncate
from summat.errors import DimensionError, SpecError
from summat.scalar import EXACT, FLOAT


@pytest.mark.parametrize("text", ["id", "cesaro", "Mp:2", "Mp:-0.5", "Mexp", "Mf:be", "delta",
                                  "delta-inv", "counterexample", "Mp:-1*delta"])
def test_every_matrix_name_parses(text):
    M = specs.parse_matrix(text)
    assert M.row(4).shape == (5,)


def test_product_is_left_to_right_and_named():
    M = specs.parse_matrix("Mp:-1*delta", EXACT)
    assert M.name == "Mp:-1*delta"
    assert M.family == ("product", ("Mp", -1.0), ("delta",))
    assert M.entry(2, 1) == Fraction(3, 11) - Fraction(2, 11)


@pytest.mark.parametrize("text", ["Mexp", "Mf:be", "Mp:0.5"])
def test_exact_rejects_irrational(text):
    with pytest.raises(SpecError):
        specs.parse_matrix(text, EXACT)


@pytest.mark.parametrize("text", ["", "foo", "Mp:", "Mp:x", "id**id", "Mf:other"])
def test_bad_matrix_specs(text):
    with pytest.raises(SpecError):
        specs.parse_matrix(text)


def test_numbers():
    assert specs.parse_number("1/3", EXACT) == Fraction(1, 3)
    assert specs.parse_number("0.25", EXACT) == Fraction(1, 4)
    assert specs.parse_number("1/4") == 0.25
    for bad in ("inf", "nan", "abc", "1/0"):
        with pytest.raises(SpecError):
            specs.parse_number(bad)


def test_rotations():
    assert np.array_equal(specs.parse_operator("rot:180").matrix, -np.eye(2))
    assert np.array_equal(specs.parse_operator("rot:90").matrix, np.array([[0.0, -1.0], [1.0, 0.0]]))
    T = specs.parse_operator("rot:270", EXACT)
    assert T.backend is EXACT and T.matrix[0, 1] == 1
    with pytest.raises(SpecError):
        specs.parse_operator("rot:45", EXACT)


def test_operator_forms():
    assert np.array_equal(specs.parse_operator("diag:1,-1,0.5").matrix, np.diag([1.0, -1.0, 0.5]))
    assert np.array_equal(specs.parse_operator("neg-id:3").matrix, -np.eye(3))
    assert np.array_equal(specs.parse_operator("scale:0.5:2").matrix, 0.5 * np.eye(2))
    J = specs.parse_operator("jordan:-1:3").matrix
    assert np.array_equal(J, np.array([[-1.0, 1.0, 0.0], [0.0, -1.0, 1.0], [0.0, 0.0, -1.0]]))


def test_random_operator_is_seeded_and_normalised():
    a = specs.parse_operator("random:4", seed=7).matrix
    b = specs.parse_operator("random:4:7").matrix
    assert np.array_equal(a, b)
    assert np.max(np.sum(np.abs(a), axis=1)) == pytest.approx(1.0)
    with pytest.raises(SpecError):
        specs.parse_operator("random:4", EXACT)


def test_file_operator(tmp_path):
    f = tmp_path / "T.csv"
    f.write_text("0,1/2\n1,0\n")
    T = specs.parse_operator(f"file:{f}", EXACT)
    assert T.matrix[0, 1] == Fraction(1, 2)
    f.write_text("1,2,3\n4,5,6\n")
    with pytest.raises(SpecError):
        specs.parse_operator(f"file:{f}")
    with pytest.raises(SpecError):
        specs.parse_operator(f"file:{tmp_path / 'missing.csv'}")


@pytest.mark.parametrize("text", ["rot", "neg-id:0", "scale:2", "jordan:1", "bogus:2", "diag:1,a"])
def test_bad_operator_specs(text):
    with pytest.raises(SpecError):
        specs.parse_operator(text)


def test_probes():
    T = specs.parse_operator("rot:90")
    assert [list(p) for p in specs.default_probes(2)] == [[1.0, 0.0], [0.0, 1.0]]
    specs.check_probe_dims(T, [specs.parse_probe("1,0")])
    with pytest.raises(DimensionError):
        specs.check_probe_dims(T, [specs.parse_probe("1,0,0")], ["1,0,0"])
    exact = specs.parse_probe("1/2,1", EXACT)
    assert exact.dtype == object and exact[0] == Fraction(1, 2)


def test_backend_names():
    assert specs.backend_named("exact") is EXACT
    assert specs.backend_named("float") is FLOAT
    with pytest.raises(SpecError):
        specs.backend_named("double")


def test_catalog_of_exact_cesaro():
    assert truncate(specs.parse_matrix("cesaro", EXACT), 3).to_csv() == "1,0,0\n1/2,1/2,0\n1/3,1/3,1/3\n"
