import numpy as np
import pytest
import scipy.io
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from kaczmarz_tanabe.mmio import MatrixMarketError, read_comment, read_mtx, read_vector, write_mtx


@pytest.mark.parametrize("fmt", ["array", "coordinate"])
def test_roundtrip_is_exact(tmp_path, rng, fmt):
    A = rng.standard_normal((7, 4))
    A[2, 1] = 0.0
    write_mtx(tmp_path / "a.mtx", A, fmt=fmt, comment="hello\nworld")
    B = read_mtx(tmp_path / "a.mtx")
    assert np.array_equal(A, B)
    assert read_comment(tmp_path / "a.mtx") == "hello\nworld"


@settings(max_examples=50, deadline=None)
@given(arrays(np.float64, st.tuples(st.integers(1, 5), st.integers(1, 5)),
              elements=st.floats(allow_nan=False, allow_infinity=False)))
def test_roundtrip_any_float(tmp_path_factory, A):
    path = tmp_path_factory.mktemp("mm") / "a.mtx"
    write_mtx(path, A)
    assert np.array_equal(read_mtx(path), A)


@pytest.mark.parametrize("fmt", ["array", "coordinate"])
def test_scipy_reads_ours(tmp_path, rng, fmt):
    A = rng.standard_normal((5, 3))
    write_mtx(tmp_path / "a.mtx", A, fmt=fmt)
    B = scipy.io.mmread(str(tmp_path / "a.mtx"))
    B = B.toarray() if hasattr(B, "toarray") else B
    assert np.array_equal(A, B)


def test_we_read_scipy(tmp_path, rng):
    A = rng.standard_normal((4, 6))
    scipy.io.mmwrite(str(tmp_path / "dense.mtx"), A, precision=17)
    assert np.array_equal(read_mtx(tmp_path / "dense.mtx"), A)
    S = np.triu(rng.standard_normal((4, 4)))
    S = S + np.triu(S, 1).T
    import scipy.sparse as sp

    scipy.io.mmwrite(str(tmp_path / "sym.mtx"), sp.coo_matrix(S), symmetry="symmetric", precision=17)
    assert np.array_equal(read_mtx(tmp_path / "sym.mtx"), S)


def test_symmetric_array(tmp_path):
    (tmp_path / "s.mtx").write_text(
        "%%MatrixMarket matrix array real symmetric\n2 2\n1\n2\n3\n")
    assert read_mtx(tmp_path / "s.mtx").tolist() == [[1, 2], [2, 3]]


def test_vector(tmp_path):
    write_mtx(tmp_path / "v.mtx", [1.5, -2.0, 3.25])
    assert read_vector(tmp_path / "v.mtx").tolist() == [1.5, -2.0, 3.25]
    write_mtx(tmp_path / "m.mtx", np.ones((2, 2)))
    with pytest.raises(MatrixMarketError):
        read_vector(tmp_path / "m.mtx")


@pytest.mark.parametrize("text,where", [
    ("hello\n", ":1:"),
    ("%%MatrixMarket matrix array complex general\n1 1\n1\n", "complex"),
    ("%%MatrixMarket matrix array real general\n2 x\n", ":2:"),
    ("%%MatrixMarket matrix array real general\n2 1\n1\nfoo\n", ":4:"),
    ("%%MatrixMarket matrix array real general\n2 1\n1\n", "expected 2"),
    ("%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 1.0\n", ":3:"),
    ("%%MatrixMarket matrix coordinate real general\n2 2 1\na 1 1.0\n", ":3:"),
    ("%%MatrixMarket matrix array real general\n1 1\nnan\n", "non-finite"),
])
def test_bad_files_name_the_line(tmp_path, text, where):
    (tmp_path / "bad.mtx").write_text(text)
    with pytest.raises(MatrixMarketError, match=where):
        read_mtx(tmp_path / "bad.mtx")


def test_refuses_non_finite(tmp_path):
    with pytest.raises(ValueError):
        write_mtx(tmp_path / "x.mtx", [1.0, np.inf])
