from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cwbarriers.tensors import (
    CapacityError,
    TensorError,
    TensorParseError,
    TensorSupport,
    asymptotic_rank,
    builtin_tensor,
    direct_sum,
    kronecker,
    make_cw_big,
    make_cw_small,
    make_diagonal,
    make_matmul,
    parse_tensor,
    serialize_tensor,
)


def test_diagonal_support():
    T = make_diagonal(3)
    assert T.dims == (3, 3, 3)
    assert T.support.points == ((0, 0, 0), (1, 1, 1), (2, 2, 2))
    assert all(c == 1 for c in T.coeffs.values())


def test_matmul_2x2x2_has_8_points():
    T = make_matmul(2, 2, 2)
    assert T.dims == (4, 4, 4)
    assert len(T) == 8
    # x_ij y_jk z_ki with row-major flattening
    assert (0 * 2 + 1, 1 * 2 + 0, 0 * 2 + 0) in T.support


def test_matmul_rectangular_dims():
    T = make_matmul(2, 3, 4)
    assert T.dims == (6, 12, 8)
    assert len(T) == 24


def test_cw_big_q2():
    T = make_cw_big(2)
    assert T.dims == (4, 4, 4)
    expected = {(1, 1, 0), (1, 0, 1), (0, 1, 1), (2, 2, 0), (2, 0, 2), (0, 2, 2),
                (0, 0, 3), (0, 3, 0), (3, 0, 0)}
    assert set(T.support.points) == expected


def test_cw_sizes():
    for q in range(1, 8):
        assert len(make_cw_big(q)) == 3 * q + 3
        assert len(make_cw_small(q)) == 3 * q
        assert make_cw_small(q).dims == (q + 1,) * 3


def test_nonpositive_sizes_rejected():
    with pytest.raises(TensorError):
        make_diagonal(0)
    with pytest.raises(TensorError):
        make_matmul(2, 0, 2)
    with pytest.raises(TensorError):
        make_cw_big(-1)


def test_capacity_error():
    with pytest.raises(CapacityError):
        make_matmul(200, 200, 200)


def test_support_validation():
    with pytest.raises(TensorError):
        TensorSupport((2, 2, 2), ((0, 0, 2),))
    with pytest.raises(TensorError):
        TensorSupport((2, 2, 2), ((0, 0, 0), (0, 0, 0)))
    with pytest.raises(TensorError):
        TensorSupport((2, 2, 2), ())


def test_kronecker_of_matmuls_is_matmul_up_to_relabeling():
    S, T = make_matmul(1, 2, 1), make_matmul(2, 1, 2)
    K = kronecker(S, T)
    M = make_matmul(2, 2, 2)
    assert K.dims == M.dims
    n1, n2, n3 = T.dims
    got = set()
    for x, y, z in K.support.points:
        a1, b1 = divmod(x, n1)
        a2, b2 = divmod(y, n2)
        # S = <1,2,1> carries j on axes 1 and 2; T = <2,1,2> carries i on axis 1, k on axis 2
        assert a1 == a2
        i, j, k = b1, a1, b2
        got.add((i * 2 + j, j * 2 + k, k * 2 + i))
    assert got == set(M.support.points)


def test_kronecker_with_unit_is_identity():
    T = make_cw_big(2)
    assert kronecker(T, make_diagonal(1)).support == T.support
    assert kronecker(make_diagonal(1), T).support == T.support


def test_kronecker_associative():
    A, B, C = make_cw_small(1), make_matmul(1, 2, 1), make_diagonal(2)
    left = kronecker(kronecker(A, B), C)
    right = kronecker(A, kronecker(B, C))
    assert left.support == right.support
    assert left.coeffs == right.coeffs


def test_kronecker_sizes_multiply():
    S, T = make_cw_big(1), make_cw_small(2)
    K = kronecker(S, T)
    assert len(K) == len(S) * len(T)
    assert K.dims == tuple(a * b for a, b in zip(S.dims, T.dims))


def test_direct_sum_of_diagonals():
    T = direct_sum(make_diagonal(2), make_diagonal(3))
    assert T.support == make_diagonal(5).support


def test_direct_sum_sizes_add():
    S, T = make_cw_big(1), make_matmul(1, 2, 2)
    U = direct_sum(S, T)
    assert len(U) == len(S) + len(T)
    assert U.dims == tuple(a + b for a, b in zip(S.dims, T.dims))


def test_round_trip_with_coefficients():
    doc = "# example\ndims 2 2 3\n0 0 2 3/4\n1 1 0 -2\n"
    T = parse_tensor(doc)
    assert T.coeffs[(0, 0, 2)] == Fraction(3, 4)
    assert T.coeffs[(1, 1, 0)] == Fraction(-2)
    again = parse_tensor(serialize_tensor(T))
    assert again.support == T.support
    assert again.coeffs == T.coeffs


@settings(max_examples=40, deadline=None)
@given(st.sets(st.tuples(st.integers(0, 2), st.integers(0, 1), st.integers(0, 3)), min_size=1),
       st.integers(1, 9))
def test_round_trip_property(points, num):
    coeffs = {p: Fraction(num, 1 + sum(p)) for p in points}
    from cwbarriers.tensors import Tensor

    T = Tensor.from_points((3, 2, 4), points, coeffs)
    U = parse_tensor(serialize_tensor(T))
    assert U.support == T.support
    assert U.coeffs == T.coeffs


@pytest.mark.parametrize("doc, line, field", [
    ("dims 2 2 2\n0 0 5 1\n", 2, "k"),
    ("dims 2 2 2\n0 0 0 0\n", 2, "coefficient"),
    ("dims 2 2 2\n0 0 0 1\n0 0 0 2\n", 3, None),
    ("dims 2 x 2\n", 1, "n2"),
    ("0 0 0 1\n", 1, "dims"),
    ("dims 2 2 2\n0 1 1 1/0\n", 2, "coefficient"),
])
def test_parse_errors_report_location(doc, line, field):
    with pytest.raises(TensorParseError) as info:
        parse_tensor(doc)
    assert info.value.line == line
    assert info.value.field == field


def test_parse_requires_points():
    with pytest.raises(TensorParseError):
        parse_tensor("dims 1 1 1\n")


def test_builtin_ids():
    assert builtin_tensor("cw:3").support == make_cw_big(3).support
    assert builtin_tensor("cwsmall:3").support == make_cw_small(3).support
    assert builtin_tensor("mm:1,2,3").support == make_matmul(1, 2, 3).support
    assert builtin_tensor("diag:4").support == make_diagonal(4).support
    with pytest.raises(TensorError):
        builtin_tensor("foo:1")
    with pytest.raises(TensorError):
        builtin_tensor("mm:1,2")


def test_rank_registry():
    assert asymptotic_rank("cw:5").asymptotic_rank == 7
    assert asymptotic_rank("diag:3").asymptotic_rank == 3
    assert asymptotic_rank("cwsmall:3") is None
    assert asymptotic_rank("mm:2,2,2") is None
