from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from torsionlab.errors import BasisError, DimensionError, FieldError, FormError, InconsistentSystemError
from torsionlab.fieldlin import (
    QQ,
    Matrix,
    QuadElement,
    QuadraticField,
    RealField,
    block_diag,
    change_base_det,
    det,
    field_from_name,
    image_basis,
    inverse,
    kernel_basis,
    matrix_from_json,
    matrix_to_json,
    pfaffian,
    rank,
    solve,
)

small = st.integers(-4, 4)


def int_matrix(r, c):
    return st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r)


@st.composite
def square(draw, lo=1, hi=5):
    n = draw(st.integers(lo, hi))
    return draw(int_matrix(n, n))


@st.composite
def rect(draw):
    r, c = draw(st.integers(1, 5)), draw(st.integers(1, 5))
    return draw(int_matrix(r, c))


@st.composite
def skew(draw, hi=4):
    k = draw(st.integers(1, hi))
    n = 2 * k
    vals = draw(st.lists(small, min_size=n * (n - 1) // 2, max_size=n * (n - 1) // 2))
    rows = [[0] * n for _ in range(n)]
    it = iter(vals)
    for i in range(n):
        for j in range(i + 1, n):
            v = next(it)
            rows[i][j], rows[j][i] = v, -v
    return rows


def to_sympy(rows):
    return sp.Matrix(rows)


# -- det ---------------------------------------------------------------------


@pytest.mark.parametrize("rows,expected", [
    ([[2, 0], [0, 3]], 6),
    ([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]], 1),
    ([[1, 2], [3, 4]], -2),
])
def test_det_examples(rows, expected):
    assert det(Matrix(rows)) == expected


def test_det_nonsquare_raises():
    with pytest.raises(DimensionError):
        det(Matrix([[1, 2, 3]]))


@given(square())
def test_det_matches_sympy(rows):
    assert det(Matrix(rows)) == Fraction(int(to_sympy(rows).det()))


@given(st.integers(1, 5).flatmap(lambda n: st.tuples(int_matrix(n, n), int_matrix(n, n))))
def test_det_multiplicative(pair):
    a, b = Matrix(pair[0]), Matrix(pair[1])
    assert det(a @ b) == det(a) * det(b)


# -- pfaffian ----------------------------------------------------------------


def test_pfaffian_examples():
    assert pfaffian(Matrix([[0, 5], [-5, 0]])) == 5
    j = Matrix([[0, 1], [-1, 0]])
    assert pfaffian(block_diag(j, j)) == 1


def test_pfaffian_rejects_bad_input():
    with pytest.raises(FormError):
        pfaffian(Matrix([[0, 1, 0], [-1, 0, 0], [0, 0, 0]]))
    with pytest.raises(FormError):
        pfaffian(Matrix([[0, 1], [1, 0]]))


@given(skew())
def test_pfaffian_squared_is_det(rows):
    m = Matrix(rows)
    assert pfaffian(m) ** 2 == det(m)


def test_pfaffian_4x4_formula():
    # Pf = a12 a34 - a13 a24 + a14 a23
    a12, a13, a14, a23, a24, a34 = 2, -1, 3, 5, 7, -2
    m = Matrix([[0, a12, a13, a14], [-a12, 0, a23, a24], [-a13, -a23, 0, a34], [-a14, -a24, -a34, 0]])
    assert pfaffian(m) == a12 * a34 - a13 * a24 + a14 * a23


# -- rank / kernel / image / solve ---------------------------------------------


def test_kernel_rank_image_examples():
    k = kernel_basis(Matrix([[1, 1]]))
    assert k.ncols == 1 and (Matrix([[1, 1]]) @ k).is_zero()
    assert k[0, 0] == -k[1, 0]
    assert rank(Matrix.identity(5)) == 5
    im = image_basis(Matrix([[1, 2], [2, 4]]))
    assert im.shape == (2, 1) and im.col(0) == (1, 2)


@given(rect())
def test_rank_nullity(rows):
    m = Matrix(rows)
    k = kernel_basis(m)
    assert rank(m) + k.ncols == m.ncols
    assert (m @ k).is_zero()
    assert rank(m) == to_sympy(rows).rank()


@given(rect(), st.lists(small, min_size=5, max_size=5))
def test_solve_returns_preimage(rows, xs):
    m = Matrix(rows)
    x = Matrix([[v] for v in xs[: m.ncols]])
    rhs = m @ x
    y = solve(m, rhs)
    assert (m @ y).equals(rhs)


def test_solve_inconsistent():
    with pytest.raises(InconsistentSystemError):
        solve(Matrix([[1, 1], [2, 2]]), Matrix([[1], [0]]))


# -- change_base_det -----------------------------------------------------------


def test_change_base_det_examples():
    old = Matrix([[1]])
    assert change_base_det(Matrix([[2]]), old) == 2
    assert change_base_det(old, old) == 1
    assert change_base_det(Matrix([[1, 1], [1, -1]]), Matrix.identity(2)) == -2
    with pytest.raises(BasisError):
        change_base_det(Matrix.identity(2), Matrix([[1, 1], [1, 1]]))


@given(st.integers(1, 4).flatmap(lambda n: st.tuples(int_matrix(n, n), int_matrix(n, n))))
def test_change_base_det_solves_system(pair):
    new, old = Matrix(pair[0]), Matrix(pair[1])
    if det(old) == 0 or det(new) == 0:
        return
    t = solve(old, new)
    assert change_base_det(new, old) == det(t)


# -- fields ---------------------------------------------------------------------


def test_rationals_lowest_terms():
    x = QQ(Fraction(6, -4))
    assert (x.numerator, x.denominator) == (-3, 2)


@given(small, small, small, small)
def test_quadratic_arithmetic_matches_sympy(a, b, c, d):
    F = QuadraticField(2)
    r2 = sp.sqrt(2)
    x, y = QuadElement(a, b, 2), QuadElement(c, d, 2)
    for ours, theirs in [(x + y, (a + b * r2) + (c + d * r2)), (x * y, (a + b * r2) * (c + d * r2))]:
        assert sp.simplify(sp.Rational(str(ours.a)) + sp.Rational(str(ours.b)) * r2 - theirs) == 0
    if y != 0:
        q = x / y
        assert sp.simplify(sp.Rational(str(q.a)) + sp.Rational(str(q.b)) * r2 - (a + b * r2) / (c + d * r2)) == 0
    assert F.parse(F.to_json(x)) == x


def test_quadratic_sign_and_abs():
    s = QuadraticField(2).sqrt_d()
    assert (s - Fraction(141, 100)).sign() == 1
    assert (s - Fraction(142, 100)).sign() == -1
    assert abs(1 - s) == s - 1


def test_quadratic_field_mismatch():
    with pytest.raises(FieldError):
        QuadElement(1, 1, 2) + QuadElement(1, 1, 3)


def test_real_field_tolerance():
    F = RealField(1e-9)
    assert F.eq(1.0, 1.0 + 1e-12)
    assert not F.eq(1.0, 1.0 + 1e-6)
    assert F.eq(1e6, 1e6 * (1 + 1e-12))


def test_field_names():
    assert field_from_name("rational") is QQ
    assert field_from_name("quad:2") == QuadraticField(2)
    assert field_from_name("float", tol=1e-7).tol == 1e-7
    with pytest.raises(FieldError):
        field_from_name("complex")


@pytest.mark.parametrize("field", [QQ, QuadraticField(2), RealField()])
def test_matrix_json_roundtrip(field):
    s = QuadraticField(2).sqrt_d() if field == QuadraticField(2) else field(Fraction(1, 3))
    m = Matrix([[field(Fraction(1, 2)), s], [field(-3), field(0)]], field)
    back = matrix_from_json(matrix_to_json(m), field)
    assert back.equals(m)


def test_inverse_roundtrip():
    m = Matrix([[2, 1], [7, 4]])
    assert (m @ inverse(m)).equals(Matrix.identity(2))
    with pytest.raises(BasisError):
        inverse(Matrix([[1, 2], [2, 4]]))
