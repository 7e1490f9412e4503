"""Scalar fields and a small dense linear-algebra kernel.

Three scalar fields are supported:

* ``QQ``: exact rationals, backed by :class:`fractions.Fraction`.
* ``QuadraticField(d)``: exact elements ``a + b*sqrt(d)`` with rational
  ``a, b`` (stored as gmpy2 ``mpq`` for speed) and a fixed square-free
  ``d > 1``.
* ``RealField(tol)``: Python floats compared with a relative tolerance.

Matrices are immutable and carry the field they live over. All elimination
is plain Gaussian elimination with deterministic pivoting: for exact fields
the first nonzero entry scanning top-to-bottom, for floats the entry of
largest modulus.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence

from gmpy2 import mpq

from .errors import BasisError, DimensionError, FieldError, FormError, InconsistentSystemError


# ---------------------------------------------------------------------------
# Scalars


def _is_squarefree(d: int) -> bool:
    if d < 2:
        return False
    k = 2
    while k * k <= d:
        if d % (k * k) == 0:
            return False
        k += 1
    return True


_MPQ = type(mpq(0))


def _frac(x) -> Fraction:
    return Fraction(int(x.numerator), int(x.denominator))


class QuadElement:
    """``a + b*sqrt(d)`` with rational ``a``, ``b``."""

    __slots__ = ("a", "b", "d")

    def __init__(self, a, b=0, d=2):
        self.a = a if type(a) is _MPQ else mpq(a)
        self.b = b if type(b) is _MPQ else mpq(b)
        self.d = d

    def _lift(self, other):
        if isinstance(other, QuadElement):
            if other.d != self.d:
                raise FieldError(f"mixing Q(sqrt {self.d}) with Q(sqrt {other.d})")
            return other
        if isinstance(other, (int, Fraction, _MPQ)):
            return QuadElement(other, 0, self.d)
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return QuadElement(self.a + o.a, self.b + o.b, self.d)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return QuadElement(self.a - o.a, self.b - o.b, self.d)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return o - self

    def __neg__(self):
        return QuadElement(-self.a, -self.b, self.d)

    def __pos__(self):
        return self

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        if o.b == 0:
            return QuadElement(self.a * o.a, self.b * o.a, self.d)
        if self.b == 0:
            return QuadElement(self.a * o.a, self.a * o.b, self.d)
        return QuadElement(self.a * o.a + self.d * self.b * o.b,
                           self.a * o.b + self.b * o.a, self.d)

    __rmul__ = __mul__

    def norm(self) -> Fraction:
        return _frac(self.a * self.a - self.d * self.b * self.b)

    @property
    def rational_parts(self) -> tuple:
        return _frac(self.a), _frac(self.b)

    def conjugate(self):
        return QuadElement(self.a, -self.b, self.d)

    def inverse(self):
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero in quadratic field")
        return QuadElement(self.a / n, -self.b / n, self.d)

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        if o.b == 0:
            return QuadElement(self.a / o.a, self.b / o.a, self.d)
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = QuadElement(1, 0, self.d)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, QuadElement):
            return self.a == other.a and self.b == other.b and self.d == other.d
        if isinstance(other, (int, Fraction, _MPQ)):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def sign(self) -> int:
        # sign of a + b*sqrt(d), decided exactly
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sb == 0:
            return sa
        if sa == 0 or sa == sb:
            return sb
        # opposite signs: compare a^2 with d*b^2
        lhs = self.a * self.a
        rhs = self.d * self.b * self.b
        if lhs == rhs:
            return 0
        return sa if lhs > rhs else sb

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def __float__(self):
        return float(self.a) + float(self.b) * math.sqrt(self.d)

    def __repr__(self):
        return f"QuadElement({self.a}, {self.b}, d={self.d})"

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        sep = "+" if self.b > 0 else "-"
        b = abs(self.b)
        bstr = "" if b == 1 else str(b)
        astr = "" if self.a == 0 and sep == "+" else str(self.a)
        if self.a == 0 and sep == "-":
            return f"-{bstr}√{self.d}"
        if self.a == 0:
            return f"{bstr}√{self.d}"
        return f"{astr}{sep}{bstr}√{self.d}"


_QUAD_RE = re.compile(
    r"^\s*(?P<a>[+-]?\d+(?:/\d+)?)?\s*(?:(?P<sign>[+-])?\s*(?P<b>\d+(?:/\d+)?)?\s*(?:√|sqrt)\s*\(?(?P<d>\d+)\)?)?\s*$"
)


class Field:
    """Base class; concrete fields override the hooks below."""

    name = "abstract"
    exact = True

    def __call__(self, x):
        raise NotImplementedError

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def is_zero(self, x, scale=1.0) -> bool:
        return x == 0

    def eq(self, x, y) -> bool:
        return x == y

    def to_json(self, x):
        raise NotImplementedError

    def from_json(self, v):
        return self(v)

    def __repr__(self):
        return f"<field {self.name}>"

    def __eq__(self, other):
        return isinstance(other, Field) and self.name == other.name

    def __hash__(self):
        return hash(self.name)


class RationalField(Field):
    name = "rational"

    def __call__(self, x):
        if isinstance(x, Fraction):
            return x
        if isinstance(x, (int, str)):
            return Fraction(x)
        if isinstance(x, QuadElement):
            if x.b != 0:
                raise FieldError(f"{x} is not rational")
            return _frac(x.a)
        if isinstance(x, Rational):
            return Fraction(x.numerator, x.denominator)
        if isinstance(x, float):
            raise FieldError("refusing to coerce a float into the rationals; pass a string or Fraction")
        raise FieldError(f"cannot coerce {x!r} into QQ")

    def to_json(self, x):
        return str(x)


class QuadraticField(Field):
    def __init__(self, d: int):
        if not _is_squarefree(d):
            raise FieldError(f"d={d} must be a square-free integer > 1")
        self.d = d
        self.name = f"quad:{d}"

    def __call__(self, x):
        if isinstance(x, QuadElement):
            if x.d != self.d:
                raise FieldError(f"{x} lives in Q(sqrt {x.d}), not Q(sqrt {self.d})")
            return x
        if isinstance(x, (int, Fraction)):
            return QuadElement(x, 0, self.d)
        if isinstance(x, str):
            return self.parse(x)
        if isinstance(x, Rational):
            return QuadElement(Fraction(x.numerator, x.denominator), 0, self.d)
        raise FieldError(f"cannot coerce {x!r} into Q(sqrt {self.d})")

    def sqrt_d(self) -> QuadElement:
        return QuadElement(0, 1, self.d)

    def parse(self, s: str) -> QuadElement:
        m = _QUAD_RE.match(s)
        if not m or (m.group("a") is None and m.group("d") is None):
            raise FieldError(f"cannot parse {s!r} as an element of Q(sqrt {self.d})")
        a = Fraction(m.group("a")) if m.group("a") else Fraction(0)
        b = Fraction(0)
        if m.group("d") is not None:
            if int(m.group("d")) != self.d:
                raise FieldError(f"{s!r} uses sqrt({m.group('d')}), expected sqrt({self.d})")
            b = Fraction(m.group("b")) if m.group("b") else Fraction(1)
            if m.group("sign") == "-":
                b = -b
            elif m.group("sign") is None and m.group("a") is not None:
                # "3√2" parses the coefficient into group a
                b, a = a, Fraction(0)
        return QuadElement(a, b, self.d)

    def to_json(self, x):
        if x.b == 0:
            return str(x.a)
        sign = "+" if x.b > 0 else "-"
        return f"{x.a}{sign}{abs(x.b)}√{self.d}"


class RealField(Field):
    """Approximate reals. ``x == y`` iff ``|x-y| <= tol*max(1,|x|,|y|)``."""

    exact = False

    def __init__(self, tol: float = 1e-9):
        if not tol > 0:
            raise FieldError("tolerance must be positive")
        self.tol = tol
        self.name = "float"

    def __call__(self, x):
        if isinstance(x, str):
            x = Fraction(x)
        return float(x)

    def is_zero(self, x, scale=1.0) -> bool:
        return abs(x) <= self.tol * max(1.0, scale)

    def eq(self, x, y) -> bool:
        return abs(x - y) <= self.tol * max(1.0, abs(x), abs(y))

    def to_json(self, x):
        return float(x)

    def __eq__(self, other):
        return isinstance(other, RealField)

    def __hash__(self):
        return hash("float")


QQ = RationalField()


def field_from_name(name: str, tol: float = 1e-9) -> Field:
    """``"rational"``, ``"quad:d"`` or ``"float"``."""
    if name in ("rational", "QQ"):
        return QQ
    if name.startswith("quad:"):
        return QuadraticField(int(name.split(":", 1)[1]))
    if name == "float":
        return RealField(tol)
    raise FieldError(f"unknown field {name!r}")


# ---------------------------------------------------------------------------
# Matrices


class Matrix:
    """Immutable dense matrix over a :class:`Field`."""

    __slots__ = ("field", "nrows", "ncols", "_data")

    def __init__(self, rows: Iterable[Iterable], field: Field = QQ, ncols: int | None = None):
        data = tuple(tuple(field(x) for x in r) for r in rows)
        if ncols is None:
            ncols = len(data[0]) if data else 0
        if any(len(r) != ncols for r in data):
            raise DimensionError("ragged matrix rows")
        self.field = field
        self.nrows = len(data)
        self.ncols = ncols
        self._data = data

    @classmethod
    def _raw(cls, field, nrows, ncols, data):
        m = object.__new__(cls)
        m.field = field
        m.nrows = nrows
        m.ncols = ncols
        m._data = data
        return m

    @classmethod
    def zeros(cls, nrows: int, ncols: int, field: Field = QQ) -> "Matrix":
        z = field.zero
        return cls._raw(field, nrows, ncols, tuple((z,) * ncols for _ in range(nrows)))

    @classmethod
    def identity(cls, n: int, field: Field = QQ) -> "Matrix":
        z, o = field.zero, field.one
        return cls._raw(field, n, n, tuple(tuple(o if i == j else z for j in range(n)) for i in range(n)))

    @classmethod
    def diag(cls, entries: Sequence, field: Field = QQ) -> "Matrix":
        n = len(entries)
        z = field.zero
        vals = [field(x) for x in entries]
        return cls._raw(field, n, n, tuple(tuple(vals[i] if i == j else z for j in range(n)) for i in range(n)))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], field: Field = QQ, nrows: int | None = None) -> "Matrix":
        if not columns:
            return cls.zeros(nrows or 0, 0, field)
        return cls([list(r) for r in zip(*columns)], field, ncols=len(columns))

    # -- basic protocol ---------------------------------------------------

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __getitem__(self, idx):
        i, j = idx
        return self._data[i][j]

    def row(self, i: int) -> tuple:
        return self._data[i]

    def col(self, j: int) -> tuple:
        return tuple(r[j] for r in self._data)

    def rows(self) -> list:
        return [list(r) for r in self._data]

    def columns(self) -> list:
        return [list(c) for c in zip(*self._data)] if self.nrows else [[] for _ in range(self.ncols)]

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self._data == other._data

    __hash__ = None

    def equals(self, other: "Matrix") -> bool:
        """Entrywise equality honouring the float tolerance."""
        if self.shape != other.shape:
            return False
        if self.field.exact and other.field.exact:
            return self._data == other._data
        f = self.field if not self.field.exact else other.field
        return all(f.eq(float(x), float(y)) for r, s in zip(self._data, other._data) for x, y in zip(r, s))

    def is_zero(self) -> bool:
        f = self.field
        return all(f.is_zero(x) for r in self._data for x in r)

    def max_abs(self) -> float:
        return max((abs(float(x)) for r in self._data for x in r), default=0.0)

    def __repr__(self):
        return f"Matrix({self.nrows}x{self.ncols}, {self.field.name})"

    def __str__(self):
        if not self.nrows or not self.ncols:
            return f"[{self.nrows}x{self.ncols} empty]"
        cells = [[str(x) for x in r] for r in self._data]
        w = max(len(c) for r in cells for c in r)
        return "\n".join("[" + " ".join(c.rjust(w) for c in r) + "]" for r in cells)

    # -- arithmetic -------------------------------------------------------

    def _check_same(self, other):
        if self.shape != other.shape:
            raise DimensionError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_same(other)
        return Matrix._raw(self.field, self.nrows, self.ncols,
                           tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self._data, other._data)))

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check_same(other)
        return Matrix._raw(self.field, self.nrows, self.ncols,
                           tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self._data, other._data)))

    def __neg__(self) -> "Matrix":
        return Matrix._raw(self.field, self.nrows, self.ncols, tuple(tuple(-a for a in r) for r in self._data))

    def scale(self, c) -> "Matrix":
        c = self.field(c)
        return Matrix._raw(self.field, self.nrows, self.ncols, tuple(tuple(c * a for a in r) for r in self._data))

    def __mul__(self, c):
        if isinstance(c, Matrix):
            return self @ c
        return self.scale(c)

    __rmul__ = scale

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.nrows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        z = self.field.zero
        cols = list(zip(*other._data)) if other.nrows else [()] * other.ncols
        data = []
        for r in self._data:
            nz = [(k, a) for k, a in enumerate(r) if a]
            data.append(tuple(sum((a * c[k] for k, a in nz), z) for c in cols))
        return Matrix._raw(self.field, self.nrows, other.ncols, tuple(data))

    @property
    def T(self) -> "Matrix":
        if not self.nrows:
            return Matrix.zeros(self.ncols, 0, self.field)
        return Matrix._raw(self.field, self.ncols, self.nrows, tuple(zip(*self._data)))

    def trace(self):
        if not self.is_square():
            raise DimensionError("trace of a non-square matrix")
        return sum((self._data[i][i] for i in range(self.nrows)), self.field.zero)

    def __pow__(self, k: int) -> "Matrix":
        if not self.is_square():
            raise DimensionError("power of a non-square matrix")
        if k < 0:
            return inverse(self) ** (-k)
        result = Matrix.identity(self.nrows, self.field)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Matrix":
        return Matrix._raw(self.field, len(rows), len(cols),
                           tuple(tuple(self._data[i][j] for j in cols) for i in rows))

    def select_columns(self, cols: Sequence[int]) -> "Matrix":
        return self.submatrix(range(self.nrows), cols)

    def with_field(self, field: Field) -> "Matrix":
        if field == self.field:
            return self
        if not field.exact:
            conv = float
        else:
            conv = field
        return Matrix._raw(field, self.nrows, self.ncols, tuple(tuple(field(conv(x)) for x in r) for r in self._data))

    def tolist(self) -> list:
        return [list(r) for r in self._data]

    def to_float_list(self) -> list:
        return [[float(x) for x in r] for r in self._data]


def hstack(*ms: Matrix) -> Matrix:
    ms = [m for m in ms]
    field = ms[0].field
    n = ms[0].nrows
    if any(m.nrows != n for m in ms):
        raise DimensionError("hstack: row counts differ")
    ncols = sum(m.ncols for m in ms)
    data = tuple(tuple(x for m in ms for x in m._data[i]) for i in range(n))
    return Matrix._raw(field, n, ncols, data)


def vstack(*ms: Matrix) -> Matrix:
    field = ms[0].field
    c = ms[0].ncols
    if any(m.ncols != c for m in ms):
        raise DimensionError("vstack: column counts differ")
    data = tuple(r for m in ms for r in m._data)
    return Matrix._raw(field, len(data), c, data)


def block_diag(*ms: Matrix, field: Field | None = None) -> Matrix:
    if field is None:
        field = ms[0].field if ms else QQ
    nrows = sum(m.nrows for m in ms)
    ncols = sum(m.ncols for m in ms)
    z = field.zero
    data = []
    off = 0
    for m in ms:
        for r in m._data:
            data.append((z,) * off + tuple(r) + (z,) * (ncols - off - m.ncols))
        off += m.ncols
    return Matrix._raw(field, nrows, ncols, tuple(data))


def block(rows_of_blocks: Sequence[Sequence[Matrix]]) -> Matrix:
    return vstack(*[hstack(*r) for r in rows_of_blocks])


# ---------------------------------------------------------------------------
# Elimination


def _pivot_row(A, r, c, field, scale):
    if field.exact:
        for i in range(r, len(A)):
            if A[i][c]:
                return i
        return None
    best, best_val = None, 0.0
    for i in range(r, len(A)):
        v = abs(A[i][c])
        if v > best_val:
            best, best_val = i, v
    if best is None or field.is_zero(best_val, scale):
        return None
    return best


def _rref(m: Matrix, extra: Matrix | None = None, order: str = "forward"):
    """Gauss-Jordan on ``[m | extra]`` pivoting only in the columns of ``m``.

    ``order="reverse"`` scans the columns of ``m`` right-to-left; this gives
    a different, equally valid choice of image basis and preimages.
    """
    field = m.field
    A = [list(r) + (list(extra._data[i]) if extra is not None else []) for i, r in enumerate(m._data)]
    width = m.ncols + (extra.ncols if extra is not None else 0)
    scale = m.max_abs() if not field.exact else 1.0
    col_order = range(m.ncols) if order == "forward" else range(m.ncols - 1, -1, -1)
    pivots = []
    r = 0
    for c in col_order:
        if r == len(A):
            break
        p = _pivot_row(A, r, c, field, scale)
        if p is None:
            continue
        if p != r:
            A[r], A[p] = A[p], A[r]
        inv = field.one / A[r][c]
        pr = [x * inv for x in A[r]]
        A[r] = pr
        for i in range(len(A)):
            if i == r:
                continue
            f = A[i][c]
            if f:
                row = A[i]
                A[i] = [row[k] - f * pr[k] if pr[k] else row[k] for k in range(width)]
                if not field.exact:
                    A[i][c] = 0.0
        pivots.append(c)
        r += 1
    return A, pivots


def rank(m: Matrix) -> int:
    return len(_rref(m)[1])


def kernel_basis(m: Matrix, order: str = "forward") -> Matrix:
    """Columns spanning Ker(m); one column per free variable."""
    A, pivots = _rref(m, order=order)
    field = m.field
    pivset = set(pivots)
    free = [j for j in range(m.ncols) if j not in pivset]
    cols = []
    for f in free:
        v = [field.zero] * m.ncols
        v[f] = field.one
        for row, pc in enumerate(pivots):
            v[pc] = -A[row][f]
        cols.append(v)
    return Matrix.from_columns(cols, field, nrows=m.ncols)


def pivot_columns(m: Matrix, order: str = "forward") -> list:
    """Sorted indices of the pivot columns of ``m``."""
    return sorted(_rref(m, order=order)[1])


def image_basis(m: Matrix, order: str = "forward") -> Matrix:
    """Pivot columns of ``m`` (a subset of its columns) spanning Im(m)."""
    _, pivots = _rref(m, order=order)
    return m.select_columns(sorted(pivots))


def solve(m: Matrix, rhs: Matrix, order: str = "forward") -> Matrix:
    """One solution ``x`` of ``m @ x == rhs``; free variables are set to zero."""
    if rhs.nrows != m.nrows:
        raise DimensionError(f"solve: {m.shape} against rhs {rhs.shape}")
    field = m.field
    A, pivots = _rref(m, rhs, order=order)
    n = m.ncols
    rk = len(pivots)
    scale = max(m.max_abs(), rhs.max_abs()) if not field.exact else 1.0
    for i in range(rk, m.nrows):
        if any(not field.is_zero(x, scale) for x in A[i][n:]):
            raise InconsistentSystemError("right-hand side is not in the column space")
    x = [[field.zero] * rhs.ncols for _ in range(n)]
    for row, pc in enumerate(pivots):
        x[pc] = A[row][n:]
    return Matrix._raw(field, n, rhs.ncols, tuple(tuple(r) for r in x))


def det(m: Matrix):
    if not m.is_square():
        raise DimensionError(f"det of non-square {m.shape} matrix")
    field = m.field
    n = m.nrows
    if n == 0:
        return field.one
    A = [list(r) for r in m._data]
    result = field.one
    scale = 1.0
    if not field.exact:
        # equilibrate columns so the pivot tolerance is scale free
        norms = [max(abs(A[i][j]) for i in range(n)) for j in range(n)]
        if not all(norms):
            return field.zero
        A = [[x / norms[j] for j, x in enumerate(r)] for r in A]
        for v in norms:
            result = result * v
    for c in range(n):
        p = _pivot_row(A, c, c, field, scale)
        if p is None:
            return field.zero
        if p != c:
            A[c], A[p] = A[p], A[c]
            result = -result
        piv = A[c][c]
        result = result * piv
        inv = field.one / piv
        pr = A[c]
        for i in range(c + 1, n):
            f = A[i][c]
            if f:
                f = f * inv
                row = A[i]
                A[i] = [row[k] - f * pr[k] if k > c else row[k] for k in range(n)]
    return result


def inverse(m: Matrix) -> Matrix:
    if not m.is_square():
        raise DimensionError("inverse of a non-square matrix")
    A, pivots = _rref(m, Matrix.identity(m.nrows, m.field))
    if len(pivots) < m.nrows:
        raise BasisError("matrix is singular")
    n = m.ncols
    return Matrix._raw(m.field, n, n, tuple(tuple(A[i][n:]) for i in range(n)))


def is_skew(m: Matrix) -> bool:
    if not m.is_square():
        return False
    s = m + m.T
    if m.field.exact:
        return s.is_zero()
    scale = m.max_abs()
    return all(m.field.is_zero(x, scale) for r in s._data for x in r)


def pfaffian(m: Matrix):
    """Pfaffian by skew-symmetric congruence elimination."""
    if not m.is_square() or m.nrows % 2:
        raise FormError(f"pfaffian needs an even square matrix, got {m.shape}")
    if not is_skew(m):
        raise FormError("pfaffian of a non-skew matrix")
    field = m.field
    n = m.nrows
    A = [list(r) for r in m._data]
    scale = m.max_abs() if not field.exact else 1.0
    pf = field.one
    for k in range(0, n - 1, 2):
        # pivot search along row k
        if field.exact:
            p = next((j for j in range(k + 1, n) if A[k][j]), None)
        else:
            p = max(range(k + 1, n), key=lambda j: abs(A[k][j]))
            if field.is_zero(A[k][p], scale):
                p = None
        if p is None:
            return field.zero
        if p != k + 1:
            A[k + 1], A[p] = A[p], A[k + 1]
            for r in A:
                r[k + 1], r[p] = r[p], r[k + 1]
            pf = -pf
        piv = A[k][k + 1]
        pf = pf * piv
        inv = field.one / piv
        for i in range(k + 2, n):
            t = A[k][i] * inv
            if not t:
                continue
            # congruence: col_i -= t*col_{k+1}; row_i -= t*row_{k+1}
            for r in A:
                r[i] = r[i] - t * r[k + 1]
            rk1 = A[k + 1]
            A[i] = [a - t * b for a, b in zip(A[i], rk1)]
    return pf


def change_base_det(new_basis: Matrix, old_basis: Matrix):
    """``det(T)`` where ``old_basis @ T == new_basis`` (columns are vectors)."""
    if not (new_basis.is_square() and old_basis.is_square()) or new_basis.shape != old_basis.shape:
        raise DimensionError(f"change_base_det: shapes {new_basis.shape} and {old_basis.shape}")
    # det returns an exact zero when elimination finds no pivot
    d_old = det(old_basis)
    if d_old == 0:
        raise BasisError("old basis is singular")
    d_new = det(new_basis)
    if d_new == 0:
        raise BasisError("new basis is singular")
    return d_new / d_old


# ---------------------------------------------------------------------------
# JSON


def matrix_to_json(m: Matrix) -> dict:
    f = m.field
    return {"rows": m.nrows, "cols": m.ncols, "entries": [[f.to_json(x) for x in r] for r in m._data]}


def matrix_from_json(obj: dict, field: Field = QQ) -> Matrix:
    try:
        r, c, entries = obj["rows"], obj["cols"], obj["entries"]
    except (KeyError, TypeError) as exc:
        raise DimensionError(f"malformed matrix object: {obj!r}") from exc
    m = Matrix([[field.from_json(x) for x in row] for row in entries], field, ncols=c)
    if m.nrows != r:
        raise DimensionError(f"matrix declares {r} rows but has {m.nrows}")
    return m
