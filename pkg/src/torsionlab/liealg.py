"""The split Lie algebras sp(2n), so(n,n) and so(n,n+1).

Bases follow the row order of the standard lists (one family of elementary
combinations ``E_ij`` per row, indices in lexicographic order within a row).
Invariant forms:

* ``sp``: ``J = [[0, I], [-I, 0]]``
* ``so_nn``: ``J = [[0, I], [I, 0]]``
* ``so_nn1``: ``J = (1) + [[0, I], [I, 0]]`` with the first index distinguished.

Everything is exact over the matrix field except :func:`diagonalize_loxodromic`,
which goes through numpy.
"""

from __future__ import annotations

import functools
import random
from dataclasses import dataclass
from math import comb

import numpy as np

from .errors import DomainError, GroupMembershipError
from .fieldlin import QQ, Field, Matrix, RealField, block, block_diag, det, inverse, pivot_columns

FAMILIES = ("sp", "so_nn", "so_nn1")
_ALIASES = {
    "sp": "sp", "sp(2n)": "sp", "sp2n": "sp",
    "so_nn": "so_nn", "so(n,n)": "so_nn",
    "so_nn1": "so_nn1", "so(n,n+1)": "so_nn1",
}


def canonical_family(name: str) -> str:
    try:
        return _ALIASES[name.strip().lower().replace(" ", "")]
    except KeyError:
        raise DomainError(f"unknown Lie algebra family {name!r}; expected one of {FAMILIES}") from None


def algebra_dim(family: str, n: int) -> int:
    family = canonical_family(family)
    return n * (2 * n - 1) if family == "so_nn" else n * (2 * n + 1)


def killing_constant(family: str, n: int) -> int:
    """``c`` with ``B(X, Y) = c * trace(XY)``."""
    family = canonical_family(family)
    return {"sp": 2 * n + 2, "so_nn": 2 * n - 2, "so_nn1": 2 * n - 1}[family]


def invariant_form(family: str, n: int, field: Field = QQ) -> Matrix:
    family = canonical_family(family)
    z = Matrix.zeros(n, n, field)
    i = Matrix.identity(n, field)
    if family == "sp":
        return block([[z, i], [-i, z]])
    hyp = block([[z, i], [i, z]])
    if family == "so_nn":
        return hyp
    return block_diag(Matrix.identity(1, field), hyp)


def _elem(m: int, entries, field: Field) -> Matrix:
    """Matrix with the given ``{(row, col): value}`` entries, 1-based."""
    rows = [[field.zero] * m for _ in range(m)]
    for (r, c), v in entries:
        rows[r - 1][c - 1] = rows[r - 1][c - 1] + field(v)
    return Matrix(rows, field, ncols=m)


def _basis_entries(family: str, n: int) -> list:
    out = []
    pairs_ne = [(i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i != j]
    pairs_lt = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    if family == "sp":
        out += [[((i, i), 1), ((n + i, n + i), -1)] for i in range(1, n + 1)]
        out += [[((i, j), 1), ((n + j, n + i), -1)] for i, j in pairs_ne]
        out += [[((i, n + i), 1)] for i in range(1, n + 1)]
        out += [[((n + i, i), 1)] for i in range(1, n + 1)]
        out += [[((i, n + j), 1), ((j, n + i), 1)] for i, j in pairs_lt]
        out += [[((n + i, j), 1), ((n + j, i), 1)] for i, j in pairs_lt]
    elif family == "so_nn":
        out += [[((i, j), 1), ((n + j, n + i), -1)] for i, j in pairs_ne]
        out += [[((i, i), 1), ((n + i, n + i), -1)] for i in range(1, n + 1)]
        out += [[((i, n + j), 1), ((j, n + i), -1)] for i, j in pairs_lt]
        out += [[((n + i, j), 1), ((n + j, i), -1)] for i, j in pairs_lt]
    else:
        out += [[((i, i), 1), ((n + i, n + i), -1)] for i in range(2, n + 2)]
        out += [[((1, n + i + 1), 1), ((i + 1, 1), -1)] for i in range(1, n + 1)]
        out += [[((1, i + 1), 1), ((n + i + 1, 1), -1)] for i in range(1, n + 1)]
        out += [[((i + 1, j + 1), 1), ((n + j + 1, n + i + 1), -1)] for i, j in pairs_ne]
        out += [[((i + 1, n + j + 1), 1), ((j + 1, n + i + 1), -1)] for i, j in pairs_lt]
        out += [[((i + n + 1, j + 1), 1), ((j + n + 1, i + 1), -1)] for i, j in pairs_lt]
    return out


@dataclass(frozen=True)
class LieAlgebraSpec:
    family: str
    n: int
    m: int
    basis: tuple
    form: Matrix
    killing_constant: int
    killing_gram: Matrix
    field: Field
    _coord_rows: tuple
    _coord_inv: Matrix

    @property
    def dim(self) -> int:
        return len(self.basis)

    def coordinates(self, x: Matrix) -> list:
        """Coordinates of ``x`` (assumed in the algebra) in the stored basis."""
        m = self.m
        vals = [x[r // m, r % m] for r in self._coord_rows]
        return list((self._coord_inv @ Matrix([[v] for v in vals], self.field, ncols=1)).col(0))

    def from_coordinates(self, coords) -> Matrix:
        out = Matrix.zeros(self.m, self.m, self.field)
        for c, b in zip(coords, self.basis):
            if not self.field.is_zero(c):
                out = out + b * c
        return out

    def contains(self, x: Matrix) -> bool:
        return (x.T @ self.form + self.form @ x).equals(Matrix.zeros(self.m, self.m, self.field))


def _validate_range(family: str, n: int) -> None:
    if not isinstance(n, int) or isinstance(n, bool):
        raise DomainError("n must be an integer")
    low = 3 if family == "so_nn" else 2
    if n < low:
        raise DomainError(f"{family} needs n >= {low}, got {n}")


@functools.lru_cache(maxsize=None)
def build_basis(family: str, n: int, field: Field = QQ) -> LieAlgebraSpec:
    family = canonical_family(family)
    _validate_range(family, n)
    m = 2 * n + 1 if family == "so_nn1" else 2 * n
    basis = tuple(_elem(m, e, field) for e in _basis_entries(family, n))
    form = invariant_form(family, n, field)
    for k, b in enumerate(basis):
        if not (b.T @ form + form @ b).is_zero():
            raise AssertionError(f"basis element {k} of {family}({n}) is not in the algebra")
    if len(basis) != algebra_dim(family, n):
        raise AssertionError("basis count does not match the algebra dimension")
    # rows of the flattened basis that carry an invertible minor
    flat = Matrix([[b[r // m, r % m] for r in range(m * m)] for b in basis], field, ncols=m * m)
    rows = tuple(pivot_columns(flat))
    if len(rows) != len(basis):
        raise AssertionError("basis is linearly dependent")
    coord_inv = inverse(flat.select_columns(rows).T)
    c = killing_constant(family, n)
    gram = Matrix([[field(c) * (bi @ bj).trace() for bj in basis] for bi in basis], field, ncols=len(basis))
    return LieAlgebraSpec(family, n, m, basis, form, c, gram, field, rows, coord_inv)


def bracket_lie(x: Matrix, y: Matrix) -> Matrix:
    return x @ y - y @ x


def killing_form(spec: LieAlgebraSpec, x: Matrix, y: Matrix):
    return spec.field(spec.killing_constant) * (x @ y).trace()


def killing_gram(spec: LieAlgebraSpec) -> Matrix:
    return spec.killing_gram


def ad_matrix(spec: LieAlgebraSpec, x: Matrix) -> Matrix:
    """Matrix of ``ad_x`` in the stored basis."""
    cols = [spec.coordinates(bracket_lie(x, b)) for b in spec.basis]
    return Matrix.from_columns(cols, spec.field, nrows=spec.dim)


def killing_oracle(spec: LieAlgebraSpec, x: Matrix, y: Matrix):
    """``trace(ad_x o ad_y)``, computed by brute force."""
    return (ad_matrix(spec, x) @ ad_matrix(spec, y)).trace()


def is_group_element(spec: LieAlgebraSpec, g: Matrix) -> bool:
    if g.shape != (spec.m, spec.m):
        return False
    return (g.T @ spec.form @ g).equals(spec.form)


def group_inverse(spec: LieAlgebraSpec, g: Matrix) -> Matrix:
    """``J^-1 g^T J``, the inverse of a form-preserving ``g``."""
    return inverse(spec.form) @ g.T @ spec.form


def ad_action(spec: LieAlgebraSpec, g: Matrix, check: bool = True) -> Matrix:
    """Matrix of ``X -> g X g^-1`` in the stored basis."""
    if check and not is_group_element(spec, g):
        raise GroupMembershipError(f"matrix does not preserve the {spec.family} form")
    gi = group_inverse(spec, g)
    cols = [spec.coordinates(g @ b @ gi) for b in spec.basis]
    return Matrix.from_columns(cols, spec.field, nrows=spec.dim)


def cayley(x: Matrix) -> Matrix:
    """``(I - X)^-1 (I + X)``; maps the algebra into the group."""
    i = Matrix.identity(x.nrows, x.field)
    return inverse(i - x) @ (i + x)


def random_algebra_element(spec: LieAlgebraSpec, rng: random.Random, k: int = 2) -> Matrix:
    return spec.from_coordinates([spec.field(rng.randint(-k, k)) for _ in range(spec.dim)])


def random_group_element(spec: LieAlgebraSpec, rng: random.Random, k: int = 2) -> Matrix:
    """Cayley image of a random small algebra element (exact)."""
    while True:
        x = random_algebra_element(spec, rng, k) * spec.field(QQ(1) / rng.randint(1, 3))
        i = Matrix.identity(spec.m, spec.field)
        if not spec.field.is_zero(det(i - x)):
            return cayley(x)


def diagonal_element(spec: LieAlgebraSpec, lambdas) -> Matrix:
    """``Diag(l_1..l_n, 1/l_1..1/l_n)``, with a leading 1 for so(n,n+1)."""
    f = spec.field
    ls = [f(x) for x in lambdas]
    if len(ls) != spec.n:
        raise DomainError(f"need {spec.n} eigenvalues")
    entries = ls + [f.one / x for x in ls]
    if spec.family == "so_nn1":
        entries = [f.one] + entries
    return Matrix.diag(entries, f)


def random_loxodromic(spec: LieAlgebraSpec, rng: random.Random) -> Matrix:
    """``Q D Q^-1`` with rational ``D`` having real simple eigenvalues."""
    f = spec.field
    while True:
        ls = [QQ(rng.choice([-1, 1]) * rng.randint(2, 9)) / rng.randint(1, 3) for _ in range(spec.n)]
        vals = ls + [1 / x for x in ls] + ([QQ(1)] if spec.family == "so_nn1" else [])
        if len(set(vals)) == len(vals) and all(abs(x) != 1 for x in ls):
            break
    q = random_group_element(spec, rng)
    return q @ diagonal_element(spec, [f(x) for x in ls]) @ group_inverse(spec, q)


# ---------------------------------------------------------------------------
# Loxodromic diagonalisation (floating point)


@dataclass(frozen=True)
class LoxodromicForm:
    q: Matrix
    d: Matrix
    lambdas: tuple


def diagonalize_loxodromic(g: Matrix, family: str, n: int, tol: float = 1e-9) -> LoxodromicForm | None:
    """``Q g Q^-1 = D`` with ``D`` in the standard ordering, or ``None``.

    ``None`` signals complex or repeated eigenvalues. ``Q`` preserves the
    family's form; pairs ``(l, 1/l)`` are ordered by where the eigenvector of
    the larger member is concentrated, so a diagonal input yields ``Q = I``.
    """
    family = canonical_family(family)
    a = np.array(g.to_float_list(), dtype=float)
    m = a.shape[0]
    vals, vecs = np.linalg.eig(a)
    scale = max(1.0, float(np.max(np.abs(vals))))
    if np.any(np.abs(vals.imag) > tol * scale):
        return None
    vals, vecs = vals.real, vecs.real
    if m > 1 and np.min(np.abs(vals[:, None] - vals[None, :]) + np.eye(m) * 1e300) <= tol * scale:
        return None
    J = np.array(invariant_form(family, n, RealField(tol)).to_float_list(), dtype=float)
    used = set()
    middle = None
    pairs = []
    for k in range(m):
        if k in used:
            continue
        partner = min((j for j in range(m) if j != k and j not in used),
                      key=lambda j: abs(vals[k] * vals[j] - 1), default=None)
        if partner is not None and abs(vals[k] * vals[partner] - 1) <= 1e-6 * scale:
            big, small = (k, partner) if abs(vals[k]) > abs(vals[partner]) else (partner, k)
            pairs.append((big, small))
            used |= {k, partner}
        elif family == "so_nn1" and middle is None and abs(abs(vals[k]) - 1) <= 1e-6:
            middle = k
            used.add(k)
        else:
            return None
    pairs.sort(key=lambda p: int(np.argmax(np.abs(vecs[:, p[0]]))))
    cols, diag = [], []
    if family == "so_nn1":
        u = vecs[:, middle]
        nu = float(u @ J @ u)
        if nu <= 0:
            return None
        cols.append(u / np.sqrt(nu))
        diag.append(vals[middle])
    big_cols, small_cols = [], []
    for b, s in pairs:
        v, w = vecs[:, b], vecs[:, s]
        # normalise so that the pairing of v with w is 1 and v has unit size
        v = v / np.linalg.norm(v)
        c = float(v @ J @ w)
        big_cols.append(v)
        small_cols.append(w / c)
    cols += big_cols + small_cols
    diag += [vals[b] for b, _ in pairs] + [vals[s] for _, s in pairs]
    V = np.column_stack(cols)
    Q = np.linalg.inv(V)
    F = RealField(tol)
    return LoxodromicForm(Matrix(Q.tolist(), F), Matrix.diag(diag, F), tuple(float(vals[b]) for b, _ in pairs))


# ---------------------------------------------------------------------------
# Principal SL2 embedding


def symmetric_power(a: Matrix, k: int) -> Matrix:
    """Action of ``a`` on degree-``k`` forms in ``x^(k-i) y^i``, ``i = 0..k``."""
    f = a.field
    al, be = a[0, 0], a[0, 1]
    ga, de = a[1, 0], a[1, 1]

    def poly_pow(p, e):
        out = [f.one]
        for _ in range(e):
            nxt = [f.zero] * (len(out) + 1)
            for i, c in enumerate(out):
                nxt[i] = nxt[i] + c * p[0]
                nxt[i + 1] = nxt[i + 1] + c * p[1]
            out = nxt
        return out

    cols = []
    for i in range(k + 1):
        # x -> al x + ga y, y -> be x + de y; coefficients indexed by power of y
        px = poly_pow((al, ga), k - i)
        py = poly_pow((be, de), i)
        col = [f.zero] * (k + 1)
        for s, u in enumerate(px):
            for t, v in enumerate(py):
                col[s + t] = col[s + t] + u * v
        cols.append(col)
    return Matrix.from_columns(cols, f, nrows=k + 1)


def _sym_form(k: int, field: Field) -> Matrix:
    """Invariant form on ``Sym^k`` induced by ``x ^ y``."""
    rows = [[field.zero] * (k + 1) for _ in range(k + 1)]
    for i in range(k + 1):
        rows[i][k - i] = field(QQ((-1) ** i) / comb(k, i))
    return Matrix(rows, field, ncols=k + 1)


@functools.lru_cache(maxsize=None)
def principal_frame(family: str, n: int, field: Field = QQ) -> Matrix:
    """Columns: the adapted basis of the principal module in standard order.

    ``sp``: ``Sym^(2n-1)``; ``so_nn1``: ``Sym^(2n)``; ``so_nn``:
    ``Sym^(2n-2)`` plus a trivial line. The frame ``T`` satisfies
    ``T^T M T = J`` for a fixed multiple ``M`` of the induced form.
    """
    family = canonical_family(family)
    _validate_range(family, n)
    f = field
    if family == "sp":
        k = 2 * n - 1
        size = k + 1
    elif family == "so_nn1":
        k = 2 * n
        size = k + 1
    else:
        k = 2 * n - 2
        size = k + 2

    def unit(i, c=1):
        v = [f.zero] * size
        v[i] = f(c)
        return v

    if family == "sp":
        es = [unit(i) for i in range(n)]
        fs = [unit(k - i, (-1) ** i * comb(k, i)) for i in range(n)]
        cols = es + fs
    elif family == "so_nn1":
        s = QQ((-1) ** n * comb(2 * n, n))
        mid = unit(n)
        es = [unit(i) for i in range(n)]
        fs = [unit(k - i, QQ((-1) ** i * comb(k, i)) / s) for i in range(n)]
        cols = [mid] + es + fs
    else:
        a = QQ((-1) ** (n - 1)) / comb(k, n - 1)  # form value on the middle monomial
        es = [unit(i) for i in range(n - 1)]
        fs = [unit(k - i, (-1) ** i * comb(k, i)) for i in range(n - 1)]
        plus = unit(n - 1)
        plus[k + 1] = f.one
        minus = unit(n - 1, 1 / (2 * a))
        minus[k + 1] = f(-1 / (2 * a))
        cols = es + [plus] + fs + [minus]
    return Matrix.from_columns(cols, f, nrows=size)


def principal_module_form(family: str, n: int, field: Field = QQ) -> Matrix:
    """The form ``M`` on the principal module that the frame normalises."""
    family = canonical_family(family)
    if family == "sp":
        return _sym_form(2 * n - 1, field)
    if family == "so_nn1":
        return _sym_form(2 * n, field) * field(QQ((-1) ** n * comb(2 * n, n)))
    k = 2 * n - 2
    a = QQ((-1) ** (n - 1)) / comb(k, n - 1)
    return block_diag(_sym_form(k, field), Matrix([[field(-a)]], field), field=field)


def principal_sl2_embed(a: Matrix, family: str = "sp", n: int = 2) -> Matrix:
    """Image of ``a`` in ``Sp(2n)`` (or the split orthogonal groups) via the principal ``SL2``."""
    family = canonical_family(family)
    if a.shape != (2, 2) or not a.field.eq(det(a), a.field.one):
        raise DomainError("principal embedding needs a 2x2 matrix of determinant 1")
    t = principal_frame(family, n, a.field)
    if family == "sp":
        rho = symmetric_power(a, 2 * n - 1)
    elif family == "so_nn1":
        rho = symmetric_power(a, 2 * n)
    else:
        rho = block_diag(symmetric_power(a, 2 * n - 2), Matrix.identity(1, a.field), field=a.field)
    return inverse(t) @ rho @ t
