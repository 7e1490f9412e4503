"""Based chain complexes and Reidemeister torsion.

Conventions
-----------
A complex of length ``n`` is ``C_n -> ... -> C_1 -> C_0``; ``boundaries[p-1]``
is the matrix of ``d_p : C_p -> C_{p-1}`` in ambient coordinates and
``chain_bases[p]`` holds the basis ``c_p`` as columns.

For two bases ``e``, ``f`` of the same space, ``bracket(e, f)`` is the
determinant of the coordinate matrix of ``f`` with respect to ``e``. The
torsion is

    T = prod_p bracket(b_p + l_p(h_p) + s_p(b_{p-1}), c_p) ** ((-1)**(p+1))

so for ``0 -> Q --(x2)--> Q -> 0`` with standard bases, ``T = 2``. This is
the normalisation under which the symplectic-complex formula
(:mod:`torsionlab.sympcc`) and the surface formula
(:mod:`torsionlab.pairings`) hold as stated.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Sequence

from .errors import BasisError, ChainComplexError, CompatibilityError, ContractError, ExactnessError
from .fieldlin import (
    QQ,
    Field,
    Matrix,
    block_diag,
    change_base_det,
    det,
    hstack,
    image_basis,
    kernel_basis,
    matrix_from_json,
    matrix_to_json,
    pivot_columns,
    rank,
    solve,
)

SIGN_CONVENTION = (
    "T = prod_p [b_p | l_p(h_p) | s_p(b_(p-1)), c_p]^((-1)^(p+1)); "
    "[e, f] = det(coordinates of f in e); block order b, h, s"
)


def bracket(e: Matrix, f: Matrix):
    """Determinant of the coordinate matrix of basis ``f`` in basis ``e``."""
    return change_base_det(f, e)


@dataclass(frozen=True)
class ChainComplex:
    dims: tuple
    boundaries: tuple
    chain_bases: tuple
    field: Field = QQ

    def __post_init__(self):
        n = len(self.dims) - 1
        if n < 0:
            raise ChainComplexError("a chain complex needs at least C_0")
        if len(self.boundaries) != n:
            raise ChainComplexError(f"expected {n} boundary maps, got {len(self.boundaries)}")
        if len(self.chain_bases) != n + 1:
            raise ChainComplexError("one chain basis per degree is required")
        for p in range(1, n + 1):
            d = self.boundaries[p - 1]
            if d.shape != (self.dims[p - 1], self.dims[p]):
                raise ChainComplexError(
                    f"d_{p} has shape {d.shape}, expected {(self.dims[p - 1], self.dims[p])}", degree=p)
        for p, c in enumerate(self.chain_bases):
            if c.shape != (self.dims[p], self.dims[p]):
                raise ChainComplexError(f"chain basis c_{p} has shape {c.shape}", degree=p)
        for p in range(2, n + 1):
            lo, hi = self.boundaries[p - 2], self.boundaries[p - 1]
            if not _is_zero(lo @ hi, lo.max_abs() * hi.max_abs() * max(1, hi.nrows)):
                raise ChainComplexError(f"d_{p - 1} o d_{p} != 0", degree=p)

    @classmethod
    def build(cls, boundaries: Sequence[Matrix], dims: Sequence[int] | None = None,
              chain_bases: Sequence[Matrix | None] | None = None, field: Field | None = None) -> "ChainComplex":
        """Assemble a complex, inferring dims from the boundary shapes."""
        if field is None:
            field = boundaries[0].field if boundaries else QQ
        if dims is None:
            if not boundaries:
                raise ChainComplexError("dims are required when there are no boundaries")
            dims = [boundaries[0].nrows] + [d.ncols for d in boundaries]
        dims = tuple(int(x) for x in dims)
        if chain_bases is None:
            chain_bases = [None] * len(dims)
        cb = tuple(Matrix.identity(k, field) if c is None else c for k, c in zip(dims, chain_bases))
        return cls(dims, tuple(boundaries), cb, field)

    @property
    def length(self) -> int:
        return len(self.dims) - 1

    def dim(self, p: int) -> int:
        return self.dims[p] if 0 <= p <= self.length else 0

    def boundary(self, p: int) -> Matrix:
        """``d_p``; the zero map outside ``1..n``."""
        if 1 <= p <= self.length:
            return self.boundaries[p - 1]
        return Matrix.zeros(self.dim(p - 1), self.dim(p), self.field)

    def with_chain_bases(self, bases: Sequence[Matrix]) -> "ChainComplex":
        return ChainComplex(self.dims, self.boundaries, tuple(bases), self.field)

    def homology_dims(self) -> list:
        ranks = [rank(self.boundary(p)) for p in range(self.length + 2)]
        return [self.dims[p] - ranks[p] - ranks[p + 1] for p in range(self.length + 1)]

    def is_acyclic(self) -> bool:
        return all(h == 0 for h in self.homology_dims())


def _is_zero(m: Matrix, scale: float = 1.0) -> bool:
    if m.field.exact:
        return m.is_zero()
    return m.max_abs() <= m.field.tol * max(1.0, scale)


@dataclass(frozen=True)
class HomologyBasis:
    """Cycle representatives, one matrix of columns per degree."""

    bases: tuple

    def __getitem__(self, p: int) -> Matrix:
        return self.bases[p]

    def __len__(self):
        return len(self.bases)

    def dims(self) -> list:
        return [b.ncols for b in self.bases]

    @classmethod
    def zero(cls, c: ChainComplex) -> "HomologyBasis":
        return cls(tuple(Matrix.zeros(k, 0, c.field) for k in c.dims))


@dataclass(frozen=True)
class TorsionValue:
    value: object
    sign_convention: str = SIGN_CONVENTION
    notes: dict = dc_field(default_factory=dict, compare=False)

    def __abs__(self):
        return abs(self.value)

    def __float__(self):
        return float(self.value)


# ---------------------------------------------------------------------------


def homology_basis_default(c: ChainComplex, order: str = "forward") -> HomologyBasis:
    """Echelon-selected cycles completing a basis of B_p to one of Z_p."""
    out = []
    for p in range(c.length + 1):
        z = kernel_basis(c.boundary(p), order=order)
        b = image_basis(c.boundary(p + 1), order=order)
        if z.ncols == b.ncols:
            out.append(Matrix.zeros(c.dims[p], 0, c.field))
            continue
        # pivots of [B | Z]: all of B, then the representatives from Z
        pivots = pivot_columns(hstack(b, z))
        chosen = [j - b.ncols for j in pivots if j >= b.ncols]
        out.append(z.select_columns(chosen))
    return HomologyBasis(tuple(out))


def check_homology_basis(c: ChainComplex, h: HomologyBasis) -> None:
    if len(h) != c.length + 1:
        raise ContractError(f"homology basis has {len(h)} degrees, complex has {c.length + 1}")
    hdims = c.homology_dims()
    for p in range(c.length + 1):
        hp = h[p]
        if hp.nrows != c.dims[p] or hp.ncols != hdims[p]:
            raise ContractError(f"h_{p} has shape {hp.shape}, expected ({c.dims[p]}, {hdims[p]})")
        if hp.ncols and not _is_zero(c.boundary(p) @ hp):
            raise ContractError(f"h_{p} contains a non-cycle")
        if hp.ncols:
            b = image_basis(c.boundary(p + 1))
            if rank(hstack(b, hp)) != b.ncols + hp.ncols:
                raise ContractError(f"h_{p} is dependent modulo boundaries")


def assembled_bases(c: ChainComplex, h: HomologyBasis, order: str = "forward") -> list:
    """The bases ``b_p | l_p(h_p) | s_p(b_{p-1})`` of each ``C_p``."""
    out = []
    b_prev = None
    for p in range(c.length + 1):
        b_p = image_basis(c.boundary(p + 1), order=order)
        if b_prev is None or b_prev.ncols == 0:
            s = Matrix.zeros(c.dims[p], 0, c.field)
        else:
            s = solve(c.boundary(p), b_prev, order=order)
        out.append(hstack(b_p, h[p], s))
        b_prev = b_p
    return out


def torsion(c: ChainComplex, h: HomologyBasis | None = None, order: str = "forward",
            check: bool = True) -> TorsionValue:
    """Reidemeister torsion of ``c`` with chain bases ``c.chain_bases`` and homology basis ``h``."""
    if h is None:
        h = homology_basis_default(c)
    if check:
        check_homology_basis(c, h)
    value = c.field.one
    for p, e in enumerate(assembled_bases(c, h, order=order)):
        if e.ncols != c.dims[p]:
            raise ContractError(f"assembled basis in degree {p} has {e.ncols} vectors, need {c.dims[p]}")
        try:
            d = bracket(e, c.chain_bases[p])
        except BasisError as exc:
            raise AssertionError(f"assembled basis singular in degree {p}") from exc
        value = value / d if p % 2 == 0 else value * d
    return TorsionValue(value, notes={"order": order})


def homology_change_matrix(c: ChainComplex, p: int, new: Matrix, old: Matrix) -> Matrix:
    """Coordinates of the classes of ``new`` in terms of the classes of ``old``."""
    b = image_basis(c.boundary(p + 1))
    coeffs = solve(hstack(b, old), new)
    return coeffs.submatrix(range(b.ncols, b.ncols + old.ncols), range(new.ncols))


def change_base_factor(c: ChainComplex, h: HomologyBasis, new_chain_bases: Sequence[Matrix],
                       new_h: HomologyBasis):
    """``prod_p ([c'_p, c_p] / [h'_p, h_p]) ** (-1)**p``."""
    f = c.field.one
    for p in range(c.length + 1):
        cc = bracket(new_chain_bases[p], c.chain_bases[p])
        mh = homology_change_matrix(c, p, new_h[p], h[p])
        dh = det(mh)
        if c.field.is_zero(dh):
            raise BasisError(f"new homology basis in degree {p} is singular")
        hh = c.field.one / dh  # [h', h] = det(coords of h in h') = 1/det(coords of h' in h)
        ratio = cc / hh
        f = f * ratio if p % 2 == 0 else f / ratio
    return f


def apply_change_base(c: ChainComplex, h: HomologyBasis, new_chain_bases: Sequence[Matrix],
                      new_homology: HomologyBasis) -> TorsionValue:
    """Torsion recomputed directly in the new bases."""
    for p, nb in enumerate(new_chain_bases):
        if c.field.is_zero(det(nb)):
            raise BasisError(f"new chain basis in degree {p} is singular")
    return torsion(c.with_chain_bases(new_chain_bases), new_homology)


def direct_sum(a: ChainComplex, d: ChainComplex) -> ChainComplex:
    n = max(a.length, d.length)
    a, d = pad(a, n), pad(d, n)
    dims = tuple(x + y for x, y in zip(a.dims, d.dims))
    bds = tuple(block_diag(x, y, field=a.field) for x, y in zip(a.boundaries, d.boundaries))
    cbs = tuple(block_diag(x, y, field=a.field) for x, y in zip(a.chain_bases, d.chain_bases))
    return ChainComplex(dims, bds, cbs, a.field)


def direct_sum_homology(ha: HomologyBasis, hd: HomologyBasis, field: Field = QQ) -> HomologyBasis:
    n = max(len(ha), len(hd))
    out = []
    for p in range(n):
        x = ha[p] if p < len(ha) else Matrix.zeros(0, 0, field)
        y = hd[p] if p < len(hd) else Matrix.zeros(0, 0, field)
        out.append(block_diag(x, y, field=field))
    return HomologyBasis(tuple(out))


def direct_sum_sign(a: ChainComplex, d: ChainComplex) -> int:
    """Sign with ``tau(A + D) = sign * tau(A) * tau(D)`` for ordered bases.

    In each degree the assembled basis of the sum is ``bA bD | hA hD | sA sD``;
    regrouping it as ``bA hA sA | bD hD sD`` is a shuffle whose parity is
    ``beta_D * eta_A + sigma_A * (beta_D + eta_D)``.
    """
    n = max(a.length, d.length)
    a, d = pad(a, n), pad(d, n)
    ha, hd = a.homology_dims(), d.homology_dims()
    ra = [rank(a.boundary(p)) for p in range(n + 2)]
    rd = [rank(d.boundary(p)) for p in range(n + 2)]
    parity = 0
    for p in range(n + 1):
        parity += rd[p + 1] * ha[p] + ra[p] * (rd[p + 1] + hd[p])
    return -1 if parity % 2 else 1


def pad(c: ChainComplex, n: int) -> ChainComplex:
    """Extend ``c`` by zero spaces up to length ``n``."""
    if c.length >= n:
        return c
    extra = n - c.length
    dims = c.dims + (0,) * extra
    bds = list(c.boundaries)
    for p in range(c.length + 1, n + 1):
        bds.append(Matrix.zeros(dims[p - 1], 0, c.field))
    cbs = c.chain_bases + tuple(Matrix.zeros(0, 0, c.field) for _ in range(extra))
    return ChainComplex(dims, tuple(bds), cbs, c.field)


def pad_homology(h: HomologyBasis, c: ChainComplex, n: int) -> HomologyBasis:
    extra = n + 1 - len(h)
    if extra <= 0:
        return h
    return HomologyBasis(h.bases + tuple(Matrix.zeros(0, 0, c.field) for _ in range(extra)))


# ---------------------------------------------------------------------------
# Short exact sequences


def _class_coords(c: ChainComplex, p: int, hp: Matrix, vectors: Matrix) -> Matrix:
    """Coordinates of the homology classes of cycle columns ``vectors`` in basis ``hp``."""
    if vectors.ncols == 0 or hp.ncols == 0:
        return Matrix.zeros(hp.ncols, vectors.ncols, c.field)
    return homology_change_matrix(c, p, vectors, hp)


def long_exact_complex(a: ChainComplex, b: ChainComplex, d: ChainComplex,
                       inclusion: Sequence[Matrix], projection: Sequence[Matrix],
                       ha: HomologyBasis, hb: HomologyBasis, hd: HomologyBasis) -> ChainComplex:
    """The acyclic complex built from the homology long exact sequence.

    Degrees: ``H_p(D)`` sits in ``3p``, ``H_p(B)`` in ``3p+1`` and ``H_p(A)``
    in ``3p+2``; the boundaries are ``i_*``, ``pi_*`` and the connecting maps,
    each of degree -1.
    """
    n = b.length
    F = b.field
    spaces = []
    for p in range(n + 1):
        spaces += [hd[p].ncols, hb[p].ncols, ha[p].ncols]
    bds = []
    for q in range(1, 3 * n + 3):
        p, r = divmod(q, 3)
        if r == 2:  # H_p(A) -> H_p(B)
            m = _class_coords(b, p, hb[p], inclusion[p] @ ha[p])
        elif r == 1:  # H_p(B) -> H_p(D)
            m = _class_coords(d, p, hd[p], projection[p] @ hb[p])
        else:  # H_p(D) -> H_{p-1}(A)
            z = hd[p]
            if z.ncols:
                lift = solve(projection[p], z)
                y = b.boundary(p) @ lift
                w = solve(inclusion[p - 1], y)
                m = _class_coords(a, p - 1, ha[p - 1], w)
            else:
                m = Matrix.zeros(ha[p - 1].ncols, 0, F)
        bds.append(m)
    return ChainComplex.build(bds, dims=spaces, field=F)


def check_short_exact(a, b, d, inclusion, projection) -> None:
    n = b.length
    if len(inclusion) != n + 1 or len(projection) != n + 1:
        raise ExactnessError("one inclusion and one projection per degree are required")
    for p in range(n + 1):
        i, pi = inclusion[p], projection[p]
        if i.shape != (b.dims[p], a.dim(p)) or pi.shape != (d.dim(p), b.dims[p]):
            raise ExactnessError(f"map shapes wrong in degree {p}")
        if rank(i) != a.dim(p) or rank(pi) != d.dim(p) or not _is_zero(pi @ i) \
                or a.dim(p) + d.dim(p) != b.dims[p]:
            raise ExactnessError(f"sequence not exact in degree {p}")
        if p >= 1:
            if not _is_zero(b.boundary(p) @ i - inclusion[p - 1] @ a.boundary(p)):
                raise ExactnessError(f"inclusion is not a chain map in degree {p}")
            if not _is_zero(d.boundary(p) @ pi - projection[p - 1] @ b.boundary(p)):
                raise ExactnessError(f"projection is not a chain map in degree {p}")


def check_compatible(a, b, d, inclusion, projection) -> None:
    one = b.field.one
    for p in range(b.length + 1):
        lift = solve(projection[p], d.chain_bases[p]) if d.dim(p) else Matrix.zeros(b.dims[p], 0, b.field)
        m = hstack(inclusion[p] @ a.chain_bases[p], lift)
        v = change_base_det(m, b.chain_bases[p])
        if not (b.field.eq(v, one) or b.field.eq(v, -one)):
            raise CompatibilityError(f"bases are not compatible in degree {p} (det {v})")


def les_torsion(a: ChainComplex, b: ChainComplex, d: ChainComplex,
                inclusion: Sequence[Matrix], projection: Sequence[Matrix],
                ha: HomologyBasis, hb: HomologyBasis, hd: HomologyBasis) -> TorsionValue:
    """Torsion of the homology long exact sequence of ``0 -> A -> B -> D -> 0``."""
    n = b.length
    a, d = pad(a, n), pad(d, n)
    ha, hd = pad_homology(ha, a, n), pad_homology(hd, d, n)
    check_short_exact(a, b, d, inclusion, projection)
    check_compatible(a, b, d, inclusion, projection)
    hcx = long_exact_complex(a, b, d, inclusion, projection, ha, hb, hd)
    if not hcx.is_acyclic():
        raise ExactnessError("homology sequence is not exact")
    return torsion(hcx, HomologyBasis.zero(hcx))


def _cumulative(v: Sequence[int], i: int) -> int:
    return sum(v[: i + 1]) if i >= 0 else 0


def _n_term(dims: Sequence[int], hdims: Sequence[int]) -> int:
    return sum(_cumulative(dims, i) * _cumulative(hdims, i) for i in range(len(dims)))


def milnor_sign(a: ChainComplex, b: ChainComplex, d: ChainComplex) -> int:
    """Sign ``s`` with ``T(B) = s * T(A) * T(D) * T(H)`` for compatible bases.

    The unsigned multiplicativity only holds up to sign. With ``a_i(C)`` and
    ``b_i(C)`` the partial sums of ``dim C_j`` and ``dim H_j(C)`` over
    ``j <= i``, the exponent is the sign-refined term
    ``sum_i a_(i-1)(A) a_i(D) + (b_i(B) + 1)(b_i(A) + b_i(D)) + b_(i-1)(A) b_i(D)``
    plus ``N(A) + N(B) + N(D)`` where ``N(C) = sum_i a_i(C) b_i(C)``.
    """
    n = b.length
    a, d = pad(a, n), pad(d, n)
    dA, dB, dD = a.dims, b.dims, d.dims
    hA, hB, hD = a.homology_dims(), b.homology_dims(), d.homology_dims()
    e = 0
    for i in range(n + 1):
        e += _cumulative(dA, i - 1) * _cumulative(dD, i)
        e += (_cumulative(hB, i) + 1) * (_cumulative(hA, i) + _cumulative(hD, i))
        e += _cumulative(hA, i - 1) * _cumulative(hD, i)
    e += _n_term(dA, hA) + _n_term(dB, hB) + _n_term(dD, hD)
    return -1 if e % 2 else 1


# ---------------------------------------------------------------------------
# JSON


def chain_complex_to_json(c: ChainComplex) -> dict:
    return {
        "field": c.field.name,
        "dims": list(c.dims),
        "boundaries": [matrix_to_json(m) for m in c.boundaries],
        "chain_bases": [matrix_to_json(m) for m in c.chain_bases],
    }


def chain_complex_from_json(obj: dict, field: Field = QQ) -> ChainComplex:
    dims = obj["dims"]
    bds = [matrix_from_json(m, field) for m in obj.get("boundaries", [])]
    cbs = obj.get("chain_bases")
    if cbs is not None:
        cbs = [None if m is None else matrix_from_json(m, field) for m in cbs]
    return ChainComplex.build(bds, dims=dims, chain_bases=cbs, field=field)


def homology_basis_to_json(h: HomologyBasis) -> dict:
    return {"dims": [m.nrows for m in h.bases], "bases": [matrix_to_json(m) for m in h.bases]}


def homology_basis_from_json(obj: dict, field: Field = QQ) -> HomologyBasis:
    out = []
    for k, m in zip(obj["dims"], obj["bases"]):
        out.append(Matrix.zeros(k, 0, field) if m is None else matrix_from_json(m, field))
    return HomologyBasis(tuple(out))
