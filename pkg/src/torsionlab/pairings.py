"""Pairings between twisted cochains and chains of a closed surface.

Cochains take values in the Lie algebra with the left adjoint action, so a
1-cocycle is a crossed homomorphism ``u(xy) = u(x) + Ad(x) u(y)``. On the
one-vertex presentation it is stored as its values on the generators, laid
out edge-major like the chain group ``C_1``.

The Kronecker pairing of a cochain ``u`` with a chain ``c`` is
``sum_x B(u(x), c_x)``; it vanishes on coboundary/cycle and cocycle/boundary
pairs for the chain conventions of :mod:`torsionlab.surfcx`.

The cup-product form is evaluated on the bar 2-cycle of the relator
``r = y_1 ... y_N``::

    sum_{j<N} [y_1..y_j | y_{j+1}]  -  sum_x [x | x^-1]

which is the fan triangulation of the face from the base vertex, closed up
by the degenerate triangles that identify ``x^-1`` with the reversed edge.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .chaincore import HomologyBasis, homology_basis_default
from .errors import (
    AdmissibilityError,
    BasisError,
    DomainError,
    FormError,
    NondegeneracyError,
    ReducibleRepresentationError,
)
from .fieldlin import (
    Matrix,
    det,
    hstack,
    inverse,
    is_skew,
    kernel_basis,
    pfaffian,
    pivot_columns,
    rank,
    vstack,
)
from .liealg import ad_action
from .surfcx import SurfaceRepresentation, build_twisted_complex, rep_torsion


# ---------------------------------------------------------------------------
# Cochains


@dataclass(frozen=True)
class CochainBasis:
    """Columns are 1-cocycles (generator values, edge-major) spanning ``H^1``."""

    matrix: Matrix
    rep: SurfaceRepresentation

    @property
    def dim(self) -> int:
        return self.matrix.ncols

    def column(self, i: int) -> list:
        return list(self.matrix.col(i))

    def values(self, i: int) -> dict:
        """Generator -> Lie-algebra coordinate vector of the ``i``-th cocycle."""
        return _split(self.rep, self.column(i))


@dataclass(frozen=True)
class FormMatrix:
    matrix: Matrix
    label: str

    @property
    def field(self):
        return self.matrix.field


def _ad(rep: SurfaceRepresentation, g: Matrix) -> Matrix:
    return ad_action(rep.spec, g, check=False)


def _split(rep: SurfaceRepresentation, vec: Sequence) -> dict:
    d = rep.spec.dim
    gens = rep.presentation.generators
    if len(vec) != d * len(gens):
        raise DomainError(f"cochain has length {len(vec)}, expected {d * len(gens)}")
    return {x: Matrix([[v] for v in vec[k * d:(k + 1) * d]], rep.field) for k, x in enumerate(gens)}


def coboundary_matrices(rep: SurfaceRepresentation) -> tuple:
    """``(delta_0, delta_1)``: ``C^0 -> C^1 -> C^2``.

    ``delta_0 t = (Ad(x) t - t)_x`` and ``delta_1 u = u(r)`` evaluated through
    the Fox derivatives, ``u(r) = sum_x Ad(dr/dx) u(x)``.
    """
    F = rep.field
    d = rep.spec.dim
    ident = Matrix.identity(d, F)
    pres = rep.presentation
    d0 = vstack(*[_ad(rep, rep.images[x]) - ident for x in pres.generators])
    blocks = []
    for fox in pres.fox_column():
        blk = Matrix.zeros(d, d, F)
        for w, c in fox.items():
            blk = blk + _ad(rep, rep.of(w)) * F(c)
        blocks.append(blk)
    return d0, hstack(*blocks)


def coboundary(rep: SurfaceRepresentation, t: Matrix) -> Matrix:
    """The cocycle ``x -> Ad(x) t - t`` as a column."""
    return coboundary_matrices(rep)[0] @ t


def is_cocycle(rep: SurfaceRepresentation, u: Matrix) -> bool:
    return (coboundary_matrices(rep)[1] @ u).is_zero()


def cocycle_basis(rep: SurfaceRepresentation) -> CochainBasis:
    """Cocycles completing the coboundaries to a basis of ``Z^1``."""
    d0, d1 = coboundary_matrices(rep)
    z = kernel_basis(d1)
    r0 = rank(d0)
    m = hstack(d0, z)
    piv = pivot_columns(m)
    keep = [j - d0.ncols for j in piv if j >= d0.ncols]
    if len(piv) != z.ncols or len([j for j in piv if j < d0.ncols]) != r0:
        raise BasisError("coboundaries are not contained in the cocycles")
    return CochainBasis(z.select_columns(keep), rep)


def check_cochain_basis(cochains: CochainBasis) -> None:
    rep = cochains.rep
    d0, d1 = coboundary_matrices(rep)
    if not (d1 @ cochains.matrix).is_zero():
        raise BasisError("cochain basis contains a non-cocycle")
    h1 = d1.ncols - rank(d1) - rank(d0)
    if cochains.dim != h1 or rank(hstack(d0, cochains.matrix)) != rank(d0) + h1:
        raise BasisError("cochains do not form a basis of H^1")


def evaluate_cocycle(rep: SurfaceRepresentation, values: dict, word) -> Matrix:
    """``u(word)`` from the generator values via the crossed-homomorphism rule."""
    F = rep.field
    d = rep.spec.dim
    out = Matrix.zeros(d, 1, F)
    g = Matrix.identity(rep.spec.m, F)
    for x, e in word:
        if e == 1:
            out = out + _ad(rep, g) @ values[x]
            g = g @ rep.images[x]
        else:
            g = g @ rep.of(((x, -1),))
            out = out - _ad(rep, g) @ values[x]
    return out


# ---------------------------------------------------------------------------
# Kronecker pairing


def _cycle_matrix(cycles) -> Matrix:
    if isinstance(cycles, HomologyBasis):
        return cycles[1]
    return cycles


def big_gram(rep: SurfaceRepresentation) -> Matrix:
    from .fieldlin import block_diag

    g = rep.spec.killing_gram
    return block_diag(*[g] * len(rep.presentation.generators), field=rep.field)


def kronecker_matrix(cochains: CochainBasis, cycles) -> FormMatrix:
    """``K[i][j] = sum_x B(u_i(x), (h_j)_x)``."""
    h = _cycle_matrix(cycles)
    rep = cochains.rep
    if h.nrows != cochains.matrix.nrows:
        raise DomainError(f"cycle length {h.nrows} does not match cochain length {cochains.matrix.nrows}")
    k = cochains.matrix.T @ big_gram(rep) @ h
    if k.nrows != k.ncols or det(k) == 0:
        raise BasisError("Kronecker matrix is singular; cochains and cycles are not dual bases")
    return FormMatrix(k, "kronecker")


def dual_cochains(cochains: CochainBasis, cycles) -> CochainBasis:
    """Cochains with Kronecker matrix the identity against ``cycles``."""
    k = kronecker_matrix(cochains, cycles).matrix
    return CochainBasis(cochains.matrix @ inverse(k).T, cochains.rep)


# ---------------------------------------------------------------------------
# Cup product and the symplectic form


def cup_value(rep: SurfaceRepresentation, u: dict, v: dict):
    """``<B(u cup v), [surface]>`` for cocycles given by generator values."""
    F = rep.field
    G = rep.spec.killing_gram
    word = rep.presentation.relator
    total = F.zero
    ux = Matrix.zeros(rep.spec.dim, 1, F)
    g = Matrix.identity(rep.spec.m, F)
    for j, (x, e) in enumerate(word):
        # prefix value u(y_1..y_j) and group element, then the next letter
        if j:
            vy = v[x] if e == 1 else -(_ad(rep, rep.of(((x, -1),))) @ v[x])
            total = total + (ux.T @ G @ _ad(rep, g) @ vy)[0, 0]
        if e == 1:
            ux = ux + _ad(rep, g) @ u[x]
            g = g @ rep.images[x]
        else:
            g = g @ rep.of(((x, -1),))
            ux = ux - _ad(rep, g) @ u[x]
    # closing terms -[x | x^-1] contribute +B(u(x), v(x))
    for x in rep.presentation.generators:
        total = total + (u[x].T @ G @ v[x])[0, 0]
    return total


def cup_matrix(rep: SurfaceRepresentation) -> Matrix:
    """``W`` with ``<B(u cup v), [surface]> = U^T W V`` on stacked generator values.

    Same bar 2-cycle as :func:`cup_value`, with ``u(prefix)`` and ``v(letter)``
    written as linear maps of the generator values.
    """
    F = rep.field
    G = rep.spec.killing_gram
    d = rep.spec.dim
    gens = rep.presentation.generators
    pos = {x: k for k, x in enumerate(gens)}
    N = d * len(gens)
    zero = Matrix.zeros(d, d, F)

    def place(x, blk):
        return hstack(*[blk if k == pos[x] else zero for k in range(len(gens))])

    W = Matrix.zeros(N, N, F)
    A = Matrix.zeros(d, N, F)          # u(prefix) = A U
    g = Matrix.identity(rep.spec.m, F)
    for j, (x, e) in enumerate(rep.presentation.relator):
        xinv = rep.of(((x, -1),))
        if j:
            c = place(x, Matrix.identity(d, F) if e == 1 else -_ad(rep, xinv))
            W = W + A.T @ (G @ _ad(rep, g)) @ c
        if e == 1:
            A = A + place(x, _ad(rep, g))
            g = g @ rep.images[x]
        else:
            g = g @ xinv
            A = A - place(x, _ad(rep, g))
    for x in gens:
        e = place(x, Matrix.identity(d, F))
        W = W + e.T @ G @ e
    return W


def abg_form(rep: SurfaceRepresentation, cochains: CochainBasis, check: bool = True) -> FormMatrix:
    """Matrix of the cup-product form on ``H^1`` in the given cocycle basis."""
    tc = build_twisted_complex(rep)
    if not tc.is_irreducible():
        raise ReducibleRepresentationError("the cup-product form needs H^0 = H^2 = 0")
    u = cochains.matrix
    w = cup_matrix(rep)
    m = u.T @ w @ u
    F = rep.field
    if F.exact:
        if check and not is_skew(m):
            raise FormError("cup-product form is not skew-symmetric")
        return FormMatrix(m, "omega_B")
    # rounding is relative to the entries of W, not of the (much smaller) result
    scale = max(w.max_abs() * max(1.0, u.max_abs()) ** 2, m.max_abs())
    if check and (m + m.T).max_abs() > F.tol * scale:
        raise FormError("cup-product form is not skew-symmetric")
    return FormMatrix((m - m.T) * F(0.5), "omega_B")


# ---------------------------------------------------------------------------
# Dual Gram lemma


def dual_gram(g) -> FormMatrix:
    """Gram matrix of a form in the dual basis: ``(G^-1)^T``, with ``G* G^T = I`` checked."""
    m = g.matrix if isinstance(g, FormMatrix) else g
    if not m.is_square() or m.nrows % 2:
        raise FormError(f"dual Gram needs an even square matrix, got {m.shape}")
    if not is_skew(m):
        raise FormError("dual Gram needs a skew-symmetric matrix")
    if m.nrows and m.field.is_zero(det(m)):
        raise NondegeneracyError("form is degenerate")
    out = inverse(m).T
    prod = out @ m.T
    if m.field.exact and not prod.equals(Matrix.identity(m.nrows, m.field)):
        raise FormError("dual Gram identity failed")
    return FormMatrix(out, "dual")


# ---------------------------------------------------------------------------
# Main theorem


@dataclass
class MainTheoremReport:
    lhs: object                 # |torsion| * |det K|
    rhs: object                 # |Pf(Omega)|
    torsion: object             # corrected torsion
    det_k: object
    pf_omega: object
    field: str
    fixture: str = ""
    tol: float = 1e-6
    extra: dict = dc_field(default_factory=dict)

    @property
    def relative_gap(self) -> float:
        r = abs(float(self.rhs))
        return abs(float(self.lhs) - float(self.rhs)) / r if r else float("inf")

    @property
    def exact(self) -> bool:
        return not isinstance(self.lhs, float)

    @property
    def passed(self) -> bool:
        if self.exact:
            return self.lhs == self.rhs
        return self.relative_gap <= self.tol

    def to_json(self) -> dict:
        return {"lhs": str(self.lhs), "rhs": str(self.rhs), "relative_gap": self.relative_gap,
                "field": self.field, "fixture": self.fixture, "pass": self.passed}


def _orth_complement_in(z: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Orthonormal basis of ``span(z) ∩ span(b)^perp`` (columns)."""
    if b.shape[1]:
        qb, _ = np.linalg.qr(b)
        z = z - qb @ (qb.T @ z)
    u, sv, _ = np.linalg.svd(z, full_matrices=False)
    k = z.shape[1] - b.shape[1]
    return u[:, :k]


def _null_space(a: np.ndarray, k: int) -> np.ndarray:
    _, _, vt = np.linalg.svd(a)
    return vt[a.shape[1] - k:].T


def orthonormal_float_bases(rep: SurfaceRepresentation) -> tuple:
    """Well-conditioned ``(h1, cochains)`` for a float representation.

    ``h1`` spans the cycles orthogonal to the boundaries and the cochains
    span the cocycles orthogonal to the coboundaries, both orthonormal in
    the Euclidean metric of the stored coordinates.
    """
    F = rep.field
    tc = build_twisted_complex(rep)
    c = tc.complex
    d = rep.spec.dim
    n1 = c.dims[1]
    d1 = np.array(c.boundary(1).to_float_list())
    d2 = np.array(c.boundary(2).to_float_list())
    h1 = _orth_complement_in(_null_space(d1, n1 - d), d2)
    c0, c1 = coboundary_matrices(rep)
    c0, c1 = np.array(c0.to_float_list()), np.array(c1.to_float_list())
    u = _orth_complement_in(_null_space(c1, n1 - d), c0)
    return Matrix(h1.tolist(), F), CochainBasis(Matrix(u.tolist(), F), rep)


def verify_main_theorem(rep: SurfaceRepresentation, h1=None, cochains: CochainBasis | None = None,
                        fixture: str = "", tol: float = 1e-6) -> MainTheoremReport:
    """Compare ``|T| * |det K(u, h1)|`` with ``|Pf(Omega^u)|``.

    ``T`` is the torsion of the twisted complex with homology bases
    ``{0, h1, 0}`` corrected to a B-orthonormal Lie basis. Both sides scale
    by ``|det|`` of a change of ``u`` or ``h1``, so the identity is basis free.
    """
    tc = build_twisted_complex(rep)
    if not tc.is_irreducible():
        raise ReducibleRepresentationError("main theorem needs H_0 = H_2 = 0")
    if not rep.field.exact and (h1 is None or cochains is None):
        h_f, u_f = orthonormal_float_bases(rep)
        h1 = h_f if h1 is None else h1
        cochains = u_f if cochains is None else cochains
    if h1 is None:
        h1 = homology_basis_default(tc.complex)[1]
    h1 = _cycle_matrix(h1)
    if cochains is None:
        cochains = cocycle_basis(rep)
    rt = rep_torsion(tc, h1)
    k = kronecker_matrix(cochains, h1).matrix
    omega = abg_form(rep, cochains).matrix
    pf = pfaffian(omega)
    F = rep.field
    if F.is_zero(pf):
        raise NondegeneracyError("cup-product form is degenerate")
    dk = det(k)
    lhs = abs(rt.corrected) * abs(dk)
    rhs = abs(pf)
    if not F.exact:
        lhs, rhs = float(lhs), float(rhs)
    return MainTheoremReport(lhs, rhs, rt.corrected, dk, pf, F.name, fixture, tol)


def orthonormal_torsion_float(rep: SurfaceRepresentation, h1: Matrix) -> float:
    """Torsion recomputed in a genuinely B-orthonormal Lie basis (float only).

    Independent cross-check of the Gram correction used by ``rep_torsion``.
    """
    from .fieldlin import RealField

    G = np.array(rep.spec.killing_gram.to_float_list())
    w, q = np.linalg.eigh(G)
    m = q / np.sqrt(np.abs(w))           # columns orthonormal up to sign
    F = RealField(rep.field.tol if not rep.field.exact else 1e-9)
    rep_f = rep if not rep.field.exact else SurfaceRepresentation.build(
        rep.presentation.genus, rep.spec.family, rep.spec.n,
        {x: g.with_field(F) for x, g in rep.images.items()}, F, check=False)
    M = Matrix(m.tolist(), F)
    tc = build_twisted_complex(rep_f, lie_change=M)
    mi = inverse(M)
    from .fieldlin import block_diag

    hn = block_diag(*[mi] * len(rep.presentation.generators), field=F) @ h1.with_field(F)
    return float(rep_torsion(tc, hn, gram=M.T @ rep_f.spec.killing_gram @ M, check=False).raw)


# ---------------------------------------------------------------------------
# Thurston form on transverse cocycles of a train track


@dataclass(frozen=True)
class TrainTrack:
    """Edges and switches; a switch is ``(left, right)`` or ``(left, right, incoming)``.

    With an incoming edge the switch condition ``w(in) = w(left) + w(right)``
    is enforced; two-edge switches carry no checkable condition.
    """

    edges: tuple
    switches: tuple

    def __post_init__(self):
        known = set(self.edges)
        if len(known) != len(self.edges):
            raise DomainError("duplicate edge names")
        for s in self.switches:
            if len(s) not in (2, 3) or any(e not in known for e in s):
                raise DomainError(f"bad switch {s!r}")

    def weights(self, cocycle) -> dict:
        if isinstance(cocycle, dict):
            missing = [e for e in self.edges if e not in cocycle]
            if missing:
                raise AdmissibilityError(f"cocycle missing weights for {missing}")
            return {e: _num(cocycle[e]) for e in self.edges}
        vals = list(cocycle)
        if len(vals) != len(self.edges):
            raise AdmissibilityError(f"cocycle has {len(vals)} weights for {len(self.edges)} edges")
        return {e: _num(v) for e, v in zip(self.edges, vals)}

    def is_admissible(self, cocycle) -> bool:
        try:
            self.check(cocycle)
        except AdmissibilityError:
            return False
        return True

    def check(self, cocycle) -> dict:
        w = self.weights(cocycle)
        for s in self.switches:
            if len(s) == 3:
                left, right, inc = s
                if w[inc] != w[left] + w[right]:
                    raise AdmissibilityError(f"switch condition fails at {s!r}")
        return w


def _num(v):
    if isinstance(v, float):
        return Fraction(v).limit_denominator(10 ** 12) if v == v else v
    return Fraction(v) if isinstance(v, (int, str, Fraction)) else v


def thurston_form(track: TrainTrack, s1, s2):
    """``1/2 sum_s det [[s1(left), s1(right)], [s2(left), s2(right)]]``."""
    w1, w2 = track.check(s1), track.check(s2)
    total = 0
    for s in track.switches:
        left, right = s[0], s[1]
        total += w1[left] * w2[right] - w1[right] * w2[left]
    return Fraction(total) / 2 if isinstance(total, (int, Fraction)) else total / 2


FORM_SCALE = {"thurston": Fraction(1), "psl2": Fraction(2), "wp": Fraction(-16)}
_FORM_ALIASES = {"thurston": "thurston", "psl2": "psl2", "psl(2,r)": "psl2", "psl2r": "psl2",
                 "wp": "wp", "weil-petersson": "wp"}


def form_conversion(value, from_form: str, to_form: str):
    """Rescale a value of one symplectic form to another.

    With ``omega_PSL2 = 2 omega_Thurston`` and ``omega_WP = -8 omega_PSL2``
    each form is a fixed multiple of the Thurston form.
    """
    try:
        a = FORM_SCALE[_FORM_ALIASES[from_form.lower()]]
        b = FORM_SCALE[_FORM_ALIASES[to_form.lower()]]
    except KeyError as exc:
        raise DomainError(f"unknown form {exc.args[0]!r}") from None
    return value * (b / a)


def train_track_to_json(t: TrainTrack) -> dict:
    return {"edges": list(t.edges), "switches": [list(s) for s in t.switches]}


def train_track_from_json(obj) -> TrainTrack:
    if isinstance(obj, str):
        obj = json.loads(obj)
    try:
        return TrainTrack(tuple(obj["edges"]), tuple(tuple(s) for s in obj["switches"]))
    except (KeyError, TypeError) as exc:
        raise DomainError(f"malformed train track: {exc}") from exc
