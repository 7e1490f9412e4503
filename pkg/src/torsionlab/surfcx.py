"""Surface groups, Fox calculus and twisted chain complexes.

The closed surface of genus ``g`` carries the one-vertex CW structure with
edges ``a1, b1, ..., ag, bg`` and one face attached along
``r = [a1, b1] ... [ag, bg]`` (``[a, b] = a b a^-1 b^-1``).

Twisting convention. Deck transformations act on the left of the universal
cover, so a 2-cell lift has boundary ``sum_x (dr/dx) x~`` with ``dr/dx`` the
(left) Fox derivative. Chains are turned into a right module by
``s . gamma = gamma^-1 s``, and ``s . gamma (x) t = s (x) Ad(gamma) t``. Hence
the edge block of ``d_1`` is ``Ad(rho(x))^-1 - I`` and the face block for edge
``x`` is ``sum n_gamma Ad(rho(gamma))^-1`` over the terms of ``dr/dx``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from typing import Iterable, Sequence

import numpy as np

from .chaincore import ChainComplex, HomologyBasis, homology_basis_default, torsion
from .errors import (
    DomainError,
    GroupMembershipError,
    InvalidRepresentationError,
    ReducibleRepresentationError,
)
from .fieldlin import (
    QQ,
    Field,
    Matrix,
    QuadraticField,
    RealField,
    block_diag,
    det,
    field_from_name,
    hstack,
    inverse,
    matrix_from_json,
    matrix_to_json,
    rank,
    vstack,
)
from .liealg import LieAlgebraSpec, ad_action, build_basis, canonical_family, group_inverse, is_group_element

Word = tuple  # tuple of (letter, +1 | -1)


# ---------------------------------------------------------------------------
# Words and the integral group ring


def reduce_word(word: Iterable) -> Word:
    out = []
    for letter, e in word:
        if out and out[-1][0] == letter and out[-1][1] == -e:
            out.pop()
        else:
            out.append((letter, e))
    return tuple(out)


def invert_word(word: Word) -> Word:
    return tuple((x, -e) for x, e in reversed(word))


def parse_word(text: str) -> Word:
    """``"a1 b1 a1^-1 b1^-1"`` -> word; exponents other than +-1 are expanded."""
    out = []
    for tok in text.split():
        if "^" in tok:
            letter, exp = tok.split("^")
            k = int(exp)
        else:
            letter, k = tok, 1
        out += [(letter, 1 if k > 0 else -1)] * abs(k)
    return reduce_word(out)


def word_to_str(word: Word) -> str:
    return " ".join(x if e == 1 else f"{x}^-1" for x, e in word) or "1"


class GroupRingElement(dict):
    """Formal integer combination of reduced words."""

    @classmethod
    def of(cls, word: Word, coeff: int = 1) -> "GroupRingElement":
        g = cls()
        g.add(word, coeff)
        return g

    def add(self, word: Word, coeff: int) -> None:
        w = reduce_word(word)
        c = self.get(w, 0) + coeff
        if c:
            self[w] = c
        else:
            self.pop(w, None)

    def __add__(self, other):
        out = GroupRingElement(self)
        for w, c in other.items():
            out.add(w, c)
        return out

    def __neg__(self):
        return GroupRingElement({w: -c for w, c in self.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        out = GroupRingElement()
        for w1, c1 in self.items():
            for w2, c2 in other.items():
                out.add(w1 + w2, c1 * c2)
        return out


def fox_derivative(word: Word, letter: str, alphabet: Sequence[str] | None = None) -> GroupRingElement:
    """Left Fox derivative ``d word / d letter``.

    ``d(uv) = du + u dv``, ``dx/dx = 1``, ``dx^-1/dx = -x^-1``.
    """
    if alphabet is not None:
        known = set(alphabet)
        bad = [x for x, _ in word if x not in known]
        if letter not in known or bad:
            raise DomainError(f"unknown letter {letter if letter not in known else bad[0]!r}")
    out = GroupRingElement()
    prefix: list = []
    for x, e in word:
        if x == letter:
            if e == 1:
                out.add(tuple(prefix), 1)
            else:
                out.add(tuple(prefix) + ((x, -1),), -1)
        prefix.append((x, e))
    return out


# ---------------------------------------------------------------------------
# Presentation


@dataclass(frozen=True)
class SurfacePresentation:
    genus: int

    def __post_init__(self):
        if not isinstance(self.genus, int) or self.genus < 2:
            raise DomainError(f"genus must be an integer >= 2, got {self.genus!r}")

    @property
    def generators(self) -> tuple:
        out = []
        for i in range(1, self.genus + 1):
            out += [f"a{i}", f"b{i}"]
        return tuple(out)

    @property
    def relator(self) -> Word:
        w = []
        for i in range(1, self.genus + 1):
            a, b = f"a{i}", f"b{i}"
            w += [(a, 1), (b, 1), (a, -1), (b, -1)]
        return tuple(w)

    def cells(self) -> tuple:
        """Number of 0-, 1- and 2-cells."""
        return (1, 2 * self.genus, 1)

    def euler_characteristic(self) -> int:
        return 2 - 2 * self.genus

    def fox_column(self) -> list:
        return [fox_derivative(self.relator, x) for x in self.generators]

    def fundamental_identity_holds(self) -> bool:
        """``sum_x (dr/dx)(x - 1) = r - 1`` in the free group ring."""
        lhs = GroupRingElement()
        for x, d in zip(self.generators, self.fox_column()):
            lhs = lhs + d * (GroupRingElement.of(((x, 1),)) - GroupRingElement.of(()))
        rhs = GroupRingElement.of(self.relator) - GroupRingElement.of(())
        return lhs == rhs


# ---------------------------------------------------------------------------
# Representations


def evaluate_word(images: dict, word: Word, spec: LieAlgebraSpec) -> Matrix:
    g = Matrix.identity(spec.m, spec.field)
    for x, e in word:
        g = g @ (images[x] if e == 1 else group_inverse(spec, images[x]))
    return g


@dataclass(frozen=True)
class SurfaceRepresentation:
    presentation: SurfacePresentation
    spec: LieAlgebraSpec
    images: dict
    relator_defect: float = dc_field(default=0.0, compare=False)

    @classmethod
    def build(cls, genus: int, family: str, n: int, images: dict, field: Field = QQ,
              check: bool = True) -> "SurfaceRepresentation":
        pres = SurfacePresentation(genus)
        spec = build_basis(canonical_family(family), n, field)
        missing = [x for x in pres.generators if x not in images]
        if missing:
            raise DomainError(f"missing generator images: {missing}")
        imgs = {x: images[x] for x in pres.generators}
        for x, g in imgs.items():
            if g.shape != (spec.m, spec.m):
                raise DomainError(f"image of {x} has shape {g.shape}, expected {(spec.m, spec.m)}")
            if check and not is_group_element(spec, g):
                raise GroupMembershipError(f"image of {x} does not preserve the {spec.family} form")
        rep = cls(pres, spec, imgs, 0.0)
        defect = rep.compute_defect()
        object.__setattr__(rep, "relator_defect", defect)
        if check:
            rep.check_relator()
        return rep

    @property
    def field(self) -> Field:
        return self.spec.field

    def of(self, word: Word) -> Matrix:
        return evaluate_word(self.images, word, self.spec)

    def compute_defect(self) -> float:
        """``min(|rho(r) - I|, |rho(r) + I|)`` in max norm.

        Over a float field the value is divided by the largest entry of the
        partial products of the relator, the scale of the rounding error.
        """
        F = self.field
        i = Matrix.identity(self.spec.m, F)
        g = i
        scale = 1.0
        for x, e in self.presentation.relator:
            g = g @ (self.images[x] if e == 1 else group_inverse(self.spec, self.images[x]))
            scale = max(scale, g.max_abs())
        raw = min((g - i).max_abs(), (g + i).max_abs())
        return raw if F.exact else raw / scale

    def check_relator(self) -> None:
        F = self.field
        if F.exact:
            r = self.of(self.presentation.relator)
            i = Matrix.identity(self.spec.m, F)
            ok = r.equals(i) or r.equals(-i)
        else:
            ok = self.relator_defect <= F.tol
        if not ok:
            raise InvalidRepresentationError(
                f"relator maps to a non-central element (defect {self.relator_defect:.3e})")

    def conjugate(self, g: Matrix) -> "SurfaceRepresentation":
        gi = group_inverse(self.spec, g)
        imgs = {x: g @ m @ gi for x, m in self.images.items()}
        return SurfaceRepresentation.build(self.presentation.genus, self.spec.family, self.spec.n,
                                           imgs, self.field)


def representation_to_json(rep: SurfaceRepresentation) -> dict:
    return {
        "genus": rep.presentation.genus,
        "family": rep.spec.family,
        "n": rep.spec.n,
        "field": rep.field.name,
        "generators": {x: matrix_to_json(m) for x, m in rep.images.items()},
    }


def representation_from_json(obj: dict, tol: float = 1e-9) -> SurfaceRepresentation:
    try:
        genus, family, n = int(obj["genus"]), obj["family"], int(obj["n"])
        field = field_from_name(obj.get("field", "rational"), tol=tol)
        gens = obj["generators"]
    except (KeyError, TypeError, ValueError) as exc:
        raise DomainError(f"malformed representation: {exc}") from exc
    images = {x: matrix_from_json(m, field) for x, m in gens.items()}
    return SurfaceRepresentation.build(genus, family, n, images, field)


def embed_sl2_images(images2: dict, genus: int, family: str = "sp", n: int = 2,
                     check: bool = True) -> SurfaceRepresentation:
    """Push ``SL(2)`` generator images through the principal embedding."""
    from .liealg import principal_sl2_embed

    field = next(iter(images2.values())).field
    imgs = {x: principal_sl2_embed(m, family, n) for x, m in images2.items()}
    return SurfaceRepresentation.build(genus, family, n, imgs, field, check=check)


# ---------------------------------------------------------------------------
# Twisted complex


@dataclass(frozen=True)
class TwistedSurfaceComplex:
    complex: ChainComplex
    rep: SurfaceRepresentation
    spec: LieAlgebraSpec
    geometric_basis: dict

    @property
    def d(self) -> int:
        return self.spec.dim

    def is_irreducible(self) -> bool:
        """``H_0 = H_2 = 0``, i.e. both boundary maps have full rank ``d``."""
        c = self.complex
        return rank(c.boundary(1)) == self.d and rank(c.boundary(2)) == self.d


def _ad_inv(spec: LieAlgebraSpec, g: Matrix) -> Matrix:
    return ad_action(spec, group_inverse(spec, g), check=False)


def build_twisted_complex(rep: SurfaceRepresentation, spec: LieAlgebraSpec | None = None,
                          lie_change: Matrix | None = None) -> TwistedSurfaceComplex:
    """``C_2 -> C_1 -> C_0`` with ``C_p`` the ``p``-cells tensored with the Lie algebra.

    ``lie_change`` expresses a different Lie basis in the stored one; the
    complex is then written in that basis throughout.
    """
    rep.check_relator()
    spec = spec or rep.spec
    pres = rep.presentation
    F = spec.field
    d = spec.dim
    ident = Matrix.identity(d, F)
    to_new = from_new = None
    if lie_change is not None:
        from_new = lie_change
        to_new = inverse(lie_change)

    def ad_inv(g):
        a = _ad_inv(spec, g)
        return to_new @ a @ from_new if to_new is not None else a

    d1_blocks = [ad_inv(rep.images[x]) - ident for x in pres.generators]
    d2_blocks = []
    for fox in pres.fox_column():
        blk = Matrix.zeros(d, d, F)
        for w, c in fox.items():
            blk = blk + ad_inv(rep.of(w)) * F(c)
        d2_blocks.append(blk)
    d1 = hstack(*d1_blocks)
    d2 = vstack(*d2_blocks)
    cx = ChainComplex.build([d1, d2], dims=[d, 2 * pres.genus * d, d], field=F)
    info = {"lifts": "standard", "lie_basis": "stored" if lie_change is None else "changed"}
    return TwistedSurfaceComplex(cx, rep, spec, info)


def gram_correction(gram: Matrix, genus: int):
    """``|det G|^(1-g)``: converts torsion in a basis with Killing Gram ``G``
    to torsion in a B-orthonormal basis (``chi = 2 - 2g`` is even, so the
    factor is rational)."""
    dg = abs(det(gram))
    return dg ** (1 - genus) if genus != 1 else gram.field.one


@dataclass(frozen=True)
class RepTorsion:
    raw: object          # torsion in the geometric basis built from the stored Lie basis
    corrected: object    # raw times the Gram correction
    h1: Matrix


def rep_torsion(tc: TwistedSurfaceComplex, h1: Matrix | None = None,
                gram: Matrix | None = None, check: bool = True) -> RepTorsion:
    """Torsion with homology bases ``{0, h1, 0}``; requires ``H_0 = H_2 = 0``."""
    if not tc.is_irreducible():
        raise ReducibleRepresentationError("H_0 or H_2 of the twisted complex is nonzero")
    c = tc.complex
    if h1 is None:
        h1 = homology_basis_default(c)[1]
        check = False
    F = c.field
    h = HomologyBasis((Matrix.zeros(c.dims[0], 0, F), h1, Matrix.zeros(c.dims[2], 0, F)))
    t = torsion(c, h, check=check).value
    g = tc.spec.killing_gram if gram is None else gram
    return RepTorsion(t, t * gram_correction(g, tc.rep.presentation.genus), h1)


def _lift_change_bases(tc: TwistedSurfaceComplex, cell: tuple, gamma: Matrix) -> list:
    """Chain bases after replacing the lift of one cell ``(p, j)`` by its translate by ``gamma``."""
    p, j = cell
    c = tc.complex
    F = c.field
    d = tc.d
    a = ad_action(tc.spec, gamma, check=False)
    bases = list(c.chain_bases)
    blocks = [Matrix.identity(d, F) for _ in range(c.dims[p] // d)]
    blocks[j] = a
    bases[p] = block_diag(*blocks, field=F)
    return bases


def invariance_suite(rep: SurfaceRepresentation, rng: random.Random | None = None,
                     lie_change: Matrix | None = None, conjugator: Matrix | None = None,
                     cells: str = "all") -> dict:
    """Torsion under Lie-basis change, lift changes and conjugation.

    Returns a report with the reference value, every recomputed value and an
    ``agree`` flag (exact equality over exact fields, relative ``tol``
    otherwise).
    """
    from .liealg import random_group_element

    rng = rng or random.Random(0)
    tc = build_twisted_complex(rep)
    if not tc.is_irreducible():
        raise ReducibleRepresentationError("invariance suite needs H_0 = H_2 = 0")
    ref = rep_torsion(tc)
    F = rep.field
    spec = tc.spec
    d = spec.dim
    g = rep.presentation.genus
    values = []

    # (i) Lie basis: a permutation and, optionally, a general change
    perm = list(range(d))
    rng.shuffle(perm)
    changes = [("lie_permutation", Matrix.from_columns(
        [[F.one if i == k else F.zero for i in range(d)] for k in perm], F, nrows=d))]
    if lie_change is not None:
        changes.append(("lie_general", lie_change))
    for name, m in changes:
        tcn = build_twisted_complex(rep, lie_change=m)
        mi = inverse(m)
        h1 = block_diag(*[mi] * (2 * g), field=F) @ ref.h1
        rt = rep_torsion(tcn, h1, gram=m.T @ spec.killing_gram @ m, check=False)
        values.append({"change": name, "det": det(m), "raw": rt.raw, "corrected": rt.corrected})

    # (ii) lift changes by each generator
    cell_list = [(0, 0)] + [(1, j) for j in range(2 * g)] + [(2, 0)]
    if cells == "edges":
        cell_list = [(1, j) for j in range(2 * g)]
    for x in rep.presentation.generators:
        for cell in cell_list:
            if cells == "own" and cell != (1, rep.presentation.generators.index(x)):
                continue
            bases = _lift_change_bases(tc, cell, rep.images[x])
            cx = tc.complex.with_chain_bases(bases)
            h = HomologyBasis((Matrix.zeros(d, 0, F), ref.h1, Matrix.zeros(d, 0, F)))
            t = torsion(cx, h, check=False).value
            values.append({"change": f"lift{cell}.{x}", "raw": t,
                           "corrected": t * gram_correction(spec.killing_gram, g)})

    # (iii) conjugation
    q = conjugator if conjugator is not None else random_group_element(spec, rng)
    rc = rep.conjugate(q)
    tcc = build_twisted_complex(rc)
    aq = ad_action(spec, q, check=False)
    h1 = block_diag(*[aq] * (2 * g), field=F) @ ref.h1
    rt = rep_torsion(tcc, h1, check=False)
    values.append({"change": "conjugation", "raw": rt.raw, "corrected": rt.corrected})

    def same(x, y):
        if F.exact:
            return x == y
        return abs(float(x) - float(y)) <= F.tol * max(1.0, abs(float(y)))

    agree = all(same(v["corrected"], ref.corrected) for v in values)
    return {"reference": ref.corrected, "reference_raw": ref.raw, "values": values, "agree": agree}


# ---------------------------------------------------------------------------
# Test representations


def commutator(a: Matrix, b: Matrix) -> Matrix:
    return a @ b @ inverse(a) @ inverse(b)


def quad_sl2_fixture(genus: int = 2, field: QuadraticField | None = None) -> dict:
    """Exact ``SL(2, Q(sqrt 2))`` images satisfying the surface relation.

    ``a2 = C b1 C^-1``, ``b2 = C a1 C^-1`` with ``C = [a1, b1]`` give
    ``[a2, b2] = C^-1``; further handles commute (``b_k = a_k^2``).
    """
    F = field or QuadraticField(2)
    s = F.sqrt_d() if hasattr(F, "sqrt_d") else F(2) ** 0.5
    a1 = Matrix([[1 + s, F.one], [F.one, 2 * s - 2]], F)
    b1 = Matrix([[F(2), s], [s, F(QQ(3) / 2) if F.exact else 1.5]], F)
    C = commutator(a1, b1)
    Ci = inverse(C)
    out = {"a1": a1, "b1": b1, "a2": C @ b1 @ Ci, "b2": C @ a1 @ Ci}
    for k in range(3, genus + 1):
        a = a1 @ b1 if k % 2 else b1 @ a1 @ a1
        out[f"a{k}"] = a
        out[f"b{k}"] = a @ a
    return out


def quad_fixture(genus: int = 2, family: str = "sp", n: int = 2) -> SurfaceRepresentation:
    """The exact fixture pushed into ``family`` by the principal embedding."""
    return embed_sl2_images(quad_sl2_fixture(genus), genus, family, n)


@dataclass
class RelatorSolution:
    a2: np.ndarray
    b2: np.ndarray
    residual: float
    adjusted: bool


def _expm2(z: np.ndarray) -> np.ndarray:
    from scipy.linalg import expm

    return expm(z)


def solve_relator_genus2(a1, b1, a2, seed: int = 0, attempts: int = 20,
                         tol: float = 1e-12) -> RelatorSolution | None:
    """Find ``b2`` in ``SL(2, R)`` with ``[a1, b1][a2, b2] = I``.

    Writing ``T = [a1, b1]^-1`` the equation is ``b2 a2^-1 b2^-1 = a2^-1 T``,
    solvable iff ``tr(a2^-1 T) = tr(a2)``. When that fails, ``a2`` is moved
    along ``a2 exp(t Z)`` for a seeded ``Z`` in sl2 and ``t`` is found by a
    bracketing root finder. ``b2`` then solves a linear system, is scaled to
    determinant 1 and polished by damped Newton steps. Returns ``None`` on
    failure so the caller can reseed.
    """
    from scipy.optimize import brentq

    a1, b1, a2 = (np.array(x.to_float_list() if isinstance(x, Matrix) else x, dtype=float) for x in (a1, b1, a2))
    C = a1 @ b1 @ np.linalg.inv(a1) @ np.linalg.inv(b1)
    T = np.linalg.inv(C)
    rng = np.random.default_rng(seed)

    def gap(a):
        return np.trace(np.linalg.inv(a) @ T) - np.trace(a)

    def residual(a, b):
        r = C @ a @ b @ np.linalg.inv(a) @ np.linalg.inv(b)
        return float(np.max(np.abs(r - np.eye(2))))

    for _ in range(attempts):
        a = a2.copy()
        adjusted = False
        if abs(gap(a)) > 1e-13 * max(1.0, np.abs(T).max()):
            z = rng.normal(size=(2, 2))
            z[1, 1] = -z[0, 0]

            def f(t, z=z):
                return gap(a2 @ _expm2(t * z))

            # sign change of the gap closest to t = 0 on a coarse grid
            ts = np.linspace(-2.0, 2.0, 161)
            fs = np.array([f(t) for t in ts])
            cand = [i for i in range(len(ts) - 1)
                    if np.isfinite(fs[i]) and np.isfinite(fs[i + 1]) and fs[i] * fs[i + 1] < 0]
            if not cand:
                continue
            i = min(cand, key=lambda i: abs(ts[i]))
            lo, hi = ts[i], ts[i + 1]
            t = brentq(f, lo, hi, xtol=1e-15, rtol=1e-15, maxiter=200)
            a = a2 @ _expm2(t * z)
            adjusted = True
        ai = np.linalg.inv(a)
        # linear equation b a^-1 - a^-1 T b = 0 in the entries of b (row-major)
        L = np.kron(np.eye(2), ai.T) - np.kron(ai @ T, np.eye(2))
        _, sv, vt = np.linalg.svd(L)
        null = vt[-2:] if sv[-2] < 1e-8 * max(1.0, sv[0]) else vt[-1:]
        found_b = None
        for _k in range(50):
            coeff = rng.normal(size=null.shape[0])
            b = (coeff @ null).reshape(2, 2)
            db = np.linalg.det(b)
            if db > 1e-6:
                found_b = b / np.sqrt(db)
                break
        if found_b is None:
            continue
        b = found_b
        # damped Newton polish on the full system (commutator and determinant)
        # polish past ``tol``: errors are amplified by symmetric powers later
        for _k in range(40):
            res = residual(a, b)
            if res <= 1e-15:
                break
            x = b.ravel()

            def F_(x):
                bb = x.reshape(2, 2)
                r = a @ bb @ ai @ np.linalg.inv(bb) - T
                return np.concatenate([r.ravel(), [np.linalg.det(bb) - 1]])

            f0 = F_(x)
            J = np.empty((5, 4))
            h = 1e-7
            for i in range(4):
                e = np.zeros(4)
                e[i] = h
                J[:, i] = (F_(x + e) - F_(x - e)) / (2 * h)
            step = np.linalg.lstsq(J, -f0, rcond=None)[0]
            lam = 1.0
            while lam > 1e-4:
                xn = x + lam * step
                if np.linalg.norm(F_(xn)) < np.linalg.norm(f0):
                    b = xn.reshape(2, 2)
                    break
                lam /= 2
            else:
                break
        res = residual(a, b)
        if res <= tol:
            return RelatorSolution(a, b, res, adjusted)
    return None


def random_hyperbolic_sl2(rng: np.random.Generator, lo: float = 1.2, hi: float = 2.5,
                          max_cond: float = 4.0) -> np.ndarray:
    """``P diag(l, 1/l) P^-1`` with ``P`` random of determinant 1 and bounded condition number."""
    lam = rng.uniform(lo, hi)
    while True:
        p = rng.normal(size=(2, 2))
        if np.linalg.cond(p) <= max_cond:
            break
    if np.linalg.det(p) < 0:
        p[:, 0] *= -1
    p /= np.sqrt(np.linalg.det(p))
    return p @ np.diag([lam, 1 / lam]) @ np.linalg.inv(p)


def float_fixture(seed: int, family: str = "sp", n: int = 2, tol: float = 1e-9,
                  attempts: int = 20, max_entry: float = 8.0,
                  max_defect: float = 1e-11) -> tuple[SurfaceRepresentation, RelatorSolution]:
    """A genus-2 float representation from :func:`solve_relator_genus2`.

    Candidates are rejected when the SL(2) solution has entries above
    ``max_entry`` or the embedded relator misses ``+-I`` by more than
    ``max_defect``; rounding in those cases swamps later comparisons.
    """
    rng = np.random.default_rng(seed)
    for k in range(attempts):
        a1, b1, a2 = (random_hyperbolic_sl2(rng) for _ in range(3))
        sol = solve_relator_genus2(a1, b1, a2, seed=seed * 1000 + k)
        # large entries amplify the residual under the principal embedding
        if sol is None or max(np.abs(sol.a2).max(), np.abs(sol.b2).max()) > max_entry:
            continue
        F = RealField(tol)
        imgs = {x: Matrix(m.tolist(), F) for x, m in (("a1", a1), ("b1", b1), ("a2", sol.a2), ("b2", sol.b2))}
        rep = embed_sl2_images(imgs, 2, family, n, check=False)
        r = rep.of(rep.presentation.relator)
        i = Matrix.identity(rep.spec.m, F)
        if min((r - i).max_abs(), (r + i).max_abs()) > max_defect:
            continue
        return rep, sol
    raise RuntimeError(f"no float fixture found for seed {seed}")
