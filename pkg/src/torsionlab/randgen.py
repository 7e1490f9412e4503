"""Seeded random instances: complexes, exact triples and symplectic complexes.

Everything is built exactly over the requested field from small integers, so
the generators double as fixtures for the exact test suite.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

from .chaincore import ChainComplex, HomologyBasis, homology_basis_default
from .fieldlin import QQ, Field, Matrix, block, det, hstack, image_basis, inverse, vstack
from .sympcc import SymplecticChainComplex, standard_symplectic


def random_matrix(rng: random.Random, r: int, c: int, field: Field = QQ, k: int = 3) -> Matrix:
    return Matrix([[field(rng.randint(-k, k)) for _ in range(c)] for _ in range(r)], field, ncols=c)


def random_invertible(rng: random.Random, n: int, field: Field = QQ, k: int = 3) -> Matrix:
    while True:
        m = random_matrix(rng, n, n, field, k)
        if n == 0 or not field.is_zero(det(m)):
            return m


def random_ranks(rng: random.Random, dims: Sequence[int]) -> list:
    """Ranks ``r_1..r_n`` with ``r_p + r_{p+1} <= dims[p]``; ``r_0 = r_{n+1} = 0``."""
    n = len(dims) - 1
    ranks = [0] * (n + 2)
    for p in range(1, n + 1):
        cap = min(dims[p], dims[p - 1] - ranks[p - 1])
        ranks[p] = rng.randint(0, max(cap, 0))
    return ranks


def random_complex(rng: random.Random, dims: Sequence[int], field: Field = QQ,
                   ranks: Sequence[int] | None = None, random_bases: bool = True) -> ChainComplex:
    """A complex with prescribed dimensions, disguised by random coordinate changes."""
    n = len(dims) - 1
    if ranks is None:
        ranks = random_ranks(rng, dims)
    P = [random_invertible(rng, k, field) for k in dims]
    bds = []
    for p in range(1, n + 1):
        r = ranks[p]
        m = [[field.zero] * dims[p] for _ in range(dims[p - 1])]
        for j in range(r):
            m[dims[p - 1] - r + j][j] = field.one
        d0 = Matrix(m, field, ncols=dims[p])
        bds.append(P[p - 1] @ d0 @ inverse(P[p]) if dims[p] and dims[p - 1] else d0)
    bases = [random_invertible(rng, k, field) for k in dims] if random_bases else None
    return ChainComplex.build(bds, dims=dims, chain_bases=bases, field=field)


def random_homology_basis(rng: random.Random, c: ChainComplex) -> HomologyBasis:
    """A random basis of representatives: mixes classes and adds boundaries."""
    h = homology_basis_default(c)
    out = []
    for p in range(c.length + 1):
        hp = h[p]
        if hp.ncols == 0:
            out.append(hp)
            continue
        m = random_invertible(rng, hp.ncols, c.field)
        b = image_basis(c.boundary(p + 1))
        new = hp @ m
        if b.ncols:
            new = new + b @ random_matrix(rng, b.ncols, hp.ncols, c.field)
        out.append(new)
    return HomologyBasis(tuple(out))


@dataclass
class ExactTriple:
    a: ChainComplex
    b: ChainComplex
    d: ChainComplex
    inclusion: tuple
    projection: tuple


def random_exact_triple(rng: random.Random, dims_a: Sequence[int], dims_d: Sequence[int],
                        field: Field = QQ, linked: bool = True) -> ExactTriple:
    """``0 -> A -> B -> D -> 0`` with compatible chain bases.

    With ``linked`` the complex ``A`` contains a shifted copy of ``D`` that
    the extension glues to ``D``, so the connecting maps are nonzero.
    """
    n = len(dims_d) - 1
    d0 = random_complex(rng, dims_d, field, random_bases=False)
    extra = random_complex(rng, list(dims_a) + [0] * (n + 1 - len(dims_a)), field, random_bases=False)
    # A = D[-1] (+) extra in canonical coordinates
    copy_dims = [dims_d[q + 1] if (linked and q + 1 <= n) else 0 for q in range(n + 1)]
    a_dims = [copy_dims[q] + extra.dims[q] for q in range(n + 1)]
    a_bds = []
    for q in range(1, n + 1):
        top = d0.boundary(q + 1) if linked and q + 1 <= n else Matrix.zeros(copy_dims[q - 1], copy_dims[q], field)
        a_bds.append(block([[top, Matrix.zeros(copy_dims[q - 1], extra.dims[q], field)],
                            [Matrix.zeros(extra.dims[q - 1], copy_dims[q], field), extra.boundary(q)]]))
    a0 = ChainComplex.build(a_bds, dims=a_dims, field=field)

    def phi(q):  # chain map D_q -> A_{q-1}
        m = Matrix.zeros(a_dims[q - 1], dims_d[q], field)
        if linked and copy_dims[q - 1]:
            m = vstack(Matrix.identity(dims_d[q], field), Matrix.zeros(extra.dims[q - 1], dims_d[q], field))
        return m

    Y = [random_matrix(rng, a_dims[q], dims_d[q], field) for q in range(n + 1)]
    b_bds = []
    for q in range(1, n + 1):
        g = phi(q) if q % 2 == 0 else -phi(q)
        x = g + a0.boundary(q) @ Y[q] - Y[q - 1] @ d0.boundary(q)
        b_bds.append(block([[a0.boundary(q), x], [Matrix.zeros(dims_d[q - 1], a_dims[q], field), d0.boundary(q)]]))
    b_dims = [a_dims[q] + dims_d[q] for q in range(n + 1)]

    # random coordinates on all three complexes
    PA = [random_invertible(rng, k, field) for k in a_dims]
    PD = [random_invertible(rng, k, field) for k in dims_d]
    PB = [random_invertible(rng, k, field) for k in b_dims]

    def conj(P, bds):
        return [inverse(P[q - 1]) @ bds[q - 1] @ P[q] if P[q].nrows and P[q - 1].nrows else bds[q - 1]
                for q in range(1, n + 1)]

    inv = lambda m: inverse(m) if m.nrows else m  # noqa: E731
    cA = [random_invertible(rng, k, field) for k in a_dims]
    cD = [random_invertible(rng, k, field) for k in dims_d]
    cB = []
    incl, proj = [], []
    for q in range(n + 1):
        ka, kd = a_dims[q], dims_d[q]
        R = random_matrix(rng, ka, kd, field)
        canon = block([[cA[q], R], [Matrix.zeros(kd, ka, field), cD[q]]])
        cB.append(inv(PB[q]) @ canon)
        i0 = vstack(Matrix.identity(ka, field), Matrix.zeros(kd, ka, field))
        p0 = hstack(Matrix.zeros(kd, ka, field), Matrix.identity(kd, field))
        incl.append(inv(PB[q]) @ i0 @ PA[q])
        proj.append(inv(PD[q]) @ p0 @ PB[q])
    a = ChainComplex.build(conj(PA, a0.boundaries), dims=a_dims,
                           chain_bases=[inv(PA[q]) @ cA[q] for q in range(n + 1)], field=field)
    d = ChainComplex.build(conj(PD, d0.boundaries), dims=dims_d,
                           chain_bases=[inv(PD[q]) @ cD[q] for q in range(n + 1)], field=field)
    b = ChainComplex.build(conj(PB, b_bds), dims=b_dims, chain_bases=cB, field=field)
    return ExactTriple(a, b, d, tuple(incl), tuple(proj))


def random_symplectic_matrix(rng: random.Random, l: int, field: Field = QQ, steps: int = 4) -> Matrix:
    """Product of random symplectic shears and ``diag(P, P^-T)`` blocks."""
    z = Matrix.zeros(l, l, field)
    i = Matrix.identity(l, field)
    s = Matrix.identity(2 * l, field)
    for _ in range(steps):
        a = random_matrix(rng, l, l, field, 2)
        a = a + a.T
        kind = rng.randrange(3)
        if kind == 0:
            g = block([[i, a], [z, i]])
        elif kind == 1:
            g = block([[i, z], [a, i]])
        else:
            p = random_invertible(rng, l, field, 2)
            g = block([[p, z], [z, inverse(p).T]])
        s = s @ g
    return s


def random_symplectic_complex(rng: random.Random, k: int, l: int, rank: int | None = None,
                              field: Field = QQ, random_bases: bool = True) -> SymplecticChainComplex:
    """Length-2 complex ``C_2 -> C_1 -> C_0`` of dims ``(k, 2l, k)`` with compatible pairings.

    ``rank`` bounds the rank of ``d_2``; the random factorisation may drop it.
    """
    if rank is None:
        rank = rng.randint(0, min(k, l))
    x = Matrix.zeros(l, k, field)
    if rank:
        x = random_matrix(rng, l, rank, field) @ random_matrix(rng, rank, k, field)
    S = random_symplectic_matrix(rng, l, field) if l else Matrix.identity(0, field)
    d2 = S @ vstack(x, Matrix.zeros(l, k, field))
    J = standard_symplectic(l, field)
    d1 = d2.T @ J
    W0 = Matrix.identity(k, field)
    # disguise with coordinate changes v = P v'
    P0, P1, P2 = (random_invertible(rng, m, field) for m in (k, 2 * l, k))

    def iv(m):
        return inverse(m) if m.nrows else m

    d1n = iv(P0) @ d1 @ P1
    d2n = iv(P1) @ d2 @ P2
    W0n = P0.T @ W0 @ P2
    W1n = P1.T @ J @ P1
    bases = [random_invertible(rng, m, field) for m in (k, 2 * l, k)] if random_bases else None
    base = ChainComplex.build([d1n, d2n], dims=[k, 2 * l, k], chain_bases=bases, field=field)
    return SymplecticChainComplex(base, (W0n, W1n))


def random_symplectic_complex_canonical(rng: random.Random, n: int, ranks: Sequence[int],
                                        hdims: Sequence[int], field: Field = QQ,
                                        random_bases: bool = True) -> SymplecticChainComplex:
    """Length-``2n`` symplectic complex from a boundary/homology/section model.

    ``ranks[p-1]`` is the rank of ``d_p`` for ``p = 1..n`` and ``hdims[p]`` the
    dimension of ``H_p`` for ``p = 0..n`` (``hdims[n]`` even); the upper half
    is fixed by duality. Each ``C_p`` is spanned by boundaries ``A_p``,
    homology ``H_p`` and sections ``S_p`` with ``d S_p = A_{p-1}``.
    """
    L = 2 * n
    r = [0] + list(ranks) + list(reversed(ranks)) + [0]  # r[p] = rank d_p, p = 0..2n+1
    h = list(hdims) + list(reversed(hdims[:-1]))
    if h[n] % 2:
        raise ValueError("middle homology must be even dimensional")
    sizes = [(r[p + 1], h[p], r[p]) for p in range(L + 1)]
    dims = [sum(s) for s in sizes]
    bds = []
    for p in range(1, L + 1):
        m = [[field.zero] * dims[p] for _ in range(dims[p - 1])]
        off = sizes[p][0] + sizes[p][1]
        for j in range(r[p]):
            m[j][off + j] = field.one
        bds.append(Matrix(m, field, ncols=dims[p]))
    X = [random_invertible(rng, r[p + 1], field) for p in range(n)]
    grams = []
    for p in range(n + 1):
        ra, hp, rs = sizes[p]
        xp = X[p] if p < n else X[n - 1].T
        yp = Matrix.zeros(0, 0, field) if p == 0 else (X[p - 1] if p % 2 == 0 else -X[p - 1])
        if p < n:
            gh = random_invertible(rng, hp, field)
        else:
            q = random_matrix(rng, hp, hp, field)
            gh = q - q.T
            while hp and field.is_zero(det(gh)):
                q = random_matrix(rng, hp, hp, field)
                gh = q - q.T
        cols = sizes[L - p]  # (A', H', S') of C_{2n-p}
        z = Matrix.zeros
        grams.append(block([
            [z(ra, cols[0], field), z(ra, cols[1], field), xp],
            [z(hp, cols[0], field), gh, z(hp, cols[2], field)],
            [yp, z(rs, cols[1], field), z(rs, cols[2], field)],
        ]))
    P = [random_invertible(rng, k, field) for k in dims]

    def iv(m):
        return inverse(m) if m.nrows else m

    bds = [iv(P[p - 1]) @ bds[p - 1] @ P[p] if dims[p] and dims[p - 1] else bds[p - 1] for p in range(1, L + 1)]
    grams = [P[p].T @ grams[p] @ P[L - p] for p in range(n + 1)]
    bases = [random_invertible(rng, k, field) for k in dims] if random_bases else None
    base = ChainComplex.build(bds, dims=dims, chain_bases=bases, field=field)
    return SymplecticChainComplex(base, tuple(grams))
