import random
from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from torsionlab.chaincore import (
    ChainComplex,
    HomologyBasis,
    apply_change_base,
    chain_complex_from_json,
    chain_complex_to_json,
    change_base_factor,
    direct_sum,
    direct_sum_sign,
    direct_sum_homology,
    homology_basis_default,
    homology_basis_from_json,
    homology_basis_to_json,
    les_torsion,
    milnor_sign,
    torsion,
)
from torsionlab.errors import BasisError, ChainComplexError, CompatibilityError, ContractError, ExactnessError
from torsionlab.fieldlin import QQ, Matrix
from torsionlab.randgen import random_complex, random_exact_triple, random_homology_basis, random_invertible

seeds = st.integers(0, 10 ** 6)


def oracle_torsion(c: ChainComplex, h: HomologyBasis):
    """Independent evaluation with sympy: boundaries from columnspace, sections by pinv-free solve.

    Value is prod_p det(E_p in c_p coordinates) ** (-1) ** p.
    """
    total = sp.Integer(1)
    prev = None
    for p in range(c.length + 1):
        cols = []
        if p < c.length:
            bd = sp.Matrix(c.boundary(p + 1).tolist()) if c.dims[p + 1] and c.dims[p] else None
            b = bd.columnspace() if bd is not None else []
        else:
            b = []
        cols += b
        cols += [sp.Matrix(list(h[p].col(j))) for j in range(h[p].ncols)]
        if prev:
            dp = sp.Matrix(c.boundary(p).tolist())
            for v in prev:
                sol, params = dp.gauss_jordan_solve(v)
                cols.append(sol.subs({t: 0 for t in params}))
        prev = b
        if not c.dims[p]:
            continue
        e = sp.Matrix.hstack(*cols)
        cp = sp.Matrix(c.chain_bases[p].tolist())
        d = (cp.inv() * e).det()
        total *= d if p % 2 == 0 else 1 / d
    return Fraction(int(sp.numer(total)), int(sp.denom(total)))


def times(k):
    return ChainComplex.build([Matrix([[k]])])


# -- examples --------------------------------------------------------------------


def test_times_two_complex():
    # value is the reciprocal of the other common normalization (see README)
    assert torsion(times(2)).value == 2
    assert torsion(times(1)).value == 1


def test_zero_boundaries_h_equals_c():
    c = ChainComplex.build([Matrix.zeros(2, 3), Matrix.zeros(3, 1)], dims=[2, 3, 1])
    h = HomologyBasis(tuple(Matrix.identity(k) for k in c.dims))
    assert torsion(c, h).value == 1


def test_homology_basis_default_examples():
    c = ChainComplex.build([Matrix.zeros(1, 1)], dims=[1, 1])
    h = homology_basis_default(c)
    assert h[0].equals(Matrix.identity(1)) and h[1].equals(Matrix.identity(1))
    h = homology_basis_default(times(1))
    assert h.dims() == [0, 0]


def test_boundary_composition_checked():
    with pytest.raises(ChainComplexError) as exc:
        ChainComplex.build([Matrix([[1]]), Matrix([[1]])])
    assert exc.value.degree == 2


def test_bad_homology_basis_rejected():
    c = ChainComplex.build([Matrix.zeros(1, 1)], dims=[1, 1])
    with pytest.raises(ContractError):
        torsion(c, HomologyBasis((Matrix.zeros(1, 0), Matrix.identity(1))))


# -- oracle comparison --------------------------------------------------------------


@given(seeds, st.lists(st.integers(0, 3), min_size=2, max_size=4))
def test_torsion_matches_oracle(seed, dims):
    rng = random.Random(seed)
    c = random_complex(rng, dims)
    h = random_homology_basis(rng, c)
    assert torsion(c, h).value == oracle_torsion(c, h)


@given(seeds, st.lists(st.integers(0, 4), min_size=2, max_size=4))
def test_section_independence(seed, dims):
    rng = random.Random(seed)
    c = random_complex(rng, dims)
    h = random_homology_basis(rng, c)
    assert torsion(c, h, order="forward").value == torsion(c, h, order="reverse").value


# -- change of bases ---------------------------------------------------------------


def test_scale_chain_basis():
    c = ChainComplex.build([Matrix.zeros(1, 1)], dims=[1, 1])
    h = homology_basis_default(c)
    t0 = torsion(c, h).value
    t1 = apply_change_base(c, h, [Matrix.identity(1), Matrix([[3]])], h).value
    assert t1 == 3 * t0


def test_scale_homology_basis():
    c = ChainComplex.build([Matrix.zeros(1, 1)], dims=[1, 1])
    h = homology_basis_default(c)
    h2 = HomologyBasis((h[0], h[1] * QQ(2)))
    assert torsion(c, h2).value == torsion(c, h).value / 2


@given(seeds, st.lists(st.integers(0, 4), min_size=2, max_size=4))
def test_change_base_formula(seed, dims):
    rng = random.Random(seed)
    c = random_complex(rng, dims)
    h = random_homology_basis(rng, c)
    new_c = [random_invertible(rng, k) for k in c.dims]
    new_h = random_homology_basis(rng, c)
    direct = apply_change_base(c, h, new_c, new_h).value
    assert direct == torsion(c, h).value * change_base_factor(c, h, new_c, new_h)


def test_singular_new_basis():
    c = times(1)
    with pytest.raises(BasisError):
        apply_change_base(c, homology_basis_default(c), [Matrix([[0]]), Matrix([[1]])],
                          homology_basis_default(c))


# -- direct sums and exact sequences ---------------------------------------------------


def test_direct_sum_examples():
    s = direct_sum(times(2), times(2))
    assert torsion(s).value == 4
    zero = ChainComplex.build([Matrix.zeros(0, 0)], dims=[0, 0])
    a = times(5)
    assert torsion(direct_sum(a, zero)).value == torsion(a).value
    assert list(direct_sum(a, a).dims) == [2, 2]


@given(seeds, st.lists(st.integers(0, 3), min_size=2, max_size=4), st.lists(st.integers(0, 3), min_size=2, max_size=4))
def test_direct_sum_multiplicative(seed, da, dd):
    rng = random.Random(seed)
    n = max(len(da), len(dd))
    da, dd = da + [0] * (n - len(da)), dd + [0] * (n - len(dd))
    a, d = random_complex(rng, da), random_complex(rng, dd)
    ha, hd = random_homology_basis(rng, a), random_homology_basis(rng, d)
    s = direct_sum(a, d)
    lhs = torsion(s, direct_sum_homology(ha, hd)).value
    rhs = torsion(a, ha).value * torsion(d, hd).value
    assert abs(lhs) == abs(rhs)
    assert lhs == direct_sum_sign(a, d) * rhs


def _milnor_parts(t, rng):
    ha, hb, hd = (random_homology_basis(rng, x) for x in (t.a, t.b, t.d))
    th = les_torsion(t.a, t.b, t.d, t.inclusion, t.projection, ha, hb, hd).value
    return torsion(t.a, ha).value, torsion(t.b, hb).value, torsion(t.d, hd).value, th


@given(seeds, st.integers(1, 3))
def test_milnor_signed(seed, length):
    rng = random.Random(seed)
    da = [rng.randint(0, 2) for _ in range(length + 1)]
    dd = [rng.randint(0, 2) for _ in range(length + 1)]
    t = random_exact_triple(rng, da, dd)
    ta, tb, td, th = _milnor_parts(t, rng)
    assert tb == milnor_sign(t.a, t.b, t.d) * ta * td * th


def test_milnor_trivial():
    rng = random.Random(1)
    t = random_exact_triple(rng, [0, 0], [0, 0])
    assert _milnor_parts(t, rng)[3] == 1


def test_les_rejects_non_exact():
    rng = random.Random(2)
    t = random_exact_triple(rng, [1, 1], [1, 1])
    bad = (t.inclusion[0] * QQ(0), t.inclusion[1])
    h = [homology_basis_default(x) for x in (t.a, t.b, t.d)]
    with pytest.raises(ExactnessError):
        les_torsion(t.a, t.b, t.d, bad, t.projection, *h)


def test_les_rejects_incompatible_bases():
    rng = random.Random(3)
    t = random_exact_triple(rng, [1, 1], [1, 1])
    b = t.b.with_chain_bases([m * QQ(2) for m in t.b.chain_bases])
    h = [homology_basis_default(x) for x in (t.a, b, t.d)]
    with pytest.raises(CompatibilityError):
        les_torsion(t.a, b, t.d, t.inclusion, t.projection, *h)


# -- JSON ----------------------------------------------------------------------------


def test_json_roundtrip(rng):
    c = random_complex(rng, [2, 3, 1])
    back = chain_complex_from_json(chain_complex_to_json(c), QQ)
    assert back.dims == c.dims
    assert all(x.equals(y) for x, y in zip(back.boundaries, c.boundaries))
    assert all(x.equals(y) for x, y in zip(back.chain_bases, c.chain_bases))
    h = random_homology_basis(rng, c)
    hb = homology_basis_from_json(homology_basis_to_json(h), QQ)
    assert torsion(back, hb).value == torsion(c, h).value
