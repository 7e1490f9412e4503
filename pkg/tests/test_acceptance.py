"""The ten acceptance criteria; each test records one PASS/FAIL line for the run summary."""

import json
import random
import time
from fractions import Fraction

import sympy as sp

from torsionlab.chaincore import (
    apply_change_base,
    change_base_factor,
    les_torsion,
    milnor_sign,
    torsion,
)
from torsionlab.errors import GroupMembershipError, InvalidRepresentationError
from torsionlab.fieldlin import QQ, Matrix, det
from torsionlab.liealg import (
    ad_action,
    build_basis,
    diagonal_element,
    killing_form,
    killing_oracle,
    random_loxodromic,
)
from torsionlab.pairings import (
    FORM_SCALE,
    TrainTrack,
    dual_gram,
    form_conversion,
    thurston_form,
    verify_main_theorem,
)
from torsionlab.randgen import (
    random_complex,
    random_exact_triple,
    random_homology_basis,
    random_invertible,
    random_symplectic_complex,
)
from torsionlab.surfcx import (
    build_twisted_complex,
    float_fixture,
    invariance_suite,
    quad_fixture,
    representation_from_json,
)
from torsionlab.sympcc import torsion_via_symplectic


def record(acceptance, k: int, ok: bool, text: str) -> None:
    acceptance[k] = f"[{'PASS' if ok else 'FAIL'}] criterion {k:2d}: {text}"
    print(acceptance[k])


# -- 1 ------------------------------------------------------------------------


def test_criterion_01_symplectic_equivalence(acceptance):
    rng = random.Random(101)
    t0 = time.perf_counter()
    n, agree = 120, 0
    for _ in range(n):
        k, l = rng.randint(0, 6), rng.randint(0, 3)
        s = random_symplectic_complex(rng, k, l)
        h = random_homology_basis(rng, s.base)
        agree += torsion_via_symplectic(s, h).value == torsion(s.base, h).value
    elapsed = time.perf_counter() - t0
    ok = agree == n and elapsed < 10
    record(acceptance, 1, ok, f"symplectic closed form equals direct torsion on {agree}/{n} complexes in {elapsed:.2f}s")
    assert ok


# -- 2 ------------------------------------------------------------------------


def test_criterion_02_change_base(acceptance):
    rng = random.Random(202)
    n, agree = 120, 0
    for _ in range(n):
        dims = [rng.randint(0, 5) for _ in range(rng.randint(2, 4))]
        c = random_complex(rng, dims)
        h = random_homology_basis(rng, c)
        new_c = [random_invertible(rng, k) for k in c.dims]
        new_h = random_homology_basis(rng, c)
        direct = apply_change_base(c, h, new_c, new_h).value
        agree += direct == torsion(c, h).value * change_base_factor(c, h, new_c, new_h)
    record(acceptance, 2, agree == n, f"change-base formula exact on {agree}/{n} random pairs")
    assert agree == n


# -- 3 ------------------------------------------------------------------------


def test_criterion_03_milnor(acceptance):
    rng = random.Random(303)
    n, signed, literal, absolute = 60, 0, 0, 0
    for _ in range(n):
        length = rng.randint(1, 3)
        da = [rng.randint(0, 2) for _ in range(length + 1)]
        dd = [rng.randint(0, 2) for _ in range(length + 1)]
        t = random_exact_triple(rng, da, dd)
        ha, hb, hd = (random_homology_basis(rng, x) for x in (t.a, t.b, t.d))
        th = les_torsion(t.a, t.b, t.d, t.inclusion, t.projection, ha, hb, hd).value
        ta, tb, td = torsion(t.a, ha).value, torsion(t.b, hb).value, torsion(t.d, hd).value
        prod = ta * td * th
        literal += tb == prod
        absolute += abs(tb) == abs(prod)
        signed += tb == milnor_sign(t.a, t.b, t.d) * prod
    ok = signed == n and absolute == n
    record(acceptance, 3, ok,
           f"Milnor multiplicativity on {n} exact triples: signed {signed}/{n}, |.| {absolute}/{n}, "
           f"without the sign term {literal}/{n}")
    assert ok


# -- 4 ------------------------------------------------------------------------


def closed_form_ad_diagonal(family: str, n: int, lam) -> list:
    """Diagonal of Ad_D as closed-form lists in basis order (duplicate sp row dropped, so(n,n+1) with i<j)."""
    idx = range(n)
    ne = [(i, j) for i in idx for j in idx if i != j]
    lt = [(i, j) for i in idx for j in idx if i < j]
    if family == "sp":
        return ([sp.Integer(1)] * n + [lam[i] / lam[j] for i, j in ne] + [lam[i] ** 2 for i in idx]
                + [1 / lam[i] ** 2 for i in idx] + [lam[i] * lam[j] for i, j in lt]
                + [1 / (lam[i] * lam[j]) for i, j in lt])
    if family == "so_nn":
        return ([lam[i] / lam[j] for i, j in ne] + [sp.Integer(1)] * n
                + [lam[i] * lam[j] for i, j in lt] + [1 / (lam[i] * lam[j]) for i, j in lt])
    return ([sp.Integer(1)] * n + [lam[i] for i in idx] + [1 / lam[i] for i in idx]
            + [lam[i] / lam[j] for i, j in ne] + [lam[i] * lam[j] for i, j in lt]
            + [1 / (lam[i] * lam[j]) for i, j in lt])


def _sympy(m: Matrix) -> sp.Matrix:
    return sp.Matrix([[sp.Rational(str(x)) for x in row] for row in m.rows()])


def symbolic_ad_check(family: str, n: int) -> bool:
    spec = build_basis(family, n)
    lam = sp.symbols(f"l1:{n + 1}", positive=True)
    entries = list(lam) + [1 / x for x in lam]
    if family == "so_nn1":
        entries = [sp.Integer(1)] + entries
    D = sp.diag(*entries)
    want = closed_form_ad_diagonal(family, n, lam)
    if len(want) != spec.dim:
        return False
    for x, w in zip(spec.basis, want):
        X = _sympy(x)
        if sp.simplify(D * X * D.inv() - w * X) != sp.zeros(*X.shape):
            return False
    if sp.simplify(sp.prod(want)) != 1:
        return False
    # the exact adjoint matrix at a rational point agrees entry by entry
    vals = [QQ(2), QQ(3), QQ(5)][:n]
    a = ad_action(spec, diagonal_element(spec, vals))
    subs = dict(zip(lam, [sp.Rational(str(v)) for v in vals]))
    return _sympy(a) == sp.diag(*[w.subs(subs) for w in want])


def test_criterion_04_adjoint_determinant(acceptance):
    rng = random.Random(404)
    counts = {}
    for family, n in [("sp", 2), ("sp", 3), ("so_nn", 3), ("so_nn1", 2)]:
        spec = build_basis(family, n)
        counts[f"{family}{n}"] = sum(det(ad_action(spec, random_loxodromic(spec, rng))) == 1 for _ in range(50))
    symbolic = {f"{f}{n}": symbolic_ad_check(f, n)
                for f, n in [("sp", 2), ("sp", 3), ("so_nn", 3), ("so_nn1", 2), ("so_nn1", 3)]}
    ok = all(v == 50 for v in counts.values()) and all(symbolic.values())
    record(acceptance, 4, ok, f"det Ad_D = 1 counts {counts}; displayed diagonal lists match {symbolic}")
    assert ok


# -- 5 ------------------------------------------------------------------------


def test_criterion_05_killing_constants(acceptance):
    checked, bad = 0, []
    for family, n in [("sp", 2), ("sp", 3), ("so_nn", 3), ("so_nn1", 2), ("so_nn1", 3)]:
        spec = build_basis(family, n)
        for x in spec.basis:
            for y in spec.basis:
                checked += 1
                if killing_oracle(spec, x, y) != killing_form(spec, x, y):
                    bad.append((family, n))
    consts = {f"{f}{n}": build_basis(f, n).killing_constant
              for f, n in [("sp", 2), ("sp", 3), ("so_nn", 3), ("so_nn1", 2), ("so_nn1", 3)]}
    expected = {"sp2": 6, "sp3": 8, "so_nn3": 4, "so_nn12": 3, "so_nn13": 5}
    ok = not bad and consts == expected
    record(acceptance, 5, ok, f"Killing constants {consts} agree with trace(ad ad) on {checked} basis pairs")
    assert ok


# -- 6 ------------------------------------------------------------------------


def test_criterion_06_well_definedness(acceptance, octagon_rep):
    rng = random.Random(606)
    report = invariance_suite(octagon_rep, rng, cells="all")
    kinds = sorted({v["change"].split("(")[0].split(".")[0] for v in report["values"]})
    ok = report["agree"] and len(report["values"]) == 1 + 4 * 6 + 1
    record(acceptance, 6, ok,
           f"Q(sqrt 2) fixture torsion identical under {len(report['values'])} changes ({', '.join(kinds)})")
    assert ok


# -- 7 ------------------------------------------------------------------------


def test_criterion_07_main_theorem(acceptance, octagon_rep):
    t0 = time.perf_counter()
    exact = verify_main_theorem(octagon_rep, fixture="octagon")
    times = [time.perf_counter() - t0]
    gaps, residuals = [], []
    for seed in range(5):
        t0 = time.perf_counter()
        rep, sol = float_fixture(seed)
        r = verify_main_theorem(rep, fixture=f"float{seed}")
        times.append(time.perf_counter() - t0)
        gaps.append(r.relative_gap)
        residuals.append(sol.residual)
    ok = (exact.exact and exact.lhs == exact.rhs and max(gaps) <= 1e-6
          and max(residuals) <= 1e-12 and max(times) < 60)
    record(acceptance, 7, ok,
           f"|T||det K| = |Pf Omega| exactly on the Q(sqrt 2) fixture; 5 float fixtures max gap {max(gaps):.2e}, "
           f"max residual {max(residuals):.1e}, slowest {max(times):.1f}s")
    assert ok


# -- 8 ------------------------------------------------------------------------


def test_criterion_08_dual_gram(acceptance):
    rng = random.Random(808)
    n, agree = 60, 0
    for _ in range(n):
        m = 2 * rng.randint(1, 4)
        while True:
            q = Matrix([[rng.randint(-5, 5) for _ in range(m)] for _ in range(m)])
            g = q - q.T
            if det(g) != 0:
                break
        gs = dual_gram(g).matrix
        agree += (gs @ g.T).equals(Matrix.identity(m))
    record(acceptance, 8, agree == n, f"G* G^T = I exactly for {agree}/{n} skew matrices up to 8x8")
    assert agree == n


# -- 9 ------------------------------------------------------------------------


def test_criterion_09_twisted_sanity(acceptance, fixtures_dir):
    reps = {p.stem: representation_from_json(json.loads(p.read_text()))
            for p in sorted(fixtures_dir.glob("*_sp4*.json"))
            if p.stem not in ("perturbed_sp4", "wrong_relator_sp4")}
    reps["quad_genus3"] = quad_fixture(3)
    reps["quad_so23"] = quad_fixture(2, "so_nn1", 2)
    zero_ok, dims_ok, irreducible = True, True, []
    for name, rep in reps.items():
        c = build_twisted_complex(rep).complex
        zero_ok &= bool(c.field.exact and (c.boundary(1) @ c.boundary(2)).is_zero()) or (
            not c.field.exact and (c.boundary(1) @ c.boundary(2)).max_abs() <= 1e-8)
        tc = build_twisted_complex(rep)
        if tc.is_irreducible():
            irreducible.append(name)
            g, d = rep.presentation.genus, rep.spec.dim
            dims_ok &= list(c.homology_dims()) == [0, (2 * g - 2) * d, 0]
    rejected = 0
    for name in ("perturbed_sp4", "wrong_relator_sp4"):
        try:
            representation_from_json(json.loads((fixtures_dir / f"{name}.json").read_text()))
        except (InvalidRepresentationError, GroupMembershipError):
            rejected += 1
    ok = zero_ok and dims_ok and rejected == 2 and len(irreducible) >= 5
    record(acceptance, 9, ok,
           f"d1 d2 = 0 on {len(reps)} fixtures; dim H1 = (2g-2) dim g on {len(irreducible)} irreducible ones; "
           f"{rejected}/2 invalid inputs rejected")
    assert ok


# -- 10 -----------------------------------------------------------------------


def test_criterion_10_thurston(acceptance):
    rng = random.Random(1010)
    track = TrainTrack(("a", "b", "c", "d", "e", "f"), (("a", "b", "c"), ("d", "e", "f"), ("a", "d")))

    def cocycle():
        a, b, d, e = (rng.randint(-9, 9) for _ in range(4))
        return {"a": a, "b": b, "c": a + b, "d": d, "e": e, "f": d + e}

    anti = equal = 0
    n = 100
    for _ in range(n):
        s1, s2 = cocycle(), cocycle()
        anti += thurston_form(track, s1, s2) == -thurston_form(track, s2, s1)
        equal += thurston_form(track, s1, s1) == 0
    v = thurston_form(track, {"a": 1, "b": 0, "c": 1, "d": 0, "e": 0, "f": 0},
                      {"a": 0, "b": 1, "c": 1, "d": 0, "e": 0, "f": 0})
    chain = (form_conversion(1, "psl2", "wp") == -8 and form_conversion(1, "thurston", "psl2") == 2
             and form_conversion(1, "thurston", "wp") == -16
             and form_conversion(form_conversion(v, "thurston", "psl2"), "psl2", "wp")
             == form_conversion(v, "thurston", "wp")
             and FORM_SCALE["wp"] == -8 * FORM_SCALE["psl2"] == -16 * FORM_SCALE["thurston"])
    ok = anti == n and equal == n and v == Fraction(1, 2) and chain
    record(acceptance, 10, ok,
           f"antisymmetry {anti}/{n}, vanishing on equal cocycles {equal}/{n}, "
           f"single switch value {v}, WP = -8 PSL2 = -16 Thurston {'consistent' if chain else 'inconsistent'}")
    assert ok
