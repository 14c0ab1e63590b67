import itertools
import random
from fractions import Fraction

import pytest

from wallcross import gitdata as gd
from wallcross import linalg as la

P2 = gd.GitData(1, ((1,), (1,), (1,)))
F1 = gd.GitData(2, ((0, 1), (-1, 1), (1, 0), (1, 0)))
CONIFOLD = gd.GitData(1, ((1,), (1,), (-1,), (-1,)))
TYPE3 = gd.GitData(1, ((1,), (-2,)))
P112 = gd.GitData(1, ((1,), (1,), (2,)))

F1_OMEGA_PLUS = (1, 1)
F1_OMEGA_MINUS = (-1, 2)


def brute_minimal_anticones(git, omega):
    """Independent oracle: strict feasibility over all subsets, then take
    inclusion-minimal ones."""
    members = []
    for k in range(1, git.m + 1):
        for combo in itertools.combinations(range(git.m), k):
            if gd.strictly_spans(git, combo, omega):
                members.append(frozenset(combo))
    minimal = [
        s for s in members if not any(t < s for t in members)
    ]
    return frozenset(minimal)


# ---------------------------------------------------------------------------
# validate


def test_validate_p2():
    diag = gd.validate(P2)
    assert diag.valid and diag.full_rank


def test_validate_too_few_chars():
    g = gd.GitData(2, ((1, 0),))
    diag = gd.validate(g)
    assert not diag.enough_chars and not diag.valid


def test_validate_f1():
    assert gd.validate(F1).valid


# ---------------------------------------------------------------------------
# anticones / extended sets / chambers


def test_anticones_p2():
    cones = gd.anticones(P2, (1,))
    assert cones.minimal == frozenset({frozenset({0}), frozenset({1}), frozenset({2})})


def test_anticones_f1_interior():
    cones = gd.anticones(F1, F1_OMEGA_PLUS)
    expected = frozenset(
        {frozenset(s) for s in ({0, 2}, {0, 3}, {1, 2}, {1, 3})}
    )
    assert cones.minimal == expected
    assert cones.minimal == brute_minimal_anticones(F1, F1_OMEGA_PLUS)


def test_anticones_f1_other_side():
    cones = gd.anticones(F1, F1_OMEGA_MINUS)
    assert cones.minimal == brute_minimal_anticones(F1, F1_OMEGA_MINUS)
    # (-1,2) = 1*(-1,1) + 1*(0,1): the pair {D1, D2} is a minimal anticone
    assert frozenset({0, 1}) in cones.minimal


def test_anticones_outside_span():
    with pytest.raises(gd.InfeasibleStability):
        gd.anticones(P2, (-1,))


def test_extended_sets():
    assert gd.extended_set(P2, (1,)) == frozenset()
    assert gd.extended_set(F1, F1_OMEGA_PLUS) == frozenset()
    assert gd.extended_set(F1, F1_OMEGA_MINUS) == frozenset({1})
    assert gd.extended_set(TYPE3, (1,)) == frozenset({0})
    assert gd.extended_set(TYPE3, (-1,)) == frozenset({1})


def test_same_chamber():
    assert gd.same_chamber(F1, (1, 1), (1, 2))
    assert not gd.same_chamber(F1, (1, 1), (-1, 2))
    assert gd.same_chamber(F1, (2, 3), (2, 3))


def test_anticone_upward_closure_property():
    # on valid data with full-dimensional chambers, membership is closed
    # under adding indices (enumerated exhaustively, m <= 8)
    rng = random.Random(31)
    datasets = [(P2, (1,)), (F1, F1_OMEGA_PLUS), (F1, F1_OMEGA_MINUS), (CONIFOLD, (1,))]
    count = 0
    for _ in range(40):
        r = rng.randint(1, 2)
        m = rng.randint(r + 1, 5)
        chars = tuple(
            tuple(rng.randint(-2, 2) for _ in range(r)) for _ in range(m)
        )
        g = gd.GitData(r, chars)
        if not gd.validate(g).valid:
            continue
        omega = tuple(rng.randint(-2, 2) for _ in range(r))
        try:
            cones = gd.anticones(g, omega)
        except gd.InfeasibleStability:
            continue
        # only keep stability conditions with a full-dimensional chamber
        if any(
            la.rank([list(g.chars[i]) for i in sorted(mini)]) != r
            for mini in cones.minimal
        ):
            continue
        datasets.append((g, omega))
        count += 1
    for g, omega in datasets:
        cones = gd.anticones(g, omega)
        for k in range(g.m + 1):
            for combo in itertools.combinations(range(g.m), k):
                s = frozenset(combo)
                member = gd.strictly_spans(g, s, omega)
                assert member == cones.contains(s) or (member and cones.contains(s))
                if member:
                    for extra in range(g.m):
                        assert gd.strictly_spans(g, s | {extra}, omega)


# ---------------------------------------------------------------------------
# wall classification


def test_classify_conifold_wall():
    w = gd.classify_wall(CONIFOLD, (1,), (-1,))
    assert w.e == (1,)
    assert w.m_plus == frozenset({0, 1})
    assert w.m_minus == frozenset({2, 3})
    assert w.crepancy == 0 and w.crepant
    assert w.wall_type == gd.WallType.I


def test_classify_f1_p2_wall():
    w = gd.classify_wall(F1, F1_OMEGA_PLUS, F1_OMEGA_MINUS)
    assert w.e == (1, 0)
    assert w.m_plus == frozenset({2, 3})
    assert w.m_minus == frozenset({1})
    assert w.m_zero == frozenset({0})
    assert w.crepancy == 1
    assert w.wall_type == gd.WallType.II_REMOVE_RAY
    assert w.s_minus == w.s_plus | {1}


def test_classify_type3_wall():
    w = gd.classify_wall(TYPE3, (1,), (-1,))
    assert w.e == (1,)
    assert w.m_plus == frozenset({0})
    assert w.m_minus == frozenset({1})
    assert w.crepancy == -1
    assert w.wall_type == gd.WallType.III


def test_classify_rejects_same_chamber():
    with pytest.raises(gd.NotAdjacent):
        gd.classify_wall(F1, (1, 1), (1, 2))


def test_wall_flip_symmetry():
    cases = [
        (CONIFOLD, (1,), (-1,)),
        (F1, F1_OMEGA_PLUS, F1_OMEGA_MINUS),
        (TYPE3, (1,), (-1,)),
    ]
    swap = {
        gd.WallType.I: gd.WallType.I,
        gd.WallType.II_REMOVE_RAY: gd.WallType.II_ADD_RAY,
        gd.WallType.II_ADD_RAY: gd.WallType.II_REMOVE_RAY,
        gd.WallType.III: gd.WallType.III,
    }
    for git, wp, wm in cases:
        w = gd.classify_wall(git, wp, wm)
        v = gd.classify_wall(git, wm, wp)
        assert v.e == tuple(-x for x in w.e)
        assert v.m_plus == w.m_minus and v.m_minus == w.m_plus
        assert v.s_plus == w.s_minus and v.s_minus == w.s_plus
        assert v.wall_type == swap[w.wall_type]
        assert v.crepancy == -w.crepancy
        # partition property and primitivity
        assert w.m_plus | w.m_minus | w.m_zero == frozenset(range(git.m))
        assert not (w.m_plus & w.m_minus)
        assert la.primitive(w.e) in (w.e, tuple(-x for x in w.e))


def brute_type_from_sets(w: gd.WallCrossing) -> gd.WallType:
    """Oracle: derive the type from the extended sets and part sizes only."""
    if len(w.m_plus) == 1 and len(w.m_minus) == 1:
        return gd.WallType.III
    if len(w.m_plus) >= 2 and len(w.m_minus) >= 2:
        assert w.s_plus == w.s_minus
        return gd.WallType.I
    if len(w.m_minus) == 1:
        assert w.s_minus == w.s_plus | w.m_minus
        return gd.WallType.II_REMOVE_RAY
    assert w.s_plus == w.s_minus | w.m_plus
    return gd.WallType.II_ADD_RAY


def test_type_matches_bruteforce_classifier():
    cases = [
        (CONIFOLD, (1,), (-1,)),
        (F1, F1_OMEGA_PLUS, F1_OMEGA_MINUS),
        (F1, F1_OMEGA_MINUS, F1_OMEGA_PLUS),
        (TYPE3, (1,), (-1,)),
    ]
    for git, wp, wm in cases:
        w = gd.classify_wall(git, wp, wm)
        assert w.wall_type == brute_type_from_sets(w)


# ---------------------------------------------------------------------------
# class enumeration


def test_kset_p112():
    samples = gd.kset_enumerate(P112, (1,), [(1,)], 1)
    ds = [s.d[0] for s in samples]
    assert ds == [Fraction(0), Fraction(1, 2), Fraction(1)]
    half = samples[1]
    assert half.age == 1
    assert half.sector == (Fraction(1, 2), Fraction(1, 2), Fraction(0))


def test_kset_p2():
    samples = gd.kset_enumerate(P2, (1,), [(1,)], 2)
    assert [s.d[0] for s in samples] == [0, 1, 2]
    assert all(s.age == 0 for s in samples)


def test_kset_f1_unit_box():
    p_basis = [(0, 1), (1, 0)]  # H then P
    samples = gd.kset_enumerate(F1, F1_OMEGA_PLUS, p_basis, 1)
    pts = {tuple(s.d) for s in samples}
    assert pts == {
        (Fraction(0), Fraction(0)),
        (Fraction(1), Fraction(0)),
        (Fraction(0), Fraction(1)),
        (Fraction(1), Fraction(1)),
    }


def test_kset_unbounded_box_rejected():
    with pytest.raises(gd.UnboundedEnumeration):
        gd.kset_enumerate(F1, F1_OMEGA_PLUS, [(0, 1), (0, 2)], 3)


def test_kset_lattice_closure_and_age_property():
    # d in K and l integral -> d + l in K; age(d) + age(-d) is an integer
    for git, omega, basis, bound in [
        (P112, (1,), [(1,)], 2),
        (P2, (1,), [(1,)], 2),
        (F1, F1_OMEGA_PLUS, [(0, 1), (1, 0)], 2),
    ]:
        cones = gd.anticones(git, omega)
        samples = gd.kset_enumerate(git, omega, basis, bound)
        assert len(samples) >= 3
        for s in samples:
            for shift in itertools.product((-1, 0, 1), repeat=git.rank):
                d2 = tuple(a + b for a, b in zip(s.d, shift))
                assert gd.in_kset(git, cones, d2)
            minus = gd.make_sample(git, tuple(-x for x in s.d), basis)
            total = s.age + minus.age
            assert total.denominator == 1


# ---------------------------------------------------------------------------
# derived GIT data


def test_blowup_f1_wall():
    w = gd.classify_wall(F1, F1_OMEGA_PLUS, F1_OMEGA_MINUS)
    derived = gd.blowup_git(F1, w)
    g = derived.git
    assert g.rank == 3 and g.m == 5
    assert g.chars[0] == (0, 1, 0)
    assert g.chars[1] == (-1, 1, 0)
    assert g.chars[2] == (1, 0, -1)
    assert g.chars[3] == (1, 0, -1)
    assert g.chars[4] == (0, 0, 1)


def test_blowup_conifold_wall():
    w = gd.classify_wall(CONIFOLD, (1,), (-1,))
    derived = gd.blowup_git(CONIFOLD, w)
    g = derived.git
    assert g.chars == ((1, -1), (1, -1), (-1, 0), (-1, 0), (0, 1))


def test_blowup_exceptional_relation_random_walls():
    # the lattice relation b_{m+1} = sum (D_i.e) b_i must hold in the
    # cokernel computed by Smith normal form, for every classified wall
    cases = [
        (CONIFOLD, (1,), (-1,)),
        (F1, F1_OMEGA_PLUS, F1_OMEGA_MINUS),
        (TYPE3, (1,), (-1,)),
    ]
    for git, wp, wm in cases:
        w = gd.classify_wall(git, wp, wm)
        derived = gd.blowup_git(git, w)  # raises if the relation fails
        assert derived.extra["exceptional_index"] == git.m


def test_local_model_f1_is_flop():
    w = gd.classify_wall(F1, F1_OMEGA_PLUS, F1_OMEGA_MINUS)
    derived = gd.local_model_git(F1, w)
    induced = derived.extra["induced_wall"]
    assert len(induced.m_plus) == 2 and len(induced.m_minus) == 2
    assert induced.crepancy == 0
    assert induced.wall_type == gd.WallType.I


def test_local_model_conifold_stays_crepant():
    w = gd.classify_wall(CONIFOLD, (1,), (-1,))
    derived = gd.local_model_git(CONIFOLD, w)
    induced = derived.extra["induced_wall"]
    assert induced.crepant and induced.wall_type == w.wall_type


def test_local_model_empty_indices_rejected():
    w = gd.classify_wall(CONIFOLD, (1,), (-1,))
    with pytest.raises(gd.GitError):
        gd.local_model_git(CONIFOLD, w, divisor_indices=())


def test_proj_bundle_f1_two_walls():
    w = gd.classify_wall(F1, F1_OMEGA_PLUS, F1_OMEGA_MINUS)
    derived = gd.proj_bundle_git(F1, w)
    e1, e2 = derived.extra["wall_normals"]
    assert e1 == (1, 0, 0)
    assert e2 == (1, 0, 1)
    first, second = derived.extra["crossings"]
    assert first.crepant and first.wall_type == gd.WallType.I
    assert (not second.crepant) and second.wall_type == gd.WallType.II_REMOVE_RAY


def test_proj_bundle_conifold_single_wall():
    w = gd.classify_wall(CONIFOLD, (1,), (-1,))
    derived = gd.proj_bundle_git(CONIFOLD, w)
    e1, e2 = derived.extra["wall_normals"]
    assert e1 == e2
    (crossing,) = derived.extra["crossings"]
    assert crossing.crepant


def test_proj_bundle_epsilon_positive():
    w = gd.classify_wall(CONIFOLD, (1,), (-1,))
    with pytest.raises(gd.GitError):
        gd.proj_bundle_git(CONIFOLD, w, epsilon=0)


# ---------------------------------------------------------------------------
# basis / change of variables


def test_change_of_variables_conifold():
    w = gd.classify_wall(CONIFOLD, (1,), (-1,))
    basis = gd.BasisChoice(p_plus=((1,),), p_minus=((-1,),))
    cov = gd.change_of_variables(CONIFOLD, w, basis)
    assert cov.c == 1
    assert cov.c_list == ()
    # yt = y^(-1)
    assert cov.minus_exponents_in_plus_variables((Fraction(5),)) == (Fraction(-5),)


def test_change_of_variables_f1():
    w = gd.classify_wall(F1, F1_OMEGA_PLUS, F1_OMEGA_MINUS)
    basis = gd.BasisChoice(
        p_plus=((0, 1), (1, 0)),  # H, P
        p_minus=((0, 1), (-1, 1)),  # H, exceptional-dual direction
    )
    cov = gd.change_of_variables(F1, w, basis)
    assert cov.c == 1
    assert cov.c_list == (Fraction(1),)
    # exponent oracle over a box is run inside change_of_variables already;
    # spot-check one class: d = (1, 2)
    d = (1, 2)
    plus = tuple(la.dot(p, d) for p in basis.p_plus)
    minus = tuple(la.dot(p, d) for p in basis.p_minus)
    assert cov.minus_exponents_in_plus_variables(minus) == plus


def test_change_of_variables_rejects_bad_basis():
    w = gd.classify_wall(F1, F1_OMEGA_PLUS, F1_OMEGA_MINUS)
    # shared vector not on the wall
    bad = gd.BasisChoice(p_plus=((1, 0), (0, 1)), p_minus=((1, 0), (-1, 1)))
    with pytest.raises(gd.InvalidBasis):
        gd.change_of_variables(F1, w, bad)
