import random
from fractions import Fraction

import pytest

from mumford_cup.forms import (
    GammaModule,
    VValuedForm,
    enclosed_residue,
    invariance_defect,
    matinv,
    matmul,
    poincare_average,
    pullback_action,
    residue_on_annulus,
    second_kind_check,
)
from mumford_cup.geometry import Disc, Moebius, OrientedAnnulus
from mumford_cup.rational import RationalFunction
from mumford_cup.sampling import random_hyperbolic, random_pairing_module, small_rational
from mumford_cup.schottky import SchottkyData

P = 5
UNIPOTENT = GammaModule((((1, 1), (0, 1)),), ((0, 1), (-1, 0)))


def _genus1(module=None):
    module = module or GammaModule.trivial(1)
    return SchottkyData.from_discs(P, [Moebius(1, 0, 0, 150)], [Disc(0, 2, P)], [Disc(0, 1, P, True)], module)


def _random_form(rng, module, npoles=3):
    coords = []
    for _ in range(module.dim):
        poles = {}
        for _ in range(npoles):
            poles.setdefault(Fraction(rng.randint(-40, 40), rng.randint(1, 6)), {})[rng.randint(1, 3)] = \
                small_rational(rng, P)
        coords.append(RationalFunction([], poles))
    return VValuedForm(tuple(coords), module)


def test_action_is_a_left_action():
    rng = random.Random(2)
    M = UNIPOTENT
    for _ in range(10):
        om = _random_form(rng, M)
        g, h = random_hyperbolic(rng, P), random_hyperbolic(rng, P)
        rg = ((Fraction(1), Fraction(rng.randint(-3, 3))), (Fraction(0), Fraction(1)))
        rh = ((Fraction(1), Fraction(0)), (Fraction(rng.randint(-3, 3)), Fraction(1)))
        two_steps = pullback_action(pullback_action(om, h, rh), g, rg)
        one_step = pullback_action(om, g @ h, matmul(rg, rh))
        assert two_steps.equals(one_step)


def test_annulus_residue_matches_point_residues():
    rng = random.Random(5)
    for _ in range(30):
        M = random_pairing_module(rng, rng.choice((1, 2)))
        om = _random_form(rng, M)
        k = rng.randint(0, 2)
        e = OrientedAnnulus.around(Disc(Fraction(rng.randint(-5, 5)), k, P, rng.random() < 0.3), 1)
        try:
            got = residue_on_annulus(om, e, 30, 48)
        except Exception:
            continue  # a pole on the annulus
        exact = enclosed_residue(om, e)
        for a, b in zip(got, exact):
            assert a == b


def test_basis_change_roundtrip():
    M = UNIPOTENT
    S = ((Fraction(2), Fraction(1)), (Fraction(1), Fraction(1)))
    om = VValuedForm((RationalFunction.pole(3, 2), RationalFunction.pole(1, 2, 5)), M)
    there = om.change_basis(S)
    assert there.change_basis(matinv(S)).equals(om)
    assert not there.module.invariance_failures()


def test_average_invariance_grows_with_depth():
    # derived: the defect of the depth-L average of dz/(z - 1)^2 under z -> z/150
    # is set by the first omitted translates, 2L - 1 digits
    d = _genus1()
    seed = VValuedForm.basis_form(RationalFunction.pole(1, 2), 0, d.module)
    assert [invariance_defect(poincare_average(seed, d, L), d, 32) for L in (2, 4, 8)] == [3, 7, 15]


def test_coset_sum_is_exactly_invariant_in_genus_one():
    d = _genus1()
    seed = VValuedForm.basis_form(RationalFunction.pole(0, 1), 0, d.module)
    om = poincare_average(seed, d, 3, stabilizer=1)
    assert om.equals(seed)
    assert om.limit_points == frozenset({Fraction(0), None})
    assert second_kind_check(om).ok
    assert invariance_defect(om, d, 32) == 32


def test_coset_sum_needs_a_fixed_seed():
    d = _genus1()
    seed = VValuedForm.basis_form(RationalFunction.pole(1, 2), 0, d.module)
    with pytest.raises(ValueError):
        poincare_average(seed, d, 2, stabilizer=1)


def test_second_kind_witness():
    M = GammaModule.trivial(1)
    om = VValuedForm((RationalFunction([], {Fraction(2): {1: 3}, Fraction(7): {1: -3}}),), M)
    chk = second_kind_check(om)
    assert not chk.ok and chk.witness == 2 and chk.residue == (3,)


def test_module_checks():
    assert not UNIPOTENT.invariance_failures()
    bad = GammaModule((((1, 1), (0, 1)),), ((1, 0), (0, 1)))
    assert bad.invariance_failures() == [1]
    with pytest.raises(ValueError):
        GammaModule((((1, 1), (1, 1)),), ((1, 0), (0, 1)))
