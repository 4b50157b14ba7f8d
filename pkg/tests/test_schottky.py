from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from mumford_cup.forms import VValuedForm
from mumford_cup.geometry import GeometryError
from mumford_cup.rational import RationalFunction
from mumford_cup.scene import load
from mumford_cup.schottky import FundamentalDomain, poles_in_F, reduced_words, validate, word_count


@given(st.integers(1, 3), st.integers(0, 4))
def test_word_count_formula(g, L):
    assert word_count(g, L) == 1 + sum(2 * g * (2 * g - 1) ** (k - 1) for k in range(1, L + 1))


def test_words_are_reduced_and_distinct(genus2):
    words = list(reduced_words(genus2.data, 4))
    assert len(words) == word_count(2, 4) == 161
    for w in words:
        assert all(a != -b for a, b in zip(w.letters, w.letters[1:]))
    # free group: distinct words give distinct Möbius maps
    probe = (Fraction(1, 3), Fraction(2, 7), Fraction(3, 11))
    assert len({tuple(w.matrix(z) for z in probe) for w in words}) == len(words)


def test_coset_words(genus2):
    words = list(reduced_words(genus2.data, 3, avoid_suffix=1))
    assert all(not w.letters or abs(w.letters[-1]) != 1 for w in words)
    assert len(words) == 1 + 2 + 2 * 3 + 2 * 9


def test_word_rho_matches_module(genus2):
    for w in reduced_words(genus2.data, 3):
        assert w.rho == genus2.data.module.image(w.letters)


def test_good_scenes_validate(genus1, genus2):
    for sc in (genus1, genus2):
        rep = validate(sc.data)
        assert rep.ok, rep.format()


@pytest.mark.parametrize("name, check", [
    ("overlap", "discs pairwise disjoint"),
    ("bad_image", "gamma_i(B_i) = complement of C_i∪c_i, gamma_i(b_i) = c_i"),
    ("bad_orientation", "gamma_i: b_i -> c_i reverses orientation"),
    ("parabolic", "hyperbolic"),
    ("noninvariant_pairing", "pairing invariant under rho"),
    ("annulus_mismatch", "annuli surround their discs"),
])
def test_corrupted_scene_witness(scenes_dir, name, check):
    rep = validate(load(scenes_dir / "corrupted" / f"{name}.toml").data)
    assert not rep.ok
    assert rep.first_failure().name == check


def test_sample_points_lie_in_F(genus2):
    F = FundamentalDomain(genus2.data)
    pts = F.sample_points(16)
    assert len(pts) == 16 and len(set(pts)) == 16
    assert all(F.contains(z) and F.on_annulus(z) is None for z in pts)


def test_pole_on_annulus_is_rejected(genus1):
    # width-1 collars hold no rational point; widened, b1 is 5^-2 < |z| < 1 and contains z = 5
    from dataclasses import replace

    from mumford_cup.geometry import OrientedAnnulus

    d = genus1.data
    wide = replace(d, b=(OrientedAnnulus.around(d.B[0], 2),))
    om = VValuedForm.basis_form(RationalFunction.pole(5, 2), 0, d.module)
    with pytest.raises(GeometryError):
        poles_in_F(om, FundamentalDomain(wide))
