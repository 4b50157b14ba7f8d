from fractions import Fraction

import pytest

from mumford_cup.scene import SceneError, loads, parse_seed

MINIMAL = """\
schema = 1
p = 5
precision = 20
log_branch = "0"

[group]
generators = [[[1, 0], [0, 150]]]
B = ["D(0; 5^-2)"]
C = ["D(inf; 5^1)"]
pairing = [[1]]

[forms.omega]
seed = "1/z"

[forms.eta]
seed = "1/(z - 1)^2"
depth = 4

[task]
cup = ["omega", "eta"]
"""


def test_parse_seed():
    f = parse_seed("3/(z - 1)^2 + 1/z - 1/(z + 1/2) + z")
    assert f.poles == {Fraction(1): {2: 3}, Fraction(0): {1: 1}, Fraction(-1, 2): {1: -1}}
    assert f(Fraction(2)) == 3 + Fraction(1, 2) - Fraction(2, 5) + 2
    assert parse_seed("1/((z-1)*(z+1))").poles == {Fraction(1): {1: Fraction(1, 2)}, Fraction(-1): {1: Fraction(-1, 2)}}


@pytest.mark.parametrize("bad", ["1/(z^2 + 1)", "sqrt(z)", "1/(z - x)", "1/(", "log(z)"])
def test_parse_seed_rejects(bad):
    with pytest.raises(ValueError):
        parse_seed(bad)
    with pytest.raises(SceneError):
        loads(MINIMAL.replace('seed = "1/z"', f'seed = "{bad}"'))


def test_minimal_scene():
    sc = loads(MINIMAL)
    assert sc.p == 5 and sc.precision == 20 and sc.data.genus == 1
    assert sc.cup_pair() == ("omega", "eta")
    assert sc.form("omega").equals(sc.form("omega", 0))
    pr = sc.problem()
    assert pr.prec == 20 and pr.window == 64


def test_unknown_key_reports_its_line():
    text = MINIMAL.replace("pairing = [[1]]", "pairing = [[1]]\nparing = [[1]]")
    with pytest.raises(SceneError) as exc:
        loads(text, "x.toml")
    assert exc.value.line == 11
    assert str(exc.value).startswith("x.toml:11:")


def test_syntax_error_reports_its_line():
    with pytest.raises(SceneError) as exc:
        loads(MINIMAL.replace('seed = "1/z"', 'seed = "1/z'))
    assert exc.value.line == 13


@pytest.mark.parametrize("edit", [
    ("schema = 1", "schema = 2"),
    ("p = 5", "p = 6"),
    ("precision = 20", "precision = 0"),
    ('C = ["D(inf; 5^1)"]', 'C = ["D(inf; 5^1)", "D(1; 5^-3)"]'),
    ("pairing = [[1]]", "pairing = [[1]]\nrho = [[[1, 0], [0, 1]]]"),
    ('cup = ["omega", "eta"]', 'cup = ["omega", "zeta"]'),
    ('B = ["D(0; 5^-2)"]', 'B = ["D(0; 7^-2)"]'),
])
def test_invalid_values_are_rejected(edit):
    with pytest.raises(SceneError):
        loads(MINIMAL.replace(*edit))


def test_annulus_override():
    text = MINIMAL.replace('pairing = [[1]]', 'pairing = [[1]]\nb = [{around = "D(0; 5^-2)", width = 2}]')
    sc = loads(text)
    assert sc.data.b[0].width == 2
    assert sc.data.c[0].width == 1


def test_branch_value():
    sc = loads(MINIMAL.replace('log_branch = "0"', 'log_branch = "3/2"'))
    assert sc.branch.lam == Fraction(3, 2)
