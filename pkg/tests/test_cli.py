import io

import pytest

from mumford_cup.cli import PRECISION_ENV, main


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture(autouse=True)
def _no_env(monkeypatch):
    monkeypatch.delenv(PRECISION_ENV, raising=False)


def test_validate_good_scene(scenes_dir):
    code, out, _ = run("validate", "--scene", str(scenes_dir / "genus2.toml"))
    assert code == 0
    assert "== validation" in out and "[FAIL]" not in out


def test_validate_corrupted_scene(scenes_dir):
    code, out, _ = run("validate", "--scene", str(scenes_dir / "corrupted" / "parabolic.toml"))
    assert code == 1
    assert "[FAIL] hyperbolic" in out


def test_cup_on_invalid_scene_is_an_input_error(scenes_dir):
    code, out, err = run("cup", "--scene", str(scenes_dir / "corrupted" / "overlap.toml"))
    assert code == 2
    assert "[FAIL] discs pairwise disjoint" in out and "error:" in err


def test_cup_genus1(scenes_dir):
    code, out, _ = run("cup", "--scene", str(scenes_dir / "genus1.toml"), "--proof-chain")
    assert code == 0
    for section in ("== scene", "== validation", "== LHS breakdown", "== RHS breakdown", "== proof chain",
                    "== error budget", "== verdict"):
        assert section in out
    assert "AGREE: lhs - rhs vanishes to 16 digits" in out


def test_output_is_deterministic(scenes_dir):
    args = ("cup", "--scene", str(scenes_dir / "genus1.toml"))
    assert run(*args) == run(*args)


def test_one_side(scenes_dir):
    code, out, _ = run("cup", "--scene", str(scenes_dir / "genus1.toml"), "--lhs")
    assert code == 0 and "LHS ONLY" in out and "RHS breakdown" not in out


def test_precision_flag_beats_env(scenes_dir, monkeypatch):
    scene = str(scenes_dir / "genus1.toml")
    monkeypatch.setenv(PRECISION_ENV, "12")
    code, out, _ = run("cup", "--scene", scene)
    assert code == 0 and "precision = 12" in out and "O(5^12)" in out
    code, out, _ = run("cup", "--scene", scene, "--precision", "20")
    assert "precision = 20" in out
    monkeypatch.setenv(PRECISION_ENV, "many")
    assert run("cup", "--scene", scene)[0] == 2


def test_input_errors(tmp_path, scenes_dir):
    assert run("cup")[0] == 2  # no scene
    assert run("cup", "--scene", str(tmp_path / "missing.toml"))[0] == 2
    bad = tmp_path / "bad.toml"
    bad.write_text((scenes_dir / "genus1.toml").read_text().replace("precision = 32", "precision = 32\nfoo = 1"))
    code, _, err = run("validate", "--scene", str(bad))
    assert code == 2 and "bad.toml:" in err and "foo" in err
    assert run("cup", "--scene", str(scenes_dir / "genus1.toml"), "--omega", "nope")[0] == 2
    assert run("reciprocity")[0] == 2  # random mode needs --seed
    with pytest.raises(SystemExit) as exc:
        run("cup", "--lhs", "--rhs")
    assert exc.value.code == 2


def test_precision_exhaustion(scenes_dir):
    # depth 1 leaves no guaranteed digits in genus 2
    code, _, err = run("cup", "--scene", str(scenes_dir / "genus2.toml"), "--depth", "1")
    assert code == 3 and "precision exhausted" in err


def test_words(scenes_dir):
    code, out, _ = run("words", "--scene", str(scenes_dir / "genus2.toml"), "--depth", "2")
    assert code == 0
    assert "17" in out


def test_reciprocity_random_is_seeded():
    args = ("reciprocity", "--seed", "4", "--pairs", "2", "--dim", "2", "--precision", "20")
    first = run(*args)
    assert first[0] == 0
    assert first == run(*args)
    assert run("reciprocity", "--seed", "5", "--pairs", "2", "--precision", "20")[1] != first[1]


def test_reciprocity_on_scene(scenes_dir):
    code, out, _ = run("reciprocity", "--scene", str(scenes_dir / "genus1.toml"))
    assert code == 0
