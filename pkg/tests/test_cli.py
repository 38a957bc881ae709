import io

import pytest

from wkit import formats
from wkit.cli import COMMANDS, run
from wkit.complex_core import Complex
from wkit.exact_linalg import Ring

EXPECTED_COMMANDS = [
    "cone", "shift", "homotopy", "weak-homotopy", "certify-triangle", "3x3", "split-idempotent",
    "truncate", "membership", "retract", "torsion-truncate", "ws-suite", "wc", "wc-lifts", "gr",
    "sigma", "omega", "cfun", "lift", "cone-alpha", "strong-wc", "fcat-suite", "fcat7", "swindle",
    "k0", "swindle-split", "suite",
]


def wk(*argv):
    out = io.StringIO()
    code = run(list(argv), out)
    return code, out.getvalue()


def field(text, key):
    for line in text.splitlines():
        if line.startswith(key + ": "):
            return line[len(key) + 2:]
    return None


def test_every_command_is_registered():
    assert set(EXPECTED_COMMANDS) <= set(COMMANDS)


@pytest.mark.parametrize("command", EXPECTED_COMMANDS)
def test_default_runs_pass(command):
    code, text = wk(command, "--seed", "3", "--samples", "8")
    assert code == 0, text
    assert text.startswith("wk-report 1\n")
    assert field(text, "command") == command
    assert field(text, "status") == "pass"


@pytest.mark.parametrize("command", ["cone-alpha", "strong-wc", "swindle-split", "split-idempotent", "k0"])
def test_odd_characteristic_runs_pass(command):
    for seed in range(4):
        code, text = wk(command, "--ring", "gf3", "--seed", str(seed))
        assert code == 0, text


def test_reports_are_deterministic():
    a = wk("suite", "--seed", "5", "--samples", "10")
    b = wk("suite", "--seed", "5", "--samples", "10")
    assert a == b


def test_torsion_lifts_fixture_report():
    code, text = wk("wc-lifts", "--fixture", "torsion-lifts")
    assert code == 0
    assert field(text, "ring") == "z4"
    lifts = [line for line in text.splitlines() if line.startswith("lift (x, y)")]
    assert lifts == ["lift (x, y): (0, 0)", "lift (x, y): (2, 0)", "lift (x, y): (0, 2)", "lift (x, y): (2, 2)"]
    assert "check all pairs weakly homotopic: pass" in text


def test_projector_fixture_with_even_constraint():
    code, text = wk("split-idempotent", "--fixture", "rank-one-projector", "--even")
    assert code == 0
    assert field(text, "euler characteristic") in ("1", "-1")
    code, text = wk("split-idempotent", "--fixture", "rank-one-projector")
    assert code == 0 and field(text, "image ranks") == "{0: 1}"


def test_level_square_fixture():
    code, text = wk("fcat7", "--fixture", "level-square")
    assert code == 0
    assert "check theta_signed_permutation: pass" in text


def test_exit_code_two_on_bad_input(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    assert wk("cone", "--in", str(bad))[0] == 2
    assert wk("cone", "--ring", "gf4")[0] == 2
    assert wk("swindle", "--window", "nonsense")[0] == 2
    assert wk("wc-lifts", "--fixture", "nope")[0] == 2
    assert "error:" in capsys.readouterr().err


def test_exit_code_one_on_failed_check(tmp_path):
    # a certificate whose comparison map was scaled by 2 no longer replays over GF(3)
    code, _ = wk("certify-triangle", "--ring", "gf3", "--seed", "1", "--out", str(tmp_path))
    assert code == 0
    cert = formats.read(tmp_path / "certificate.json")
    cert.phi = cert.phi.scale(2)
    bad = tmp_path / "bad_cert.json"
    formats.write(cert, bad)
    assert not cert.phi.is_zero()
    code, text = wk("certify-triangle", "--in", str(bad))
    assert code == 1
    assert field(text, "status") == "fail"


def test_undecided_only_fails_when_strict():
    code, text = wk("lift", "--ring", "z4", "--seed", "1")
    assert code == 0 and field(text, "status") == "undecided"
    code, _ = wk("lift", "--ring", "z4", "--seed", "1", "--strict")
    assert code == 1


def test_artifacts_round_trip(tmp_path):
    code, _ = wk("cone", "--seed", "2", "--ring", "gf3", "--out", str(tmp_path))
    assert code == 0
    C = formats.read(tmp_path / "cone.json", Complex)
    assert C.ring == Ring.gf(3)
    assert (tmp_path / "report.txt").read_text().startswith("wk-report 1")
    code, _ = wk("shift", "-k", "0", "--in", str(tmp_path / "cone.json"), "--out", str(tmp_path / "s"))
    assert code == 0
    assert (tmp_path / "s" / "shift.json").read_text() == (tmp_path / "cone.json").read_text()
