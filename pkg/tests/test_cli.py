import json

import pytest

from coradical.cli import main
from coradical.modelfile import bundled_models, bundled_path


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_hilb_suite_exits_zero(capsys):
    code, out, _ = run(capsys, "suite", bundled_path("hilb_3_2.model"))
    assert code == 0
    assert out.startswith("# coradical report v1\n")
    assert "summary:" in out and " 0 failed" in out


def test_nonstrict_exits_one_with_grade2_witness(capsys):
    code, out, _ = run(capsys, "strict", bundled_path("nonstrict.model"))
    assert code == 1
    assert "check strict FAIL" in out
    assert "witness: grade 2 kernel vector z:1" in out


def test_malformed_exits_two(capsys):
    code, out, err = run(capsys, "suite", bundled_path("malformed.model"))
    assert code == 2 and out == "" and "error:" in err


def test_missing_file_exits_two(capsys, tmp_path):
    assert run(capsys, "validate", tmp_path / "nope.model")[0] == 2


def test_unknown_command_exits_two(capsys):
    assert run(capsys, "frobnicate", bundled_path("hilb_3_2.model"))[0] == 2


def test_kind_mismatch_exits_two(capsys):
    assert run(capsys, "fano-check", bundled_path("hilb_3_2.model"))[0] == 2


def test_cap_exceeded_exits_two(capsys):
    code, _, err = run(capsys, "coradical", bundled_path("hilb_3_2.model"), "--tensor-cap", "50")
    assert code == 2 and "cap" in err


def test_failing_incidence_exits_one(capsys):
    code, out, _ = run(capsys, "incidence", bundled_path("incidence_fail.model"))
    assert code == 1
    assert "witness: psi-fibre over y1" in out


def test_structured_report(capsys):
    code, out, _ = run(capsys, "fano-check", bundled_path("fano_5.model"), "--report=structured")
    data = json.loads(out)
    assert code == 0 and data["version"] == 1 and data["failed"] == 0
    assert {c["verdict"] for c in data["checks"]} == {"pass"}
    assert all("time_ms" not in c for c in data["checks"])


def test_timings_flag(capsys):
    _, out, _ = run(capsys, "validate", bundled_path("k3_3.model"), "--timings")
    assert " ms)" in out


def test_abelian_lazy_kmax(capsys):
    code, out, _ = run(capsys, "abelian-check", bundled_path("abelian_lazy_2.model"), "--kmax", "2")
    assert code == 0 and "k=0..2" in out


@pytest.mark.parametrize("name", [n for n in bundled_models() if n != "malformed.model"])
def test_reports_are_deterministic(capsys, name):
    first = run(capsys, "suite", bundled_path(name), "--report=structured")
    second = run(capsys, "suite", bundled_path(name), "--report=structured")
    assert first == second
    assert first[0] in (0, 1)


def test_incompatible_relations_exit_two(capsys, tmp_path):
    p = tmp_path / "bad.model"
    p.write_text(
        "coradical-model 1\nkind: incidence\n[variety X]\npoints x1 x2\nrelation x1:1 x2:-1\n"
        "[variety Y]\npoints y1 y2\n[variety G]\npoints g1 g2\n[cover c]\ngamma G\nx X\ny Y\n"
        "phi g1 x1\nphi g2 x2\npsi g1 y1\npsi g2 y2\n"
    )
    assert run(capsys, "incidence", p)[0] == 2


def test_cmd_functions_return_reports():
    from coradical.cli import cmd_cogen, cmd_suite, cmd_validate, exit_code

    r = cmd_suite(bundled_path("hilb_3_2.model"))
    assert exit_code(r) == 0 and r.command == "suite"
    assert exit_code(cmd_validate(bundled_path("nonstrict.model"))) == 0
    bad = cmd_cogen(bundled_path("nonstrict.model"))
    assert [c.name for c in bad.failed] == ["cogeneration.injective"]
