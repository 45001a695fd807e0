"""Command-line driver: subcommands, exit codes, determinism, coherence."""

import json

from qsp.cli import run


def invoke(capsys, *argv):
    code = run(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_normalize(capsys):
    code, out, err = invoke(capsys, "normalize", "--type", "II", "px*x")
    assert code == 0
    assert out.strip() == "1 + r*x*px + (r - 1)*th*pth"


def test_normalize_syntax_error(capsys):
    code, out, err = invoke(capsys, "normalize", "--type", "II", "px*!")
    assert code == 2
    assert "error" in err


def test_check_pass_and_fail(capsys):
    code, out, _ = invoke(capsys, "check", "--type", "II", "H*Nb == Nb*H")
    assert code == 0 and "PASS" in out
    code, out, _ = invoke(capsys, "check", "--type", "II", "H*Nb == 2*Nb*H")
    assert code == 1 and "FAIL" in out


def test_act(capsys):
    code, out, _ = invoke(capsys, "act", "--type", "II", "H", "x^2*th")
    assert code == 0
    assert out.strip() == "(r^2 + r + 1)*x^2*th"


def test_pair(capsys):
    code, out, _ = invoke(capsys, "pair", "--type", "II", "T", "x")
    assert code == 0 and out.strip() == "r"


def test_coproduct(capsys):
    code, out, _ = invoke(capsys, "coproduct", "--type", "II", "th")
    assert code == 0
    assert "(x)" in out


def test_solve_types(capsys):
    code, out, _ = invoke(capsys, "solve-types")
    assert code == 0
    assert out.index("Type I:") < out.index("Type II:") < out.index("Type III:")
    assert "Q12 = r - 1" in out


def test_verify_single_id_known_discrepancy_exit_zero(capsys):
    code, out, _ = invoke(capsys, "verify", "--type", "II",
                          "--id", "eq51-first-as-printed", "--format", "json")
    assert code == 0  # expected-FAIL certificates do not fail the process
    doc = json.loads(out)
    assert doc["results"][0]["status"] == "FAIL"
    assert doc["results"][0]["residual"] == "r - 1"


def test_verify_unknown_id(capsys):
    code, out, err = invoke(capsys, "verify", "--id", "eq0-nope")
    assert code == 2


def test_verify_suite_deterministic(capsys):
    code1, out1, _ = invoke(capsys, "verify", "--type", "II", "--suite", "all",
                            "--bound", "2", "--format", "json")
    code2, out2, _ = invoke(capsys, "verify", "--type", "II", "--suite", "all",
                            "--bound", "2", "--format", "json")
    assert code1 == code2 == 0

    def strip_elapsed(text):
        doc = json.loads(text)
        for r in doc["results"]:
            r.pop("elapsedMillis")
        return doc

    assert strip_elapsed(out1) == strip_elapsed(out2)


def test_param_specialization_matches_type_i(capsys):
    for argv in (["normalize", "px*x"], ["normalize", "Lth"],
                 ["act", "H", "x^3*th"], ["pair", "T*Nb", "x*th"],
                 ["coproduct", "x*th"], ["check", "Lx*Lth == Qp*Lth*Lx"]):
        code1, out1, _ = invoke(capsys, *argv[:1], "--type", "I", *argv[1:])
        code2, out2, _ = invoke(capsys, *argv[:1], "--type", "II",
                                "--param", "r=1", *argv[1:])
        code3, out3, _ = invoke(capsys, *argv[:1], "--type", "III",
                                "--param", "p=1", *argv[1:])
        assert code1 == code2 == code3, argv
        assert out1 == out2 == out3, argv


def test_param_specialization_of_q(capsys):
    code, out, _ = invoke(capsys, "normalize", "--type", "II",
                          "--param", "q=3", "th*x")
    assert code == 0
    assert out.strip() == "1/3*x*th"
    code, out, _ = invoke(capsys, "check", "--type", "II", "--param", "q=3",
                          "--param", "r=2", "px*x == 1 + Q*x*px + Q12*th*pth")
    assert code == 0 and "PASS" in out


def test_param_pole_is_usage_error(capsys):
    code, out, err = invoke(capsys, "normalize", "--type", "II",
                            "--param", "q=0", "x")
    assert code == 2


def test_unknown_param_rejected(capsys):
    code, out, err = invoke(capsys, "normalize", "--type", "I",
                            "--param", "r=1", "x")
    assert code == 2


def test_config_file_and_flag_precedence(tmp_path, capsys):
    cfg = tmp_path / "qsp.cfg"
    cfg.write_text("type=I\nformat=json\n")
    code, out, _ = invoke(capsys, "verify", "--config", str(cfg),
                          "--id", "eq41-Hnabla")
    assert code == 0
    assert json.loads(out)["type"] == "I"
    # the flag wins over the config file
    code, out, _ = invoke(capsys, "verify", "--config", str(cfg),
                          "--type", "II", "--id", "eq41-Hnabla")
    assert json.loads(out)["type"] == "II"


def test_config_param_line(tmp_path, capsys):
    cfg = tmp_path / "qsp.cfg"
    cfg.write_text("type=II\nparam=r=1\n")
    code, out, _ = invoke(capsys, "normalize", "--config", str(cfg), "px*x")
    assert code == 0
    assert out.strip() == "1 + x*px"


def test_bad_usage(capsys):
    code, _, _ = invoke(capsys, "verify", "--bound", "0")
    assert code == 2
    code, _, _ = invoke(capsys, "nonsense")
    assert code == 2
