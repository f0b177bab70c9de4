import json

import importlib.resources

from blochinv.cli import main


def fx(name):
    return str(importlib.resources.files("blochinv").joinpath("fixtures/" + name))


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_invariant_weeks_element(capsys):
    code, out, _ = run(capsys, "invariant", fx("weeks_element.bloch"))
    assert code == 0
    assert "CertifiedZero" in out
    assert "0.9427073627769277209212996030922116475903271057668" in out


def test_invariant_beta1_element(capsys):
    code, out, _ = run(capsys, "invariant", fx("example2_beta1.bloch"))
    assert code == 0
    assert "CertifiedZero" in out
    assert "3.16396322888314398399101471597315448481278767151" in out


def test_invariant_triangulation_records(capsys):
    code, out, _ = run(capsys, "--format", "records", "invariant",
                       fx("figure_eight.tri"))
    assert code == 0
    doc = json.loads(out)
    assert doc["schema"] == "blochinv.report/1"
    assert doc["validated"] is True
    assert doc["volume"].startswith("2.029883212819307250")


def test_invariant_corrupted_shapes(tmp_path, capsys):
    text = importlib.resources.files("blochinv").joinpath(
        "fixtures/figure_eight.tri").read_text()
    bad = text.replace("shape 0 0.5", "shape 0 0.51")
    p = tmp_path / "bad.tri"
    p.write_text(bad)
    code, _, err = run(capsys, "invariant", str(p))
    assert code == 2
    assert "invalid" in err


def test_fill_complete_matches_invariant(capsys):
    code, out, _ = run(capsys, "--precision", "128", "fill",
                       fx("figure_eight.tri"))
    assert code == 0
    assert "2.0298832128193072" in out


def test_fill_noncoprime_usage_error(capsys):
    code, _, err = run(capsys, "fill", fx("figure_eight.tri"),
                       "--fill", "2,4")
    assert code == 2


def test_cs_figure_eight(capsys):
    code, out, _ = run(capsys, "--precision", "192", "cs",
                       fx("figure_eight.tri"))
    assert code == 0
    assert "2.02988321281930725" in out
    # calibrating against the true CS = 0 fits alpha in (i pi^2 / 12) Z
    code, out, _ = run(capsys, "--precision", "192", "cs",
                       fx("figure_eight.tri"), "--calibrate-cs", "0")
    assert code == 0
    assert "alpha_fitted_over_pi2: 1/3" in out


def test_cs_example3_rational_probe(capsys):
    code, out, _ = run(capsys, "--precision", "192", "cs", fx("example3.tri"))
    assert code == 0
    assert "-1/6" in out
    assert "1.8319311883544380301092070298647682215482987" in out


def test_borel_prints_published_pairs(capsys):
    code, out, _ = run(capsys, "borel", fx("example2_beta1.bloch"),
                       fx("example2_beta2.bloch"))
    assert code == 0
    assert "3.16396322888314398399101471597315448481278767151" in out
    assert "-1.41510489726556334068950858771050203613466795960" in out
    assert "-0.6985440827844407197307266120368427639773667053" in out
    assert "3.82168758617997773911092222429038551682130249550" in out


def test_relation_duplicate_inputs(capsys):
    code, out, _ = run(capsys, "relation", fx("example2_beta1.bloch"),
                       fx("example2_beta1.bloch"))
    assert code == 0
    assert "[1, -1]" in out
    assert "ExactInputVerified" in out


def test_relation_none(capsys):
    code, out, _ = run(capsys, "relation", fx("example2_beta1.bloch"),
                       fx("example2_beta2.bloch"))
    assert code == 0
    assert "relation:              None" in out
    assert "rank_witness:          2" in out


def test_scissors_octahedron(capsys):
    code, out, _ = run(capsys, "--precision", "128", "scissors",
                       fx("octahedron.poly"))
    assert code == 0
    assert "3.6638623767088760" in out
    assert "apex_independent:      True" in out


def test_scissors_square_pyramid(capsys):
    code, out, _ = run(capsys, "--precision", "128", "scissors",
                       fx("square_pyramid.poly"))
    assert code == 0
    assert "apex_independent:      True" in out


def test_empty_file_exit_2(tmp_path, capsys):
    p = tmp_path / "empty.tri"
    p.write_text("")
    code, _, err = run(capsys, "invariant", str(p))
    assert code == 2


def test_deterministic_output(capsys):
    a = run(capsys, "--precision", "128", "borel", fx("weeks_element.bloch"))
    b = run(capsys, "--precision", "128", "borel", fx("weeks_element.bloch"))
    assert a == b


def test_cs_filled_cusp(tmp_path, capsys):
    text = importlib.resources.files("blochinv").joinpath(
        "fixtures/figure_eight.tri").read_text()
    p = tmp_path / "filled.tri"
    p.write_text(text.replace("fill 0 complete", "fill 0 5 1"))
    code, out, _ = run(capsys, "--precision", "128", "cs", str(p))
    assert code == 0
    assert "0.9813688288922320880914521897" in out
