import subprocess
import sys

import pytest

from qcr.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_axioms(capsys):
    code, out, _ = run(capsys, "axioms", "RCC8")
    assert code == 0 and "all axioms hold" in out


def test_sat_exit_codes(capsys):
    code, out, _ = run(capsys, "sat", "examples/fig7a.qcn", "--method=bruteforce")
    assert code == 1 and out.startswith("UNSAT")
    code, out, _ = run(capsys, "sat", "examples/fig7a_dc.qcn", "--method=bruteforce")
    assert code == 0 and out.startswith("SAT") and "witness scenario" in out
    code, out, _ = run(capsys, "sat", "tpc3")
    assert code == 2 and out.startswith("REFUSED")


def test_sat_closure_method(capsys, tmp_path):
    f = tmp_path / "n.qcn"
    f.write_text("network over STC\nvars x y z\nx y : {TPP} ; {<}\ny z : {DC,EC} ; *\n")
    code, out, _ = run(capsys, "sat", str(f), "--method", "closure", "--jobs", "1")
    assert code == 0 and "certificate: RCC8s_x_PAs" in out
    code, out, _ = run(capsys, "sat", "fig7a", "--method", "closure", "--jobs", "1")
    assert code == 2


def test_closure_and_scenarios(capsys):
    code, out, _ = run(capsys, "closure", "tpc3_neq")
    assert code == 1 and "trivially inconsistent" in out
    code, out, _ = run(capsys, "scenarios", "fig4", "--limit", "2")
    assert code == 0 and "2 algebraically closed scenario(s) listed" in out


def test_certify(capsys):
    code, out, _ = run(capsys, "certify", "slicing", "--subclass", "RCC8s_x_PAs", "--weaken", "stc-weak-pa2rcc", "--jobs", "1")
    assert code == 0 and out.startswith("CERTIFICATE")
    code, out, _ = run(capsys, "certify", "refinement", "--subclass", "C8_x_PA", "--jobs", "1")
    assert code == 0 and "onto RCC8s_x_PAs" in out
    code, out, _ = run(capsys, "certify", "slicing", "--subclass", "H8_x_PA", "--force", "--jobs", "1")
    assert code == 1 and "NO CERTIFICATE" in out and "dissociable" in out
    code, out, _ = run(capsys, "certify", "slicing", "--subclass", "H8_x_PA", "--jobs", "1")
    assert code == 2


def test_analyze(capsys):
    code, out, _ = run(capsys, "analyze", "--subclass", "Q8_x_PA", "--property", "conv-invariant",
                       "--refinement", "h_Q8,id_PA")
    assert code == 0 and "holds" in out
    code, out, _ = run(capsys, "analyze", "--subclass", "RCC8s_x_PAs", "--property", "conv-distributive")
    assert code == 1 and "FAILS" in out
    code, out, _ = run(capsys, "analyze", "--subclass", "RCC8s_x_PAs", "--property", "conv-distributive",
                       "--weaken", "stc-weak-pa2rcc")
    assert code == 0


def test_oracle(capsys):
    code, out, _ = run(capsys, "oracle", "sat", "fig7a")
    assert code == 1
    code, out, _ = run(capsys, "oracle", "minimal", "fig4")
    assert code == 0 and "v1 v2 : {>}" in out
    code, out, _ = run(capsys, "oracle", "falsify-minimality", "--subclass", "PA_s", "--trials", "50", "--vars", "4", "--seed", "1")
    assert code == 0 and "no counterexample in 50 trials" in out
    code, out, _ = run(capsys, "oracle", "falsify-minimality", "--subclass", "PA", "--trials", "0", "--extra", "fig4")
    assert code == 1 and "counterexample" in out


def test_catalog(capsys):
    code, out, _ = run(capsys, "catalog", "list")
    assert code == 0 and "RCC8s_x_PAs" in out
    code, out, _ = run(capsys, "catalog", "show", "STC")
    assert code == 0 and "projection 1 2: TPP -> {<}" in out
    code, out, _ = run(capsys, "catalog", "show", "PA_s")
    assert code == 0 and "(6 relations)" in out
    code, out, err = run(capsys, "catalog", "show", "Nope")
    assert code == 2 and "unknown" in err


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as e:
        main(["bogus"])
    assert e.value.code == 2
    with pytest.raises(SystemExit) as e:
        main(["sat", "fig4", "--nope"])
    assert e.value.code == 2
    code, _, err = run(capsys, "sat", "no_such_file.qcn")
    assert code == 2 and "no such network file" in err


def test_parse_error_reports_line(capsys, tmp_path):
    f = tmp_path / "bad.qcn"
    f.write_text("network over STC\nvars x y\nx y : {XX} ; {<}\n")
    code, _, err = run(capsys, "closure", str(f))
    assert code == 2 and "bad.qcn:3" in err


def test_console_script():
    r = subprocess.run([sys.executable, "-m", "qcr.cli", "axioms", "PA"], capture_output=True, text=True)
    assert r.returncode == 0 and "all axioms hold" in r.stdout
