import json
import subprocess
import sys
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st
from mpmath import mpf

from apconst import residues
from apconst.cli import bits_for_digits, certified_string, main
from apconst.numerics import Approx


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def strip_elapsed(text):
    data = json.loads(text)
    data.pop("elapsed", None)
    return data


def test_mu_mod_five(capsys):
    code, out, _ = run(capsys, "mu", "--modulus", "5", "--class", "1", "--digits", "30")
    assert code == 0
    assert "1.22523843853908458005760977474" in out


def test_rho_mod_two(capsys):
    code, out, _ = run(capsys, "--json", "rho", "--modulus", "2", "--class", "1", "--digits", "10")
    assert code == 0
    r = json.loads(out)
    assert r["value"] == "0.5000000000"
    assert r["parameters"]["precision_bits"] == bits_for_digits(10) == 98
    assert set(r) >= {"name", "value", "error", "method", "parameters", "elapsed"}


def test_census_table_and_csv(capsys, tmp_path):
    path = tmp_path / "b5.csv"
    code, out, _ = run(capsys, "census", "--order", "5", "--max-n", "25", "--csv", str(path))
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "n,b,partial_sum" and lines[-1].startswith("25,4,")
    assert path.read_text().splitlines() == lines


def test_other_subcommands(capsys):
    code, out, _ = run(capsys, "--json", "kappa", "--order", "9", "--digits", "20",
                       "--method", "assembled")
    r = json.loads(out)
    assert code == 0 and r["value"].startswith("0.07197497740") and "derived-normalization" in r["flags"]
    code, out, _ = run(capsys, "--json", "lvalue", "--modulus", "4", "--char-index", "2",
                       "--s", "1", "--digits", "25")
    with mpmath.workprec(120):
        assert code == 0 and abs(mpf(json.loads(out)["value"]) - mpmath.pi / 4) < mpf(10) ** -24
    code, out, _ = run(capsys, "identity", "--modulus", "4", "--target-exp", "1", "--max-dilation", "2")
    assert code == 0 and "L1(s) L2(s) / (L1(2s))" in out


def test_gcd_slow_is_tagged_heuristic(capsys):
    code, out, _ = run(capsys, "--json", "kappa", "--order", "5", "--digits", "30",
                       "--method", "gcd-slow", "--prime-limit", "10000")
    r = json.loads(out)
    assert code == 0 and r["heuristic"] and r["digits"] < 30


@pytest.mark.parametrize("argv", [
    ["rho", "--modulus", "6", "--class", "3", "--digits", "10"],
    ["rho", "--modulus", "7", "--class", "1", "--digits", "10", "--method", "closed"],
    ["mu", "--modulus", "5", "--class", "1"],
    ["kappa", "--order", "12", "--digits", "10"],
    ["lvalue", "--modulus", "5", "--char-index", "9", "--s", "2", "--digits", "10"],
    ["census", "--order", "5", "--max-n", "0"],
    ["identity", "--modulus", "2", "--target-exp", "1", "--max-dilation", "2"],
    ["--threads", "0", "census", "--order", "5", "--max-n", "5"],
    ["frobnicate"],
])
def test_argument_errors_exit_two(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err


def test_unreachable_digits_exit_three(capsys):
    code, _, err = run(capsys, "mu", "--modulus", "5", "--class", "1", "--digits", "60", "--bits", "80")
    assert code == 3 and "not certified" in err


def test_cross_check_failure_exit_four(capsys, monkeypatch):
    real = residues.rho_closed

    def corrupted(ell, prec=256, strip_below=1000):
        out = real(ell, prec, strip_below)
        bad = Approx(out.rho.value * 1.001, out.rho.error, out.rho.prec)
        return residues.ResidueResult(out.modulus, out.k, bad, out.mu, out.method, out.parameters)

    monkeypatch.setattr(residues, "rho_closed", corrupted)
    code, _, err = run(capsys, "rho", "--modulus", "5", "--class", "1", "--digits", "20")
    assert code == 4 and "cross-check" in err


def test_json_reproducible(capsys):
    argv = ["--json", "mu", "--modulus", "9", "--class", "4", "--digits", "40"]
    first = strip_elapsed(run(capsys, *argv)[1])
    second = strip_elapsed(run(capsys, "--threads", "3", *argv)[1])
    assert first == second
    assert json.dumps(first, sort_keys=True) == json.dumps(second, sort_keys=True)


def test_threads_environment_fallback(monkeypatch, capsys):
    monkeypatch.setenv("APCONST_THREADS", "2")
    assert run(capsys, "census", "--order", "3", "--max-n", "10")[0] == 0
    monkeypatch.setenv("APCONST_THREADS", "zero")
    with pytest.raises(ValueError):
        main(["census", "--order", "3", "--max-n", "10"])


def exact(x):
    man, exp = x.man_exp
    return Fraction(man) * Fraction(2) ** exp if man else Fraction(0)


@settings(max_examples=300, deadline=None)
@given(st.integers(1, 10 ** 30), st.integers(-20, 5), st.integers(1, 25), st.integers(0, 10 ** 6))
def test_certified_digits_are_honest(mant, exp10, digits, err_units):
    with mpmath.workprec(256):
        x = Approx(mpf(mant) * mpf(10) ** (exp10 - 15), mpf(0), 200)
        x = Approx(x.value, x.value * err_units * mpf(10) ** -30, 200)
    text = certified_string(x, digits)
    if text is None:
        return
    sig = text.lstrip("-0.").replace(".", "")
    assert len(sig) == digits or (len(sig) > digits and "." not in text)
    shown = Fraction(text)
    lead = len(str(int(shown))) - 1 if shown >= 1 else -len(text.split(".")[1].split(sig[0])[0]) - 1
    ulp = Fraction(10) ** (lead - digits + 1)
    # every value within the bound agrees with the shown digits to one unit in the last place
    v, err = exact(x.value), exact(x.error)
    for w in (v - err, v, v + err):
        assert abs(w - shown) < ulp


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "apconst", "rho", "--modulus", "2", "--class", "1",
                          "--digits", "5"], capture_output=True, text=True, check=True)
    assert "0.50000" in out.stdout
