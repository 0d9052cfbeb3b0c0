import json

import pytest

from clgcd.cli import run
from clgcd.errors import ConsistencyError

TRACE_31_75 = """\
run on (31, 75), canonical convention
i  a_i  shifted  remainder  shifted_2  remainder_2  v(sh)  v(rem)  v(gcd)
0    -       75         31    1001011        11111      0       0       0
1    1       62         13     111110         1101      1       0       0
2    2       52         10     110100         1010      2       1       1
3    2       40         12     101000         1100      3       2       2
4    1       24         16      11000        10000      3       4       3
5    0       16          8      10000         1000      4       3       3
6    0        8          8       1000         1000      3       3       3
7    0        8          0       1000            0      3     inf       3
K = 7, S = 6, terminal = (0, 8), odd gcd = 1  [final step rewritten (a) -> (a-1, 0)]
"""

CONSTANTS = """\
E = 2.600460
D = 0.976936
A = 1.623524
B_conj = 0.283789
H_conj = 1.339735
2/H = 1.492833

per-step mean growth M(c):
sigma = 0.976936
q = 2.600460
rho = 1.260725
r = 1.339735
q2 = 1.260725
"""

DIRICHLET = """\
partial sum S(2) over q <= 10000 = 1.1106265323
zeta(3)/zeta(4) = 1.1106265353
deviation = -3.040e-09 (tail scale N^(2-2s) = 1.0e-08)
"""


def invoke(capsys, *argv):
    code = run(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_trace_reference_output(capsys):
    code, out, _ = invoke(capsys, "trace", "31", "75")
    assert code == 0
    assert out == TRACE_31_75


def test_trace_greedy(capsys):
    code, out, _ = invoke(capsys, "trace", "31", "75", "--convention", "greedy")
    assert code == 0
    assert out.splitlines()[0] == "run on (31, 75), greedy convention"
    assert out.splitlines()[-1] == "K = 6, S = 7, terminal = (0, 16), odd gcd = 1"
    assert "rewritten" not in out


def test_trace_json(capsys):
    code, out, _ = invoke(capsys, "trace", "31", "75", "--json")
    assert code == 0
    d = json.loads(out)
    assert d["K"] == 7 and d["S"] == 6
    assert d["rows"][1]["a_i"] == 1
    assert d["rows"][-1]["val_remainder"] is None


def test_expand(capsys):
    code, out, _ = invoke(capsys, "expand", "--rational", "31/75")
    assert code == 0
    assert out == "1,2,2,1,0,0,0\nK = 7, S = 6\n"
    _, out, _ = invoke(capsys, "expand", "--rational", "31/75",
                       "--convention", "greedy")
    assert out == "1,2,2,1,0,1\nK = 6, S = 7\n"
    _, out, _ = invoke(capsys, "expand", "--rational", "31/75", "--depth", "3")
    assert out.splitlines()[0] == "1,2,2"


def test_expand_bad_rational(capsys):
    code, _, err = invoke(capsys, "expand", "--rational", "31:75")
    assert code == 1
    assert err.startswith("error:")


def test_eval_example(capsys):
    code, out, _ = invoke(capsys, "eval", "--exponents", "1,2")
    assert code == 0
    assert out == "2/5 (P=4, Q=10, g=2, R=5)\n"


def test_eval_json(capsys):
    code, out, _ = invoke(capsys, "eval", "--exponents", "1,2,2,1,0,0,0",
                          "--json")
    assert code == 0
    d = json.loads(out)
    assert (d["numerator"], d["denominator"]) == (31, 75)
    assert d["value"] == "31/75"


def test_constants_output(capsys):
    code, out, _ = invoke(capsys, "constants")
    assert code == 0
    assert out == CONSTANTS


def test_constants_json(capsys):
    code, out, _ = invoke(capsys, "constants", "--json")
    assert code == 0
    d = json.loads(out)
    assert d["E"] == pytest.approx(2.600460, abs=1e-6)
    assert set(d["mean_costs"]) == {"sigma", "q", "rho", "r", "q2"}


def test_eigen(capsys):
    code, out, _ = invoke(capsys, "eigen", "--t", "1", "--v", "0",
                          "--grid", "32")
    assert code == 0
    lam = float(out.splitlines()[0].split("=")[1])
    assert lam == pytest.approx(1.0, abs=1e-8)
    code, out, _ = invoke(capsys, "eigen", "--t", "1", "--v", "0",
                          "--grid", "32", "--json", "--eigenfunction")
    d = json.loads(out)
    assert len(d["eigenfunction"]) == 32


def test_eigen_outside_box(capsys):
    code, _, err = invoke(capsys, "eigen", "--t", "0.5", "--v", "0")
    assert code == 1
    assert err.startswith("error:")


def test_taylor_json(capsys):
    code, out, _ = invoke(capsys, "taylor", "--grid", "32", "--json")
    assert code == 0
    d = json.loads(out)
    assert d["A_estimate"] == pytest.approx(d["A_closed"], abs=1e-5)
    assert d["D_estimate"] == pytest.approx(d["D_closed"], abs=1e-5)


def test_experiment_exhaustive_with_csv(capsys, tmp_path):
    out_file = tmp_path / "costs.csv"
    code, out, _ = invoke(capsys, "experiment", "--nmax", "60",
                          "--exhaustive", "--out", str(out_file))
    assert code == 0
    assert out.splitlines()[0].startswith(
        "mean costs over Omega_N: N = 60, exhaustive,")
    lines = out_file.read_text().strip().splitlines()
    assert lines[0] == "N,mode,samples,cost,mean,stderr,ratio_to_K,theory,deviation"
    assert len(lines) == 8


def test_experiment_json(capsys):
    code, out, _ = invoke(capsys, "experiment", "--nmax", "60",
                          "--exhaustive", "--json")
    assert code == 0
    d = json.loads(out)
    assert d["mode"] == "exhaustive"
    assert set(d["means"]) == {"K", "S", "sigma", "q", "rho", "r", "q2"}


def test_experiment_byte_identical(capsys):
    args = ("experiment", "--nmax", "2000", "--samples", "400")
    _, first, _ = invoke(capsys, *args)
    _, second, _ = invoke(capsys, *args)
    assert first == second


def test_experiment_slope_rejects_exhaustive(capsys):
    code, _, err = invoke(capsys, "experiment", "--nmax", "65536",
                          "--slope", "--exhaustive")
    assert code == 1
    assert "slope ladder" in err


def test_dirichlet_output(capsys):
    code, out, _ = invoke(capsys, "dirichlet")
    assert code == 0
    assert out == DIRICHLET


def test_worstcase_output(capsys, tmp_path):
    out_file = tmp_path / "family.csv"
    code, out, _ = invoke(capsys, "worstcase", "--nmax", "8",
                          "--out", str(out_file))
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "worst-case family (1, 2^n - 1), n = 2..8"
    assert lines[-2] == "greedy: K ~ 2.000000*n -2.000000, S ~ 0.500000*n^2 + O(n)"
    assert lines[-1] == "canonical: K ~ 2.000000*n -1.000000, S ~ 0.500000*n^2 + O(n)"
    assert len(out_file.read_text().strip().splitlines()) == 8


def test_worstcase_json(capsys):
    code, out, _ = invoke(capsys, "worstcase", "--nmax", "6", "--json")
    assert code == 0
    d = json.loads(out)
    assert d["rows"][0] == [2, 2, 2, 3, 1]
    assert set(d["fits"]) == {"greedy", "canonical"}


def test_conjecture_smoke(capsys):
    args = ("conjecture", "--bits", "16", "--samples", "64",
            "--nmax", "65536", "--pair-samples", "1000")
    code, out, _ = invoke(capsys, *args)
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "conjectured B + D = 1.260725"
    assert lines[-1].startswith("verdict: ")
    code, out, _ = invoke(capsys, *args, "--json")
    assert code == 0
    d = json.loads(out)
    assert d["birkhoff"]["bits"] == 16
    assert d["slope"]["N_max"] == 65536
    assert d["target"] == pytest.approx(1.260725, abs=1e-6)


def test_domain_error_exits_1(capsys):
    code, _, err = invoke(capsys, "trace", "75", "31")
    assert code == 1
    assert err.startswith("error:")


def test_usage_error_exits_2(capsys):
    with pytest.raises(SystemExit) as exc_info:
        run(["bogus"])
    assert exc_info.value.code == 2
    with pytest.raises(SystemExit) as exc_info:
        run(["expand"])                      # missing required --rational
    assert exc_info.value.code == 2


def test_assertion_failure_exits_3(capsys, monkeypatch):
    def boom(*args, **kwargs):
        raise ConsistencyError("forced")

    monkeypatch.setattr("clgcd.cli.cl_run", boom)
    code, _, err = invoke(capsys, "trace", "31", "75")
    assert code == 3
    assert err.startswith("assertion failed:")
