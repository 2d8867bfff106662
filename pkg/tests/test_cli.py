import csv
import io
import json

import numpy as np
import pytest

from wormszego import BoundaryPoint, Component, GridSpec, InteriorPoint, analysis, szego, validate_params
from wormszego import verify
from wormszego.cli import run_command
from wormszego.grid import FrequencyField, read_field_csv, write_field_csv, write_frequency_csv
from wormszego.kernel import szego_kernel

SMALL = ["--L", "20", "--Nx", "512", "--Nj", "8"]
G = GridSpec(20.0, 512, 8)


def run(capsys, *argv):
    code = run_command(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_kernel_eval(capsys):
    code, out, err = run(capsys, "kernel-eval", "--beta", "3.14159", "--w", "0.1,0.3,0.2,0.5",
                         "--zeta", "E2,0.4,0.1", "--tol", "1e-10")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["j", "re_kj", "im_kj", "partial_sum_re", "partial_sum_im", "tail_bound"]
    p = validate_params(3.14159)
    res = szego_kernel(p, InteriorPoint(complex(0.1, 0.3), 0.2, 0.5), BoundaryPoint(Component.E2, 0.4, 0.1), 1e-10)
    last = rows[-1]
    assert complex(float(last[3]), float(last[4])) == res.value
    assert len(rows) - 1 == res.j_max - res.j_min + 1
    assert "certified_error" in err


@pytest.mark.parametrize("argv,flag", [
    (["verify", "--beta", "1.0"], "--beta"),
    (["verify", "--Nx", "1000"], "--Nx"),
    (["verify", "--suite", "nope"] + SMALL, "--suite"),
    (["verify", "--tol", "-1"] + SMALL, "--tol"),
    (["verify", "--p-list", "1.0,2"] + SMALL, "--p-list"),
    (["kernel-eval", "--w", "0,0", "--zeta", "E1,0"], "--w"),
    (["kernel-eval", "--w", "0,5,0", "--zeta", "E1,0"], "--w"),
    (["kernel-eval", "--w", "0,0,0", "--zeta", "E7,0"], "--zeta"),
    (["sweep", "--beta-range", "1.7:6", "--check", "idempotence"] + SMALL, "--beta-range"),
    (["sweep", "--beta-range", "1.7:6:2", "--check", "bogus"] + SMALL, "--check"),
    (["project"] + SMALL, "--phi1"),
])
def test_usage_errors(capsys, argv, flag):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert flag in err


def test_argparse_errors_exit_two(capsys):
    code, _, err = run(capsys, "frobnicate")
    assert code == 2 and "invalid choice" in err
    code, _, err = run(capsys, "kernel-eval", "--zeta", "E1,0")
    assert code == 2 and "--w" in err


def test_verify_report(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "projector", "--seed", "7", *SMALL)
    assert code == 0
    rep = json.loads(out)
    assert rep["all_passed"] is True and rep["seed"] == 7
    for r in rep["checks"]:
        assert list(r) == ["check_name", "status", "measured", "tolerance"]
        assert r["status"] == "pass"


def test_verify_exit_one_on_failure(capsys, monkeypatch):
    monkeypatch.setitem(verify.CHECKS, "norms", lambda ctx: [verify._record("fake", 1.0, 0.0)])
    code, out, _ = run(capsys, "verify", "--suite", "norms", *SMALL)
    assert code == 1 and json.loads(out)["checks"][0]["status"] == "fail"


def test_verify_deterministic(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for f in (a, b):
        run(capsys, "verify", "--suite", "norms", "--seed", "7", "--out", str(f), *SMALL)
    assert a.read_bytes() == b.read_bytes()


def test_config_and_override(capsys, tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"beta": 4.0, "L": 20.0, "Nx": 512, "Nj": 8, "seed": 3}))
    code, out, _ = run(capsys, "verify", "--suite", "sobolev", "--config", str(cfg), "--seed", "5")
    rep = json.loads(out)
    assert code == 0 and rep["beta"] == 4.0 and rep["seed"] == 5 and rep["grid"]["Nx"] == 512
    cfg.write_text(json.dumps({"betta": 4.0}))
    code, _, err = run(capsys, "verify", "--config", str(cfg))
    assert code == 2 and "--config" in err


def test_project_commands(capsys, tmp_path):
    p = validate_params(3.0)
    phi = analysis.random_band_limited(G, 1, 0)
    paths = []
    for k, f in enumerate(phi.components, start=1):
        paths += [f"--phi{k}", str(tmp_path / f"in{k}.csv")]
        write_field_csv(tmp_path / f"in{k}.csv", f)
    out_dir = tmp_path / "out"
    code, _, _ = run(capsys, "boundary-project", "--beta", "3.0", *SMALL, *paths, "--output-dir", str(out_dir))
    assert code == 0
    ref = szego.boundary_szego(p, phi)
    for k, f in enumerate(ref.components, start=1):
        assert np.array_equal(read_field_csv(out_dir / f"phi{k}.csv", G).values, f.values)
    code, _, _ = run(capsys, "project", "--beta", "3.0", *SMALL, *paths, "--y", "0.4", "--s", "0.3",
                     "--output-dir", str(out_dir))
    assert code == 0
    got = read_field_csv(out_dir / "interior.csv", G).values
    assert np.array_equal(got, szego.project_interior(p, phi, 0.4, 0.3).values)


def test_synthesize(capsys, tmp_path):
    c = np.zeros(G.shape, dtype=complex)
    c[:, G.mode_index(1)] = np.exp(-G.xi**2)
    write_frequency_csv(tmp_path / "g.csv", FrequencyField(G, c))
    code, _, _ = run(capsys, "synthesize", "--beta", "2.0", *SMALL, "--g", str(tmp_path / "g.csv"),
                     "--output-dir", str(tmp_path))
    assert code == 0
    ref = szego.pw_worm_synthesize(validate_params(2.0), szego.ModeCoefficients({1: np.exp(-G.xi**2)}), G)
    assert np.array_equal(read_field_csv(tmp_path / "phi1.csv", G).values, ref.phi1.values)


def test_sweep(capsys, tmp_path):
    code, out, _ = run(capsys, "sweep", "--beta-range", "1.7:6.0:3", "--check", "idempotence", *SMALL,
                       "--output-dir", str(tmp_path))
    assert code == 0
    rows = list(csv.DictReader(io.StringIO((tmp_path / "sweep.csv").read_text())))
    assert len(rows) == 6 and {r["status"] for r in rows} == {"pass"}
    assert (tmp_path / "sweep_projector.idempotent.png").exists()
    d2 = tmp_path / "np"
    run(capsys, "sweep", "--beta-range", "2:3:2", "--check", "projector.symbol_hermitian", *SMALL,
        "--output-dir", str(d2), "--no-plots")
    assert not list(d2.glob("*.png"))
    assert len((d2 / "sweep.csv").read_text().splitlines()) == 3


def test_convergence_command(capsys, tmp_path):
    code, out, _ = run(capsys, "convergence", "--beta", "2.5", *SMALL, "--k-min", "4", "--k-max", "10",
                       "--growth-steps", "2", "--p-list", "2", "--output-dir", str(tmp_path))
    assert code == 0
    rows = list(csv.reader(open(tmp_path / "convergence_product_p2.csv")))
    assert rows[0] == ["delta", "distance"] and len(rows) == 8
    d = [float(r[1]) for r in rows[1:]]
    assert all(y <= x for x, y in zip(d, d[1:]))
    assert (tmp_path / "convergence_coupled.csv").exists() and (tmp_path / "growth_p2.csv").exists()
    assert (tmp_path / "convergence_coupled.png").exists() and (tmp_path / "growth_p2.png").exists()
    first = (tmp_path / "convergence_coupled.png").read_bytes()
    run(capsys, "convergence", "--beta", "2.5", *SMALL, "--k-min", "4", "--k-max", "10",
        "--growth-steps", "0", "--p-list", "2", "--output-dir", str(tmp_path))
    assert (tmp_path / "convergence_coupled.png").read_bytes() == first
