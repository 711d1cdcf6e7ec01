import csv
import io
import json
import math

import numpy as np
import pytest

from qdim.cli import RunConfig, main, render, run
from qdim.core import DimRange
from qdim.oscillator import EnergyLevel
from qdim.symmetry import SymmetryReport, symmetry_report
from qdim.thermo import ThermalCurve, dim_vs_energy_curve, default_beta_grid


def read_csv(text):
    return list(csv.DictReader(io.StringIO(text)))


def invoke(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_dim_vs_energy_endpoints(capsys):
    code, out, _ = invoke(capsys, "dim-vs-energy", "--n1", "0", "--n2", "3")
    assert code == 0
    assert out.splitlines()[0] == "beta,Z,mean_energy,mean_dim"
    rows = read_csv(out)
    assert len(rows) == 400
    assert float(rows[0]["mean_dim"]) < 1e-5
    assert abs(float(rows[-1]["mean_dim"]) - 3) < 0.02
    energies = [float(r["mean_energy"]) for r in rows]
    assert energies == sorted(energies)


def test_thermo_columns_and_precision(capsys):
    code, out, _ = invoke(capsys, "thermo", "--beta-min", "0.5", "--beta-max", "2", "--beta-points", "3")
    assert code == 0
    rows = read_csv(out)
    assert [float(r["beta"]) for r in rows] == pytest.approx([0.5, 1.0, 2.0])
    # values are written with 17 significant digits and re-parse exactly
    from qdim.thermo import thermal_point

    p = thermal_point(float(rows[1]["beta"]), DimRange(0, 3))
    assert float(rows[1]["Z"]) == p.z
    assert float(rows[1]["mean_dim"]) == p.mean_dim


def test_degeneracy_json(capsys):
    code, out, _ = invoke(
        capsys, "degeneracy", "--n1", "0", "--n2", "3", "--convention", "unshifted", "--max-2e", "3"
    )
    assert code == 0
    data = json.loads(out)
    levels = {lv["twice_energy"]: lv for lv in data["levels"]}
    assert levels[3]["multiplicity"] == 2
    assert levels[3]["members"] == ["1;1", "3;0,0,0"]
    assert EnergyLevel.from_dict(levels[3]).multiplicity == 2


def test_degeneracy_csv(capsys):
    code, out, _ = invoke(capsys, "degeneracy", "--convention", "shifted", "--max-2e", "2", "--format", "csv")
    rows = read_csv(out)
    assert [int(r["multiplicity"]) for r in rows] == [4, 6]


def test_evolve_rabi(capsys):
    code, out, _ = invoke(capsys, "evolve", "--g", "0.1", "--pair", "1;1|3;0,0,0")
    assert code == 0
    rows = read_csv(out)
    assert list(rows[0]) == ["t", "mean_dim", "norm"]
    t = np.array([float(r["t"]) for r in rows])
    md = np.array([float(r["mean_dim"]) for r in rows])
    np.testing.assert_allclose(md, 2 - np.cos(0.2 * t), atol=1e-8)
    assert md.min() == pytest.approx(1, abs=1e-6) and md.max() == pytest.approx(3, abs=1e-3)
    # period pi/g: the first return to <D> = 1 after t = 0
    assert md[np.argmin(np.abs(t - math.pi / 0.1))] == pytest.approx(1, abs=1e-3)


def test_evolve_json(capsys):
    code, out, _ = invoke(capsys, "evolve", "--t-points", "5", "--t-max", "4", "--format", "json")
    data = json.loads(out)
    assert data["t"] == [0.0, 1.0, 2.0, 3.0, 4.0]
    assert len(data["mean_dim"]) == 5


def test_spectrum(capsys):
    code, out, _ = invoke(capsys, "spectrum", "--n1", "0", "--n2", "2", "--cutoff-k", "1")
    rows = read_csv(out)
    assert [r["label"] for r in rows] == ["0;", "1;0", "1;1", "2;0,0", "2;0,1", "2;1,0"]
    assert [int(r["twice_energy"]) for r in rows] == [0, 1, 3, 2, 4, 4]


def test_symmetry_json_round_trip(capsys):
    code, out, _ = invoke(capsys, "symmetry", "--convention", "shifted", "--max-2e", "4")
    rep = SymmetryReport.from_dict(json.loads(out))
    assert rep == symmetry_report(DimRange(0, 3), "shifted", 4)
    assert rep.ground.group == "U(4)"


def test_thermo_json_round_trip(capsys):
    code, out, _ = invoke(
        capsys, "dim-vs-energy", "--format", "json", "--beta-min", "0.1", "--beta-max", "3", "--beta-points", "9"
    )
    curve = ThermalCurve.from_dict(json.loads(out))
    assert curve == dim_vs_energy_curve(DimRange(0, 3), "unshifted", default_beta_grid(0.1, 3, 9))


@pytest.mark.parametrize("cmd", ["spectrum", "degeneracy", "thermo", "dim-vs-energy", "symmetry", "evolve"])
def test_deterministic_files(cmd, tmp_path):
    paths = [tmp_path / f"{cmd}{i}.out" for i in range(2)]
    for p in paths:
        assert main([cmd, "--output", str(p)]) == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()
    assert paths[0].stat().st_size > 0


@pytest.mark.parametrize(
    "argv",
    [
        ["thermo", "--n1", "4", "--n2", "2"],
        ["thermo", "--beta-min", "2", "--beta-max", "1"],
        ["thermo", "--beta-points", "0"],
        ["evolve", "--pair", "1;1"],
        ["evolve", "--pair", "1;5|3;0,0,0"],
        ["evolve", "--pair", "1;1|1;1"],
        ["evolve", "--initial", "nonsense"],
        ["degeneracy", "--max-2e", "-1"],
        ["thermo", "--convention", "sideways"],
        ["nosuchcommand"],
    ],
)
def test_config_errors_exit_2(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        code = main(argv)
        raise SystemExit(code)
    assert exc.value.code == 2
    assert capsys.readouterr().err


def test_unwritable_output_exits_1(tmp_path, capsys):
    target = tmp_path / "missing-dir" / "out.csv"
    assert main(["thermo", "--output", str(target)]) == 1
    assert "cannot write" in capsys.readouterr().err


def test_run_config_direct(tmp_path):
    cfg = RunConfig(command="degeneracy", max_2e=3, output_path=str(tmp_path / "d.json"))
    assert run(cfg) == 0
    assert json.loads((tmp_path / "d.json").read_text())["levels"][-1]["multiplicity"] == 2
    assert render(RunConfig(command="thermo", beta_points=1, beta_min=1, beta_max=2)).count("\n") == 2
