import csv
import json

import numpy as np
import pytest
from pydantic import ValidationError

from app.core import snapshot_data, synthetic
from app.main import main
from app.repositories.artifact_repository import ArtifactRepository
from app.schemas.manifest import ReportFormat
from app.schemas.sparse import SweepPoint, SweepResult
from app.services import DecompositionService, SparsityService
from config.config import Settings, settings


def _error(capsys) -> dict:
    lines = [line for line in capsys.readouterr().err.splitlines() if line.startswith("{")]
    return json.loads(lines[-1])


def _read_csv(path):
    with open(path, newline="") as handle:
        return list(csv.reader(handle))


@pytest.fixture
def synth_dir(tmp_path, fixture_spec_path):
    out = tmp_path / "synth"
    assert main(["synth", "--spec", str(fixture_spec_path), "--steps", "31", "--out", str(out)]) == 0
    return out


def test_synth_writes_data_and_ground_truth(synth_dir):
    truth = json.loads((synth_dir / "ground_truth.json").read_text())
    assert truth["rng"] == "PCG64"
    assert truth["n_snapshots"] == 31
    assert len(truth["modes"]) == 6
    assert (synth_dir / "data.snpb").read_bytes()[:4] == b"SNPB"


def test_synth_is_deterministic(tmp_path, fixture_spec_path):
    document = json.loads(fixture_spec_path.read_text())
    document["noise_sigma"] = 0.01
    fixture_spec_path.write_text(json.dumps(document))
    outputs = []
    for name in ("a", "b"):
        out = tmp_path / name
        argv = ["synth", "--spec", str(fixture_spec_path), "--steps", "20", "--seed", "3"]
        assert main([*argv, "--out", str(out)]) == 0
        outputs.append(
            [(out / f).read_bytes() for f in ("data.snpb", "ground_truth.json")]
        )
    assert outputs[0] == outputs[1]


def test_synth_rejects_unpaired_modes(tmp_path, fixture_spec_path, capsys):
    document = json.loads(fixture_spec_path.read_text())
    document["modes"].pop()
    fixture_spec_path.write_text(json.dumps(document))
    code = main(["synth", "--spec", str(fixture_spec_path), "--steps", "20", "--out", str(tmp_path / "x")])
    assert code == 2
    assert _error(capsys)["error"] == "spec"


def test_decompose_recovers_fixture_spectrum(tmp_path, synth_dir, three_pair_spectrum):
    out = tmp_path / "dmd"
    argv = ["decompose", "--input", str(synth_dir / "data.snpb"), "--rank", "6"]
    assert main([*argv, "--point", "3,4", "--out", str(out)]) == 0

    document = json.loads((out / "decomposition.json").read_text())
    assert document["rank"] == 6
    assert document["mode_kind"] == "projected"
    found = np.array([complex(*pair) for pair in document["eigenvalues"]])
    synthetic.match_eigenvalues(found, three_pair_spectrum, tol=1e-8)

    report = _read_csv(out / "mode_report.csv")
    assert report[0] == [
        "label", "amp_mag", "re_lambda", "im_lambda", "modulus",
        "period_steps", "period_physical", "class",
    ]
    assert len(report) == 7
    msd = _read_csv(out / "msd.csv")
    assert msd[0] == ["k", "mean_data", "std_data", "mean_dmd", "std_dmd"]
    assert len(msd) == 32
    superposition = _read_csv(out / "superposition.csv")
    assert superposition[0] == ["k", "data", "dmd"]
    for row in superposition[1:]:
        assert float(row[1]) == pytest.approx(float(row[2]), abs=1e-8)
    for name in ("modes_real.snpb", "modes_imag.snpb"):
        assert (out / name).exists()


def test_decompose_reports_at_most_n_minus_one_modes(tmp_path, fixture_spec_path):
    synth = tmp_path / "long"
    assert main(["synth", "--spec", str(fixture_spec_path), "--steps", "85", "--out", str(synth)]) == 0
    out = tmp_path / "o"
    assert main(["decompose", "--input", str(synth / "data.snpb"), "--out", str(out)]) == 0
    document = json.loads((out / "decomposition.json").read_text())
    assert document["n_snapshots"] == 85
    assert document["rank"] <= 84
    assert len(document["eigenvalues"]) == document["rank"]


def test_decompose_empty_input_is_a_format_error(tmp_path, capsys):
    empty = tmp_path / "empty.snpb"
    empty.write_bytes(b"")
    assert main(["decompose", "--input", str(empty), "--out", str(tmp_path / "o")]) == 2
    error = _error(capsys)
    assert error == {"error": "format", "message": error["message"], "exit_code": 2}


def test_manifest_validation_is_an_input_error(tmp_path, synth_dir, capsys):
    argv = ["decompose", "--input", str(synth_dir / "data.snpb"), "--observable", "velocity_magnitude"]
    assert main([*argv, "--out", str(tmp_path / "o")]) == 2
    assert _error(capsys)["error"] == "validation"


def test_two_component_input(tmp_path, synth_dir):
    data = synth_dir / "data.snpb"
    argv = ["decompose", "--input-vy", str(data), "--input-vz", str(data)]
    argv += ["--observable", "velocity_magnitude", "--rank", "4", "--format", "json"]
    assert main([*argv, "--out", str(tmp_path / "o")]) == 0
    document = json.loads((tmp_path / "o" / "decomposition.json").read_text())
    assert document["field_name"] == "velocity_magnitude"
    rows = json.loads((tmp_path / "o" / "mode_report.json").read_text())
    assert rows[0]["label"] >= 1


def test_spdmd_dense_and_sparse_limits(tmp_path, synth_dir):
    data = str(synth_dir / "data.snpb")
    dense = tmp_path / "dense"
    assert main(["spdmd", "--input", data, "--rank", "6", "--gamma", "0", "--out", str(dense)]) == 0
    solution = json.loads((dense / "sparse_solution.json").read_text())
    assert solution["support"] == [1, 2, 3, 4, 5, 6]
    assert solution["J_loss_percent"] == pytest.approx(0.0, abs=1e-3)
    assert solution["unpaired"] == []

    sparse = tmp_path / "sparse"
    assert main(["spdmd", "--input", data, "--rank", "6", "--gamma", "1000", "--out", str(sparse)]) == 0
    solution = json.loads((sparse / "sparse_solution.json").read_text())
    assert solution["cardinality"] <= 2
    assert solution["J_loss_percent"] > 50

    evolution = _read_csv(dense / "normal_evolution.csv")
    assert len(evolution[0]) == 7
    assert len(evolution) == 32
    msd = _read_csv(dense / "msd.csv")
    assert msd[0][-2:] == ["mean_spdmd", "std_spdmd"]
    assert len(_read_csv(dense / "sparse_mode_report.csv")) == 7


def test_spdmd_non_convergence_still_writes_results(tmp_path, synth_dir, capsys):
    out = tmp_path / "o"
    argv = ["spdmd", "--input", str(synth_dir / "data.snpb"), "--gamma", "0.5", "--kmax", "1"]
    assert main([*argv, "--out", str(out)]) == 4
    assert _error(capsys)["error"] == "non_convergence"
    assert json.loads((out / "sparse_solution.json").read_text())["converged"] is False


def test_sweep_csv(tmp_path, synth_dir):
    out = tmp_path / "sweep"
    argv = ["sweep", "--input", str(synth_dir / "data.snpb"), "--rank", "6"]
    argv += ["--gamma-min", "1e-3", "--gamma-max", "1e3", "--grid", "25"]
    assert main([*argv, "--out", str(out)]) in (0, 4)
    rows = _read_csv(out / "sweep.csv")
    assert rows[0] == [
        "gamma",
        "cardinality",
        "J_sp",
        "J_pol",
        "J_loss_percent",
        "converged",
        "iterations",
        "status",
    ]
    assert len(rows) == 26
    assert int(rows[1][1]) == 6
    assert int(rows[-1][1]) <= 2
    assert {row[7] for row in rows[1:]} <= {"ok", "stalled"}


def test_sweep_is_byte_identical_across_thread_caps(tmp_path, synth_dir, monkeypatch):
    argv = ["sweep", "--input", str(synth_dir / "data.snpb"), "--rank", "6", "--format", "json"]
    argv += ["--gamma-min", "1e-2", "--gamma-max", "1e2", "--grid", "10"]
    payloads = []
    for threads in (1, 4):
        monkeypatch.setattr(settings, "SPDMD_THREADS", threads)
        out = tmp_path / f"threads{threads}"
        assert main([*argv, "--out", str(out)]) in (0, 4)
        payloads.append((out / "sweep.json").read_bytes())
    assert payloads[0] == payloads[1]
    document = json.loads(payloads[0])
    assert len(document["points"]) == 10
    assert document["distinct_supports"]


def test_decompose_is_idempotent(tmp_path, synth_dir):
    outputs = []
    for name in ("a", "b"):
        out = tmp_path / name
        assert main(["decompose", "--input", str(synth_dir / "data.snpb"), "--out", str(out)]) == 0
        outputs.append({path.name: path.read_bytes() for path in sorted(out.iterdir())})
    assert outputs[0] == outputs[1]


def test_sweep_marks_failed_points(tmp_path):
    sweep = SweepResult(
        points=[
            SweepPoint(
                gamma=0.1,
                cardinality=2,
                support=(0, 1),
                j_sp=1.0,
                j_pol=0.5,
                j_loss_percent=10.0,
                j_pol_percent=7.0,
                iterations=12,
                converged=True,
            ),
            SweepPoint(gamma=1.0, iterations=50),
            SweepPoint(gamma=10.0, error="conditioning: P is not positive definite"),
        ],
        gamma_grid=(0.1, 1.0, 10.0),
    )
    service = SparsityService(DecompositionService(ArtifactRepository(tmp_path)))
    service.write_sweep(sweep, ReportFormat.CSV)
    rows = _read_csv(tmp_path / "sweep.csv")
    assert [row[-1] for row in rows[1:]] == ["ok", "stalled", "failed"]
    assert rows[3][1] == "0"


def test_rank_one_mode_export_reads_back(tmp_path, synth_dir):
    out = tmp_path / "rank1"
    argv = ["decompose", "--input", str(synth_dir / "data.snpb"), "--rank", "1"]
    assert main([*argv, "--out", str(out)]) == 0
    grid, modes = snapshot_data.load_modes(out / "modes_real.snpb", out / "modes_imag.snpb")
    assert modes.shape == (grid.p, 1)
    assert np.linalg.norm(modes[:, 0]) == pytest.approx(1.0)


def test_invalid_thread_cap_is_reported(tmp_path, synth_dir, monkeypatch, capsys):
    monkeypatch.setattr(settings, "SPDMD_THREADS", 0)
    argv = ["sweep", "--input", str(synth_dir / "data.snpb"), "--rank", "6"]
    argv += ["--gamma-min", "1e-2", "--gamma-max", "1e2", "--grid", "4"]
    assert main([*argv, "--out", str(tmp_path / "sweep")]) == 2
    error = _error(capsys)
    assert error["error"] == "domain"
    assert error["exit_code"] == 2


def test_invalid_log_level_is_reported(tmp_path, synth_dir, monkeypatch, capsys):
    monkeypatch.setattr(settings, "LOG_LEVEL", "LOUD")
    argv = ["decompose", "--input", str(synth_dir / "data.snpb")]
    assert main([*argv, "--out", str(tmp_path / "out")]) == 2
    error = _error(capsys)
    assert error["error"] == "domain"
    assert "LOUD" in error["message"]


@pytest.mark.parametrize("field, value", [("SPDMD_THREADS", 0), ("LOG_LEVEL", "LOUD")])
def test_settings_reject_invalid_values(field, value):
    with pytest.raises(ValidationError):
        Settings(**{field: value})
