"""
Tests for the slam-booster command line.
"""

import json

import pytest
from click.testing import CliRunner

from slam_booster import __version__
from slam_booster.cli import cli
from slam_booster.core.errors import ExitCode
from slam_booster.evaluation.verification import RunCheck
from slam_booster.geometry.se3 import Pose
from slam_booster.storage.dataset import DEPTH_DIR, GROUND_TRUTH_NAME, MANIFEST_NAME, write_trajectory
from slam_booster.storage.results import (
    CONFIG_NAME,
    EVALUATION_NAME,
    FRAME_LOG_NAME,
    KNOB_ACTIVITY_NAME,
    REPORT_NAME,
    TRAJECTORY_NAME,
)


def invoke(*args):
    return CliRunner().invoke(cli, ["--no-log-file", *args])


@pytest.fixture(scope="module")
def wall_dataset(tmp_path_factory):
    target = tmp_path_factory.mktemp("cli") / "wall"
    result = invoke("simulate", "--suite", "wall", "--out", str(target))
    assert result.exit_code == 0, result.output
    return target


@pytest.fixture
def trajectories(tmp_path):
    truth = tmp_path / "truth.txt"
    shifted = tmp_path / "shifted.txt"
    poses = [Pose.from_translation([0.1 * i, 0.0, 1.0]) for i in range(4)]
    write_trajectory(truth, poses)
    write_trajectory(shifted, [Pose.from_translation(p.translation + [0.03, 0.04, 0.0]) for p in poses])
    return truth, shifted


def test_version():
    result = invoke("--version")
    assert result.exit_code == 0
    assert __version__ in result.output


class TestSimulate:
    """Test cases for `simulate`."""

    def test_wall_suite(self, wall_dataset):
        assert sorted(p.name for p in (wall_dataset / DEPTH_DIR).iterdir()) == ["000000.pgm", "000001.pgm"]
        lines = [
            line
            for line in (wall_dataset / GROUND_TRUTH_NAME).read_text().splitlines()
            if line and not line.startswith("#")
        ]
        assert len(lines) == 2
        assert json.loads((wall_dataset / MANIFEST_NAME).read_text())["frame_count"] == 2

    def test_requires_a_source(self, tmp_path):
        result = invoke("simulate", "--out", str(tmp_path / "x"))
        assert result.exit_code == ExitCode.INVALID_SPEC
        assert not (tmp_path / "x").exists()

    def test_invalid_scene(self, tmp_path):
        scene = tmp_path / "scene.json"
        scene.write_text(json.dumps({"primitives": []}))
        result = invoke("simulate", "--suite", "wall", "--scene", str(scene), "--out", str(tmp_path / "x"))
        assert result.exit_code == ExitCode.INVALID_SPEC
        assert not (tmp_path / "x").exists()


class TestEval:
    """Test cases for `eval`."""

    def test_identical(self, trajectories):
        truth, _ = trajectories
        result = invoke("eval", str(truth), str(truth))
        assert result.exit_code == 0
        assert "0.000000" in result.output

    def test_offset(self, trajectories, tmp_path):
        truth, shifted = trajectories
        csv = tmp_path / "ite.csv"
        result = invoke("eval", str(shifted), str(truth), "--csv", str(csv))
        assert result.exit_code == 0
        assert "0.050000" in result.output
        assert len(csv.read_text().splitlines()) == 5

    def test_malformed(self, trajectories, tmp_path):
        truth, _ = trajectories
        bad = tmp_path / "bad.txt"
        bad.write_text("0 1 2 3\n")
        assert invoke("eval", str(bad), str(truth)).exit_code == ExitCode.PARSE_ERROR

    def test_length_mismatch(self, trajectories, tmp_path):
        truth, _ = trajectories
        short = tmp_path / "short.txt"
        write_trajectory(short, [Pose.identity()])
        assert invoke("eval", str(short), str(truth)).exit_code == ExitCode.LENGTH_MISMATCH

    def test_missing_file(self, trajectories, tmp_path):
        truth, _ = trajectories
        assert invoke("eval", str(tmp_path / "absent.txt"), str(truth)).exit_code == ExitCode.DATASET_ERROR


class TestRun:
    """Test cases for `run`."""

    def test_writes_outputs(self, wall_dataset, tmp_path):
        out = tmp_path / "out"
        result = invoke(
            "run", "--dataset", str(wall_dataset), "--out", str(out), "--set", "controller.bootstrap_frames=1"
        )
        assert result.exit_code == 0, result.output
        for name in (CONFIG_NAME, TRAJECTORY_NAME, FRAME_LOG_NAME, REPORT_NAME, KNOB_ACTIVITY_NAME, EVALUATION_NAME):
            assert (out / name).is_file()
        echo = json.loads((out / CONFIG_NAME).read_text())
        assert echo["controller"]["bootstrap_frames"] == 1
        assert not list(out.glob(".*.tmp"))

    def test_evaluation_passes_self_checks(self, wall_dataset, tmp_path):
        out = tmp_path / "out"
        result = invoke("run", "--dataset", str(wall_dataset), "--out", str(out))
        assert result.exit_code == 0, result.output
        evaluation = json.loads((out / EVALUATION_NAME).read_text())
        assert evaluation["consistent"] is True
        assert evaluation["report_mismatches"] == {}
        assert evaluation["bad_corrections"] == []
        # the wall suite is too short for a correlation
        assert evaluation["velocity_ite_r"] is None
        assert "velocity/ITE r" in result.output

    def test_failed_self_check_still_writes(self, wall_dataset, tmp_path, mocker):
        mocker.patch("slam_booster.cli.check_run", return_value=RunCheck(bad_corrections=[1]))
        out = tmp_path / "out"
        result = invoke("run", "--dataset", str(wall_dataset), "--out", str(out))
        assert result.exit_code == 0, result.output
        assert "self-checks" in result.output
        assert json.loads((out / EVALUATION_NAME).read_text())["bad_corrections"] == [1]

    def test_missing_dataset(self, tmp_path):
        out = tmp_path / "out"
        result = invoke("run", "--dataset", str(tmp_path / "absent"), "--out", str(out))
        assert result.exit_code == ExitCode.DATASET_ERROR
        assert not out.exists()

    def test_no_dataset(self, tmp_path):
        assert invoke("run", "--out", str(tmp_path / "out")).exit_code == ExitCode.CONFIG_ERROR

    def test_bad_override(self, wall_dataset, tmp_path):
        result = invoke("run", "--dataset", str(wall_dataset), "--set", "controller.v_ref=-1")
        assert result.exit_code == ExitCode.CONFIG_ERROR


class TestSweep:
    """Test cases for `sweep`."""

    def test_single_value(self, wall_dataset, tmp_path):
        out = tmp_path / "sweep"
        result = invoke(
            "sweep", "--dataset", str(wall_dataset), "--knob", "csr", "--values", "1", "--workers", "1", "--out", str(out)
        )
        assert result.exit_code == 0, result.output
        table = (out / "sweep_csr.csv").read_text().splitlines()
        assert len(table) == 2
        assert json.loads((out / CONFIG_NAME).read_text())["sweep"]["values"] == [1]

    def test_creates_nested_output_dir(self, wall_dataset, tmp_path):
        out = tmp_path / "a" / "b"
        result = invoke(
            "sweep", "--dataset", str(wall_dataset), "--knob", "csr", "--values", "1", "--workers", "1", "--out", str(out)
        )
        assert result.exit_code == 0, result.output
        assert (out / "sweep_csr.csv").is_file()
        assert (out / CONFIG_NAME).is_file()

    def test_needs_knob_or_ladder(self, wall_dataset):
        assert invoke("sweep", "--dataset", str(wall_dataset)).exit_code == ExitCode.INVALID_SPEC

    def test_bad_values(self, wall_dataset):
        result = invoke("sweep", "--dataset", str(wall_dataset), "--knob", "csr", "--values", "one")
        assert result.exit_code == ExitCode.INVALID_SPEC
