import json

import numpy as np
import pytest

from geodiscord.errors import NotPSD, StateFileError
from geodiscord.reports import ReportFile, SweepRow
from geodiscord.states import random_state
from geodiscord.storage import StateStorage, format_float, state_digest


@pytest.fixture
def storage():
    return StateStorage()


def _write(path, data):
    path.write_text(json.dumps(data), encoding="utf-8")
    return str(path)


def test_load_sample_states(storage, states_dir):
    s = storage.load_state(str(states_dir / "maximally_mixed_2x2.json"))
    assert np.abs(s.rho - np.eye(4) / 4).max() < 1e-15
    s = storage.load_state(str(states_dir / "bell_phi_plus.json"))
    assert abs(s.purity - 1) < 1e-15
    w = storage.load_amplitudes(str(states_dir / "w3.json"))
    assert w.N == 3


def test_missing_field_is_named(storage, tmp_path):
    path = _write(tmp_path / "bad.json", {"m": 2, "n": 2, "re": np.eye(4).tolist()})
    with pytest.raises(StateFileError) as info:
        storage.load_state(path)
    assert "'im'" in str(info.value)


def test_unreadable_inputs(storage, tmp_path):
    with pytest.raises(StateFileError):
        storage.load_state(str(tmp_path / "missing.json"))
    path = tmp_path / "broken.json"
    path.write_text("{\"m\": 2,", encoding="utf-8")
    with pytest.raises(StateFileError):
        storage.load_state(str(path))
    path = _write(tmp_path / "ragged.json", {"m": 2, "n": 2, "re": [[1.0], [0.0, 0.0]], "im": [[0.0]]})
    with pytest.raises(StateFileError):
        storage.load_state(path)


def test_amplitude_length_checked(storage, tmp_path):
    path = _write(tmp_path / "amps.json", {"N": 3, "re": [1.0, 0.0, 0.0, 0.0], "im": [0.0] * 4})
    with pytest.raises(StateFileError):
        storage.load_amplitudes(path)


def test_real_and_imaginary_shapes_must_match(storage, tmp_path):
    path = _write(tmp_path / "short_im.json", {"m": 2, "n": 2, "re": (np.eye(4) / 4).tolist(), "im": [[0.0]]})
    with pytest.raises(StateFileError) as info:
        storage.load_state(path)
    assert "shape" in str(info.value)
    path = _write(tmp_path / "short_amps.json", {"N": 2, "re": [1.0, 0.0, 0.0, 0.0], "im": [0.0]})
    with pytest.raises(StateFileError):
        storage.load_amplitudes(path)


def test_physics_errors_pass_through(storage, tmp_path):
    path = _write(tmp_path / "notpsd.json",
                  {"m": 2, "n": 2, "re": np.diag([1.5, -0.5, 0.0, 0.0]).tolist(), "im": np.zeros((4, 4)).tolist()})
    with pytest.raises(NotPSD):
        storage.load_state(path)


def test_save_and_load(storage, tmp_path):
    s = random_state(2, 3, 6, seed=3)
    path = str(tmp_path / "nested" / "state.json")
    storage.save_state(s, path)
    t = storage.load_state(path)
    assert (t.m, t.n) == (2, 3)
    assert np.array_equal(s.rho, t.rho)
    assert state_digest(s.rho) == state_digest(t.rho)


def test_state_digest():
    d0 = state_digest(np.eye(4) / 4)
    assert d0.startswith("sha256:") and len(d0) == len("sha256:") + 64
    assert d0 == state_digest(np.eye(4) / 4)
    assert d0 != state_digest(np.eye(4) / 4 + 1e-17j * np.ones((4, 4)) + 1e-12)


def test_sweep_csv_format(storage, tmp_path):
    rows = [SweepRow(param=0.5, deficit=-0.125), SweepRow(param=0.1, gd_lower=1 / 3, closed_form=1 / 3)]
    text = StateStorage.format_sweep_csv(rows)
    lines = text.splitlines()
    assert lines[0] == "param,gd_lower,min_upper,closed_form,oracle_gd,deficit"
    assert lines[1] == "0.5,,,,,-0.125"
    assert lines[2] == "0.10000000000000001,0.33333333333333331,,0.33333333333333331,,"
    path = tmp_path / "sweep.csv"
    storage.write_sweep_csv(rows, str(path))
    assert path.read_text(encoding="utf-8") == text


def test_format_float():
    assert format_float(None) == ""
    assert float(format_float(2 / 3)) == 2 / 3


def test_unwritable_path(storage, tmp_path):
    blocker = tmp_path / "file.txt"
    blocker.write_text("x", encoding="utf-8")
    with pytest.raises(StateFileError):
        storage.write_sweep_csv([SweepRow(param=0.0)], str(blocker / "out.csv"))


def test_report_roundtrip(storage, tmp_path):
    report = ReportFile(command="bounds", input_digest=state_digest(np.eye(4) / 4), seed=3,
                        sweep=[SweepRow(param=0.1, gd_lower=0.1 + 0.2)])
    path = tmp_path / "report.json"
    storage.write_report(report, str(path))
    again = ReportFile.model_validate_json(path.read_text(encoding="utf-8"))
    assert again == report
    assert again.sweep[0].gd_lower == 0.1 + 0.2
