"""
Storage module for geodiscord.

This module contains the reading and writing of state files, amplitude
files, JSON reports and sweep CSVs. Input files are validated against the
JSON schemas in data/ before they are turned into states.
"""

import csv
import hashlib
import io
import json
import logging
import os
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
from jsonschema import ValidationError, validate

from .config import Tolerances
from .errors import StateFileError
from .reports import SWEEP_COLUMNS, ReportFile, SweepRow
from .states import BipartiteState, MultiQubitPureState, validate_state

logger = logging.getLogger(__name__)

DATA_DIR = Path(__file__).resolve().parent.parent / "data"


def state_digest(matrix: np.ndarray) -> str:
    """sha256 over the canonical JSON of a matrix or amplitude vector."""
    arr = np.asarray(matrix, dtype=complex)
    payload = json.dumps({"shape": list(arr.shape), "re": np.real(arr).ravel().tolist(),
                          "im": np.imag(arr).ravel().tolist()}, separators=(",", ":"))
    return f"sha256:{hashlib.sha256(payload.encode('utf-8')).hexdigest()}"


def format_float(value: Optional[float]) -> str:
    """17 significant digits, empty for missing values."""
    return "" if value is None else format(float(value), ".17g")


class StateStorage:
    """Load and save states and reports."""

    def __init__(self, schema_dir: Optional[str] = None):
        """
        Initialize the StateStorage.

        Args:
            schema_dir: Directory holding state_file.schema.json and amplitude_file.schema.json
        """
        self.schema_dir = Path(schema_dir) if schema_dir else DATA_DIR
        self.state_schema = self._load_schema("state_file.schema.json")
        self.amplitude_schema = self._load_schema("amplitude_file.schema.json")

    def _load_schema(self, name: str) -> Dict[str, Any]:
        path = self.schema_dir / name
        try:
            with open(path, "r", encoding="utf-8") as f:
                return json.load(f)
        except (FileNotFoundError, json.JSONDecodeError) as e:
            logger.error(f"Error loading schema {path}: {e}")
            raise StateFileError(f"cannot load schema {path}: {e}") from e

    def _read_json(self, path: str, schema: Dict[str, Any]) -> Dict[str, Any]:
        try:
            with open(path, "r", encoding="utf-8") as f:
                data = json.load(f)
        except (FileNotFoundError, IsADirectoryError, PermissionError) as e:
            logger.error(f"Error reading {path}: {e}")
            raise StateFileError(f"cannot read {path}: {e}") from e
        except json.JSONDecodeError as e:
            logger.error(f"Malformed JSON in {path}: {e}")
            raise StateFileError(f"malformed JSON in {path}: {e}") from e

        try:
            validate(instance=data, schema=schema)
        except ValidationError as ve:
            logger.error(f"[SCHEMA ERROR] {path}: {ve.message}")
            raise StateFileError(f"{path}: {ve.message}") from ve
        return data

    @staticmethod
    def _complex_array(path: str, data: Dict[str, Any]) -> np.ndarray:
        """re + i·im, with both parts rectangular and of the same shape."""
        try:
            re = np.asarray(data["re"], dtype=float)
            im = np.asarray(data["im"], dtype=float)
        except ValueError as e:
            logger.error(f"Ragged 're' or 'im' in {path}: {e}")
            raise StateFileError(f"{path}: 're' and 'im' must be rectangular ({e})") from e
        if re.shape != im.shape:
            logger.error(f"Mismatched 're' {re.shape} and 'im' {im.shape} in {path}")
            raise StateFileError(f"{path}: 're' has shape {re.shape} but 'im' has shape {im.shape}")
        return re + 1j * im

    def load_state(self, path: str, tol: Optional[Tolerances] = None) -> BipartiteState:
        """
        Load and validate a StateFile.

        Raises:
            StateFileError: missing, malformed or schema-violating file
            PhysicsError: the matrix is not a density matrix of the declared dimensions
        """
        data = self._read_json(path, self.state_schema)
        rho = self._complex_array(path, data)
        state = validate_state(rho, data["m"], data["n"], tol)
        logger.info(f"Loaded {state.m}x{state.n} state from {path}")
        return state

    def load_amplitudes(self, path: str, tol: Optional[Tolerances] = None) -> MultiQubitPureState:
        data = self._read_json(path, self.amplitude_schema)
        amps = self._complex_array(path, data)
        if amps.size != 2 ** data["N"]:
            raise StateFileError(f"{path}: expected {2 ** data['N']} amplitudes for N={data['N']}, got {amps.size}")
        state = MultiQubitPureState.from_amplitudes(amps, tol)
        logger.info(f"Loaded {state.N}-qubit pure state from {path}")
        return state

    def save_state(self, state: BipartiteState, path: str) -> None:
        record = {"m": state.m, "n": state.n,
                  "re": np.real(state.rho).tolist(), "im": np.imag(state.rho).tolist()}
        self._write_text(path, json.dumps(record, indent=2))
        logger.info(f"Stored {state.m}x{state.n} state in {path}")

    def write_report(self, report: ReportFile, path: str) -> None:
        self._write_text(path, report.model_dump_json(indent=2))

    @staticmethod
    def format_sweep_csv(rows: Sequence[SweepRow]) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(SWEEP_COLUMNS)
        for row in rows:
            values = row.model_dump()
            writer.writerow([format_float(values[col]) for col in SWEEP_COLUMNS])
        return buffer.getvalue()

    def write_sweep_csv(self, rows: List[SweepRow], path: str) -> None:
        self._write_text(path, self.format_sweep_csv(rows))
        logger.info(f"Stored {len(rows)} sweep rows in {path}")

    def _write_text(self, path: str, text: str) -> None:
        try:
            directory = os.path.dirname(path)
            if directory:
                os.makedirs(directory, exist_ok=True)
            with open(path, "w", encoding="utf-8") as f:
                f.write(text)
        except OSError as e:
            logger.error(f"Error writing {path}: {e}")
            raise StateFileError(f"cannot write {path}: {e}") from e
