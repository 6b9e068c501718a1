# scripts/validate_states.py
# Checks every state file in data/states/ against the schema and the density-matrix invariants.

import glob
import json
import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), ".."))

from geodiscord.errors import GeoDiscordError
from geodiscord.storage import StateStorage

STATES_DIR = os.path.join(os.path.dirname(__file__), "../data/states/")


def main():
    storage = StateStorage()
    failures = 0
    for json_file in sorted(glob.glob(os.path.join(STATES_DIR, "*.json"))):
        try:
            with open(json_file, "r", encoding="utf-8") as f:
                is_amplitudes = "N" in json.load(f)
            if is_amplitudes:
                state = storage.load_amplitudes(json_file)
                print(f"[OK] {json_file}: {state.N}-qubit pure state")
            else:
                state = storage.load_state(json_file)
                print(f"[OK] {json_file}: {state.m}x{state.n} state, purity {state.purity:.6f}")
        except (GeoDiscordError, ValueError) as e:
            failures += 1
            print(f"[SCHEMA ERROR] {json_file}: {e}")
    sys.exit(1 if failures else 0)


if __name__ == "__main__":
    main()
