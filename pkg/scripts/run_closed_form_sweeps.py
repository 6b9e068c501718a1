# scripts/run_closed_form_sweeps.py
# Writes Werner, isotropic and counterexample sweeps to data/sweeps/.

import os
import sys

import numpy as np

sys.path.insert(0, os.path.join(os.path.dirname(__file__), ".."))

from geodiscord.pipeline import DiscordPipeline
from geodiscord.storage import StateStorage

OUTPUT_DIR = os.path.join(os.path.dirname(__file__), "../data/sweeps")


def main():
    pipeline = DiscordPipeline()
    storage = StateStorage()
    for m in (2, 3, 4, 5):
        rows = pipeline.sweep("werner", np.linspace(-1.0, 1.0, 21), m=m)
        storage.write_sweep_csv(rows, os.path.join(OUTPUT_DIR, f"werner_m{m}.csv"))
        rows = pipeline.sweep("isotropic", np.linspace(0.0, 1.0, 21), m=m)
        storage.write_sweep_csv(rows, os.path.join(OUTPUT_DIR, f"isotropic_m{m}.csv"))
    for N in (3, 4, 5):
        rows = pipeline.sweep("counterexample", np.linspace(0.0, 1.0, 101), N=N)
        storage.write_sweep_csv(rows, os.path.join(OUTPUT_DIR, f"counterexample_N{N}.csv"))
        violated = [row.param for row in rows if row.deficit < pipeline.tol.deficit]
        if violated:
            print(f"[N={N}] monogamy violated for p in [{min(violated):.2f}, {max(violated):.2f}]")
    print(f"[OK] Wrote sweeps to {OUTPUT_DIR}")


if __name__ == "__main__":
    main()
