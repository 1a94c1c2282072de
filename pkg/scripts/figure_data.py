"""Write CSV data for every function graph: f_1..f_4, omega_1, the omega_2 surface and diagonals."""
from __future__ import annotations

import argparse
import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from nctorus.specfun import build, evaluate
from nctorus.specfun.library import antidiagonal, diagonal


@dataclass(frozen=True)
class Config:
    out: Path = Path("figure_data")
    lo: float = -5.0
    hi: float = 5.0
    step: float = 0.05
    surface_lo: float = -3.0
    surface_hi: float = 3.0
    surface_step: float = 0.1


def _write(path: Path, header, rows) -> None:
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows([f"{v:.16g}" for v in row] for row in rows)


def main(cfg: Config) -> None:
    cfg.out.mkdir(parents=True, exist_ok=True)
    grid = np.arange(int(round((cfg.hi - cfg.lo) / cfg.step)) + 1) * cfg.step + cfg.lo
    curves = {name: build(name) for name in ("f1", "f2", "f3", "f4", "omega1")}
    w2 = build("omega2")
    curves["omega2_diagonal"] = diagonal(w2)
    curves["omega2_antidiagonal"] = antidiagonal(w2)
    for name, f in curves.items():
        _write(cfg.out / f"{name}.csv", ["s", "value"], zip(grid, evaluate(f, grid)))
        print(f"wrote {cfg.out / (name + '.csv')}")
    sg = np.arange(int(round((cfg.surface_hi - cfg.surface_lo) / cfg.surface_step)) + 1) * cfg.surface_step + cfg.surface_lo
    S, T = np.meshgrid(sg, sg, indexing="ij")
    V = evaluate(w2, S, T)
    _write(cfg.out / "omega2_surface.csv", ["s", "t", "value"], zip(S.ravel(), T.ravel(), V.ravel()))
    print(f"wrote {cfg.out / 'omega2_surface.csv'}")


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--out", type=Path, default=Config.out)
    main(Config(out=p.parse_args().out))
