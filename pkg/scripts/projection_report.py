"""Compare derived projection-dilaton coefficients with the printed f_1..f_4."""
from __future__ import annotations

import argparse
from dataclasses import dataclass

import numpy as np

from nctorus.geometry import BASIS, derive_curvature, derive_projection_curvature
from nctorus.oracle import projection_check, random_generators, random_projection
from nctorus.specfun import evaluate
from nctorus.specfun.library import f1, f2, f3, f4


@dataclass(frozen=True)
class Config:
    seed: int = 0
    trials: int = 20
    dim: int = 6
    s_values: tuple = (-2.0, -1.0, -0.5, 0.5, 1.0, 2.0)


def main(cfg: Config) -> None:
    cur = derive_curvature()
    pc = derive_projection_curvature()
    printed = (f1(), f2(), f3(), f4())
    print(pc.note)
    print(f"{'s':>6} " + " ".join(f"{b + ' derived':>14} {b + ' printed':>14}" for b in BASIS))
    for sv in cfg.s_values:
        row = []
        for d, p in zip(pc.statement_scale(), printed):
            row += [float(evaluate(d, sv)), float(evaluate(p, sv))]
        print(f"{sv:>6.2f} " + " ".join(f"{v:>14.6e}" for v in row))
    rng = np.random.default_rng(cfg.seed)
    scaled_printed = [pc.normalization * f for f in printed]
    worst_derived = worst_printed = 0.0
    for _ in range(cfg.trials):
        p = random_projection(rng, cfg.dim)
        gens = random_generators(rng, cfg.dim)
        for sv in cfg.s_values:
            worst_derived = max(worst_derived, projection_check(gens, p, sv, pc.f, cur.k, cur.H))
            worst_printed = max(worst_printed, projection_check(gens, p, sv, scaled_printed, cur.k, cur.H))
    print(f"general formula vs derived coefficients: max error {worst_derived:.2e}")
    print(f"general formula vs {pc.normalization} x printed f: max error {worst_printed:.2e}")


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--seed", type=int, default=Config.seed)
    p.add_argument("--trials", type=int, default=Config.trials)
    p.add_argument("--dim", type=int, default=Config.dim)
    a = p.parse_args()
    main(Config(a.seed, a.trials, a.dim))
