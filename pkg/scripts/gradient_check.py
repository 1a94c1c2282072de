"""Finite-difference check of the action gradient for both omega_2 variants."""
from __future__ import annotations

import argparse
from dataclasses import dataclass

import numpy as np

from nctorus.oracle import gradient_check, random_hermitian, random_model


@dataclass(frozen=True)
class Config:
    seed: int = 0
    trials: int = 20
    dim_lo: int = 2
    dim_hi: int = 6
    eps: float = 1e-4


def main(cfg: Config) -> None:
    rng = np.random.default_rng(cfg.seed)
    print(f"{'dim':>4} {'finite diff':>14} {'stated':>14} {'rel err':>9} {'corrected':>14} {'rel err':>9}")
    worst = {"stated": 0.0, "corrected": 0.0}
    for _ in range(cfg.trials):
        n = int(rng.integers(cfg.dim_lo, cfg.dim_hi + 1))
        model = random_model(rng, n)
        a = random_hermitian(rng, n)
        res = {v: gradient_check(model, a, cfg.eps, v) for v in worst}
        for v, r in res.items():
            worst[v] = max(worst[v], r.rel_error)
        pa, co = res["stated"], res["corrected"]
        print(f"{n:>4} {pa.fd:>14.6e} {pa.pairing:>14.6e} {pa.rel_error:>9.1e} {co.pairing:>14.6e} {co.rel_error:>9.1e}")
    for v, w in worst.items():
        print(f"max relative error, omega2 {v}: {w:.2e}")


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--seed", type=int, default=Config.seed)
    p.add_argument("--trials", type=int, default=Config.trials)
    p.add_argument("--eps", type=float, default=Config.eps)
    a = p.parse_args()
    main(Config(seed=a.seed, trials=a.trials, eps=a.eps))
