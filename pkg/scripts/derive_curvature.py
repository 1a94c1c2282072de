"""Run the full symbolic chain and print every stage of the curvature derivation."""
from __future__ import annotations

import argparse
import time
from dataclasses import dataclass

from nctorus.geometry import derive_curvature
from nctorus.parametrix import parametrix_term
from nctorus.specfun import taylor, to_latex


@dataclass(frozen=True)
class Config:
    series_order: int = 6


def main(cfg: Config) -> None:
    t0 = time.perf_counter()
    for n in range(3):
        print(f"b_{n}: {len(parametrix_term(n))} terms")
    cur = derive_curvature()
    print(f"sphere-integrated b_2 ({len(cur.raw)} terms):\n  {cur.raw.latex()}")
    print(f"modular form ({len(cur.modular)} terms, pi^2 factor: {bool(cur.pi2)})")
    for term in cur.modular:
        print("  " + term.latex())
    print(f"k(s) = {to_latex(cur.k)}")
    print(f"  series: {[str(c) for c in taylor(cur.k, cfg.series_order).as_list()]}")
    print(f"H(s,t) = {to_latex(cur.H)}")
    tH = taylor(cur.H, 2)
    print("  series: " + ", ".join(f"({i},{j}): {c}" for (i, j), c in sorted(tH.coeffs.items())))
    print(f"constant: {cur.constant_note['meaning']}")
    print(f"done in {time.perf_counter() - t0:.2f}s")


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--series-order", type=int, default=Config.series_order)
    main(Config(p.parse_args().series_order))
