"""Escaped-rate of the support-escape scan as a function of certificate depth.

Deeper certificates certify longer conjugated words, so fewer reports stay
inconclusive.

    python scripts/mif_report.py --bases cyclic:2 zfree:1 --depths 2 3 4 --samples 1000
"""

from __future__ import annotations

import argparse
from dataclasses import dataclass, field

from forge.construction import build_stages
from forge.mif import mif_scan, verify_escape


@dataclass
class ScanGrid:
    bases: list = field(default_factory=lambda: ["cyclic:2", "zfree:1"])
    depths: list = field(default_factory=lambda: [2, 3, 4])
    samples: int = 1000
    seeds: list = field(default_factory=lambda: [1, 2])


def run(grid: ScanGrid):
    print(f"{'base':26s} {'depth':>5} {'seed':>4} {'trivial':>7} {'escaped':>7} {'inconcl':>7} "
          f"{'falsif':>6} {'rate':>6} reverified")
    for base in grid.bases:
        cert = build_stages(base, max(grid.depths), verify=False)
        for depth in grid.depths:
            view = type(cert)(cert.base, cert.stages[:depth + 1])
            for seed in grid.seeds:
                reports: list = []
                s = mif_scan(view, grid.samples, view.stages[1].k, seed, reports=reports)
                ok = all(verify_escape(view, r) for r in reports)
                print(f"{base:26s} {depth:>5} {seed:>4} {s.trivial:>7} {s.escaped:>7} {s.inconclusive:>7} "
                      f"{s.falsifiers:>6} {s.conclusive_rate:>6.3f} {ok}")


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    d = ScanGrid()
    p.add_argument("--bases", nargs="+", default=d.bases)
    p.add_argument("--depths", type=int, nargs="+", default=d.depths)
    p.add_argument("--samples", type=int, default=d.samples)
    p.add_argument("--seeds", type=int, nargs="+", default=d.seeds)
    run(ScanGrid(**vars(p.parse_args())))


if __name__ == "__main__":
    main()
