"""Witness sizes and verification times for random k-tuples in a ball.

    python scripts/transitivity_sweep.py --base cyclic:2 --radius 3 --arity 2 3 4 --samples 100
"""

from __future__ import annotations

import argparse
import random
import statistics
import time
from dataclasses import dataclass, field

from forge.construction import build_stages
from forge.limit import limit_apply
from forge.transitivity import TransitivityEngine


@dataclass
class SweepConfig:
    base: str = "cyclic:2"
    stages: int = 4
    radius: int = 3
    arity: list = field(default_factory=lambda: [2, 3, 4])
    samples: int = 100
    seed: int = 0


def sweep(cfg: SweepConfig) -> list[dict]:
    cert = build_stages(cfg.base, cfg.stages, verify=False)
    eng = TransitivityEngine(cert)
    pts = cert.ambient.ball(cfg.radius).members
    rng = random.Random(cfg.seed)
    rows = []
    for k in cfg.arity:
        nodes, flat, swaps, times, failures = [], [], [], [], 0
        for _ in range(cfg.samples):
            src, dst = rng.sample(pts, k), rng.sample(pts, k)
            w = eng.witness(src, dst)
            t0 = time.perf_counter()
            failures += [limit_apply(cert, w.slp, x).point for x in src] != dst
            times.append(time.perf_counter() - t0)
            nodes.append(len(w.slp.nodes))
            flat.append(w.slp.flat_length)
            swaps.append(w.transpositions)
        rows.append({"arity": k, "failures": failures,
                     "median_nodes": statistics.median(nodes), "max_nodes": max(nodes),
                     "median_flat": statistics.median(flat), "max_flat": max(flat),
                     "median_swaps": statistics.median(swaps), "max_verify_ms": 1000 * max(times)})
    return rows


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    d = SweepConfig()
    p.add_argument("--base", default=d.base)
    p.add_argument("--stages", type=int, default=d.stages)
    p.add_argument("--radius", type=int, default=d.radius)
    p.add_argument("--arity", type=int, nargs="+", default=d.arity)
    p.add_argument("--samples", type=int, default=d.samples)
    p.add_argument("--seed", type=int, default=d.seed)
    cfg = SweepConfig(**vars(p.parse_args()))
    print(f"{'k':>2} {'fail':>4} {'nodes(med/max)':>15} {'flat(med/max)':>22} {'swaps':>6} {'verify ms':>9}")
    for r in sweep(cfg):
        print(f"{r['arity']:>2} {r['failures']:>4} {r['median_nodes']:>7}/{r['max_nodes']:<7} "
              f"{r['median_flat']:>10}/{r['max_flat']:<11} {r['median_swaps']:>6} {r['max_verify_ms']:>9.2f}")


if __name__ == "__main__":
    main()
