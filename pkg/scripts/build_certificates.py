"""Build and verify certificates for several bases, recording stage data and timings.

    python scripts/build_certificates.py --bases cyclic:2 zfree:1 --stages 4 --out-dir certs
"""

from __future__ import annotations

import argparse
import json
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

from forge.config import load_config
from forge.construction import build_stages, verify_certificate


@dataclass
class BuildRun:
    bases: list = field(default_factory=lambda: ["cyclic:2", "cyclic:3", "prod(cyclic:2,cyclic:2)", "zfree:1"])
    stages: int = 3
    out_dir: str = "certs"
    verify: bool = True


def slug(base: str) -> str:
    return "".join(c if c.isalnum() else "_" for c in base).strip("_")


def run(cfg: BuildRun) -> list[dict]:
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    budgets = load_config()
    rows = []
    for base in cfg.bases:
        t0 = time.perf_counter()
        cert = build_stages(base, cfg.stages, budgets, verify=cfg.verify)
        build_s = time.perf_counter() - t0
        path = out / f"{slug(base)}.json"
        cert.save(path)
        t0 = time.perf_counter()
        ok = verify_certificate(cert, budgets).ok if cfg.verify else None
        rows.append({
            "base": base, "path": str(path), "complete": cert.complete, "verified": ok,
            "build_s": round(build_s, 3), "verify_s": round(time.perf_counter() - t0, 3),
            "nu": [s.nu for s in cert.stages], "k": [s.k for s in cert.stages],
            "support_radius": [s.support_radius for s in cert.stages],
        })
        print(f"{base:28s} nu={rows[-1]['nu']} k={rows[-1]['k']} build {build_s:.2f}s verified={ok}")
    (out / "summary.json").write_text(json.dumps({"run": asdict(cfg), "rows": rows}, indent=1) + "\n")
    return rows


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--bases", nargs="+", default=BuildRun().bases)
    p.add_argument("--stages", type=int, default=BuildRun.stages)
    p.add_argument("--out-dir", default=BuildRun.out_dir)
    p.add_argument("--no-verify", action="store_true")
    a = p.parse_args()
    run(BuildRun(a.bases, a.stages, a.out_dir, not a.no_verify))


if __name__ == "__main__":
    main()
