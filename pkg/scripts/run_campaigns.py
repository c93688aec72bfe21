"""Run every check on every ensemble and write one JSON report per ensemble.

    python scripts/run_campaigns.py --samples 20000 --seed 7 --out results/
"""

import argparse
import time
from pathlib import Path

from entanglemetry.catalog import EnsembleSpec
from entanglemetry.report import ReportEnvelope, serialize
from entanglemetry.verify import ALL_CHECKS, CampaignConfig, run_campaign

ENSEMBLES = ("haar4", "product13", "product22", "fullproduct", "gabcd", "lab3")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--samples", type=int, default=20_000)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--out", type=Path, default=Path("results"))
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)

    for name in ENSEMBLES:
        spec = EnsembleSpec.from_name(name, args.seed, args.samples)
        cfg = CampaignConfig(spec, ALL_CHECKS)
        t0 = time.perf_counter()
        res = run_campaign(cfg, threads=args.threads)
        dt = time.perf_counter() - t0
        (args.out / f"{name}.json").write_bytes(serialize(ReportEnvelope("campaign", res, spec.to_json())))
        print(f"{name:<12} {'PASS' if res.passed else 'FAIL'}  {dt:6.1f} s")
        for check, r in res.checks.items():
            if r.count > r.not_applicable:
                print(f"    {check:<24} {r.passes:>7} pass {r.failures:>4} fail  min margin {r.min_margin:.3e}")


if __name__ == "__main__":
    main()
