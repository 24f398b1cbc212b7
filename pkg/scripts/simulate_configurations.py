"""Simulate the six input configurations end to end and re-infer overlaps from sampled counts.

For each configuration the expected post-selected distribution is computed
with multi-pair emission, losses and pseudo-number-resolving detection; a
finite sample is drawn, overlaps are estimated with Poisson error bars, and
the c1 bounds and the TVD to the generating distribution are reported.

Usage: python scripts/simulate_configurations.py [--events N] [--noise none|full]
"""
import argparse

from indist.config import CONFIGURATIONS, configuration_visibilities
from indist.core import OverlapGraph
from indist.inference import c1_bounds
from indist.simulator import (
    DetectionSpec,
    InterferometerSpec,
    SourceSpec,
    build_rho_source,
    estimate_overlaps_from_distribution,
    expected_postselection,
)
from indist.stats import normalize, propagate, sample_counts, tvd

MEASURED_V = (0.944, 0.835, 0.915)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--events", type=int, default=10_000)
    ap.add_argument("--noise", choices=("none", "full"), default="full")
    ap.add_argument("--replicates", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    spec = InterferometerSpec.measured(lossy=True)
    src, det = SourceSpec(), DetectionSpec()
    if args.noise == "none":
        spec = spec.without_loss()
    for k, name in enumerate(CONFIGURATIONS):
        model = build_rho_source(*configuration_visibilities(name, MEASURED_V))
        ps = expected_postselection(model, spec, src, det, args.noise)
        pe = ps.distribution
        counts = sample_counts(pe, args.events, seed=args.seed + k)

        def est(d):
            return estimate_overlaps_from_distribution(d, spec, src, clamp=True).chain_values()

        point = est(normalize(counts))
        unc = propagate(counts, est, args.replicates, args.seed)
        c1 = c1_bounds(OverlapGraph.chain(*point))
        d = tvd(normalize(counts), pe)
        ov = "  ".join(f"r_{e} {v:.3f}±{u.sigma:.3f}" for e, v, u in zip(("AB", "BC", "CD"), point, unc))
        print(f"{name}  retained {ps.retained:.2e}  {ov}  c1 [{c1.lo:.3f}, {c1.hi:.3f}]  TVD {d:.3f}")


if __name__ == "__main__":
    main()
