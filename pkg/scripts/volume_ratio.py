"""Volume of the delay region with a non-trivial c1 lower bound, ideal versus measured visibilities.

Usage: python scripts/volume_ratio.py [--samples N] [--mesh-dir DIR]
"""
import argparse
from pathlib import Path

from indist.surfaces import DelayAxes, isosurface, nontrivial_region_volume, volume_ratio

MEASURED_V = (0.944, 0.835, 0.915)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--samples", type=int, default=10_000_000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--widths", nargs=3, type=float, default=[1.0, 1.0, 1.0])
    ap.add_argument("--mesh-dir", type=Path, help="write ideal.mesh and measured.mesh here")
    args = ap.parse_args()

    ideal = DelayAxes((1.0, 1.0, 1.0), tuple(args.widths))
    real = DelayAxes(MEASURED_V, tuple(args.widths))
    for label, axes in (("ideal", ideal), ("measured", real)):
        v = nontrivial_region_volume(axes, "grid")
        print(f"{label:9s} V={axes.visibilities}  grid volume {v.volume:.4f}")
    r = volume_ratio(ideal, real, "monte-carlo", args.samples, args.seed)
    print(f"ratio (Monte-Carlo, {args.samples} samples): {r.ratio:.4f} ± {r.stderr:.4f}")
    g = volume_ratio(ideal, real, "grid")
    print(f"ratio (grid {ideal.grid}^3): {g.ratio:.4f}")
    if args.mesh_dir:
        args.mesh_dir.mkdir(parents=True, exist_ok=True)
        isosurface(ideal).write(args.mesh_dir / "ideal.mesh")
        isosurface(real).write(args.mesh_dir / "measured.mesh")


if __name__ == "__main__":
    main()
