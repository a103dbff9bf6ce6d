"""Regenerate the frequency-spectrum tables and the two-axis profile as CSV.

    python scripts/reproduce_tables.py --outdir artifacts/tables --n-max 12
"""
import argparse
import logging
import os
import sys

ROOT = os.path.abspath(os.path.join(os.path.dirname(__file__), ".."))
if ROOT not in sys.path:
    sys.path.insert(0, ROOT)

from src.core.config import load_presets  # noqa: E402
from src.core.utils import ensure_dir, resolve_artifacts_path, write_csv  # noqa: E402
from src.spectrum.frequencies import FrequencyScheme, spectrum_frame, spectrum_table  # noqa: E402
from src.spectrum.profile import axis_profile, profile_frame  # noqa: E402

logger = logging.getLogger("reproduce_tables")

TABLES = {
    "onevar": "minimal_frequencies_onevar.csv",
    "twovar": "minimal_max_frequencies_twovar.csv",
    "exp1": "minimal_max_frequencies_exp1.csv",
    "exp2": "minimal_max_frequencies_exp2.csv",
}
PROFILE_SIGNS = (-1, 1, -1, -1, 1, -1)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--outdir", default=None)
    ap.add_argument("--n-min", type=int, default=2)
    ap.add_argument("--n-max", type=int, default=12)
    ap.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    args = ap.parse_args()
    logging.basicConfig(level=logging.INFO, stream=sys.stderr, format="%(levelname)s %(message)s")

    outdir = args.outdir or resolve_artifacts_path({"path": "artifacts/run_{date}/tables"})
    ensure_dir(outdir)
    presets = load_presets()
    for preset, filename in TABLES.items():
        scheme = FrequencyScheme(name=preset, **presets[preset])
        reports = spectrum_table(scheme, range(args.n_min, args.n_max + 1), threads=args.threads)
        path = write_csv(spectrum_frame(reports), os.path.join(outdir, filename))
        logger.info("wrote %s", path)

    twovar = FrequencyScheme(name="twovar", **presets["twovar"])
    points = axis_profile(len(PROFILE_SIGNS), twovar, PROFILE_SIGNS, (0.9, 1.1), 2001)
    path = write_csv(profile_frame(points), os.path.join(outdir, "axis_profile_n6.csv"))
    logger.info("wrote %s", path)


if __name__ == "__main__":
    main()
