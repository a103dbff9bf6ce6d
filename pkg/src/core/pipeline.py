"""Command-line front end.

    python -m src.core.pipeline count data/instances/example11.cnf --multiplier 20
    python -m src.core.pipeline verify data/instances/example5.cnf --preset ternary
    python -m src.core.pipeline spectrum --preset onevar --n-min 2 --n-max 10
    python -m src.core.pipeline profile --preset twovar --n 6 --signs=-1,1,-1,-1,1,-1

Exit codes: 0 satisfiable / success, 20 unsatisfiable, 1 error.
"""
from __future__ import annotations
import argparse
import json
import logging
import os
import sys
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, ValidationError

from packages.oracle_toolkit import (
    count_by_enumeration,
    count_by_expansion,
    count_by_inverse_expansion,
)
from src.core.config import RunConfig, build_run_config, load_yaml_config
from src.core.errors import MismatchDetected, ResidualTooLarge, SatSumError
from src.core.report import emit_report, plain_value
from src.core.utils import ensure_dir
from src.counter.lattice import count
from src.data.dimacs import load_dimacs
from src.spectrum.frequencies import spectrum_frame, spectrum_table
from src.spectrum.profile import axis_profile, profile_frame

logger = logging.getLogger(__name__)

EXIT_SAT = 0
EXIT_ERROR = 1
EXIT_UNSAT = 20


class VerifyReport(BaseModel):
    agree: bool
    counts: Dict[str, int]
    constant_terms: Dict[str, float]


def _require_input(cfg: RunConfig) -> str:
    if not cfg.input:
        raise SatSumError(f"{cfg.command} needs an input DIMACS file", stage="config")
    return cfg.input


def _count_kwargs(cfg: RunConfig) -> dict:
    return dict(
        multiplier=cfg.multiplier,
        modulus=cfg.modulus,
        threads=cfg.threads,
        tolerance=cfg.tolerance,
        force=cfg.force,
        max_points=cfg.max_points,
        limit=cfg.limit,
        progress=cfg.progress,
    )


def run_count(cfg: RunConfig) -> Tuple[int, str]:
    cnf = load_dimacs(_require_input(cfg))
    result = count(cnf, cfg.scheme(), include_timing=cfg.include_timing, **_count_kwargs(cfg))
    code = EXIT_SAT if result.satisfiable else EXIT_UNSAT
    return code, emit_report(result, cfg.output_format())


def run_oracle(cfg: RunConfig) -> Tuple[int, str]:
    cnf = load_dimacs(_require_input(cfg))
    result = count_by_enumeration(cnf, threads=cfg.threads)
    code = EXIT_SAT if result.count > 0 else EXIT_UNSAT
    return code, emit_report(result, cfg.output_format())


def run_verify(cfg: RunConfig) -> Tuple[int, str]:
    cnf = load_dimacs(_require_input(cfg))
    lattice = count(cnf, cfg.scheme(), **_count_kwargs(cfg))
    oracles = [
        count_by_enumeration(cnf, threads=cfg.threads),
        count_by_expansion(cnf),
        count_by_inverse_expansion(cnf),
    ]
    counts = {"lattice": lattice.count}
    constants = {"lattice": lattice.constant_term}
    for res in oracles:
        counts[res.method] = res.count
        constants[res.method] = float(res.constant_term)
    if len(set(counts.values())) != 1:
        raise MismatchDetected(f"model counts disagree: {counts}", counts=counts)
    report = VerifyReport(agree=True, counts=counts, constant_terms=constants)
    return EXIT_SAT, emit_report(report, cfg.output_format())


def run_spectrum(cfg: RunConfig) -> Tuple[int, str]:
    reports = spectrum_table(cfg.scheme(), range(cfg.n_min, cfg.n_max + 1), limit=cfg.limit, threads=cfg.threads)
    return EXIT_SAT, emit_report(spectrum_frame(reports), cfg.output_format())


def run_profile(cfg: RunConfig) -> Tuple[int, str]:
    if cfg.signs is None:
        raise SatSumError("profile needs --signs", stage="config")
    points = axis_profile(cfg.n, cfg.scheme(), cfg.signs, (cfg.t_start, cfg.t_stop), cfg.samples)
    return EXIT_SAT, emit_report(profile_frame(points), cfg.output_format())


COMMANDS = {
    "count": run_count,
    "oracle": run_oracle,
    "verify": run_verify,
    "spectrum": run_spectrum,
    "profile": run_profile,
}


def _signs(text: str) -> List[int]:
    return [int(x) for x in text.replace(";", ",").split(",") if x.strip()]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="YAML run config; flags override its keys")
    common.add_argument("--preset", help="exp1 | exp2 | twovar | onevar | ternary")
    common.add_argument("--axes", type=int)
    common.add_argument("--u-mode", dest="u_mode")
    common.add_argument("--u", type=float)
    common.add_argument("--p", type=float)
    common.add_argument("--v", type=float)
    common.add_argument("--h", type=float)
    common.add_argument("--multiplier", type=int)
    common.add_argument("--modulus", type=int)
    common.add_argument("--tolerance", type=float)
    common.add_argument("--max-points", dest="max_points", type=int)
    common.add_argument("--limit", type=int, help="sign-vector enumeration limit on n")
    common.add_argument("--threads", type=int)
    common.add_argument("--force", action="store_true", default=None)
    common.add_argument("--format", choices=["json", "csv"])
    common.add_argument("--output", help="write the report here instead of stdout")
    common.add_argument("--timing", dest="include_timing", action="store_true", default=None)
    common.add_argument("--progress", action="store_true", default=None)
    common.add_argument("-v", "--verbose", action="count", default=0)

    ap = argparse.ArgumentParser(prog="satsum", description="Algebraic lattice-sum model counter")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in ("count", "oracle", "verify"):
        p = sub.add_parser(name, parents=[common])
        p.add_argument("input", nargs="?")
    p = sub.add_parser("spectrum", parents=[common])
    p.add_argument("--n-min", dest="n_min", type=int)
    p.add_argument("--n-max", dest="n_max", type=int)
    p = sub.add_parser("profile", parents=[common])
    p.add_argument("--n", type=int)
    p.add_argument("--signs", type=_signs)
    p.add_argument("--t-start", dest="t_start", type=float)
    p.add_argument("--t-stop", dest="t_stop", type=float)
    p.add_argument("--samples", type=int)
    return ap


def _setup_logging(verbosity: int) -> None:
    level = logging.WARNING if verbosity <= 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    logging.basicConfig(
        level=level,
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )


def _write(text: str, output: Optional[str]) -> None:
    if output:
        ensure_dir(os.path.dirname(output) or ".")
        with open(output, "w") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    _setup_logging(args.verbose)
    overrides = {k: v for k, v in vars(args).items() if k not in ("command", "config", "verbose")}
    try:
        cfg = build_run_config(args.command, load_yaml_config(args.config), **overrides)
        code, text = COMMANDS[cfg.command](cfg)
    except SatSumError as e:
        logger.error("%s: %s", e.stage, e)
        payload = {"error": str(e), "stage": e.stage, "type": type(e).__name__}
        if isinstance(e, MismatchDetected):
            payload["counts"] = e.counts
        if isinstance(e, ResidualTooLarge) and e.result is not None:
            payload["result"] = plain_value(e.result)
        sys.stdout.write(json.dumps(payload, indent=2) + "\n")
        return EXIT_ERROR
    except (ValidationError, ValueError, OSError) as e:
        stage = "io" if isinstance(e, OSError) else "config"
        logger.error("%s: %s", stage, e)
        sys.stdout.write(json.dumps({"error": str(e), "stage": stage, "type": type(e).__name__}, indent=2) + "\n")
        return EXIT_ERROR
    _write(text, cfg.output)
    return code


if __name__ == "__main__":
    sys.exit(main())
