"""Command-line interface.

Usage:
    bellbound bound --n 4 --d 3                 # closed form, trial bound, references
    bellbound bound --n 3 --d 2 --verify        # ... plus exhaustive check
    bellbound brute --n 2 --d 2 --nu -1/4 --log2-scale 3/2
    bellbound catalog --name svetlichny-collins --n 4 --verify
    bellbound ratio --dmax 1000000 --out ratio.csv

Exit codes: 0 success, 1 other error, 2 unsupported parameter or usage error,
3 search budget exceeded, 4 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import __version__
from .bounds import (
    BoundReport,
    closed_bound,
    svetlichny_bound,
    trial_bound,
    trial_ratios,
    witness_assignment,
)
from .catalog import NAMES, named_function, quantum_reference, reduce_to_gbf
from .errors import (
    BellBoundError,
    BudgetExceededError,
    DomainError,
    ReductionMismatchError,
    UnsupportedPhaseError,
)
from .oracle import DEFAULT_BUDGET, DEFAULT_WITNESS_CAP, brute_force_max, default_threads
from .representations import GenericBellFunction
from .scenario import BellScenario, parse_nu

__all__ = ["main", "build_parser", "RunConfig"]

log = logging.getLogger("bellbound")

EXIT_OK, EXIT_OTHER, EXIT_UNSUPPORTED, EXIT_BUDGET, EXIT_VERIFY = 0, 1, 2, 3, 4
SIG_DIGITS = 12


@dataclass(frozen=True)
class RunConfig:
    command: str
    n: Optional[int] = None
    d: Optional[int] = None
    nu: Fraction = Fraction(1, 4)
    threads: int = 1
    tolerance: float = 1e-9
    output_format: str = "json"
    witness_cap: int = DEFAULT_WITNESS_CAP
    budget: int = DEFAULT_BUDGET

    def __post_init__(self):
        if not self.tolerance > 0:
            raise DomainError(f"tolerance must be positive, got {self.tolerance}")
        if self.threads < 1:
            raise DomainError(f"threads must be >= 1, got {self.threads}")
        if self.witness_cap < 0:
            raise DomainError(f"witness cap must be >= 0, got {self.witness_cap}")

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        return cls(
            command=args.command,
            n=getattr(args, "n", None),
            d=getattr(args, "d", None),
            nu=parse_nu(getattr(args, "nu", None) or "1/4"),
            threads=args.threads if args.threads else default_threads(),
            tolerance=args.tolerance,
            output_format=args.format,
            witness_cap=getattr(args, "witnesses", DEFAULT_WITNESS_CAP),
            budget=getattr(args, "budget", DEFAULT_BUDGET),
        )


def sig(x):
    """Round floats to 12 significant digits, recursing into containers."""
    if isinstance(x, float):
        return float(f"{x:.{SIG_DIGITS}g}") if math.isfinite(x) else x
    if isinstance(x, dict):
        return {k: sig(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [sig(v) for v in x]
    return x


def _flat(record: dict) -> dict:
    out = {}
    for key, value in record.items():
        if isinstance(value, dict):
            for k, v in _flat(value).items():
                out[f"{key}.{k}"] = v
        elif isinstance(value, list):
            continue
        else:
            out[key] = value
    return out


def render(record: dict, fmt: str) -> str:
    record = sig(record)
    if fmt == "json":
        return json.dumps(record, indent=2)
    flat = _flat(record)
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(flat.keys())
        writer.writerow(["" if v is None else v for v in flat.values()])
        return buf.getvalue().rstrip("\n")
    lines = [f"{k}: {v}" for k, v in flat.items()]
    for w in record.get("witnesses", []):
        lines.append(f"witness: alpha={w['alpha']} beta={w['beta']}")
    return "\n".join(lines)


def _scenario(cfg: RunConfig) -> BellScenario:
    return BellScenario(cfg.n, cfg.d, cfg.nu)


def cmd_bound(cfg: RunConfig, verify: bool = False) -> dict:
    started = time.perf_counter()
    s = _scenario(cfg)
    if s.nu != Fraction(1, 4):
        raise UnsupportedPhaseError(
            f"closed-form bound is available for nu=1/4 only, got nu={s.nu}; "
            "use 'bellbound brute' for an exhaustive bound"
        )
    closed = closed_bound(s.n_parties, s.n_outcomes)
    report = BoundReport(
        scenario=s,
        closed_form=closed,
        trial_bound=trial_bound(s.n_outcomes),
        quantum_reference=quantum_reference(s),
    )
    if verify:
        result = brute_force_max(s, threads=cfg.threads, witness_cap=cfg.witness_cap,
                                 budget=cfg.budget)
        report.brute_force = result.max_value
        report.witnesses = result.argmax
    else:
        report.witnesses = [witness_assignment(s, target=closed, tol=cfg.tolerance)]
    report.elapsed_ms = int(1000 * (time.perf_counter() - started))
    record = report.to_dict()
    record["ratio"] = report.trial_bound / report.quantum_reference
    if verify and abs(report.brute_force - closed) > cfg.tolerance:
        record["verified"] = False
    elif verify:
        record["verified"] = True
    return record


def cmd_brute(cfg: RunConfig, log2_scale: Fraction = Fraction(0),
              reduce_symmetry: bool = False) -> dict:
    s = _scenario(cfg)
    scale = 2.0 ** float(log2_scale)
    result = brute_force_max(
        s,
        GenericBellFunction(s, scale=scale),
        threads=cfg.threads,
        witness_cap=cfg.witness_cap,
        budget=cfg.budget,
        reduce_symmetry=reduce_symmetry,
    )
    closed = scale * closed_bound(s.n_parties, s.n_outcomes) if s.nu == Fraction(1, 4) else None
    report = BoundReport(
        scenario=s,
        closed_form=closed,
        trial_bound=trial_bound(s.n_outcomes),
        brute_force=result.max_value,
        witnesses=result.argmax,
        quantum_reference=quantum_reference(s),
        elapsed_ms=result.elapsed_ms,
    )
    record = report.to_dict()
    record.update(
        log2_scale=str(log2_scale),
        assignments_scanned=result.assignments_scanned,
        argmax_count=result.argmax_count,
    )
    return record


def cmd_catalog(cfg: RunConfig, name: str, verify: bool = False) -> dict:
    started = time.perf_counter()
    f = named_function(name, cfg.n)
    red = reduce_to_gbf(f.name, f.n_parties, verify=verify, tol=cfg.tolerance)
    s = red.gbf_form
    result = brute_force_max(s, f, threads=cfg.threads, witness_cap=cfg.witness_cap,
                             budget=cfg.budget)
    closed = svetlichny_bound(f.n_parties) if f.name == "svetlichny_collins" else None
    report = BoundReport(
        scenario=s,
        closed_form=closed,
        trial_bound=trial_bound(2),
        brute_force=result.max_value,
        witnesses=result.argmax,
        quantum_reference=quantum_reference("chsh") if f.name == "chsh" else None,
    )
    report.elapsed_ms = int(1000 * (time.perf_counter() - started))
    record = report.to_dict()
    record["reduction"] = red.to_dict()
    return record


def cmd_ratio(dmax: int, out: str) -> dict:
    d, trial, ratio = trial_ratios(dmax)
    with open(out, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["d", "trial_bound", "ratio"])
        fmt = f"%.{SIG_DIGITS}g"
        writer.writerows(
            zip(d.tolist(),
                (fmt % v for v in trial), (fmt % v for v in ratio))
        )
    return {"rows": int(d.size), "out": out, "last_d": dmax,
            "last_ratio": float(ratio[-1]), "limit": 4 / math.pi}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "text"), default="json")
    common.add_argument("--threads", type=int, default=None,
                        help="worker threads (default: $BELLBOUND_THREADS or CPU count)")
    common.add_argument("--tolerance", type=float, default=1e-9)
    common.add_argument("--witnesses", type=int, default=DEFAULT_WITNESS_CAP,
                        help="maximum number of witness assignments to report")
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                        help="maximum number of assignments an exhaustive search may scan")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="bellbound", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bound", parents=[common], help="closed-form bound for nu=1/4")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--nu", default="1/4")
    p.add_argument("--verify", action="store_true", help="cross-check by exhaustive search")

    p = sub.add_parser("brute", parents=[common], help="exhaustive local bound of a GBF")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--nu", default="1/4")
    p.add_argument("--log2-scale", default="0", help="multiply the GBF by 2^this, e.g. 3/2")
    p.add_argument("--symmetry", action="store_true",
                   help="scan only alpha_1..alpha_{N-1} = 0 (exact for GBFs)")

    p = sub.add_parser("catalog", parents=[common], help="named (N,2) function reductions")
    p.add_argument("--name", required=True,
                   choices=sorted(set(NAMES) | {n.replace("_", "-") for n in NAMES}))
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--verify", action="store_true", help="check the reduction pointwise")

    p = sub.add_parser("ratio", parents=[common], help="trial/quantum bound ratio table")
    p.add_argument("--dmax", type=int, required=True)
    p.add_argument("--out", required=True)
    return parser


_VALUE_FLAGS = ("--nu", "--log2-scale")


def _join_negative_values(argv: list) -> list:
    # argparse mistakes "-1/4" for an option; fold it into "--nu=-1/4"
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in _VALUE_FLAGS and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    args = parser.parse_args(_join_negative_values(argv))
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = RunConfig.from_args(args)
        if args.command == "bound":
            record = cmd_bound(cfg, verify=args.verify)
        elif args.command == "brute":
            record = cmd_brute(cfg, parse_nu(args.log2_scale), args.symmetry)
        elif args.command == "catalog":
            record = cmd_catalog(cfg, args.name, verify=args.verify)
        else:
            record = cmd_ratio(args.dmax, args.out)
    except BudgetExceededError as exc:
        print(f"bellbound: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except ReductionMismatchError as exc:
        print(f"bellbound: verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except (UnsupportedPhaseError, DomainError) as exc:
        print(f"bellbound: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except (BellBoundError, OSError) as exc:
        print(f"bellbound: {exc}", file=sys.stderr)
        return EXIT_OTHER
    print(render(record, cfg.output_format))
    if record.get("verified") is False:
        return EXIT_VERIFY
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
