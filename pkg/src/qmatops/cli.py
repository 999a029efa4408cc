"""Command-line entry point.

Exit codes: 0 success, 2 parse/config error, 3 dimension error, 4 zero
success probability (legal input, no recoverable result), 5 qubit cap
exceeded.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field

import numpy as np

from . import io as qio
from .depth import scaling_report
from .errors import DimensionError, QubitCapError
from .gates import CONVENTIONS, SHARED_CONTROL
from .protocols import (
    DEFAULT_SLACK,
    run_addition,
    run_addition_via_multiplication,
    run_inner_product,
    run_multiplication,
)
from .state import DEFAULT_QUBIT_CAP, set_qubit_cap

EXIT_OK, EXIT_CONFIG, EXIT_DIMENSION, EXIT_ZERO, EXIT_CAP = 0, 2, 3, 4, 5
DEFAULT_SEED = 20240521
COMMANDS = ("inner", "add", "matmul", "analyze", "sample", "embed-add")
PROTOCOLS = ("inner", "add", "matmul")


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    inputs: list = field(default_factory=list)
    protocol: str | None = None
    mode: str = "exact"
    shots: int | None = None
    seed: int = DEFAULT_SEED
    s_param: float | None = None
    convention: str = SHARED_CONTROL
    output_format: str = "text"
    qubit_cap: int = DEFAULT_QUBIT_CAP
    sizes: list = field(default_factory=lambda: [1, 2, 3, 4])
    decomposed: bool = False

    def validate(self):
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        if self.mode not in ("exact", "shots"):
            raise ConfigError("mode must be 'exact' or 'shots'")
        if self.command == "sample":
            self.mode = "shots"
        if self.mode == "shots" and self.shots is None:
            raise ConfigError("--shots is required in shots mode")
        if self.mode == "exact" and self.shots is not None:
            raise ConfigError("--shots only applies to shots mode")
        if self.shots is not None and self.shots < 1:
            raise ConfigError("--shots must be positive")
        target = self.protocol if self.command == "sample" else self.command
        if self.s_param is not None:
            if target != "add":
                raise ConfigError("--s is only valid for add")
            if not 0.0 < self.s_param < 1.0:
                raise ConfigError("--s must lie in (0, 1)")
        if self.convention not in CONVENTIONS:
            raise ConfigError(f"convention must be one of {CONVENTIONS}")
        if self.output_format not in ("text", "json"):
            raise ConfigError("format must be 'text' or 'json'")
        if self.command != "analyze" and len(self.inputs) != 2:
            raise ConfigError(f"{self.command} takes two input files")
        return self


def _result_report(cfg: RunConfig, res) -> dict:
    recovered = res.recovered
    if recovered is not None and np.ndim(recovered) == 0:
        rec = qio.complex_pair(recovered)
    elif recovered is not None:
        rec = qio.matrix_to_doc(recovered)
    else:
        rec = None
    report = {
        "command": cfg.command,
        "protocol": res.protocol,
        "mode": cfg.mode,
        "success_probability": float(res.success_probability),
        "G": float(res.G),
        "scales": [float(c) for c in res.scales],
        "zero_result": bool(res.zero_result),
        "recovered": rec,
    }
    if res.slack is not None:
        report["slack"] = [float(s) for s in res.slack]
    if res.phase is not None:
        report["phase"] = qio.complex_pair(res.phase)
    if res.shots is not None:
        sr = res.shots
        report["shots"] = {
            "shots": sr.shots, "successes": sr.successes, "estimated_p": sr.estimated_p,
            "stderr": sr.stderr, "seed": sr.seed,
        }
        report["magnitude_estimate"] = float(res.magnitude_estimate)
        if cfg.mode == "shots" and res.protocol != "inner":
            # shots mode verifies probabilities only; element values are not sampled
            report["recovered"] = None
    return report


def run_command(cfg: RunConfig) -> tuple[int, dict]:
    """Execute a validated config; returns (exit status, report)."""
    previous = set_qubit_cap(cfg.qubit_cap)
    try:
        return _dispatch(cfg)
    finally:
        set_qubit_cap(previous)


def _dispatch(cfg: RunConfig) -> tuple[int, dict]:
    if cfg.command == "analyze":
        rows = scaling_report(cfg.protocol, cfg.sizes, cfg.convention)
        report = {
            "command": "analyze",
            "protocol": cfg.protocol,
            "convention": cfg.convention,
            "rows": [
                {"size": r.size, "depth": r.depth, "toffoli": r.toffoli, "width": r.width} for r in rows
            ],
        }
        return EXIT_OK, report

    kind = cfg.protocol if cfg.command == "sample" else cfg.command
    a, b = (qio.parse_matrix_file(p) for p in cfg.inputs)
    kwargs = {"shots": cfg.shots, "seed": cfg.seed, "decomposed": cfg.decomposed}
    if kind == "inner":
        res = run_inner_product(qio.as_vector(a, cfg.inputs[0]), qio.as_vector(b, cfg.inputs[1]), **kwargs)
    elif kind == "add":
        res = run_addition(a, b, s=cfg.s_param or DEFAULT_SLACK, **kwargs)
    elif kind == "matmul":
        res = run_multiplication(a, b, **kwargs)
    elif kind == "embed-add":
        res = run_addition_via_multiplication(a, b, **kwargs)
    else:
        raise ConfigError(f"unknown protocol {kind!r}")
    report = _result_report(cfg, res)
    return (EXIT_ZERO if res.zero_result else EXIT_OK), report


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", dest="output_format", choices=("text", "json"), default="text")
    common.add_argument("--qubit-cap", type=int, default=DEFAULT_QUBIT_CAP)
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)

    run_opts = argparse.ArgumentParser(add_help=False)
    run_opts.add_argument("inputs", nargs=2, metavar="FILE")
    run_opts.add_argument("--mode", choices=("exact", "shots"), default="exact")
    run_opts.add_argument("--shots", type=int)
    run_opts.add_argument("--s", dest="s_param", type=float, help="slack amplitude (add only)")
    run_opts.add_argument("--decomposed", action="store_true",
                          help="simulate the Toffoli-level circuit with work ancillas")

    parser = argparse.ArgumentParser(
        prog="qmatops", description="Simulate ancilla-measurement protocols for vector and matrix arithmetic."
    )
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("inner", parents=[common, run_opts], help="bilinear vector product")
    sub.add_parser("add", parents=[common, run_opts], help="matrix sum")
    sub.add_parser("matmul", parents=[common, run_opts], help="matrix product")
    sub.add_parser("embed-add", parents=[common, run_opts], help="matrix sum through the product protocol")
    sp = sub.add_parser("sample", parents=[common, run_opts], help="sample the B2 flag")
    sp.add_argument("--protocol", choices=PROTOCOLS, required=True)
    ap = sub.add_parser("analyze", parents=[common], help="depth/width scaling table")
    ap.add_argument("protocol", choices=PROTOCOLS)
    ap.add_argument("--sizes", default="1,2,3,4", help="comma-separated qubits per index register")
    ap.add_argument("--convention", choices=CONVENTIONS, default=SHARED_CONTROL)
    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(command=ns.command, output_format=ns.output_format,
                    qubit_cap=ns.qubit_cap, seed=ns.seed)
    if ns.command == "analyze":
        cfg.protocol = ns.protocol
        cfg.convention = ns.convention
        try:
            cfg.sizes = [int(s) for s in ns.sizes.split(",") if s.strip()]
        except ValueError:
            raise ConfigError(f"bad --sizes value {ns.sizes!r}") from None
        if not cfg.sizes or min(cfg.sizes) < 1:
            raise ConfigError("--sizes must be positive integers")
    else:
        cfg.inputs = list(ns.inputs)
        cfg.mode = ns.mode
        cfg.shots = ns.shots
        cfg.s_param = ns.s_param
        cfg.decomposed = ns.decomposed
        cfg.protocol = getattr(ns, "protocol", None)
    return cfg.validate()


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_CONFIG
    try:
        cfg = config_from_args(ns)
        status, report = run_command(cfg)
    except (ConfigError, qio.ParseError) as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_CONFIG
    except QubitCapError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_CAP
    except DimensionError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_DIMENSION
    except ValueError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_CONFIG
    text = qio.dump_report(report) if cfg.output_format == "json" else qio.render_text(report)
    stdout.write(text)
    if status == EXIT_ZERO:
        print("note: success probability is zero; the result is identically zero", file=stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())
