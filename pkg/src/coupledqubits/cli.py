"""Command-line front end.

    coupledqubits run --protocol phi_minus_fstirap --out phi_minus.csv
    coupledqubits scan --protocol negativity_scan --key ratio --values 2,1,0.5 --out scan/
    coupledqubits spectrum --n 3 --lambda 1 --omega0 1

Exit codes: 0 success, 1 usage or configuration error, 2 protocol below threshold.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import re
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import protocols
from .dynamics import DEFAULT_SAMPLES, TrajectoryRecord
from .errors import DimensionTooLarge
from .model import QubitSystem
from .spectrum import spectrum_table

EXIT_OK, EXIT_ERROR, EXIT_FAILED = 0, 1, 2
FORMATS = ("csv", "json")
RESERVED_KEYS = ("protocol", "format", "output", "samples", "seed")
_FLOAT_RE = re.compile(r"^[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?$")

RWA_PARAMS = {"omega0_over_omega": 100.0, "lambda_over_omega0": 0.5, "omega0": 100.0,
              "dipole2": 0.3, "triplet": 0.0, "tolerance": 0.01}


class ConfigError(ValueError):
    pass


def parse_float(text) -> float:
    """Plain decimal literal only; expressions, inf and nan are rejected."""
    if isinstance(text, (int, float)) and not isinstance(text, bool):
        value = float(text)
    elif isinstance(text, str) and _FLOAT_RE.match(text.strip()):
        value = float(text)
    else:
        raise ConfigError(f"not a plain number: {text!r}")
    if not math.isfinite(value):
        raise ConfigError(f"not a finite number: {text!r}")
    return value


@dataclass
class RunConfig:
    protocol: str
    overrides: dict[str, float] = field(default_factory=dict)
    output: str | None = None
    format: str = "csv"
    samples: int = DEFAULT_SAMPLES
    seed: int = 0

    def __post_init__(self):
        if self.format not in FORMATS:
            raise ConfigError(f"format must be one of {FORMATS}, got {self.format!r}")
        if self.samples < 2:
            raise ConfigError("samples must be at least 2")
        valid = parameter_names(self.protocol)
        unknown = sorted(set(self.overrides) - set(valid))
        if unknown:
            raise ConfigError(f"unknown override(s) {unknown} for {self.protocol}; valid: {valid}")

    @property
    def output_path(self) -> Path:
        return Path(self.output or f"{self.protocol}.{self.format}")


def parameter_names(protocol: str) -> list[str]:
    if protocol == "rwa_validation":
        return sorted(RWA_PARAMS)
    try:
        return sorted(protocols.preset_parameters(protocol))
    except KeyError:
        raise ConfigError(f"unknown protocol {protocol!r}; choose from "
                          f"{sorted(protocols.PRESETS) + ['rwa_validation']}") from None


def load_config_file(path: str) -> dict:
    """Flat JSON object: reserved keys plus preset-parameter overrides."""
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigError("config file must hold a flat JSON object")
    out = {k: data[k] for k in RESERVED_KEYS if k in data}
    out["overrides"] = {k: parse_float(v) for k, v in data.items() if k not in RESERVED_KEYS}
    return out


def build_config(args) -> RunConfig:
    base = load_config_file(args.config) if args.config else {"overrides": {}}
    overrides = dict(base.get("overrides", {}))
    for item in args.override or []:
        key, sep, value = item.partition("=")
        if not sep or not key:
            raise ConfigError(f"override must look like key=value, got {item!r}")
        overrides[key.strip()] = parse_float(value)
    protocol = args.protocol or base.get("protocol")
    if not protocol:
        raise ConfigError("no protocol given")
    return RunConfig(
        protocol=protocol,
        overrides=overrides,
        output=args.out or base.get("output"),
        format=args.format or base.get("format", "csv"),
        samples=int(args.samples if args.samples is not None else base.get("samples", DEFAULT_SAMPLES)),
        seed=int(args.seed if args.seed is not None else base.get("seed", 0)),
    )


# --------------------------------------------------------------------------- execution

def execute(config: RunConfig) -> tuple[TrajectoryRecord, dict, bool]:
    if config.protocol == "rwa_validation":
        return _execute_rwa(config)
    spec = protocols.preset(config.protocol, config.overrides, seed=config.seed)
    result = protocols.run_protocol(spec, config.samples)
    summary = result.summary()
    summary["seed"] = config.seed
    summary["parameters"] = dict(spec.params)
    return result.trajectory, summary, result.passed


def _execute_rwa(config: RunConfig):
    p = dict(RWA_PARAMS, **config.overrides)
    system = QubitSystem(2, lam=p["lambda_over_omega0"] * p["omega0"], omega0=p["omega0"],
                         dipoles=(1.0, p["dipole2"]))
    name = "bell_triplet_pi_half" if p["triplet"] else "bell_singlet_pi_half"
    report = protocols.run_rwa_validation(protocols.preset(name), p["omega0_over_omega"],
                                          system, config.samples)
    summary = report.summary()
    passed = report.max_deviation <= p["tolerance"]
    summary.update(protocol="rwa_validation", base_protocol=name, passed=passed,
                   parameters=p, seed=config.seed)
    return report.lab, summary, passed


def trajectory_columns(tr: TrajectoryRecord) -> dict[str, list[float]]:
    cols = {"t": tr.times}
    for k, label in enumerate(tr.basis_labels):
        cols[f"pop_{label}"] = tr.populations[:, k]
    cols["negativity"] = tr.negativity
    cols["norm_error"] = tr.norm_error
    return {k: [float(x) for x in v] for k, v in cols.items()}


def write_csv(path: Path, tr: TrajectoryRecord) -> None:
    cols = trajectory_columns(tr)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(cols)
        for row in zip(*cols.values()):
            w.writerow(repr(x) for x in row)


def write_json(path: Path, tr: TrajectoryRecord, summary: dict) -> None:
    doc = {"trajectory": trajectory_columns(tr), "summary": summary}
    path.write_text(json.dumps(doc, indent=1, default=_json_default))


def _json_default(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def write_trajectory(path: Path, fmt: str, tr: TrajectoryRecord, summary: dict) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    if fmt == "csv":
        write_csv(path, tr)
    else:
        write_json(path, tr, summary)


def write_plot(path: str, tr: TrajectoryRecord, title: str) -> None:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6, 4))
    for k, label in enumerate(tr.basis_labels):
        ax.plot(tr.times, tr.populations[:, k], label=label)
    ax.plot(tr.times, tr.negativity, "--", label="Ne")
    ax.set_xlabel("t / T")
    ax.set_title(title)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def summary_line(summary: dict) -> str:
    status = "PASS" if summary["passed"] else "FAIL"
    if summary["protocol"] == "rwa_validation":
        return f"rwa_validation: max deviation={summary['max_deviation']:.3g} {status}"
    return (f"{summary['protocol']}: F={summary['final_fidelity']:.4f} "
            f"Ne={summary['final_negativity']:.4f} {status}")


# --------------------------------------------------------------------------- commands

def cmd_run(args) -> int:
    config = build_config(args)
    tr, summary, passed = execute(config)
    write_trajectory(config.output_path, config.format, tr, summary)
    if args.plot:
        write_plot(args.plot, tr, config.protocol)
    print(summary_line(summary))
    return EXIT_OK if passed else EXIT_FAILED


def cmd_scan(args) -> int:
    config = build_config(args)
    if args.key not in parameter_names(config.protocol):
        raise ConfigError(f"{args.key!r} is not a parameter of {config.protocol}")
    values = [parse_float(v) for v in args.values.split(",") if v.strip()]
    if not values:
        raise ConfigError("scan needs at least one value")
    out_dir = Path(args.out or f"scan_{config.protocol}_{args.key}")
    out_dir.mkdir(parents=True, exist_ok=True)
    rows = []
    for i, value in enumerate(values):
        overrides = dict(config.overrides, **{args.key: value})
        cfg = RunConfig(config.protocol, overrides, None, config.format, config.samples, config.seed)
        tr, summary, passed = execute(cfg)
        name = f"{config.protocol}_{args.key}_{i:03d}.{config.format}"
        write_trajectory(out_dir / name, config.format, tr, summary)
        rows.append({"value": value, "file": name,
                     "peak_negativity": float(np.max(tr.negativity)),
                     "endpoint_negativity": float(tr.negativity[-1]),
                     "final_fidelity": summary.get("final_fidelity", float("nan")),
                     "passed": passed})
        print(f"{args.key}={value!r}: " + summary_line(summary))
    with open(out_dir / "index.csv", "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=list(rows[0]))
        w.writeheader()
        for row in rows:
            w.writerow({k: repr(v) if isinstance(v, float) else v for k, v in row.items()})
    return EXIT_OK


def cmd_spectrum(args) -> int:
    sys_ = QubitSystem(args.n, lam=args.lam, omega0=args.omega0)
    rows = spectrum_table(sys_)
    fields = ["index", "energy", "excitations", "shift_k", "label"]
    if args.out:
        with open(args.out, "w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=fields)
            w.writeheader()
            w.writerows(rows)
    w = csv.DictWriter(sys.stdout, fieldnames=fields, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow(dict(r, energy=f"{r['energy']:.12g}"))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="coupledqubits", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add_run_options(p):
        p.add_argument("--protocol", help="preset name")
        p.add_argument("--override", action="append", metavar="KEY=VALUE",
                       help="override a preset parameter (repeatable, plain floats only)")
        p.add_argument("--config", help="flat JSON config file")
        p.add_argument("--format", choices=FORMATS)
        p.add_argument("--out")
        p.add_argument("--samples", type=int)
        p.add_argument("--seed", type=int)

    run = sub.add_parser("run", help="run one protocol preset")
    add_run_options(run)
    run.add_argument("--plot", help="also save a PNG of populations and negativity")
    run.set_defaults(func=cmd_run)

    scan = sub.add_parser("scan", help="run a preset over a list of parameter values")
    add_run_options(scan)
    scan.add_argument("--key", required=True)
    scan.add_argument("--values", required=True, help="comma-separated numbers")
    scan.set_defaults(func=cmd_scan)

    spec = sub.add_parser("spectrum", help="print the bare eigenvalue table")
    spec.add_argument("--n", type=int, required=True)
    spec.add_argument("--lambda", dest="lam", type=float, required=True)
    spec.add_argument("--omega0", type=float, required=True)
    spec.add_argument("--out", help="also write the table as CSV")
    spec.set_defaults(func=cmd_spectrum)

    sub.add_parser("list", help="list presets and their parameters").set_defaults(func=cmd_list)
    return parser


def cmd_list(args) -> int:
    for name in sorted(protocols.PRESETS) + ["rwa_validation"]:
        params = RWA_PARAMS if name == "rwa_validation" else protocols.preset_parameters(name)
        print(name + ": " + ", ".join(f"{k}={v:g}" for k, v in params.items()))
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (ConfigError, DimensionTooLarge, KeyError, ValueError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
