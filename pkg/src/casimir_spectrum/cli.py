"""Command-line front end: ``spectrum``, ``force`` and ``compare``.

Configuration comes from an optional ``key = value`` file, overridden by
flags. Exit codes: 0 success, 1 invalid input, 2 non-convergence, 3 I/O.
"""
from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import math
import sys
import warnings
from dataclasses import dataclass
from pathlib import Path

from . import __version__
from .contours import Contour, Mode, PlateSystem
from .force import IntegrationBounds, LowFrequencyTailWarning, report
from .materials import BoundaryModel, DrudeMetal, GOLD
from .quadrature import QuadratureSettings
from .spectrum import FrequencyGrid, sweep

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_NONCONVERGED = 2
EXIT_IO = 3

_UM = 1e-4  # cm per micrometre


class ConfigError(ValueError):
    """Invalid configuration. ``problems`` lists every issue found."""

    def __init__(self, problems):
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


@dataclass(frozen=True)
class RunConfig:
    gap_um: float = 1.0
    temp_k: float = 300.0
    sigma0: float = GOLD.sigma0
    tau_s: float = GOLD.tau
    model: str = "impedance"
    mode: str = "te"
    contour: str = "both"
    omega_min: float = 1e10
    omega_max: float = 1e14
    points: int = 400
    bound_lo: float = IntegrationBounds.omega_lo
    bound_hi: float | None = None
    rel_tol: float = 1e-7
    abs_tol: float = 1e-14
    max_subdivisions: int = 2000
    out: str | None = None

    def validate(self) -> "RunConfig":
        problems = []

        def positive(name):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0):
                problems.append(f"{name}: must be a finite number > 0, got {v!r}")

        for name in ("gap_um", "temp_k", "sigma0", "omega_min", "omega_max", "bound_lo", "rel_tol"):
            positive(name)
        if not (math.isfinite(self.tau_s) and self.tau_s >= 0):
            problems.append(f"tau_s: must be a finite number >= 0, got {self.tau_s!r}")
        if not (math.isfinite(self.abs_tol) and self.abs_tol >= 0):
            problems.append(f"abs_tol: must be a finite number >= 0, got {self.abs_tol!r}")
        if self.bound_hi is not None:
            positive("bound_hi")
            if math.isfinite(self.bound_hi) and self.bound_hi <= self.bound_lo:
                problems.append(f"bound_hi: must exceed bound_lo={self.bound_lo!r}, got {self.bound_hi!r}")
        if self.omega_min > 0 and self.omega_max <= self.omega_min:
            problems.append(f"omega_max: must exceed omega_min={self.omega_min!r}, got {self.omega_max!r}")
        if self.points < 2:
            problems.append(f"points: must be >= 2, got {self.points!r}")
        if self.max_subdivisions < 1:
            problems.append(f"max_subdivisions: must be >= 1, got {self.max_subdivisions!r}")
        if self.model not in {m.value for m in BoundaryModel}:
            problems.append(f"model: must be one of impedance, dielectric, perfect; got {self.model!r}")
        if self.mode not in ("te", "tm", "both"):
            problems.append(f"mode: must be one of te, tm, both; got {self.mode!r}")
        if self.contour not in ("c1", "c2", "both"):
            problems.append(f"contour: must be one of c1, c2, both; got {self.contour!r}")
        if problems:
            raise ConfigError(problems)
        return self

    @property
    def modes(self) -> tuple[Mode, ...]:
        return tuple(Mode) if self.mode == "both" else (Mode.parse(self.mode),)

    @property
    def contours(self) -> tuple[Contour, ...]:
        return tuple(Contour) if self.contour == "both" else (Contour.parse(self.contour),)

    def system(self) -> PlateSystem:
        return PlateSystem(self.gap_um * _UM, self.temp_k, DrudeMetal(self.sigma0, self.tau_s), self.model)

    def grid(self) -> FrequencyGrid:
        return FrequencyGrid(self.omega_min, self.omega_max, self.points)

    def bounds(self) -> IntegrationBounds:
        return IntegrationBounds(self.bound_lo, self.bound_hi)

    def settings(self) -> QuadratureSettings:
        return QuadratureSettings(self.rel_tol, self.abs_tol, self.max_subdivisions)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


_FIELDS = {f.name: f for f in dataclasses.fields(RunConfig)}
_INT_KEYS = {"points", "max_subdivisions"}
_STR_KEYS = {"model", "mode", "contour", "out"}


def _convert(key: str, raw: str):
    raw = raw.strip()
    if key in _STR_KEYS:
        return raw.lower() if key != "out" else raw
    if key == "bound_hi" and raw.lower() in ("", "none", "auto"):
        return None
    if key in _INT_KEYS:
        return int(raw)
    return float(raw)


def parse_config_text(text: str, source: str = "<config>") -> dict:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    values = {}
    problems = []
    for lineno, line in enumerate(text.splitlines(), 1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        key, sep, raw = body.partition("=")
        key = key.strip()
        if not sep:
            problems.append(f"{source}:{lineno}: expected 'key = value', got {line.strip()!r}")
        elif key not in _FIELDS:
            problems.append(f"{source}:{lineno}: unknown key {key!r}")
        else:
            try:
                values[key] = _convert(key, raw)
            except ValueError:
                problems.append(f"{source}:{lineno}: {key}: cannot parse {raw.strip()!r}")
    if problems:
        raise ConfigError(problems)
    return values


def load_config(path=None, overrides: dict | None = None) -> RunConfig:
    """Defaults, then the file at ``path``, then non-``None`` ``overrides``."""
    values = {}
    if path is not None:
        values.update(parse_config_text(Path(path).read_text(encoding="utf-8"), str(path)))
    for key, value in (overrides or {}).items():
        if key not in _FIELDS:
            raise ConfigError([f"unknown key {key!r}"])
        if value is not None:
            values[key] = value
    return RunConfig(**values).validate()


def round9(x):
    """Round floats (recursively) to 9 significant digits."""
    if isinstance(x, float):
        return float(f"{x:.9g}") if math.isfinite(x) else x
    if isinstance(x, dict):
        return {k: round9(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [round9(v) for v in x]
    return x


def _column(mode: Mode, contour: Contour, model: str) -> str:
    return f"f_{mode.value}_{contour.value}_{model}"


def spectrum_csv(cfg: RunConfig, threads=None) -> tuple[str, int]:
    """CSV text of the spectral densities and the number of failed values."""
    samples = sweep(cfg.grid(), cfg.system(), cfg.settings(), cfg.modes, cfg.contours, threads)
    keys = [(m, c) for m in cfg.modes for c in cfg.contours]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["omega_rad_s", "log10_omega"] + [_column(m, c, cfg.model) for m, c in keys])
    failed = 0
    for s in samples:
        for key, msg in s.failures.items():
            failed += 1
            print(f"warning: omega={s.omega:.9g}: {msg}", file=sys.stderr)
        row = [s.omega, math.log10(s.omega)] + [s.value(*k) for k in keys]
        w.writerow([f"{v:.9g}" if math.isfinite(v) else "nan" for v in row])
    return buf.getvalue(), failed


def _envelope(cfg: RunConfig, command: str, body: dict) -> dict:
    return {
        "tool": "casimir-spectrum",
        "version": __version__,
        "command": command,
        "config": cfg.to_dict(),
        **round9(body),
    }


def force_document(cfg: RunConfig, threads=None) -> dict:
    rep = report(cfg.system(), cfg.bounds(), cfg.settings(), threads)
    return _envelope(cfg, "force", rep.to_dict())


def _sector_forces(rep, model: BoundaryModel) -> dict:
    out = {}
    for mode in Mode:
        for c in Contour:
            out[f"{mode.value}_{c.value}"] = rep.force(mode, c, model)
        out[mode.value] = math.fsum(rep.force(mode, c, model) for c in Contour)
    return out


def _sign(x: float) -> int:
    return (x > 0) - (x < 0)


def compare_document(cfg: RunConfig, threads=None) -> dict:
    rep = report(cfg.system(), cfg.bounds(), cfg.settings(), threads)
    imp = _sector_forces(rep, BoundaryModel.IMPEDANCE)
    die = _sector_forces(rep, BoundaryModel.DIELECTRIC)
    sectors = {
        name: {
            "impedance": imp[name],
            "dielectric": die[name],
            "relative_difference": rep.sector_deltas[name],
        }
        for name in imp
    }
    te_c2_sign = {m.value: _sign(rep.force(Mode.TE, Contour.C2, m))
                  for m in (BoundaryModel.IMPEDANCE, BoundaryModel.DIELECTRIC)}
    body = {
        "sectors": sectors,
        "te_c2_sign": te_c2_sign,
        "te_c2_sign_flip": te_c2_sign["impedance"] * te_c2_sign["dielectric"] < 0,
        "converged": rep.converged,
        "metadata": rep.to_dict()["metadata"],
    }
    return _envelope(cfg, "compare", body)


def compare_csv(doc: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["sector", "impedance", "dielectric", "relative_difference", "sign_impedance", "sign_dielectric"])
    for name, row in doc["sectors"].items():
        values = [f"{row[k]:.9g}" for k in ("impedance", "dielectric", "relative_difference")]
        signs = [_sign(row[k]) for k in ("impedance", "dielectric")]
        w.writerow([name] + values + signs)
    return buf.getvalue()


def _dump_json(doc: dict) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def _write(path: str, text: str):
    if path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


_DEFAULT_OUT = {"spectrum": "spectrum.csv", "force": "force.json", "compare": "compare.json"}


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage; here 2 means non-convergence.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="casimir-spectrum",
        description="Real-frequency spectra and integrated thermal Casimir forces between Drude-metal plates.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    helps = {
        "spectrum": "write spectral densities on a log-frequency grid as CSV",
        "force": "write integrated forces and ratios as JSON",
        "compare": "compare impedance and dielectric models sector by sector (JSON + CSV)",
    }
    for name, text in helps.items():
        p = sub.add_parser(name, help=text, description=text)
        p.add_argument("--config", metavar="PATH", help="key = value configuration file")
        p.add_argument("--gap-um", type=float, dest="gap_um", help="plate separation [um] (default 1)")
        p.add_argument("--temp-k", type=float, dest="temp_k", help="temperature [K] (default 300)")
        p.add_argument("--sigma0", type=float, help="DC conductivity [1/s] (default 3e17, gold)")
        p.add_argument("--tau", type=float, dest="tau_s", help="relaxation time [s] (default 1.88e-14)")
        p.add_argument("--model", choices=[m.value for m in BoundaryModel])
        p.add_argument("--mode", choices=["te", "tm", "both"])
        p.add_argument("--contour", choices=["c1", "c2", "both"])
        p.add_argument("--omega-min", type=float, dest="omega_min", help="spectrum grid start [rad/s]")
        p.add_argument("--omega-max", type=float, dest="omega_max", help="spectrum grid end [rad/s]")
        p.add_argument("--points", type=int, help="spectrum grid size")
        p.add_argument("--bound-lo", type=float, dest="bound_lo", help="force integration lower bound [rad/s]")
        p.add_argument("--bound-hi", type=float, dest="bound_hi",
                       help="force integration upper bound [rad/s] (default 40 kB T / hbar)")
        p.add_argument("--rel-tol", type=float, dest="rel_tol")
        p.add_argument("--out", metavar="PATH", help=f"output file, '-' for stdout (default {_DEFAULT_OUT[name]})")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    overrides = {k: v for k, v in vars(args).items() if k in _FIELDS}
    try:
        cfg = load_config(args.config, overrides)
    except ConfigError as exc:
        for problem in exc.problems:
            print(f"error: {problem}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return EXIT_IO
    out = cfg.out or _DEFAULT_OUT[args.command]

    try:
        with warnings.catch_warnings():
            warnings.simplefilter("always", LowFrequencyTailWarning)
            warnings.showwarning = _show_warning
            if args.command == "spectrum":
                text, failed = spectrum_csv(cfg)
                _write(out, text)
                return EXIT_NONCONVERGED if failed else EXIT_OK
            doc = force_document(cfg) if args.command == "force" else compare_document(cfg)
            _write(out, _dump_json(doc))
            if args.command == "compare" and out != "-":
                _write(str(Path(out).with_suffix(".csv")), compare_csv(doc))
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    if not doc["converged"]:
        print("error: at least one integral missed its tolerance; see error_estimate fields", file=sys.stderr)
        return EXIT_NONCONVERGED
    return EXIT_OK


def _show_warning(message, category, filename, lineno, file=None, line=None):
    print(f"warning: {message}", file=sys.stderr)


if __name__ == "__main__":
    sys.exit(main())
