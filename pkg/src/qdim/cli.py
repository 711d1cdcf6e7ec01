"""
Command-line front end.

    qdim dim-vs-energy --n1 0 --n2 3 --output fig2.csv
    qdim degeneracy --n1 0 --n2 3 --max-2e 3
    qdim evolve --g 0.1 --pair "1;1|3;0,0,0"

Exit status: 0 on success, 2 on a bad configuration, 1 on a compute or I/O error.
Output is a pure function of the flags, so reruns are byte-identical.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .core import BasisLabel, DimRange, EnergyConvention, StateVector, enumerate_basis
from .dynamics import evolve, hopping_interaction
from .oscillator import level_degeneracy, oscillator_hamiltonian
from .symmetry import symmetry_report
from .thermo import (
    DEFAULT_BETA_MAX,
    DEFAULT_BETA_MIN,
    DEFAULT_BETA_POINTS,
    default_beta_grid,
    dim_vs_energy_curve,
    thermal_point,
)

COMMANDS = ("spectrum", "degeneracy", "thermo", "dim-vs-energy", "symmetry", "evolve")
DEFAULT_FORMAT = {
    "spectrum": "csv",
    "degeneracy": "json",
    "thermo": "csv",
    "dim-vs-energy": "csv",
    "symmetry": "json",
    "evolve": "csv",
}
THERMO_COLUMNS = ["beta", "Z", "mean_energy", "mean_dim"]
EVOLVE_COLUMNS = ["t", "mean_dim", "norm"]
DEFAULT_PAIR = "1;1|3;0,0,0"


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    n1: int = 0
    n2: int = 3
    convention: str = "unshifted"
    cutoff_k: int = 2
    max_2e: int = 6
    beta_min: float = DEFAULT_BETA_MIN
    beta_max: float = DEFAULT_BETA_MAX
    beta_points: int = DEFAULT_BETA_POINTS
    g: float = 0.1
    t_max: float = 100.0
    t_points: int = 1001
    pairs: List[str] = field(default_factory=list)
    initial: Optional[str] = None
    output_path: str = "-"
    format: Optional[str] = None

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        if self.n1 < 0 or self.n2 < 0 or self.n1 > self.n2:
            raise ConfigError(f"need 0 <= n1 <= n2, got n1={self.n1}, n2={self.n2}")
        try:
            EnergyConvention.parse(self.convention)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        if self.cutoff_k < 0 or self.max_2e < 0:
            raise ConfigError("cutoff-k and max-2e must be >= 0")
        if not (0 < self.beta_min < self.beta_max) or not math.isfinite(self.beta_max):
            raise ConfigError(f"need 0 < beta-min < beta-max, got {self.beta_min}, {self.beta_max}")
        if self.beta_points < 1 or self.t_points < 1:
            raise ConfigError("beta-points and t-points must be >= 1")
        if not (self.t_max >= 0 and math.isfinite(self.t_max)):
            raise ConfigError(f"t-max must be a finite value >= 0, got {self.t_max}")
        if self.format is not None and self.format not in ("csv", "json"):
            raise ConfigError(f"format must be csv or json, got {self.format!r}")

    @property
    def dim_range(self) -> DimRange:
        return DimRange(self.n1, self.n2)

    @property
    def resolved_format(self) -> str:
        return self.format or DEFAULT_FORMAT[self.command]


def fmt(x: float) -> str:
    """Full double precision, 17 significant digits."""
    return format(float(x), ".17g")


def _csv_text(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) if isinstance(v, (float, np.floating)) else v for v in row])
    return buf.getvalue()


def _json_text(payload) -> str:
    return json.dumps(payload, indent=2) + "\n"


def parse_pair(text: str) -> Tuple[BasisLabel, BasisLabel]:
    left, sep, right = text.partition("|")
    if not sep:
        raise ConfigError(f"pair {text!r} must look like 'd;k,...|d;k,...'")
    try:
        return BasisLabel.parse(left), BasisLabel.parse(right)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _spectrum(cfg: RunConfig) -> str:
    basis = enumerate_basis(cfg.dim_range, cfg.cutoff_k, cfg.convention)
    rows = [
        (i, str(lab), lab.d, lab.quanta, int(two_e), two_e / 2)
        for i, (lab, two_e) in enumerate(zip(basis.labels, basis.twice_energies.tolist()))
    ]
    if cfg.resolved_format == "json":
        return _json_text(
            {
                "n1": cfg.n1,
                "n2": cfg.n2,
                "convention": basis.convention.value,
                "cutoff_k": cfg.cutoff_k,
                "states": [
                    {"index": i, "label": s, "d": d, "quanta": q, "twice_energy": te, "energy": e}
                    for i, s, d, q, te, e in rows
                ],
            }
        )
    return _csv_text(["index", "label", "d", "quanta", "twice_energy", "energy"], rows)


def _degeneracy(cfg: RunConfig) -> str:
    levels = [level_degeneracy(cfg.dim_range, two_e, cfg.convention) for two_e in range(cfg.max_2e + 1)]
    levels = [lv for lv in levels if lv.multiplicity]
    if cfg.resolved_format == "json":
        return _json_text(
            {
                "n1": cfg.n1,
                "n2": cfg.n2,
                "convention": EnergyConvention.parse(cfg.convention).value,
                "levels": [lv.to_dict() for lv in levels],
            }
        )
    rows = [(lv.twice_energy, lv.energy, lv.multiplicity, " ".join(str(m) for m in lv.members)) for lv in levels]
    return _csv_text(["twice_energy", "energy", "multiplicity", "members"], rows)


def _thermal_rows(points) -> List[tuple]:
    return [(p.beta, p.z, p.mean_energy, p.mean_dim) for p in points]


def _thermo_payload(cfg: RunConfig, points) -> str:
    if cfg.resolved_format == "json":
        return _json_text(
            {
                "n1": cfg.n1,
                "n2": cfg.n2,
                "convention": EnergyConvention.parse(cfg.convention).value,
                "points": [p.to_dict() for p in points],
            }
        )
    return _csv_text(THERMO_COLUMNS, _thermal_rows(points))


def _thermo(cfg: RunConfig) -> str:
    grid = default_beta_grid(cfg.beta_min, cfg.beta_max, cfg.beta_points)
    return _thermo_payload(cfg, [thermal_point(b, cfg.dim_range, cfg.convention) for b in grid])


def _dim_vs_energy(cfg: RunConfig) -> str:
    grid = default_beta_grid(cfg.beta_min, cfg.beta_max, cfg.beta_points)
    return _thermo_payload(cfg, dim_vs_energy_curve(cfg.dim_range, cfg.convention, grid).points)


def _symmetry(cfg: RunConfig) -> str:
    report = symmetry_report(cfg.dim_range, cfg.convention, cfg.max_2e)
    if cfg.resolved_format == "json":
        return _json_text(report.to_dict())
    rows = [(lv.twice_energy, lv.twice_energy / 2, lv.multiplicity, lv.group, str(lv.enhanced).lower()) for lv in report.per_level]
    return _csv_text(["twice_energy", "energy", "multiplicity", "group", "enhanced"], rows)


def _evolve(cfg: RunConfig) -> str:
    pairs = [parse_pair(p) for p in (cfg.pairs or [DEFAULT_PAIR])]
    try:
        initial = BasisLabel.parse(cfg.initial) if cfg.initial else pairs[0][0]
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    basis = enumerate_basis(cfg.dim_range, cfg.cutoff_k, cfg.convention)
    for lab in [initial, *(x for pair in pairs for x in pair)]:
        if lab not in basis:
            raise ConfigError(f"label |{lab}> is outside the basis (n1={cfg.n1}, n2={cfg.n2}, cutoff-k={cfg.cutoff_k})")
    try:
        h_int = hopping_interaction(basis, cfg.g, pairs)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    h = oscillator_hamiltonian(basis) + h_int
    times = np.linspace(0.0, cfg.t_max, cfg.t_points)
    traj = evolve(h, StateVector.basis_state(basis, initial), times)
    if cfg.resolved_format == "json":
        return _json_text(
            {
                "n1": cfg.n1,
                "n2": cfg.n2,
                "convention": basis.convention.value,
                "g": cfg.g,
                "pairs": [f"{a}|{b}" for a, b in pairs],
                "initial": str(initial),
                "t": traj.times.tolist(),
                "mean_dim": traj.mean_dim.tolist(),
                "norm": traj.norm.tolist(),
            }
        )
    return _csv_text(EVOLVE_COLUMNS, list(zip(traj.times, traj.mean_dim, traj.norm)))


_HANDLERS = {
    "spectrum": _spectrum,
    "degeneracy": _degeneracy,
    "thermo": _thermo,
    "dim-vs-energy": _dim_vs_energy,
    "symmetry": _symmetry,
    "evolve": _evolve,
}


def render(cfg: RunConfig) -> str:
    """Validate ``cfg`` and return the output file contents."""
    cfg.validate()
    return _HANDLERS[cfg.command](cfg)


def run(cfg: RunConfig) -> int:
    try:
        text = render(cfg)
    except ConfigError as exc:
        print(f"qdim: error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"qdim: computation failed: {exc}", file=sys.stderr)
        return 1
    if cfg.output_path == "-":
        sys.stdout.write(text)
        return 0
    try:
        with open(cfg.output_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        print(f"qdim: cannot write {cfg.output_path}: {exc}", file=sys.stderr)
        return 1
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qdim", description="Quantum-dimension harmonic oscillator toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n1", type=int, default=0, help="smallest dimension (default 0)")
    common.add_argument("--n2", type=int, default=3, help="largest dimension (default 3)")
    common.add_argument("--convention", choices=["unshifted", "shifted"], default="unshifted")
    common.add_argument("--output", "-o", dest="output_path", default="-", help="output file, '-' for stdout")
    common.add_argument("--format", choices=["csv", "json"], default=None)

    betas = argparse.ArgumentParser(add_help=False)
    betas.add_argument("--beta-min", type=float, default=DEFAULT_BETA_MIN)
    betas.add_argument("--beta-max", type=float, default=DEFAULT_BETA_MAX)
    betas.add_argument("--beta-points", type=int, default=DEFAULT_BETA_POINTS)

    levels = argparse.ArgumentParser(add_help=False)
    levels.add_argument("--max-2e", dest="max_2e", type=int, default=6, help="highest twice-energy level to report")

    sp = sub.add_parser("spectrum", parents=[common], help="basis states and energies of a truncated basis")
    sp.add_argument("--cutoff-k", type=int, default=2)
    sub.add_parser("degeneracy", parents=[common, levels], help="exact level multiplicities")
    sub.add_parser("thermo", parents=[common, betas], help="Z, <H0>, <D> on a beta grid")
    sub.add_parser("dim-vs-energy", parents=[common, betas], help="effective dimension against mean energy")
    sub.add_parser("symmetry", parents=[common, levels], help="per-level mixing groups")
    ev = sub.add_parser("evolve", parents=[common], help="<D>(t) under hopping between basis states")
    ev.add_argument("--cutoff-k", type=int, default=2)
    ev.add_argument("--g", type=float, default=0.1, help="hopping amplitude")
    ev.add_argument("--t-max", type=float, default=100.0)
    ev.add_argument("--t-points", type=int, default=1001)
    ev.add_argument("--pair", dest="pairs", action="append", default=[], help="coupled labels 'd;k,..|d;k,..' (repeatable)")
    ev.add_argument("--initial", default=None, help="initial basis label (default: first label of the first pair)")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    cfg = RunConfig(**{k: v for k, v in vars(args).items()})
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
