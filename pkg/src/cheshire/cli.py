"""Command line front end.

Subcommands:
  photon-cat   joint pointer densities, summary table, weak-value report
  neutron-cat  detector-count sweeps for the probed interferometer
  weak-values  weak values with predicted and simulated pointer shifts
  verify       run the acceptance criteria and report PASS/FAIL

Exit codes: 0 success, 1 usage error, 2 simulation error, 3 failed criteria.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path as FsPath

import numpy as np

from . import acceptance, analysis, figures, hybrid, neutron, reporting
from . import pointer as ptr
from .errors import GridMismatchError, SimulationError
from .states import Path

FORMATS = ("csv", "pgm", "png")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad flags; route through UsageError so main()
    # can map usage problems to exit code 1 instead.
    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(message)


@dataclass
class Settings:
    w: float = 1.0
    dx: float | None = None
    dy: float | None = None
    chi_steps: int = 100
    t: float = 0.5
    alpha: float = 0.2
    grid_n: int = 512
    grid_span: float = 8.0
    seed: int = 1234
    samples: int = 0
    out: str = "cheshire-out"
    format: str = "csv,pgm,png"

    def resolved_dx(self) -> float:
        return 0.1 * self.w if self.dx is None else self.dx

    def resolved_dy(self) -> float:
        return 0.1 * self.w if self.dy is None else self.dy

    def formats(self) -> tuple[str, ...]:
        parts = tuple(p.strip() for p in self.format.split(",") if p.strip())
        bad = [p for p in parts if p not in FORMATS]
        if bad or not parts:
            raise UsageError(f"unknown output format(s): {bad or ['']}")
        return parts

    def out_dir(self) -> FsPath:
        return FsPath(self.out)


_FIELD_TYPES = {
    "w": float, "dx": float, "dy": float, "chi_steps": int, "t": float,
    "alpha": float, "grid_n": int, "grid_span": float, "seed": int,
    "samples": int, "out": str, "format": str,
}


def _add_common_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", type=str, default=None,
                   help="key=value file; explicit flags override it")
    p.add_argument("--w", type=float, default=None, help="pointer width (default 1.0)")
    p.add_argument("--dx", type=float, default=None,
                   help="spin-coupling displacement (default 0.1*w)")
    p.add_argument("--dy", type=float, default=None,
                   help="presence-coupling displacement (default 0.1*w)")
    p.add_argument("--chi-steps", dest="chi_steps", type=int, default=None,
                   help="points in each phase sweep (default 100)")
    p.add_argument("--t", type=float, default=None,
                   help="absorber transmissivity (default 0.5)")
    p.add_argument("--alpha", type=float, default=None,
                   help="spin rotation angle (default 0.2)")
    p.add_argument("--grid-n", dest="grid_n", type=int, default=None,
                   help="grid points per axis (default 512)")
    p.add_argument("--grid-span", dest="grid_span", type=float, default=None,
                   help="grid half-span in widths (default 8.0)")
    p.add_argument("--seed", type=int, default=None, help="master RNG seed (default 1234)")
    p.add_argument("--samples", type=int, default=None,
                   help="shots per sweep point; 0 disables counts (default 0)")
    p.add_argument("--out", type=str, default=None,
                   help="output directory (default cheshire-out)")
    p.add_argument("--format", type=str, default=None,
                   help="comma list from csv,pgm,png (default all)")


def _load_config(path: str) -> dict[str, object]:
    values: dict[str, object] = {}
    try:
        text = FsPath(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}") from exc
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, _, value = line.partition("=")
        dest = key.strip().replace("-", "_")
        if dest not in _FIELD_TYPES:
            raise UsageError(f"{path}:{lineno}: unknown key {key.strip()!r}")
        try:
            values[dest] = _FIELD_TYPES[dest](value.strip())
        except ValueError as exc:
            raise UsageError(f"{path}:{lineno}: bad value for {key.strip()!r}: {exc}") from exc
    return values


def _settings_from(args: argparse.Namespace) -> Settings:
    settings = Settings()
    if args.config is not None:
        for dest, value in _load_config(args.config).items():
            setattr(settings, dest, value)
    for dest in _FIELD_TYPES:
        value = getattr(args, dest, None)
        if value is not None:
            setattr(settings, dest, value)
    if settings.w <= 0:
        raise UsageError("--w must be positive")
    if settings.chi_steps < 4:
        raise UsageError("--chi-steps must be at least 4")
    if not 0.0 <= settings.t <= 1.0:
        raise UsageError("--t must lie in [0, 1]")
    if settings.grid_n < 16:
        raise UsageError("--grid-n must be at least 16")
    if settings.grid_span <= 0:
        raise UsageError("--grid-span must be positive")
    if settings.samples < 0:
        raise UsageError("--samples must be non-negative")
    settings.formats()
    return settings


def _interaction(settings: Settings) -> hybrid.InteractionSpec:
    return hybrid.InteractionSpec(delta_x=settings.resolved_dx(),
                                  delta_y=settings.resolved_dy(),
                                  width=settings.w)


def _params(settings: Settings, **extra: object) -> dict[str, object]:
    base: dict[str, object] = {
        "w": settings.w, "dx": settings.resolved_dx(), "dy": settings.resolved_dy(),
        "seed": settings.seed,
    }
    base.update(extra)
    return base


def cmd_photon_cat(settings: Settings) -> int:
    spec = _interaction(settings)
    out = settings.out_dir()
    formats = settings.formats()
    grid = ptr.default_grid(settings.w, span_widths=settings.grid_span, n=settings.grid_n)
    if grid.spacing > settings.w / ptr.MIN_POINTS_PER_WIDTH:
        raise GridMismatchError(
            f"grid spacing {grid.spacing:.4g} under-resolves pointer width "
            f"{settings.w:.4g}; raise --grid-n or shrink --grid-span")
    xs = grid.points()

    joint = hybrid.postselect(
        hybrid.interact(hybrid.preselect_photon(spec), spec),
        hybrid.photon_postselection())
    prob = joint.norm2()
    dens = hybrid.joint_density(joint, grid, grid)
    cx, cy = hybrid.centroid2d(joint)
    purity = hybrid.pointer_entanglement(joint)

    w2 = settings.w ** 2
    dx, dy = spec.delta_x, spec.delta_y
    fx = np.exp(-xs ** 2 / w2)
    comp_sum = 2.0 * np.exp(-(xs[:, None] - dy) ** 2 / w2) * fx[None, :]
    diff_x = np.exp(-(xs - dx) ** 2 / w2) - np.exp(-(xs + dx) ** 2 / w2)
    comp_diff = np.exp(-xs[:, None] ** 2 / w2) * diff_x[None, :]

    params = _params(settings, grid_n=settings.grid_n, grid_span=settings.grid_span)
    if "csv" in formats:
        reporting.write_density_csv(out / "density.csv", grid, grid, dens, params)
        reporting.write_density_csv(out / "component_sum.csv", grid, grid,
                                    comp_sum, params)
        reporting.write_density_csv(out / "component_difference.csv", grid, grid,
                                    comp_diff, params)
        summary_rows: list[tuple[object, object]] = [
            ("postselect_probability", prob),
            ("baseline_probability", 0.25),
            ("centroid_x", cx),
            ("centroid_y", cy),
            ("predicted_shift_x", dx),
            ("predicted_shift_y", dy),
            ("pointer_purity", purity),
        ]
        try:
            lobes = hybrid.strong_lobe_weights(joint)
        except SimulationError as exc:
            summary_rows.append(("lobe_weights", f"unavailable ({exc})"))
        else:
            for i, lobe in enumerate(lobes):
                summary_rows.append((f"lobe_{i}_center", f"({lobe.x:.6g}, {lobe.y:.6g})"))
                summary_rows.append((f"lobe_{i}_weight", lobe.weight))
        reporting.write_csv(out / "summary.csv", ("quantity", "value"),
                            summary_rows, params)
        wv_rows = [(r.operator, r.value.real, r.value.imag, r.predicted_shift,
                    r.simulated_shift, r.discrepancy)
                   for r in analysis.weak_value_report(spec)]
        reporting.write_csv(out / "weak_values.csv",
                            ("operator", "re", "im", "predicted_shift",
                             "simulated_shift", "discrepancy"),
                            wv_rows, params)
    if "pgm" in formats:
        reporting.write_pgm(out / "density.pgm", dens)
    if "png" in formats:
        figures.save_density_figure(out / "density.png", grid, grid, dens,
                                    "post-selected joint pointer density")
        figures.save_density_figure(out / "component_sum.png", grid, grid, comp_sum,
                                    "undisplaced-sum component field")
        figures.save_density_figure(out / "component_difference.png", grid, grid,
                                    comp_diff, "displaced-difference component field")
    print(f"photon-cat: post-selection probability {prob:.6f}, "
          f"centroid ({cx:.6g}, {cy:.6g}), purity {purity:.6f}")
    print(f"outputs in {out}")
    return 0


_SWEEP_CONFIGS = ("baseline", "absorber-I", "absorber-II", "field-I", "field-II")


def _scenario_for(name: str, settings: Settings) -> neutron.NeutronScenario:
    if name == "baseline":
        return neutron.NeutronScenario(chi=0.0)
    if name == "absorber-I":
        return neutron.NeutronScenario(chi=0.0,
                                       absorber=neutron.Absorber(Path.I, settings.t))
    if name == "absorber-II":
        return neutron.NeutronScenario(chi=0.0,
                                       absorber=neutron.Absorber(Path.II, settings.t))
    rot = neutron.field_rotation(settings.alpha)
    path = Path.I if name == "field-I" else Path.II
    return neutron.NeutronScenario(chi=0.0, rotation=rot, rotation_path=path)


def cmd_neutron_cat(settings: Settings) -> int:
    out = settings.out_dir()
    formats = settings.formats()
    master = np.random.SeedSequence(settings.seed)
    children = master.spawn(len(_SWEEP_CONFIGS))

    tables: dict[str, neutron.SweepTable] = {}
    vis_rows = []
    for idx, name in enumerate(_SWEEP_CONFIGS):
        table = neutron.chi_sweep(_scenario_for(name, settings), steps=settings.chi_steps)
        tables[name] = table
        vis_rows.append((name, table.visibility("d1"), table.visibility("d2")))
        if "csv" not in formats:
            continue
        header: tuple[str, ...] = ("chi", "p_d1", "p_d2", "p_absorbed", "p_rejected")
        rows = [list(row) for row in table.rows()]
        if settings.samples > 0:
            header = header + ("n_d1", "n_d2", "n_absorbed", "n_rejected")
            row_seeds = children[idx].generate_state(len(rows), dtype=np.uint64)
            for j, row in enumerate(rows):
                probs = neutron.DetectorProbabilities(
                    p_d1=row[1], p_d2=row[2], p_absorbed=row[3], p_rejected=row[4])
                counts = neutron.sample_counts(probs, settings.samples,
                                               seed=int(row_seeds[j]))
                row.extend([counts.d1, counts.d2, counts.absorbed, counts.rejected])
        params = _params(settings, config=name, chi_steps=settings.chi_steps,
                         t=settings.t, alpha=settings.alpha, samples=settings.samples)
        reporting.write_csv(out / f"sweep_{name}.csv", header, rows, params)

    if "csv" in formats:
        reporting.write_csv(out / "visibility_summary.csv",
                            ("config", "visibility_d1", "visibility_d2"),
                            vis_rows,
                            _params(settings, chi_steps=settings.chi_steps,
                                    t=settings.t, alpha=settings.alpha))
    if "png" in formats:
        figures.save_sweep_figure(out / "sweeps.png", tables)
    for name, v1, v2 in vis_rows:
        print(f"neutron-cat: {name:12s} visibility D1 {v1:.6f}  D2 {v2:.6f}")
    print(f"outputs in {out}")
    return 0


def cmd_weak_values(settings: Settings) -> int:
    spec = _interaction(settings)
    out = settings.out_dir()
    formats = settings.formats()
    reports = analysis.weak_value_report(spec)
    if "csv" in formats:
        rows = [(r.operator, r.value.real, r.value.imag, r.predicted_shift,
                 r.simulated_shift, r.discrepancy) for r in reports]
        reporting.write_csv(out / "weak_values.csv",
                            ("operator", "re", "im", "predicted_shift",
                             "simulated_shift", "discrepancy"),
                            rows, _params(settings))
    if "png" in formats:
        figures.save_shift_figure(out / "weak_value_shifts.png", reports)
    for r in reports:
        print(f"weak-values: {r.operator:12s} value {r.value.real:+.6f}{r.value.imag:+.6f}j"
              f"  predicted {r.predicted_shift:+.6e}  simulated {r.simulated_shift:+.6e}")
    print(f"outputs in {out}")
    return 0


def cmd_verify(settings: Settings) -> int:
    results = acceptance.run_all(seed=acceptance.DEFAULT_SEED)
    for line in acceptance.report_lines(results):
        print(line)
    failed = sum(1 for r in results if not r.passed)
    print(f"{len(results) - failed}/{len(results)} criteria passed")
    return 0 if failed == 0 else 3


def build_parser() -> _Parser:
    parser = _Parser(prog="cheshire",
                     description="Interferometer simulator for separated "
                                 "which-path and spin signatures")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
            ("photon-cat", "joint pointer densities and weak-value summary"),
            ("neutron-cat", "detector sweeps with absorber and field probes"),
            ("weak-values", "weak values with predicted and simulated shifts"),
            ("verify", "run acceptance criteria")):
        p = sub.add_parser(name, help=help_text)
        _add_common_flags(p)
    return parser


_COMMANDS = {
    "photon-cat": cmd_photon_cat,
    "neutron-cat": cmd_neutron_cat,
    "weak-values": cmd_weak_values,
    "verify": cmd_verify,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        settings = _settings_from(args)
        return _COMMANDS[args.command](settings)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except SimulationError as exc:
        print(f"simulation error: {exc}", file=sys.stderr)
        return 2


def entrypoint() -> None:
    raise SystemExit(main())
