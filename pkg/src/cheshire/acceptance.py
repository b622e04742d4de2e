"""Acceptance criteria for the simulator, runnable from the CLI and from tests.

Each criterion returns a CriterionResult with a deterministic detail string;
re-running with the same seed reproduces the report byte for byte (that
reproducibility is itself the last criterion).
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, replace

import numpy as np

from . import analysis, hybrid, neutron
from . import pointer as ptr
from .states import Path, circular_spin, path_projector

DEFAULT_SEED = 1729

# Direct 1D evaluation of max_x [exp(-(x-0.1)^2) - exp(-(x+0.1)^2)]; the
# first-order estimate 4*0.1*max(x e^{-x^2}) = 0.17155 overshoots slightly.
DIFF_TERM_MAX = 0.1704144142774198


@dataclass(frozen=True)
class CriterionResult:
    key: str
    name: str
    passed: bool
    detail: str


def _result(key: str, name: str, passed: bool, detail: str) -> CriterionResult:
    return CriterionResult(key=key, name=name, passed=bool(passed), detail=detail)


def _canonical_joint(delta: float, width: float = 1.0) -> hybrid.PointerJointState:
    spec = hybrid.InteractionSpec(delta_x=delta, delta_y=delta, width=width)
    state = hybrid.interact(hybrid.preselect_photon(spec), spec)
    return hybrid.postselect(state, hybrid.photon_postselection())


def criterion_ratios(seed: int = DEFAULT_SEED, tamper: float = 0.0) -> CriterionResult:
    """Post-selected term coefficients stand in ratio (2, 1, -1)."""
    started = time.perf_counter()
    joint = _canonical_joint(delta=0.1)
    by_center = {round(ptr.centroid(t.p1), 6): t.coeff for t in joint.terms}
    ref = by_center[0.1]
    middle = by_center[0.0] * (1.0 + tamper)
    r_mid = middle / ref
    r_neg = by_center[-0.1] / ref
    elapsed = time.perf_counter() - started
    err_mid = abs(r_mid - 2.0)
    err_neg = abs(r_neg + 1.0)
    ok = err_mid <= 1e-12 and err_neg <= 1e-12 and elapsed < 1.0
    return _result("C01", "post-selected coefficient ratios", ok,
                   f"|ratio - 2| = {err_mid:.2e}, |ratio + 1| = {err_neg:.2e} "
                   f"against reference term")


def criterion_weak_shift(seed: int = DEFAULT_SEED) -> CriterionResult:
    """Centroid matches (dx, dy) to first order; relative residual is quadratic."""
    started = time.perf_counter()
    deltas = (1e-1, 1e-2, 1e-3)
    rels = []
    for d in deltas:
        cx, cy = hybrid.centroid2d(_canonical_joint(delta=d))
        rels.append(math.hypot(cx - d, cy - d) / math.hypot(d, d))
    slope = float(np.polyfit(np.log(deltas), np.log(rels), 1)[0])
    elapsed = time.perf_counter() - started
    ok = rels[-1] <= 1e-4 and abs(slope - 2.0) <= 0.2 and elapsed < 10.0
    return _result("C02", "first-order pointer shift", ok,
                   f"relative residual {rels[-1]:.3e} at delta=1e-3, "
                   f"log-log slope {slope:.3f}")


def criterion_lobes(seed: int = DEFAULT_SEED) -> CriterionResult:
    """Disjoint strong-regime lobes carry weights (2/3, 1/6, 1/6)."""
    delta = 5.0
    lobes = hybrid.strong_lobe_weights(_canonical_joint(delta=delta))
    expected = {(0.0, delta): 2 / 3, (delta, 0.0): 1 / 6, (-delta, 0.0): 1 / 6}
    errs = []
    for lobe in lobes:
        target = min(expected, key=lambda c: math.hypot(c[0] - lobe.x, c[1] - lobe.y))
        errs.append(abs(lobe.weight - expected.pop(target)))
    ok = not expected and all(e <= 1e-3 for e in errs)
    return _result("C03", "strong-regime lobe weights", ok,
                   f"weight errors {[f'{e:.2e}' for e in errs]} against (2/3, 1/6, 1/6)")


def criterion_pattern(seed: int = DEFAULT_SEED) -> CriterionResult:
    """Weak-regime density: one peak in the (+,+) quadrant, depleted x<0 mass,
    and the component field maxima match direct evaluation."""
    joint = _canonical_joint(delta=0.1)
    grid = ptr.default_grid(1.0)
    dens = hybrid.joint_density(joint, grid, grid)
    xs = grid.points()

    interior = dens[1:-1, 1:-1]
    is_max = ((interior > dens[:-2, 1:-1]) & (interior > dens[2:, 1:-1])
              & (interior > dens[1:-1, :-2]) & (interior > dens[1:-1, 2:])
              & (interior > 1e-6 * dens.max()))
    n_peaks = int(is_max.sum())
    iy, ix = np.unravel_index(dens.argmax(), dens.shape)
    peak_pos = (float(xs[ix]), float(xs[iy]))
    mass_neg = float(dens[:, xs < 0].sum())
    mass_pos = float(dens[:, xs > 0].sum())

    fine = np.linspace(-2.0, 2.0, 2_000_001)
    comp_a_max = 2.0 * float(np.exp(-fine ** 2).max())
    diff_max = float((np.exp(-(fine - 0.1) ** 2) - np.exp(-(fine + 0.1) ** 2)).max())

    ok = (n_peaks == 1 and peak_pos[0] > 0 and peak_pos[1] > 0
          and mass_neg < mass_pos
          and abs(comp_a_max - 2.0) <= 1e-9
          and abs(diff_max - DIFF_TERM_MAX) <= 1e-9
          and not math.isclose(comp_a_max, 1.5, rel_tol=0.1)
          and not math.isclose(diff_max, 0.012, rel_tol=0.5))
    return _result("C04", "weak-regime interference pattern", ok,
                   f"{n_peaks} peak(s), argmax {peak_pos}, x<0 vs x>0 mass "
                   f"{mass_neg:.4f}/{mass_pos:.4f}; field maxima {comp_a_max:.9f} and "
                   f"{diff_max:.9f} (direct evaluation; values near 1.5 / 0.012 ruled out)")


def criterion_weak_values(seed: int = DEFAULT_SEED) -> CriterionResult:
    """Presence reads 0/1, circular spin reads 1/0, and the path sum rule is exact."""
    pre = hybrid.photon_preselection()
    post = hybrid.photon_postselection()
    sigma = circular_spin()
    values = {
        "presence_I": analysis.weak_value(pre, post, path_projector(Path.I)),
        "presence_II": analysis.weak_value(pre, post, path_projector(Path.II)),
        "spin_I": analysis.weak_value(pre, post, sigma @ path_projector(Path.I)),
        "spin_II": analysis.weak_value(pre, post, sigma @ path_projector(Path.II)),
    }
    expected = {"presence_I": 0.0, "presence_II": 1.0, "spin_I": 1.0, "spin_II": 0.0}
    errs = {k: abs(values[k] - expected[k]) for k in values}
    sum_rule = values["presence_I"] + values["presence_II"]
    ok = all(e <= 1e-12 for e in errs.values()) and sum_rule == 1.0 + 0.0j
    shown = {k: f"{v.real:.3g}{v.imag:+.3g}j" for k, v in values.items()}
    return _result("C05", "arm weak values and path sum rule", ok,
                   f"values {shown}, path sum {sum_rule}")


def criterion_baseline(seed: int = DEFAULT_SEED) -> CriterionResult:
    """Unprobed exit curves are flat: P_D1 = 1/4 and P_D2 = 1/2 for all phases."""
    table = neutron.chi_sweep(neutron.NeutronScenario(chi=0.0), steps=100)
    err_d1 = float(np.abs(table.p_d1 - 0.25).max())
    err_d2 = float(np.abs(table.p_d2 - 0.5).max())
    ok = err_d1 <= 1e-12 and err_d2 <= 1e-12
    return _result("C06", "flat baseline detector curves", ok,
                   f"max |P_D1 - 1/4| = {err_d1:.2e}, max |P_D2 - 1/2| = {err_d2:.2e}")


def criterion_absorber(seed: int = DEFAULT_SEED) -> CriterionResult:
    """P_D1 ignores an arm-I absorber and is exactly T/4 for an arm-II one."""
    rng = np.random.default_rng(seed)
    ts = np.concatenate(([0.0, 1.0], rng.uniform(0.0, 1.0, 14)))
    chis = np.concatenate(([0.0], rng.uniform(0.0, 2.0 * math.pi, 7)))
    worst_i = 0.0
    worst_ii = 0.0
    for chi in chis:
        base = neutron.detector_probabilities(neutron.NeutronScenario(chi=float(chi))).p_d1
        for t in ts:
            p_i = neutron.detector_probabilities(neutron.NeutronScenario(
                chi=float(chi), absorber=neutron.Absorber(Path.I, float(t)))).p_d1
            p_ii = neutron.detector_probabilities(neutron.NeutronScenario(
                chi=float(chi), absorber=neutron.Absorber(Path.II, float(t)))).p_d1
            worst_i = max(worst_i, abs(p_i - base))
            worst_ii = max(worst_ii, abs(p_ii - t / 4.0))
    ok = worst_i <= 1e-14 and worst_ii <= 1e-15
    return _result("C07", "absorber response", ok,
                   f"arm-I invariance worst {worst_i:.2e}, arm-II linearity worst {worst_ii:.2e}")


def criterion_visibility(seed: int = DEFAULT_SEED) -> CriterionResult:
    """Arm-I field makes D1 oscillate with the closed-form visibility; an
    arm-II field leaves D1 flat while D2 oscillates."""
    rot = neutron.field_rotation(0.2)
    table_i = neutron.chi_sweep(neutron.NeutronScenario(
        chi=0.0, rotation=rot, rotation_path=Path.I), steps=100)
    table_ii = neutron.chi_sweep(neutron.NeutronScenario(
        chi=0.0, rotation=rot, rotation_path=Path.II), steps=100)
    b = math.sin(0.1)
    expected = 2.0 * b / (1.0 + b * b)
    err_i = abs(table_i.visibility("d1") - expected)
    vis_flat = table_ii.visibility("d1")
    ok = (err_i <= 1e-10 and table_i.visibility("d2") > 0.0
          and vis_flat <= 1e-12 and table_ii.visibility("d2") > 0.0)
    return _result("C08", "arm-field visibilities", ok,
                   f"arm-I D1 visibility error {err_i:.2e} vs {expected:.12f}; "
                   f"arm-II D1 visibility {vis_flat:.2e}, D2 visibility "
                   f"{table_ii.visibility('d2'):.4f}")


def criterion_conservation(seed: int = DEFAULT_SEED) -> CriterionResult:
    """Detected, absorbed, and rejected probabilities always total one."""
    rng = np.random.default_rng(seed + 9)
    worst = 0.0
    for _ in range(1000):
        chi = float(rng.uniform(0.0, 2.0 * math.pi))
        kind = int(rng.integers(0, 5))
        scenario = neutron.NeutronScenario(chi=chi)
        if kind in (1, 2):
            scenario = neutron.NeutronScenario(chi=chi, absorber=neutron.Absorber(
                Path.I if kind == 1 else Path.II, float(rng.uniform(0.0, 1.0))))
        elif kind in (3, 4):
            raw = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
            q = np.linalg.qr(raw)[0]
            rot = neutron.SpinRotation(a=complex(q[0, 0]), b=complex(q[1, 0]),
                                       c=complex(q[1, 1]), d=complex(q[0, 1]))
            scenario = neutron.NeutronScenario(
                chi=chi, rotation=rot, rotation_path=Path.I if kind == 3 else Path.II)
        worst = max(worst, abs(neutron.detector_probabilities(scenario).total() - 1.0))
    ok = worst <= 1e-12
    return _result("C09", "probability conservation under scenario fuzz", ok,
                   f"worst |sum - 1| = {worst:.2e} over 1000 scenarios")


def criterion_washout(seed: int = DEFAULT_SEED) -> CriterionResult:
    """Uniform phase noise on the post-selection kills the weak x shift; the
    centroid standard error scales as one over the square root of the samples."""
    spec = hybrid.InteractionSpec(delta_x=1e-3, delta_y=1e-3, width=1.0)

    def run(samples: int, sub: int) -> analysis.EnsembleStats:
        model = analysis.DisturbanceModel(kind="phase-noise-post",
                                          strength=2.0 * math.pi,
                                          samples=samples, seed=seed + sub)
        return analysis.disturbance_ensemble(spec, model)

    big = run(10_000, 1)
    small = run(100, 2)
    mean_x, se_x = big.mean_centroid[0], big.centroid_stderr[0]
    ratio = small.centroid_stderr[0] / se_x
    ok = abs(mean_x) <= 3.0 * se_x and se_x > 0.0 and 8.0 <= ratio <= 12.0
    return _result("C10", "phase-noise washout and error scaling", ok,
                   f"mean x shift {mean_x:.3e} vs 3*SE {3 * se_x:.3e}; "
                   f"SE ratio (N=100 / N=10000) {ratio:.2f}")


_BASE_CRITERIA = (
    criterion_ratios,
    criterion_weak_shift,
    criterion_lobes,
    criterion_pattern,
    criterion_weak_values,
    criterion_baseline,
    criterion_absorber,
    criterion_visibility,
    criterion_conservation,
    criterion_washout,
)


def _run_base(seed: int) -> list[CriterionResult]:
    return [fn(seed=seed) for fn in _BASE_CRITERIA]


def criterion_determinism(seed: int = DEFAULT_SEED) -> CriterionResult:
    """The full report reproduces byte for byte under the same seed."""
    first = "\n".join(report_lines(_run_base(seed)))
    second = "\n".join(report_lines(_run_base(seed)))
    ok = first.encode() == second.encode()
    return _result("C11", "byte-identical re-run", ok,
                   f"report of {len(first)} bytes compared across two runs")


def run_all(seed: int = DEFAULT_SEED) -> list[CriterionResult]:
    results = _run_base(seed)
    results.append(criterion_determinism(seed=seed))
    return results


def report_lines(results: list[CriterionResult]) -> list[str]:
    return [f"{'PASS' if r.passed else 'FAIL'} [{r.key}] {r.name}: {r.detail}"
            for r in results]
