"""Convergence factors over predictive values, and model-form selection.

A convergence factor maps a run's (PPV, NPV) pair to [0, 1], peaking where
the two predictive values agree up to a chosen offset. Three functional
forms are supported:

    triangular:        1 - |ppv - npv|
    adjusted_normal:   exp(-2 (ppv - npv)^2)
    asymmetric_normal: exp(-2 (ppv - npv - alpha)^2),  alpha in [0, 1]

The adjusted normal form is the asymmetric form at alpha = 0. Factor values
collected over many runs are summarized by a maximum-likelihood normal fit
per robustness group (location = sample mean, scale = population standard
deviation), and the offset family is compared by a dominance rule on three
sub-criteria: location closest to the 0.5 balance point, smallest scale,
and cross-group consistency.
"""

from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np
from numpy.typing import NDArray

log = logging.getLogger(__name__)

FORM_KINDS = ("triangular", "adjusted_normal", "asymmetric_normal")

#: Offsets tried by default when selecting an asymmetric form.
DEFAULT_ALPHA_GRID = (0.0, 0.25, 0.5, 0.75, 1.0)

#: Default robustness-group labels: every run vs. the converged tail.
GROUP_ALL = "all_cycles"
GROUP_FINAL = "final_cycles"

MIN_PP_POINTS = 10


# ---------------------------------------------------------------------------
# Forms and factor values
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConvergenceForm:
    """A convergence-factor functional form (kind + offset)."""

    kind: str
    alpha: float = 0.0

    def __post_init__(self):
        if self.kind not in FORM_KINDS:
            raise ValueError(f"unknown form kind {self.kind!r}; expected one of {FORM_KINDS}")
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha must be in [0, 1], got {self.alpha}")
        if self.kind != "asymmetric_normal" and self.alpha != 0.0:
            raise ValueError(f"{self.kind} form takes no offset")

    @property
    def label(self) -> str:
        if self.kind == "asymmetric_normal":
            return f"asymmetric_a{self.alpha:g}"
        return self.kind


def asymmetric_family(alpha_grid: Iterable[float] = DEFAULT_ALPHA_GRID) -> list[ConvergenceForm]:
    """Asymmetric-normal forms over an offset grid."""
    return [ConvergenceForm("asymmetric_normal", float(a)) for a in alpha_grid]


def convergence_factor(ppv: float, npv: float, form: ConvergenceForm) -> float:
    """Factor value in [0, 1] for one (PPV, NPV) pair."""
    if not (0.0 <= ppv <= 1.0 and 0.0 <= npv <= 1.0):
        raise ValueError(f"predictive values must be in [0, 1], got ppv={ppv}, npv={npv}")
    return float(_factor_array(np.asarray([ppv - npv]), form)[0])


def _factor_array(diff: NDArray[np.float64], form: ConvergenceForm) -> NDArray[np.float64]:
    if form.kind == "triangular":
        return 1.0 - np.abs(diff)
    if form.kind == "adjusted_normal":
        return np.exp(-2.0 * diff * diff)
    shifted = diff - form.alpha
    return np.exp(-2.0 * shifted * shifted)


# ---------------------------------------------------------------------------
# Run records and robustness groups
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RunRecord:
    """One assessed simulation run."""

    box_id: int
    group: str
    cycle: int
    ppv: float
    npv: float

    def __post_init__(self):
        if not (0.0 <= self.ppv <= 1.0 and 0.0 <= self.npv <= 1.0):
            raise ValueError(
                f"run {self.box_id}@{self.cycle}: predictive values outside [0, 1] "
                f"(ppv={self.ppv}, npv={self.npv})"
            )


def factor_values(runs: Sequence[RunRecord], form: ConvergenceForm) -> NDArray[np.float64]:
    """Factor value per run, in run order."""
    diff = np.asarray([r.ppv - r.npv for r in runs], dtype=np.float64)
    return _factor_array(diff, form)


def split_robustness(
    runs: Sequence[RunRecord],
    final_cycle: int | None = None,
) -> dict[str, list[RunRecord]]:
    """Split runs into the two default robustness groups.

    `all_cycles` keeps everything; `final_cycles` keeps runs at or past
    `final_cycle` (default: only the largest cycle present).
    """
    if not runs:
        raise ValueError("no runs to split")
    cutoff = max(r.cycle for r in runs) if final_cycle is None else final_cycle
    final = [r for r in runs if r.cycle >= cutoff]
    if not final:
        raise ValueError(f"no runs at or past cycle {cutoff}")
    return {GROUP_ALL: list(runs), GROUP_FINAL: final}


# ---------------------------------------------------------------------------
# Maximum-likelihood normal summaries
# ---------------------------------------------------------------------------


def fit_normal_ml(values: Sequence[float] | NDArray[np.float64]) -> tuple[float, float]:
    """Closed-form ML normal fit: (mean, population standard deviation).

    The scale uses the N divisor (the likelihood maximizer), not N-1.
    Identical values give scale 0.0 - degenerate; FitResult refuses it.
    """
    x = np.asarray(values, dtype=np.float64)
    if x.size == 0:
        raise ValueError("cannot fit a distribution to zero values")
    return float(np.mean(x)), float(np.std(x, ddof=0))


@dataclass(frozen=True)
class FitResult:
    """Normal summary of one form's factor values within one group."""

    form: ConvergenceForm
    group: str
    mu: float
    sigma: float

    def __post_init__(self):
        if not self.sigma > 0.0:
            raise ValueError(
                f"degenerate fit for {self.form.label} in {self.group}: scale {self.sigma} (identical values?)"
            )


def fit_by_form(
    groups: Mapping[str, Sequence[RunRecord]],
    forms: Sequence[ConvergenceForm],
) -> list[FitResult]:
    """ML normal fits for every (group, form) pair."""
    fits = []
    for group, runs in groups.items():
        if not runs:
            raise ValueError(f"robustness group {group!r} is empty")
        for form in forms:
            mu, sigma = fit_normal_ml(factor_values(runs, form))
            fits.append(FitResult(form=form, group=group, mu=mu, sigma=sigma))
    return fits


# ---------------------------------------------------------------------------
# Dominance selection
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DominanceTable:
    """Pairwise scores, sub-criteria, and the selected form.

    score[(label, m, k)] = (0.5 - mu_m)/sigma_m - (0.5 - mu_k)/sigma_k for
    that form, antisymmetric in the group pair. Sub-criteria per form:
    location |0.5 - mu| per group, scale sigma per group, and robustness =
    the largest |score| over group pairs. A form is the uniform dominator
    when no rival beats it on any sub-criterion in any group; without one,
    `selected` falls back to the best mean location and `uniform_dominator`
    is False.
    """

    forms: tuple[ConvergenceForm, ...]
    groups: tuple[str, ...]
    scores: Mapping[tuple[str, str, str], float]
    location: Mapping[tuple[str, str], float]
    scale: Mapping[tuple[str, str], float]
    robustness: Mapping[str, float]
    ranking: tuple[str, ...] = field(default=())
    selected: str = ""
    uniform_dominator: bool = False

    def form_by_label(self, label: str) -> ConvergenceForm:
        for f in self.forms:
            if f.label == label:
                return f
        raise KeyError(label)

    @property
    def selected_form(self) -> ConvergenceForm:
        return self.form_by_label(self.selected)


def dominance_table(fits: Sequence[FitResult]) -> DominanceTable:
    """Compare fitted forms across robustness groups and pick one.

    Requires at least two groups and exactly one fit per (form, group).
    The selected form dominates on all three sub-criteria when such a form
    exists; otherwise forms are ranked by location criterion averaged over
    groups (ties by label) and the best is selected with the
    uniform-dominator flag off.
    """
    by_key: dict[tuple[str, str], FitResult] = {}
    forms: list[ConvergenceForm] = []
    groups: list[str] = []
    for f in fits:
        key = (f.form.label, f.group)
        if key in by_key:
            raise ValueError(f"duplicate fit for form {key[0]} in group {key[1]}")
        by_key[key] = f
        if f.form.label not in [x.label for x in forms]:
            forms.append(f.form)
        if f.group not in groups:
            groups.append(f.group)
    if len(groups) < 2:
        raise ValueError("dominance comparison needs at least two robustness groups")
    for form in forms:
        for g in groups:
            if (form.label, g) not in by_key:
                raise ValueError(f"missing fit for form {form.label} in group {g}")

    def zscore(label: str, group: str) -> float:
        fit = by_key[(label, group)]
        return (0.5 - fit.mu) / fit.sigma

    scores: dict[tuple[str, str, str], float] = {}
    location: dict[tuple[str, str], float] = {}
    scale: dict[tuple[str, str], float] = {}
    robustness: dict[str, float] = {}
    for form in forms:
        lbl = form.label
        for g in groups:
            fit = by_key[(lbl, g)]
            location[(lbl, g)] = abs(0.5 - fit.mu)
            scale[(lbl, g)] = fit.sigma
        pair_mags = []
        for m in groups:
            for k in groups:
                if m == k:
                    continue
                s = zscore(lbl, m) - zscore(lbl, k)
                scores[(lbl, m, k)] = s
                pair_mags.append(abs(s))
        robustness[lbl] = max(pair_mags)

    labels = [f.label for f in forms]

    def dominates_all(lbl: str) -> bool:
        for other in labels:
            if other == lbl:
                continue
            loc_ok = all(location[(lbl, g)] <= location[(other, g)] for g in groups)
            scl_ok = all(scale[(lbl, g)] <= scale[(other, g)] for g in groups)
            rob_ok = robustness[lbl] <= robustness[other]
            if not (loc_ok and scl_ok and rob_ok):
                return False
        return True

    dominators = [lbl for lbl in labels if dominates_all(lbl)]

    def mean_location(lbl: str) -> float:
        return sum(location[(lbl, g)] for g in groups) / len(groups)

    ranking = tuple(sorted(labels, key=lambda lbl: (mean_location(lbl), lbl)))
    if len(dominators) == 1:
        selected, uniform = dominators[0], True
    else:
        selected, uniform = ranking[0], False
        log.info("no uniform dominator among %s; ranked by location criterion", labels)

    return DominanceTable(
        forms=tuple(forms),
        groups=tuple(groups),
        scores=scores,
        location=location,
        scale=scale,
        robustness=robustness,
        ranking=ranking,
        selected=selected,
        uniform_dominator=uniform,
    )


# ---------------------------------------------------------------------------
# Probability-probability curves
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class PPCurve:
    """Empirical-vs-fitted probability curve for one set of factor values.

    Points are (p_i, Phi((x_(i) - mu)/sigma)) with p_i = (i - 0.5)/n over the
    sorted values. `prevalence_estimate` is the diagonal crossing nearest
    p = 0.5 (None when the curve never crosses); `net_gain` is the signed
    trapezoid-rule area between curve and diagonal (positive when the fitted
    distribution sits above the empirical one).
    """

    p: NDArray[np.float64]
    fitted: NDArray[np.float64]
    crossings: tuple[float, ...]
    prevalence_estimate: float | None
    net_gain: float

    @property
    def n(self) -> int:
        return int(self.p.size)


def pp_curve(values: Sequence[float] | NDArray[np.float64], mu: float, sigma: float) -> PPCurve:
    """Build the P-P curve of `values` against a normal(mu, sigma) fit.

    Fewer than 10 points triggers a warning (the curve is still computed).

    Raises:
        ValueError: No values, or sigma <= 0.
    """
    x = np.sort(np.asarray(values, dtype=np.float64))
    if x.size == 0:
        raise ValueError("cannot build a probability curve from zero values")
    if not sigma > 0.0:
        raise ValueError(f"scale must be positive, got {sigma}")
    n = x.size
    if n < MIN_PP_POINTS:
        warnings.warn(f"probability curve built from only {n} points; estimates will be coarse", stacklevel=2)
    p = (np.arange(1, n + 1) - 0.5) / n
    z = (x - mu) / sigma
    fitted = np.asarray([_phi(v) for v in z])

    d = fitted - p
    crossings: list[float] = []
    for i in range(n):
        if d[i] == 0.0:
            crossings.append(float(p[i]))
        elif i + 1 < n and d[i] * d[i + 1] < 0.0:
            # Linear interpolation of the deviation to zero.
            frac = d[i] / (d[i] - d[i + 1])
            crossings.append(float(p[i] + frac * (p[i + 1] - p[i])))
    crossings = sorted(set(crossings))

    if crossings:
        prevalence = min(crossings, key=lambda c: (abs(c - 0.5), c))
    else:
        prevalence = None
        log.info("probability curve never crosses the diagonal; no prevalence estimate")

    net_gain = float(np.trapezoid(d, p)) if n > 1 else 0.0
    return PPCurve(
        p=p,
        fitted=fitted,
        crossings=tuple(crossings),
        prevalence_estimate=prevalence,
        net_gain=net_gain,
    )


# ---------------------------------------------------------------------------
# Timelines
# ---------------------------------------------------------------------------


def factor_timeline(
    runs: Sequence[RunRecord],
    forms: Sequence[ConvergenceForm],
    cycles: Sequence[int] | None = None,
) -> list[tuple[int, dict[str, float]]]:
    """Mean factor value per form at each cycle, ascending.

    Cycles with no runs are skipped with a warning.
    """
    if cycles is None:
        cycles = sorted({r.cycle for r in runs})
    out: list[tuple[int, dict[str, float]]] = []
    for cycle in cycles:
        batch = [r for r in runs if r.cycle == cycle]
        if not batch:
            warnings.warn(f"no runs at cycle {cycle}; skipped", stacklevel=2)
            continue
        means = {form.label: float(np.mean(factor_values(batch, form))) for form in forms}
        out.append((cycle, means))
    return out


def _phi(z: float) -> float:
    """Standard normal CDF."""
    return 0.5 * (1.0 + math.erf(z / math.sqrt(2.0)))
