"""Simulated recognition data and maximum-likelihood recovery of FTT parameters.

Each of the nine (discrimination, probe type) cells is an independent binomial
with success probability from :func:`opstat.ftt.predict_dichotomies`.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.special import xlogy

from .errors import EmptyCell
from .ftt import (
    BiasParams,
    DichotomyPredictions,
    FTTParams,
    predict_array,
    predict_dichotomies,
)
from .manual import PROBE_TYPES

__all__ = [
    "GENERATOR",
    "CountTable",
    "MomentEstimate",
    "FitResult",
    "GoodnessOfFit",
    "simulate_counts",
    "moment_estimate",
    "log_likelihood",
    "fit_mle",
    "goodness_of_fit",
]

GENERATOR = "numpy.random.PCG64"
INIT_MARGIN = 1e-3
_STEP = 1e-30  # complex-step size; exact for the polynomial model


@dataclass(frozen=True)
class CountTable:
    """Yes counts and totals; ``yes[i, j]`` is discrimination PROBE_TYPES[i]
    on probe type PROBE_TYPES[j]."""

    yes: np.ndarray
    total: np.ndarray

    def __post_init__(self):
        yes = np.asarray(self.yes, dtype=np.int64)
        total = np.asarray(self.total, dtype=np.int64)
        if yes.shape != (3, 3) or total.shape != (3, 3):
            raise ValueError("count tables are 3x3")
        if np.any(yes < 0) or np.any(yes > total):
            raise ValueError("need 0 <= yes <= total in every cell")
        yes.setflags(write=False)
        total.setflags(write=False)
        object.__setattr__(self, "yes", yes)
        object.__setattr__(self, "total", total)

    @classmethod
    def from_frequencies(cls, freq, n: int) -> "CountTable":
        """Noiseless table: yes = round(n * freq)."""
        f = np.asarray(freq, dtype=float)
        return cls(np.rint(n * f).astype(np.int64), np.full((3, 3), n, dtype=np.int64))

    def frequencies(self) -> np.ndarray:
        with np.errstate(invalid="ignore", divide="ignore"):
            return self.yes / self.total

    def rows(self):
        """(discrimination, probe_type, yes, total) in CSV order."""
        for i, y in enumerate(PROBE_TYPES):
            for j, z in enumerate(PROBE_TYPES):
                yield y, z, int(self.yes[i, j]), int(self.total[i, j])


def simulate_counts(
    params: FTTParams, bias: BiasParams | None, n_per_cell: int, seed: int
) -> CountTable:
    if n_per_cell < 1:
        raise ValueError("n_per_cell must be at least 1")
    p = predict_dichotomies(params, bias).table
    rng = np.random.Generator(np.random.PCG64(seed))
    yes = rng.binomial(n_per_cell, p)
    return CountTable(yes, np.full((3, 3), n_per_cell))


@dataclass(frozen=True)
class MomentEstimate:
    params: FTTParams
    flags: frozenset[str] = frozenset()


def _invert(hit, gist, name_j, name_s, flags):
    j = hit - gist
    if j < 0 or j > 1:
        flags.add(f"{name_j}_out_of_box")
        j = min(max(j, 0.0), 1.0)
    if j >= 1:
        flags.add(f"{name_s}_unidentifiable")
        return j, 0.0
    s = gist / (1 - j)
    if s < 0 or s > 1:
        flags.add(f"{name_s}_out_of_box")
        s = min(max(s, 0.0), 1.0)
    return j, s


def moment_estimate(freq) -> MomentEstimate:
    """Closed-form inversion of the bias-free model from the target and
    related-distractor columns of a 3x3 frequency table."""
    f = np.asarray(freq, dtype=float)
    flags: set[str] = set()
    it, st = _invert(f[0, 0], f[1, 0], "iota_t", "sigma_t", flags)
    nr, sr = _invert(f[1, 1], f[0, 1], "nu_r", "sigma_r", flags)
    return MomentEstimate(FTTParams(it, st, nr, sr), frozenset(flags))


def log_likelihood(theta, counts: CountTable) -> float:
    """Sum of y log p + (n - y) log(1 - p) over cells, with 0 log 0 = 0."""
    p = predict_array(tuple(theta))
    y, n = counts.yes, counts.total
    return float(np.sum(xlogy(y, p) + xlogy(n - y, 1 - p)))


@dataclass(frozen=True)
class FitResult:
    params: FTTParams
    bias: BiasParams | None
    log_likelihood: float
    converged: bool
    iterations: int
    predicted: DichotomyPredictions
    max_abs_residual: float
    trace: tuple[float, ...] = ()
    flags: frozenset[str] = frozenset()
    diagnostic: str | None = None
    options: dict = field(default_factory=dict)

    @property
    def n_free(self) -> int:
        return 4 if self.bias is None else 7

    def theta(self) -> np.ndarray:
        vals = self.params.as_tuple() + (self.bias.as_tuple() if self.bias else ())
        return np.array(vals)


class _Objective:
    """Log-likelihood relative to the saturated model, over usable cells."""

    def __init__(self, counts: CountTable, mask: np.ndarray):
        self.y = np.where(mask, counts.yes, 0).astype(float)
        self.n = np.where(mask, counts.total, 0).astype(float)
        f = counts.frequencies()
        f = np.where(mask, f, 0.5)
        self.const = np.sum(xlogy(self.y, f) + xlogy(self.n - self.y, 1 - f))

    def __call__(self, theta) -> float:
        p = predict_array(tuple(theta)).real
        with np.errstate(divide="ignore"):
            val = np.sum(xlogy(self.y, p) + xlogy(self.n - self.y, 1 - p)) - self.const
        return float(val) if np.isfinite(val) else -np.inf

    def score_and_information(self, theta):
        k = len(theta)
        p = predict_array(tuple(theta)).real.ravel()
        jac = np.empty((9, k))
        for i in range(k):
            z = np.array(theta, dtype=complex)
            z[i] += 1j * _STEP
            jac[:, i] = predict_array(tuple(z)).imag.ravel() / _STEP
        pc = np.clip(p, 1e-15, 1 - 1e-15)
        y, n = self.y.ravel(), self.n.ravel()
        w = 1 / (pc * (1 - pc))
        score = jac.T @ ((y - n * pc) * w)
        info = (jac * (n * w)[:, None]).T @ jac
        return score, info


def _fixed_cells(model: int) -> np.ndarray:
    """Cells whose probability the model cannot move."""
    fixed = np.zeros((3, 3), dtype=bool)
    if model == 4:
        fixed[:, 2] = True
    return fixed


def _ascend(obj: _Objective, theta: np.ndarray, tol: float, max_iter: int):
    lo, hi = 0.0, 1.0
    value = obj(theta)
    trace = [value]
    for it in range(1, max_iter + 1):
        score, info = obj.score_and_information(theta)
        free = ~(((theta <= lo) & (score < 0)) | ((theta >= hi) & (score > 0)))
        if not free.any():
            return theta, trace, True, it - 1
        directions = []
        sub = info[np.ix_(free, free)]
        damp = 1e-12 * max(np.trace(sub), 1.0)
        try:
            d = np.zeros_like(theta)
            d[free] = np.linalg.solve(sub + damp * np.eye(sub.shape[0]), score[free])
            directions.append(d)
        except np.linalg.LinAlgError:
            pass
        g = np.where(free, score, 0.0)
        scale = max(np.max(np.diag(info)), 1.0)
        directions.append(g / scale)

        accepted = False
        for d in directions:
            step = 1.0
            for _ in range(60):
                cand = np.clip(theta + step * d, lo, hi)
                cv = obj(cand)
                if cv > value:
                    accepted = True
                    break
                step /= 2
            if accepted:
                break
        if not accepted:
            # no ascent direction improves at working precision
            return theta, trace, True, it - 1
        gain = cv - value
        theta, value = cand, cv
        trace.append(value)
        if gain < tol:
            return theta, trace, True, it
    return theta, trace, False, max_iter


def fit_mle(counts: CountTable, model: int = 4, tol: float = 1e-8, max_iter: int = 10000) -> FitResult:
    """Maximum-likelihood fit of the 4-parameter (bias-free) or 7-parameter model.

    Box-constrained Fisher scoring with backtracking; every accepted step
    strictly increases the likelihood. Starts from the moment estimate pulled
    into [1e-3, 1 - 1e-3].
    """
    if model not in (4, 7):
        raise ValueError("model must be 4 or 7")
    if np.any(counts.total == 0):
        i, j = np.argwhere(counts.total == 0)[0]
        raise EmptyCell(f"cell ({PROBE_TYPES[i]}|{PROBE_TYPES[j]}) has no trials")
    options = {"model": model, "tol": tol, "max_iter": max_iter}
    f = counts.frequencies()

    init = moment_estimate(f).params.as_tuple()
    if model == 7:
        init = init + tuple(f[:, 2])
    theta = np.clip(np.array(init, dtype=float), INIT_MARGIN, 1 - INIT_MARGIN)

    fixed = _fixed_cells(model)
    p0 = predict_array(tuple(theta))
    bad = fixed & (
        ((p0 == 0) & (counts.yes > 0)) | ((p0 == 1) & (counts.yes < counts.total))
    )
    diagnostic = None
    if bad.any():
        cells = [f"{PROBE_TYPES[i]}|{PROBE_TYPES[j]}" for i, j in np.argwhere(bad)]
        diagnostic = f"counts contradict fixed model probabilities in cells {', '.join(cells)}"

    obj = _Objective(counts, ~bad)
    theta, trace, converged, iterations = _ascend(obj, theta, tol, max_iter)

    flags = set()
    for k, (j, s) in enumerate(((0, 1), (2, 3))):
        if theta[j] >= 1 - 1e-9:
            theta[s] = 0.0
            flags.add(("sigma_t", "sigma_r")[k] + "_unidentifiable")
    params = FTTParams(*(float(v) for v in theta[:4]))
    bias = BiasParams(*(float(v) for v in theta[4:])) if model == 7 else None
    pred = predict_dichotomies(params, bias)
    ll = -np.inf if bad.any() else log_likelihood(theta, counts)
    return FitResult(
        params=params,
        bias=bias,
        log_likelihood=ll,
        converged=converged and not bad.any(),
        iterations=iterations,
        predicted=pred,
        max_abs_residual=float(np.max(np.abs(pred.table - f))),
        trace=tuple(obj.const + v for v in trace),
        flags=frozenset(flags),
        diagnostic=diagnostic,
        options=options,
    )


@dataclass(frozen=True)
class GoodnessOfFit:
    observed: np.ndarray
    predicted: np.ndarray
    residual: np.ndarray
    max_residual: float
    g2: float
    dof: int

    def cells(self):
        for i, y in enumerate(PROBE_TYPES):
            for j, z in enumerate(PROBE_TYPES):
                yield {
                    "discrimination": y,
                    "probe_type": z,
                    "observed": float(self.observed[i, j]),
                    "predicted": float(self.predicted[i, j]),
                    "abs_residual": float(self.residual[i, j]),
                }


def goodness_of_fit(result: FitResult, counts: CountTable) -> GoodnessOfFit:
    """Per-cell residuals and the likelihood-ratio statistic G^2 against the
    saturated model, with dof = 9 - free parameters."""
    y = counts.yes.astype(float)
    n = counts.total.astype(float)
    p = result.predicted.table
    obs = y / n
    with np.errstate(divide="ignore", invalid="ignore"):
        yes_term = np.where(y > 0, xlogy(y, y / (n * p)), 0.0)
        no_term = np.where(n - y > 0, xlogy(n - y, (n - y) / (n * (1 - p))), 0.0)
    terms = yes_term + no_term
    g2 = float(2 * np.sum(terms))
    res = np.abs(p - obs)
    return GoodnessOfFit(obs, p, res, float(res.max()), max(g2, 0.0), 9 - result.n_free)
