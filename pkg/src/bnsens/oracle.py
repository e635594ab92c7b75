"""Brute-force reference implementations used to validate the pipeline.

Everything here works on the dense joint table: direct evaluation of the
factorized joint at every cell, conditional expectations by summation, and
indices from the exact conditional weights. Deliberately no factors and no
variable elimination are used, so these results are an independent check of
the contraction engine rather than a restatement of it. A pick-freeze
sampling estimator is included as a statistical sanity cross-check for the
independent-inputs case.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateOutputError,
    DependentInputsError,
    StateSpaceTooLargeError,
)
from .model import AnalysisSpec, DiscreteBayesNet, output_values, validate_partition
from .sobol import IndexEntry, SobolReport

DEFAULT_CELL_CAP = 10_000_000


@dataclass(frozen=True, eq=False)
class JointTable:
    """Dense joint distribution, axes in variable-id order."""

    variables: tuple[int, ...]
    probabilities: np.ndarray


@dataclass(frozen=True, eq=False)
class FunctionTable:
    """Evidence marginal and conditional output expectation, tabulated over
    the (ascending) evidential variables."""

    evidential: tuple[int, ...]
    probabilities: np.ndarray
    values: np.ndarray
    zero_probability: np.ndarray


def _axis_range(axis: int, cards: tuple[int, ...]) -> np.ndarray:
    shape = [1] * len(cards)
    shape[axis] = cards[axis]
    return np.arange(cards[axis]).reshape(shape)


def enumerate_joint(
    bn: DiscreteBayesNet, max_cells: int = DEFAULT_CELL_CAP
) -> JointTable:
    """The factorized joint probability evaluated at every full assignment."""
    cards = tuple(v.cardinality for v in bn.variables)
    cells = 1
    for c in cards:
        cells *= c
    if cells > max_cells:
        raise StateSpaceTooLargeError(
            f"joint has {cells} cells, above the cap of {max_cells}"
        )
    n = len(cards)
    joint = np.ones(cards)
    for v in bn.variables:
        cpt = bn.cpts[v.id]
        row = np.zeros((1,) * n, dtype=np.int64)
        for p in cpt.parents:
            row = row * bn.variables[p].cardinality + _axis_range(p, cards)
        joint = joint * cpt.table[row, _axis_range(v.id, cards)]
    return JointTable(tuple(range(n)), joint)


def brute_force_f(
    bn: DiscreteBayesNet, spec: AnalysisSpec, max_cells: int = DEFAULT_CELL_CAP
) -> FunctionTable:
    """Tabulate Pr(evidence) and f(evidence) = E[mapped output | evidence]
    by direct summation over the joint; f is 0 (and flagged) wherever the
    evidence has probability zero."""
    validate_partition(bn, spec)
    joint = enumerate_joint(bn, max_cells).probabilities
    n = bn.n
    e_axes = tuple(sorted(spec.evidential))
    drop = tuple(a for a in range(n) if a not in spec.evidential)
    pr = joint.sum(axis=drop)
    values = output_values(bn, spec)
    broadcast = tuple(
        bn.variables[spec.output].cardinality if a == spec.output else 1
        for a in range(n)
    )
    weighted = (joint * values.reshape(broadcast)).sum(axis=drop)
    zero = pr == 0.0
    f = np.divide(weighted, pr, out=np.zeros_like(weighted), where=~zero)
    return FunctionTable(e_axes, pr, f, zero)


def brute_force_indices(
    bn: DiscreteBayesNet, spec: AnalysisSpec, max_cells: int = DEFAULT_CELL_CAP
) -> SobolReport:
    """Exact indices by direct summation over the f table.

    S_i uses the conditional weights Pr(rest | y_i) inside the mean and the
    marginal Pr(y_i) outside; the total index takes the expectation of the
    conditional variance under Pr(y_i | rest). Both therefore stay exact
    under dependent evidential variables."""
    started = time.perf_counter()
    ft = brute_force_f(bn, spec, max_cells)
    pr, f = ft.probabilities, ft.values
    mean = float((pr * f).sum())
    second = float((pr * f * f).sum())
    variance = second - mean * mean
    if -1e-9 <= variance < 0.0:
        variance = 0.0
    if variance <= 1e-12:
        raise DegenerateOutputError("output variance is numerically zero")
    entries = []
    k = len(ft.evidential)
    for pos, var_id in enumerate(ft.evidential):
        t0 = time.perf_counter()
        rest = tuple(a for a in range(k) if a != pos)
        pr_i = pr.sum(axis=rest) if rest else pr
        weighted = (pr * f).sum(axis=rest) if rest else pr * f
        cond_mean = np.divide(
            weighted, pr_i, out=np.zeros_like(weighted), where=pr_i > 0
        )
        s = float(((pr_i * cond_mean**2).sum() - mean * mean) / variance)
        s_time = time.perf_counter() - t0

        t0 = time.perf_counter()
        pr_rest = pr.sum(axis=pos)
        m1 = np.divide(
            (pr * f).sum(axis=pos),
            pr_rest,
            out=np.zeros_like(pr_rest),
            where=pr_rest > 0,
        )
        m2 = np.divide(
            (pr * f * f).sum(axis=pos),
            pr_rest,
            out=np.zeros_like(pr_rest),
            where=pr_rest > 0,
        )
        st = float((pr_rest * (m2 - m1**2)).sum() / variance)
        st_time = time.perf_counter() - t0
        entries.append(
            IndexEntry((var_id,), bn.variables[var_id].name, s, s_time, st, st_time)
        )
    return SobolReport(
        mean, variance, tuple(entries), time.perf_counter() - started
    )


def brute_force_closed(
    bn: DiscreteBayesNet,
    spec: AnalysisSpec,
    subset,
    max_cells: int = DEFAULT_CELL_CAP,
) -> float:
    """Closed index of a variable group by direct summation."""
    ft = brute_force_f(bn, spec, max_cells)
    pr, f = ft.probabilities, ft.values
    mean = float((pr * f).sum())
    variance = float((pr * f * f).sum()) - mean * mean
    if variance <= 1e-12:
        raise DegenerateOutputError("output variance is numerically zero")
    ids = frozenset(int(v) for v in subset)
    rest = tuple(pos for pos, v in enumerate(ft.evidential) if v not in ids)
    pr_s = pr.sum(axis=rest) if rest else pr
    weighted = (pr * f).sum(axis=rest) if rest else pr * f
    cond_mean = np.divide(weighted, pr_s, out=np.zeros_like(weighted), where=pr_s > 0)
    return float(((pr_s * cond_mean**2).sum() - mean * mean) / variance)


@dataclass(frozen=True)
class McIndexEstimate:
    variable: int
    name: str
    s: float
    s_se: float
    st: float
    st_se: float


@dataclass(frozen=True)
class McReport:
    expected_value: float
    variance: float
    estimates: tuple[McIndexEstimate, ...]
    samples: int
    seed: int


def mc_indices(
    bn: DiscreteBayesNet,
    spec: AnalysisSpec,
    samples: int,
    seed: int,
    max_cells: int = DEFAULT_CELL_CAP,
) -> McReport:
    """Pick-freeze sampling estimates with standard errors.

    Valid only when every evidential node is a parentless root (independent
    inputs); dependent inputs are rejected because the standard estimators
    are biased there. f is looked up in the exact enumerated table, so the
    joint must fit under the cell cap."""
    validate_partition(bn, spec)
    dependent = [i for i in sorted(spec.evidential) if bn.cpts[i].parents]
    if dependent:
        names = [bn.variables[i].name for i in dependent]
        raise DependentInputsError(
            f"evidential nodes {names} have parents; pick-freeze needs "
            "independent root inputs"
        )
    ft = brute_force_f(bn, spec, max_cells)
    rng = np.random.default_rng(int(seed))
    marginals = [bn.cpts[i].table[0] for i in ft.evidential]
    a = np.stack(
        [rng.choice(len(p), size=samples, p=p) for p in marginals], axis=1
    )
    b = np.stack(
        [rng.choice(len(p), size=samples, p=p) for p in marginals], axis=1
    )
    f_a = ft.values[tuple(a.T)]
    f_b = ft.values[tuple(b.T)]
    pooled = np.concatenate([f_a, f_b])
    mean = float(pooled.mean())
    variance = float(pooled.var())
    if variance <= 1e-12:
        raise DegenerateOutputError("sampled output variance is numerically zero")
    estimates = []
    for pos, var_id in enumerate(ft.evidential):
        mixed = a.copy()
        mixed[:, pos] = b[:, pos]
        f_m = ft.values[tuple(mixed.T)]
        s_terms = f_b * (f_m - f_a) / variance
        st_terms = (f_a - f_m) ** 2 / (2.0 * variance)
        estimates.append(
            McIndexEstimate(
                var_id,
                bn.variables[var_id].name,
                float(s_terms.mean()),
                float(s_terms.std(ddof=1) / np.sqrt(samples)),
                float(st_terms.mean()),
                float(st_terms.std(ddof=1) / np.sqrt(samples)),
            )
        )
    return McReport(mean, variance, tuple(estimates), samples, int(seed))
