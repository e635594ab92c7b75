"""Variance-based sensitivity indices for discrete Bayesian networks.

For the function of interest f(evidence) = E[mapped output | evidence], the
variance component S_i = Var_i[E_{~i}[f]] / Var[f] measures the additive
effect of evidential variable i, and the total index
S^T_i = E_{~i}[Var_i[f]] / Var[f] = 1 - Var_{~i}[E_i[f]] / Var[f] its
overall effect including interactions. Every required moment is read off a
handful of marginalization queries over squared and quotient networks, so f
itself is never tabulated.
"""

from __future__ import annotations

import itertools
import time
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import DegenerateOutputError, NotEvidentialError, PartialFunctionError
from .model import (
    AnalysisSpec,
    Cpt,
    DiscreteBayesNet,
    Variable,
    validate_network,
    validate_partition,
)
from .network import (
    TensorNetwork,
    collapse,
    contract_all,
    function_tn,
    marginalize,
    mrf_from_bn,
    quotient,
    square_wrt,
)
from .tensor import factor_square

DEGENERATE_VARIANCE_TOL = 1e-12
NEGATIVE_VARIANCE_TOL = 1e-9
NEGATIVE_INDEX_WARNING = 1e-6


@dataclass(frozen=True)
class IndexEntry:
    """Sensitivity results for one evidential variable or variable group."""

    variables: tuple[int, ...]
    name: str
    s: float | None = None
    s_time: float | None = None
    st: float | None = None
    st_time: float | None = None


@dataclass(frozen=True)
class SobolReport:
    expected_value: float
    variance: float
    indices: tuple[IndexEntry, ...]
    total_time: float


@dataclass(frozen=True)
class ComputeOptions:
    first: bool = True
    total: bool = True
    closed: tuple[tuple[int, ...], ...] = ()
    workers: int = 1


def _evidential_set(j: TensorNetwork) -> frozenset[int]:
    # The evidence marginal lives exactly on the evidential variables.
    return frozenset(j.universe)


def expected_value(t: TensorNetwork) -> float:
    """E[f]: the full contraction of the function network."""
    return contract_all(t)


def global_variance(
    t: TensorNetwork,
    j: TensorNetwork,
    *,
    mean: float | None = None,
    check: bool = True,
) -> float:
    """Var[f] = E[f^2] - E[f]^2.

    E[f^2] comes from one contraction of the function network squared with
    respect to the evidential variables and divided by the evidence
    marginal; squaring first leaves the elimination heuristic free to pick
    one global order. Tiny negative results clamp to zero; with `check` the
    degenerate case (variance at numerical zero) raises, because every
    downstream index would be undefined."""
    e_set = _evidential_set(j)
    if mean is None:
        mean = contract_all(t)
    second_moment = contract_all(quotient(square_wrt(t, e_set), j))
    variance = second_moment - mean * mean
    if -NEGATIVE_VARIANCE_TOL <= variance < 0.0:
        variance = 0.0
    if check and variance <= DEGENERATE_VARIANCE_TOL:
        raise DegenerateOutputError(
            f"output variance {variance!r} is numerically zero; indices undefined"
        )
    return variance


def closed_index(
    subset: Iterable[int],
    t: TensorNetwork,
    j: TensorNetwork,
    *,
    mean: float | None = None,
    variance: float | None = None,
) -> float:
    """Closed (grouped) variance component Var_subset[E_{rest}[f]] / Var[f].

    The function network is collapsed to a single factor over the subset,
    squared elementwise, and divided by the evidence marginal restricted to
    the subset; one contraction then gives the second moment of the
    conditional mean."""
    e_set = _evidential_set(j)
    ids = frozenset(int(v) for v in subset)
    if not ids:
        raise NotEvidentialError("the variable subset is empty")
    if not ids <= e_set:
        raise NotEvidentialError(f"variables {sorted(ids - e_set)} are not evidential")
    if mean is None:
        mean = contract_all(t)
    if variance is None:
        variance = global_variance(t, j, mean=mean)
    if variance <= DEGENERATE_VARIANCE_TOL:
        raise DegenerateOutputError("output variance is numerically zero")
    collapsed = collapse(t, ids)
    numerator_net = TensorNetwork(
        {v: t.universe[v] for v in ids}, (factor_square(collapsed),)
    )
    j_subset = marginalize(j, e_set - ids)
    second_moment = contract_all(quotient(numerator_net, j_subset))
    return (second_moment - mean * mean) / variance


def variance_component(
    i: int,
    t: TensorNetwork,
    j: TensorNetwork,
    *,
    mean: float | None = None,
    variance: float | None = None,
) -> float:
    """First-order effect S_i; the singleton case of `closed_index`."""
    return closed_index((int(i),), t, j, mean=mean, variance=variance)


def total_index(
    i: int,
    t: TensorNetwork,
    j: TensorNetwork,
    *,
    mean: float | None = None,
    variance: float | None = None,
) -> float:
    """Total effect S^T_i via 1 - Var_{~i}[E_i[f]] / Var[f].

    Variable i is marginalized out of the function network, the remainder is
    squared with respect to the other evidential variables, and the quotient
    with the evidence marginal (i marginalized out of it as well) contracts
    to the second moment of E_i[f]."""
    var_id = int(i)
    e_set = _evidential_set(j)
    if var_id not in e_set:
        raise NotEvidentialError(f"variable {var_id} is not evidential")
    if mean is None:
        mean = contract_all(t)
    if variance is None:
        variance = global_variance(t, j, mean=mean)
    if variance <= DEGENERATE_VARIANCE_TOL:
        raise DegenerateOutputError("output variance is numerically zero")
    t_without = marginalize(t, {var_id})
    squared = square_wrt(t_without, e_set - {var_id})
    j_without = marginalize(j, {var_id})
    second_moment = contract_all(quotient(squared, j_without))
    return 1.0 - (second_moment - mean * mean) / variance


def compute_all(
    bn: DiscreteBayesNet,
    spec: AnalysisSpec,
    options: ComputeOptions | None = None,
) -> SobolReport:
    """Compute the requested indices for every evidential variable.

    Builds the probability network once, adjoins the output-value factor,
    marginalizes the non-evidential variables into the evidence marginal,
    and then answers each index with a few squared/quotient contractions.
    Per-variable work is independent; `options.workers` > 1 runs it in a
    thread pool. Entries are ordered by variable id regardless."""
    options = options or ComputeOptions()
    validate_network(bn)
    validate_partition(bn, spec)
    started = time.perf_counter()
    mrf = mrf_from_bn(bn)
    t = function_tn(mrf, spec, bn)
    j = marginalize(mrf, set(mrf.universe) - spec.evidential)
    mean = contract_all(t)
    variance = global_variance(t, j, mean=mean)

    def one_variable(i: int) -> IndexEntry:
        s = s_time = st = st_time = None
        if options.first:
            t0 = time.perf_counter()
            s = variance_component(i, t, j, mean=mean, variance=variance)
            s_time = time.perf_counter() - t0
        if options.total:
            t0 = time.perf_counter()
            st = total_index(i, t, j, mean=mean, variance=variance)
            st_time = time.perf_counter() - t0
        return IndexEntry((i,), bn.variables[i].name, s, s_time, st, st_time)

    targets = sorted(spec.evidential)
    if options.workers > 1:
        with ThreadPoolExecutor(max_workers=options.workers) as pool:
            entries = list(pool.map(one_variable, targets))
    else:
        entries = [one_variable(i) for i in targets]

    for subset in options.closed:
        ids = tuple(sorted(int(v) for v in subset))
        t0 = time.perf_counter()
        value = closed_index(ids, t, j, mean=mean, variance=variance)
        elapsed = time.perf_counter() - t0
        name = "+".join(bn.variables[v].name for v in ids)
        entries.append(IndexEntry(ids, name, value, elapsed, None, None))

    for entry in entries:
        for label, value in (("S", entry.s), ("ST", entry.st)):
            if value is None:
                continue
            if not np.isfinite(value):
                raise DegenerateOutputError(
                    f"{label} of {entry.name} is not finite ({value!r})"
                )
            if value < -NEGATIVE_INDEX_WARNING:
                warnings.warn(
                    f"{label} of {entry.name} is {value:.3e}, negative beyond "
                    "floating-point noise",
                    RuntimeWarning,
                    stacklevel=2,
                )
    return SobolReport(
        mean, variance, tuple(entries), time.perf_counter() - started
    )


def encode_utility_node(
    bn: DiscreteBayesNet,
    g: Callable[[tuple[str, ...]], str],
    parents: Iterable[int],
    out_domain: Sequence[str],
    name: str | None = None,
) -> DiscreteBayesNet:
    """Append a node that deterministically computes `g` over `parents`.

    `g` maps a tuple of parent labels (in the given parent order; sets are
    sorted by id) to one label of `out_domain`; the new node's CPT has a
    single 1 per row. The result turns an arbitrary function of several
    nodes into a single output variable."""
    if isinstance(parents, (set, frozenset)):
        parent_ids = tuple(sorted(int(p) for p in parents))
    else:
        parent_ids = tuple(int(p) for p in parents)
    for p in parent_ids:
        if not 0 <= p < bn.n:
            raise ValueError(f"parent id {p} out of range")
    if len(set(parent_ids)) != len(parent_ids):
        raise ValueError("parent ids must be unique")
    domain = tuple(str(label) for label in out_domain)
    if len(set(domain)) != len(domain) or len(domain) < 2:
        raise ValueError("output domain needs at least two distinct labels")
    taken = {v.name for v in bn.variables}
    if name is None:
        name = "O"
        k = 0
        while name in taken:
            k += 1
            name = f"O{k}"
    elif name in taken:
        raise ValueError(f"variable name {name!r} already in use")
    position = {label: col for col, label in enumerate(domain)}
    parent_domains = [bn.variables[p].domain for p in parent_ids]
    rows = []
    for combo in itertools.product(*parent_domains):
        try:
            label = g(combo)
        except LookupError as exc:
            raise PartialFunctionError(f"utility undefined for {combo}") from exc
        if label is None:
            raise PartialFunctionError(f"utility undefined for {combo}")
        col = position.get(str(label))
        if col is None:
            raise PartialFunctionError(
                f"utility value {label!r} for {combo} is not an output label"
            )
        row = np.zeros(len(domain))
        row[col] = 1.0
        rows.append(row)
    new_id = bn.n
    variables = bn.variables + (Variable(new_id, name, domain),)
    cpts = bn.cpts + (Cpt(new_id, parent_ids, np.vstack(rows)),)
    return DiscreteBayesNet(variables, cpts)
