"""Shared builders and independent enumeration helpers for the test suite.

`tn_table` evaluates a tensor network cell by cell from its definition (a
plain product/quotient loop over full assignments) and deliberately avoids
the elimination machinery, so it can serve as an oracle for it.
"""

from __future__ import annotations

import numpy as np

from bnsens import (
    AnalysisSpec,
    Cpt,
    DiscreteBayesNet,
    Factor,
    TensorNetwork,
    Variable,
    generate_random_bn,
    validate_network,
)
from bnsens.oracle import brute_force_f


# ------------------------------------------------------------ fixed networks

def chain_bn() -> DiscreteBayesNet:
    """E -> O with Pr(E) = (0.7, 0.3), Pr(O=1|E) = (0.2, 0.9)."""
    variables = (Variable(0, "E", ("0", "1")), Variable(1, "O", ("0", "1")))
    cpts = (
        Cpt(0, (), [[0.7, 0.3]]),
        Cpt(1, (0,), [[0.8, 0.2], [0.1, 0.9]]),
    )
    return DiscreteBayesNet(variables, cpts)


def chain_spec() -> AnalysisSpec:
    return AnalysisSpec(1, frozenset({0}), {"0": 0.0, "1": 1.0})


def five_node_dag_bn() -> DiscreteBayesNet:
    """Five binary nodes wired 0->2, 0->3, 1->3, 2->4, 3->4."""
    rng = np.random.default_rng(42)
    parent_map = {0: (), 1: (), 2: (0,), 3: (0, 1), 4: (2, 3)}
    variables = tuple(Variable(i, f"V{i}", ("0", "1")) for i in range(5))
    cpts = []
    for i in range(5):
        rows = 2 ** len(parent_map[i])
        cpts.append(Cpt(i, parent_map[i], rng.dirichlet(np.ones(2), size=rows)))
    bn = DiscreteBayesNet(variables, tuple(cpts))
    validate_network(bn)
    return bn


def xor_bn() -> tuple[DiscreteBayesNet, AnalysisSpec]:
    """Two uniform binary roots and a deterministic XOR output."""
    variables = (
        Variable(0, "A", ("0", "1")),
        Variable(1, "B", ("0", "1")),
        Variable(2, "O", ("0", "1")),
    )
    xor_rows = [[1, 0], [0, 1], [0, 1], [1, 0]]
    cpts = (
        Cpt(0, (), [[0.5, 0.5]]),
        Cpt(1, (), [[0.5, 0.5]]),
        Cpt(2, (0, 1), xor_rows),
    )
    bn = DiscreteBayesNet(variables, cpts)
    spec = AnalysisSpec(2, frozenset({0, 1}), {"0": 0.0, "1": 1.0})
    return bn, spec


def additive_bn() -> tuple[DiscreteBayesNet, AnalysisSpec]:
    """Two independent binary roots and a deterministic sum output, so the
    function of interest is additively separable."""
    variables = (
        Variable(0, "A", ("0", "1")),
        Variable(1, "B", ("0", "1")),
        Variable(2, "O", ("0", "1", "2")),
    )
    rows = []
    for a in range(2):
        for b in range(2):
            row = [0.0, 0.0, 0.0]
            row[a + b] = 1.0
            rows.append(row)
    cpts = (
        Cpt(0, (), [[0.6, 0.4]]),
        Cpt(1, (), [[0.3, 0.7]]),
        Cpt(2, (0, 1), rows),
    )
    bn = DiscreteBayesNet(variables, cpts)
    spec = AnalysisSpec(2, frozenset({0, 1}), {"0": 0.0, "1": 1.0, "2": 2.0})
    return bn, spec


def common_parent_bn() -> tuple[DiscreteBayesNet, AnalysisSpec]:
    """A hidden parent feeding two strongly correlated evidential nodes whose
    sum drives the output; built to exhibit S_i > S^T_i."""
    variables = (
        Variable(0, "U", ("0", "1")),
        Variable(1, "E1", ("0", "1")),
        Variable(2, "E2", ("0", "1")),
        Variable(3, "O", ("0", "1", "2")),
    )
    noisy = [[0.9, 0.1], [0.1, 0.9]]
    rows = []
    for a in range(2):
        for b in range(2):
            row = [0.0, 0.0, 0.0]
            row[a + b] = 1.0
            rows.append(row)
    cpts = (
        Cpt(0, (), [[0.5, 0.5]]),
        Cpt(1, (0,), noisy),
        Cpt(2, (0,), noisy),
        Cpt(3, (1, 2), rows),
    )
    bn = DiscreteBayesNet(variables, cpts)
    spec = AnalysisSpec(3, frozenset({1, 2}), {"0": 0.0, "1": 1.0, "2": 2.0})
    return bn, spec


def concrete_style_network(seed: int = 7) -> tuple[DiscreteBayesNet, AnalysisSpec]:
    """A 24-node ternary network with 16 evidential roots, 7 intermediate
    chance nodes, and one sink output; evidence grid 3^16 (~4.3e7 points)."""
    rng = np.random.default_rng(seed)
    parent_map: dict[int, tuple[int, ...]] = {i: () for i in range(16)}
    mids = list(range(16, 23))
    for k, m in enumerate(mids):
        pool = list(range(16)) + mids[:k]
        count = 3 + (k % 2)
        chosen = rng.choice(pool, size=count, replace=False)
        parent_map[m] = tuple(sorted(int(x) for x in chosen))
    parent_map[23] = tuple(sorted(int(x) for x in rng.choice(mids, size=3, replace=False)))
    variables = tuple(Variable(i, f"N{i}", ("0", "1", "2")) for i in range(24))
    cpts = []
    for i in range(24):
        rows = 3 ** len(parent_map[i])
        cpts.append(Cpt(i, parent_map[i], rng.dirichlet(np.ones(3), size=rows)))
    bn = DiscreteBayesNet(variables, tuple(cpts))
    validate_network(bn)
    spec = AnalysisSpec(23, frozenset(range(16)), {"0": 0.0, "1": 1.0, "2": 2.0})
    return bn, spec


# --------------------------------------------------------- random instances

def random_instance(seed: int, max_nodes: int = 12, max_evidence: int = 6):
    """A seeded random network plus a non-degenerate analysis spec with
    mixed root/non-root evidential nodes across seeds."""
    for attempt in range(64):
        rng = np.random.default_rng((seed, attempt))
        n = int(rng.integers(4, max_nodes + 1))
        bn = generate_random_bn(int(rng.integers(0, 2**31)), n, 3, (2, 3))
        output = int(rng.integers(0, n))
        candidates = [i for i in range(n) if i != output]
        k = int(rng.integers(1, min(max_evidence, len(candidates)) + 1))
        evidential = frozenset(
            int(x) for x in rng.choice(candidates, size=k, replace=False)
        )
        value_map = {
            label: float(rng.uniform(0.0, 2.0))
            for label in bn.variables[output].domain
        }
        spec = AnalysisSpec(output, evidential, value_map)
        ft = brute_force_f(bn, spec)
        mean = float((ft.probabilities * ft.values).sum())
        variance = float((ft.probabilities * ft.values**2).sum()) - mean * mean
        if variance > 1e-4:
            return bn, spec
    raise RuntimeError(f"no non-degenerate instance for seed {seed}")


def random_roots_instance(seed: int, max_nodes: int = 10):
    """Like `random_instance` but with the evidential set equal to all roots
    (independent inputs)."""
    for attempt in range(64):
        rng = np.random.default_rng((seed, attempt, 1))
        n = int(rng.integers(4, max_nodes + 1))
        bn = generate_random_bn(int(rng.integers(0, 2**31)), n, 3, (2, 3))
        roots = frozenset(bn.roots())
        non_roots = [i for i in range(n) if i not in roots]
        if not non_roots or not roots:
            continue
        output = int(rng.choice(non_roots))
        value_map = {
            label: float(rng.uniform(0.0, 2.0))
            for label in bn.variables[output].domain
        }
        spec = AnalysisSpec(output, roots, value_map)
        ft = brute_force_f(bn, spec)
        mean = float((ft.probabilities * ft.values).sum())
        variance = float((ft.probabilities * ft.values**2).sum()) - mean * mean
        if variance > 1e-4:
            return bn, spec
    raise RuntimeError(f"no non-degenerate roots instance for seed {seed}")


def random_tn(
    rng: np.random.Generator,
    n_vars: int | None = None,
    max_card: int = 3,
    positive: bool = False,
    universe: dict[int, int] | None = None,
) -> TensorNetwork:
    """A random dense tensor network; `positive` keeps all entries bounded
    away from zero (for use as a divisor). Pass `universe` to build a second
    network over the same variables."""
    if universe is not None:
        universe = dict(universe)
        n = len(universe)
    else:
        n = int(n_vars) if n_vars is not None else int(rng.integers(2, 7))
        universe = {i: int(rng.integers(2, max_card + 1)) for i in range(n)}
    count = int(rng.integers(n, n + 3))
    ids = list(universe)
    factors = []
    for _ in range(count):
        size = int(rng.integers(1, min(3, n) + 1))
        scope = tuple(sorted(int(x) for x in rng.choice(ids, size=size, replace=False)))
        shape = tuple(universe[a] for a in scope)
        if positive:
            values = rng.uniform(0.4, 1.6, size=shape)
        else:
            values = rng.uniform(-1.0, 1.5, size=shape)
        factors.append(Factor(scope, values))
    return TensorNetwork(universe, tuple(factors))


# ------------------------------------------------------ independent oracles

def tn_table(tn: TensorNetwork) -> tuple[list[int], np.ndarray]:
    """Tabulate the network value at every full assignment by a direct
    product/quotient loop; no elimination involved."""
    axes = sorted(tn.universe)
    shape = tuple(tn.universe[a] for a in axes)
    position = {a: k for k, a in enumerate(axes)}
    out = np.empty(shape if shape else ())
    for idx in np.ndindex(*shape):
        value = 1.0
        for f in tn.factors:
            value *= f.values[tuple(idx[position[a]] for a in f.axes)]
        denominator = 1.0
        for f in tn.inverted:
            denominator *= f.values[tuple(idx[position[a]] for a in f.axes)]
        if denominator == 0.0:
            out[idx] = 0.0
        else:
            out[idx] = value / denominator
    return axes, out


def tn_marginal(tn: TensorNetwork, keep: set[int]) -> np.ndarray:
    """Independent marginal table over `keep` (ascending), from `tn_table`."""
    axes, table = tn_table(tn)
    drop = tuple(pos for pos, a in enumerate(axes) if a not in keep)
    return table.sum(axis=drop) if drop else table


def relabeled_network(bn: DiscreteBayesNet, perm: list[int]) -> DiscreteBayesNet:
    """The same network with variable ids permuted by `perm` (old -> new)."""
    order = sorted(range(bn.n), key=lambda old: perm[old])
    variables = tuple(
        Variable(perm[old], bn.variables[old].name, bn.variables[old].domain)
        for old in order
    )
    cpts = tuple(
        Cpt(perm[old], tuple(perm[p] for p in bn.cpts[old].parents), bn.cpts[old].table)
        for old in order
    )
    return DiscreteBayesNet(variables, cpts)
