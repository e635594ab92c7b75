"""Discrete Bayesian networks: variables, CPTs, validation, and the
output/evidential/chance partition used by the sensitivity pipeline."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .errors import (
    EmptyEvidenceSetError,
    InvalidAssignmentError,
    MissingValueMapError,
    OverlappingPartitionError,
    PartitionError,
    ShapeMismatchError,
    UnnormalizedCptError,
    ValidationError,
)
from .graph import Dag

ROW_SUM_TOL = 1e-9
ENTRY_RANGE_TOL = 1e-12


@dataclass(frozen=True)
class Variable:
    """A named variable with a finite, ordered domain of labels."""

    id: int
    name: str
    domain: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "domain", tuple(str(d) for d in self.domain))

    @property
    def cardinality(self) -> int:
        return len(self.domain)

    def index_of(self, label: str) -> int:
        try:
            return self.domain.index(label)
        except ValueError:
            raise InvalidAssignmentError(
                f"variable {self.name!r} has no label {label!r}"
            ) from None


@dataclass(frozen=True, eq=False)
class Cpt:
    """Conditional probability table of one node given its listed parents.

    Rows enumerate parent configurations row-major over the listed parent
    order; columns enumerate the child domain. Root nodes have an empty
    parent list and a single row.
    """

    child: int
    parents: tuple[int, ...]
    table: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "child", int(self.child))
        object.__setattr__(self, "parents", tuple(int(p) for p in self.parents))
        table = np.asarray(self.table, dtype=np.float64)
        if table.ndim == 1:
            table = table.reshape(1, -1)
        object.__setattr__(self, "table", table)


@dataclass(frozen=True, eq=False)
class DiscreteBayesNet:
    """Variables plus one CPT per variable; edges are implied by the CPT
    parent lists. Immutable after construction; validate before use."""

    variables: tuple[Variable, ...]
    cpts: tuple[Cpt, ...]

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(
            self, "cpts", tuple(sorted(self.cpts, key=lambda c: c.child))
        )

    @property
    def n(self) -> int:
        return len(self.variables)

    def cardinality(self, i: int) -> int:
        return self.variables[i].cardinality

    def parents(self, i: int) -> tuple[int, ...]:
        return self.cpts[i].parents

    def variable_named(self, name: str) -> Variable:
        for v in self.variables:
            if v.name == name:
                return v
        raise InvalidAssignmentError(f"no variable named {name!r}")

    def roots(self) -> tuple[int, ...]:
        return tuple(i for i in range(self.n) if not self.cpts[i].parents)

    def dag(self) -> Dag:
        return Dag(tuple(c.parents for c in self.cpts))

    def state_space_size(self) -> int:
        size = 1
        for v in self.variables:
            size *= v.cardinality
        return size


def validate_network(bn: DiscreteBayesNet) -> None:
    """Check every structural invariant; raise on the first violation.

    Raises CyclicGraphError, UnnormalizedCptError, ShapeMismatchError, or a
    generic ValidationError naming the offending node.
    """
    n = len(bn.variables)
    if n == 0:
        raise ValidationError("network has no variables")
    for pos, v in enumerate(bn.variables):
        if v.id != pos:
            raise ValidationError(
                f"variable ids must be dense 0..{n - 1}; position {pos} has id {v.id}"
            )
        if v.cardinality < 2:
            raise ValidationError(f"variable {v.name!r} needs at least 2 labels")
        if len(set(v.domain)) != len(v.domain):
            raise ValidationError(f"variable {v.name!r} repeats a domain label")
    names = [v.name for v in bn.variables]
    if len(set(names)) != n:
        dup = sorted({x for x in names if names.count(x) > 1})
        raise ValidationError(f"duplicate variable names {dup}")
    if len(bn.cpts) != n or any(c.child != i for i, c in enumerate(bn.cpts)):
        raise ValidationError("network must carry exactly one CPT per variable")
    for i, cpt in enumerate(bn.cpts):
        for p in cpt.parents:
            if not 0 <= p < n:
                raise ValidationError(f"node {names[i]!r}: parent id {p} out of range")
        if i in cpt.parents:
            raise ValidationError(f"node {names[i]!r} lists itself as a parent")
        if len(set(cpt.parents)) != len(cpt.parents):
            raise ValidationError(f"node {names[i]!r} repeats a parent")
    bn.dag()  # raises CyclicGraphError on a directed cycle
    for i, cpt in enumerate(bn.cpts):
        rows = 1
        for p in cpt.parents:
            rows *= bn.variables[p].cardinality
        expected = (rows, bn.variables[i].cardinality)
        if cpt.table.shape != expected:
            raise ShapeMismatchError(
                f"node {names[i]!r}: table shape {cpt.table.shape}, expected {expected}"
            )
        if cpt.table.min() < -ENTRY_RANGE_TOL or cpt.table.max() > 1.0 + ENTRY_RANGE_TOL:
            raise UnnormalizedCptError(f"node {names[i]!r}: entries outside [0, 1]")
        sums = cpt.table.sum(axis=1)
        off = np.abs(sums - 1.0)
        if off.max() > ROW_SUM_TOL:
            r = int(off.argmax())
            raise UnnormalizedCptError(
                f"node {names[i]!r}: row {r} sums to {sums[r]!r}"
            )


def joint_probability(bn: DiscreteBayesNet, assignment: Mapping[str, str]) -> float:
    """Probability of one full assignment (variable name -> label): the
    product of each node's CPT entry given its parents."""
    extra = set(assignment) - {v.name for v in bn.variables}
    if extra:
        raise InvalidAssignmentError(f"unknown variables {sorted(extra)}")
    values: dict[int, int] = {}
    for v in bn.variables:
        if v.name not in assignment:
            raise InvalidAssignmentError(f"assignment misses variable {v.name!r}")
        values[v.id] = v.index_of(assignment[v.name])
    p = 1.0
    for i, cpt in enumerate(bn.cpts):
        row = 0
        for parent in cpt.parents:
            row = row * bn.variables[parent].cardinality + values[parent]
        p *= cpt.table[row, values[i]]
    return float(p)


@dataclass(frozen=True, eq=False)
class AnalysisSpec:
    """Output node, evidential set, and the numeric map for output labels.

    The chance set is the complement of {output} and the evidential set.
    """

    output: int
    evidential: frozenset[int]
    value_map: Mapping[str, float]

    def __post_init__(self):
        object.__setattr__(self, "output", int(self.output))
        object.__setattr__(
            self, "evidential", frozenset(int(i) for i in self.evidential)
        )
        object.__setattr__(
            self, "value_map", {str(k): float(v) for k, v in dict(self.value_map).items()}
        )

    def chance(self, bn: DiscreteBayesNet) -> frozenset[int]:
        return frozenset(range(bn.n)) - {self.output} - self.evidential


def output_values(bn: DiscreteBayesNet, spec: AnalysisSpec) -> np.ndarray:
    """The value map applied to the output domain, in domain order."""
    domain = bn.variables[spec.output].domain
    missing = [label for label in domain if label not in spec.value_map]
    if missing:
        raise MissingValueMapError(
            f"value map misses label(s) {missing} of output "
            f"{bn.variables[spec.output].name!r}"
        )
    return np.array([spec.value_map[label] for label in domain], dtype=np.float64)


def validate_partition(bn: DiscreteBayesNet, spec: AnalysisSpec) -> None:
    """Check the O/E/U partition and value-map coverage against a network."""
    if not 0 <= spec.output < bn.n:
        raise PartitionError(f"output id {spec.output} out of range")
    out_of_range = sorted(i for i in spec.evidential if not 0 <= i < bn.n)
    if out_of_range:
        raise PartitionError(f"evidential ids {out_of_range} out of range")
    if spec.output in spec.evidential:
        raise OverlappingPartitionError(
            f"output node {bn.variables[spec.output].name!r} is also evidential"
        )
    if not spec.evidential:
        raise EmptyEvidenceSetError("the evidential set is empty")
    output_values(bn, spec)
