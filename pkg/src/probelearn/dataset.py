"""Probe-metered datasets.

A training set is an S x N matrix of feature values plus S labels.  Reading a
cell (example, feature) costs one probe the first time; repeat reads of the
same cell are free (the value is memoized), and labels are always free.  A
ProbeLedger attached to each dataset meters every read, which is what all the
probe-complexity bounds in this package are asserted against.

Two value kinds are supported: boolean features (decision trees / lists) and
rational features on the grid {1 + j/M : 0 <= j <= M} (monomials and sparse
polynomials, where exact Fraction arithmetic keeps verification exact).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import UsageError

BOOL = "bool"
RATIONAL = "rational"


class ProbeLedger:
    """Meters feature reads on one dataset.

    The ledger is a boolean S x N mask of cells read so far.  Cost of a read
    is 1 for a fresh cell and 0 for a memoized one, so `total_probes` is just
    the number of True cells.
    """

    def __init__(self, n_examples: int, n_features: int):
        self._mask = np.zeros((n_examples, n_features), dtype=bool)

    def record(self, example: int, feature: int) -> None:
        self._mask[example, feature] = True

    def record_rows(self, rows, feature: int) -> None:
        self._mask[rows, feature] = True

    def record_all(self) -> None:
        self._mask[:, :] = True

    def was_probed(self, example: int, feature: int) -> bool:
        return bool(self._mask[example, feature])

    @property
    def total_probes(self) -> int:
        return int(self._mask.sum())

    def per_example_probes(self) -> np.ndarray:
        """Distinct features probed for each example."""
        return self._mask.sum(axis=1)

    def per_example_max(self) -> int:
        return int(self._mask.sum(axis=1).max()) if self._mask.size else 0

    def probed_pairs(self) -> set:
        rows, cols = np.nonzero(self._mask)
        return {(int(e), int(i)) for e, i in zip(rows, cols)}


class CostlyDataset:
    """An S x N feature matrix whose cells must be probed to be read.

    `probe*` methods meter reads through the ledger; `peek*` methods are the
    unmetered oracle channel, reserved for teacher gain, exact-mode oracles
    and test assertions.
    """

    def __init__(self, value_kind: str, values: np.ndarray, labels):
        if value_kind not in (BOOL, RATIONAL):
            raise UsageError(f"unknown value kind {value_kind!r}")
        if values.ndim != 2:
            raise UsageError("values must be a 2-d matrix")
        if len(labels) != values.shape[0]:
            raise UsageError("labels must match the number of examples")
        self.value_kind = value_kind
        self._values = values
        self._labels = labels
        self.ledger = ProbeLedger(*values.shape)

    # -- construction ------------------------------------------------------

    @classmethod
    def from_bool(cls, values, labels) -> "CostlyDataset":
        vals = np.asarray(values, dtype=np.uint8)
        labs = np.asarray(labels, dtype=bool)
        return cls(BOOL, vals, labs)

    @classmethod
    def from_rational(cls, values, labels) -> "CostlyDataset":
        """values: nested lists (or object array) of Fractions; labels: Fractions."""
        arr = np.empty((len(values), len(values[0])), dtype=object)
        for e, row in enumerate(values):
            for i, v in enumerate(row):
                arr[e, i] = Fraction(v)
        return cls(RATIONAL, arr, [Fraction(v) for v in labels])

    # -- shape -------------------------------------------------------------

    @property
    def n_examples(self) -> int:
        return self._values.shape[0]

    @property
    def n_features(self) -> int:
        return self._values.shape[1]

    def _check(self, example: int, feature: int) -> None:
        if not (0 <= example < self.n_examples):
            raise UsageError(f"example {example} out of range")
        if not (0 <= feature < self.n_features):
            raise UsageError(f"feature {feature} out of range")

    # -- metered reads -----------------------------------------------------

    def probe(self, example: int, feature: int):
        """Read one cell, charging one probe unless it was read before."""
        self._check(example, feature)
        self.ledger.record(example, feature)
        return self._values[example, feature]

    def probe_rows(self, rows, feature: int) -> np.ndarray:
        """Read one feature on a set of examples (one probe per fresh cell)."""
        self._check(0, feature)
        self.ledger.record_rows(rows, feature)
        return self._values[rows, feature]

    def probe_column(self, feature: int) -> np.ndarray:
        return self.probe_rows(np.arange(self.n_examples), feature)

    def probe_all(self) -> None:
        """Read the whole matrix (the scratch-learn opening move)."""
        self.ledger.record_all()

    # -- free reads --------------------------------------------------------

    def label(self, example: int):
        return self._labels[example]

    def labels_at(self, rows):
        if self.value_kind == BOOL:
            return self._labels[rows]
        return [self._labels[int(e)] for e in rows]

    @property
    def labels(self):
        return self._labels

    def peek(self, example: int, feature: int):
        """Unmetered read — oracle/audit channel only."""
        return self._values[example, feature]

    def peek_rows(self, rows, feature: int):
        return self._values[rows, feature]

    def peek_all(self):
        return self._values

    # -- serialization -----------------------------------------------------

    def to_json(self) -> str:
        if self.value_kind == BOOL:
            examples = self._values.astype(int).tolist()
            labels = ["+" if l else "-" for l in self._labels]
        else:
            examples = [[_frac_str(v) for v in row] for row in self._values]
            labels = [_frac_str(v) for v in self._labels]
        doc = {
            "n_features": self.n_features,
            "examples": examples,
            "labels": labels,
            "value_kind": self.value_kind,
        }
        return json.dumps(doc, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "CostlyDataset":
        doc = json.loads(text)
        kind = doc.get("value_kind")
        examples = doc["examples"]
        if examples and len(examples[0]) != doc["n_features"]:
            raise UsageError("n_features does not match example width")
        if kind == BOOL:
            labels = [lab == "+" for lab in doc["labels"]]
            return cls.from_bool(examples, labels)
        if kind == RATIONAL:
            values = [[_parse_frac(v) for v in row] for row in examples]
            labels = [_parse_frac(v) for v in doc["labels"]]
            return cls.from_rational(values, labels)
        raise UsageError(f"unknown value kind {kind!r}")


def _frac_str(v: Fraction) -> str:
    return f"{v.numerator}/{v.denominator}"


def _parse_frac(text: str) -> Fraction:
    try:
        num, den = text.split("/")
        return Fraction(int(num), int(den))
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad rational literal {text!r}") from exc


@dataclass
class EvaluationReport:
    """Aggregate probe accounting over one task sequence."""

    family: str
    outcomes: list = field(default_factory=list)       # "lfd" | "scratch" per task
    per_task_probes: list = field(default_factory=list)
    per_example_max: list = field(default_factory=list)
    rep_sizes: list = field(default_factory=list)      # |F~| after each task
    restart_count: int = 0

    @property
    def scratch_count(self) -> int:
        return sum(1 for o in self.outcomes if o == "scratch")

    @property
    def total_probes(self) -> int:
        return sum(self.per_task_probes)

    def add_task(self, outcome: str, ledger: ProbeLedger, rep_size: int) -> None:
        self.outcomes.append(outcome)
        self.per_task_probes.append(ledger.total_probes)
        self.per_example_max.append(ledger.per_example_max())
        self.rep_sizes.append(rep_size)


def report(family: str, ledgers, outcomes, rep_sizes, restarts: int = 0) -> EvaluationReport:
    """Build an EvaluationReport from per-task ledgers and outcomes."""
    if not (len(ledgers) == len(outcomes) == len(rep_sizes)):
        raise UsageError("ledgers, outcomes and rep_sizes must align")
    rep = EvaluationReport(family=family, restart_count=restarts)
    for ledger, outcome, size in zip(ledgers, outcomes, rep_sizes):
        rep.add_task(outcome, ledger, size)
    return rep
