"""Quantitative sequence data model and exact average-utility semantics.

Utilities are plain ``int`` values (quantity x unit profit); averages are
:class:`fractions.Fraction` so threshold comparisons never suffer from
floating-point ties. Itemset indices in :data:`Position` values are 1-based.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping, Sequence

Pattern = tuple[tuple[int, ...], ...]
Position = tuple[int, ...]


@dataclass(frozen=True)
class QItem:
    """One q-item occurrence; ``utility`` is materialized at load time."""

    item: int
    quantity: int
    utility: int

    def __post_init__(self):
        if self.item < 0:
            raise ValueError(f"item label must be >= 0, got {self.item}")
        if self.quantity < 1:
            raise ValueError(f"quantity must be >= 1, got {self.quantity}")
        if self.utility < 0:
            raise ValueError(f"utility must be >= 0, got {self.utility}")


QItemset = tuple[QItem, ...]


@dataclass(frozen=True)
class QSequence:
    sid: int
    itemsets: tuple[QItemset, ...]

    def __post_init__(self):
        if not self.itemsets:
            raise ValueError(f"sequence {self.sid} is empty")
        for j, itemset in enumerate(self.itemsets, 1):
            if not itemset:
                raise ValueError(f"sequence {self.sid}: itemset {j} is empty")
            labels = [q.item for q in itemset]
            if any(a >= b for a, b in zip(labels, labels[1:])):
                raise ValueError(
                    f"sequence {self.sid}: itemset {j} labels not strictly increasing"
                )

    @property
    def size(self) -> int:
        return len(self.itemsets)

    @property
    def length(self) -> int:
        return sum(len(y) for y in self.itemsets)

    def labels(self, j: int) -> tuple[int, ...]:
        """Item labels of the 1-based itemset ``j``."""
        return tuple(q.item for q in self.itemsets[j - 1])


@dataclass(frozen=True)
class Database:
    """Immutable collection of q-sequences plus the external utility table.

    ``eu`` may be empty when the input carried per-occurrence utilities
    directly (SPMF style) rather than quantities.
    """

    sequences: tuple[QSequence, ...]
    eu: Mapping[int, int] = field(default_factory=dict)
    total_utility: int = field(init=False)

    def __post_init__(self):
        sids = [qs.sid for qs in self.sequences]
        if len(set(sids)) != len(sids):
            raise ValueError("duplicate sid in database")
        for value in self.eu.values():
            if value <= 0:
                raise ValueError("external utilities must be strictly positive")
        if self.eu:
            for qs in self.sequences:
                for itemset in qs.itemsets:
                    for q in itemset:
                        if q.item not in self.eu:
                            raise ValueError(f"item {q.item} has no external utility")
                        if q.utility != q.quantity * self.eu[q.item]:
                            raise ValueError(
                                f"sequence {qs.sid}: utility of item {q.item} is not "
                                "quantity x eu"
                            )
        object.__setattr__(self, "total_utility", database_utility(self))

    def __len__(self):
        return len(self.sequences)

    def items(self) -> list[int]:
        """Sorted distinct item labels."""
        return sorted({q.item for qs in self.sequences for y in qs.itemsets for q in y})


def make_sequence(sid: int, itemsets: Iterable[Iterable[tuple[int, int]]], eu: Mapping[int, int]) -> QSequence:
    """Build a q-sequence from ``(item, quantity)`` pairs, sorting each itemset."""
    built = []
    for itemset in itemsets:
        pairs = sorted(itemset)
        built.append(tuple(QItem(i, q, q * eu[i]) for i, q in pairs))
    return QSequence(sid, tuple(built))


def make_database(rows: Sequence[Iterable[Iterable[tuple[int, int]]]], eu: Mapping[int, int]) -> Database:
    """Quantity-mode constructor; sids are assigned 1..n."""
    seqs = tuple(make_sequence(k, row, eu) for k, row in enumerate(rows, 1))
    return Database(seqs, dict(eu))


@dataclass(frozen=True)
class Threshold:
    xi: Fraction
    minau: Fraction

    @classmethod
    def of(cls, xi, d: Database) -> "Threshold":
        x = as_fraction(xi)
        if not 0 < x <= 1:
            raise ValueError(f"xi must lie in (0, 1], got {xi}")
        return cls(x, x * d.total_utility)


def as_fraction(value) -> Fraction:
    """Exact conversion; floats go through their shortest decimal repr so 0.12 stays 3/25."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    return Fraction(str(value))


def pattern_length(s: Pattern) -> int:
    return sum(len(x) for x in s)


def validate_pattern(s: Pattern) -> None:
    if not s:
        raise ValueError("pattern is empty")
    for x in s:
        if not x or any(a >= b for a, b in zip(x, x[1:])):
            raise ValueError(f"invalid pattern itemset {x!r}")


def sequence_utility(qs: QSequence) -> int:
    return sum(q.utility for y in qs.itemsets for q in y)


def database_utility(d: Database) -> int:
    return sum(sequence_utility(qs) for qs in d.sequences)


def matches(x: Iterable[int], y: QItemset) -> bool:
    return tuple(x) == tuple(q.item for q in y)


def contains(x: Iterable[int], y: QItemset) -> bool:
    return set(x) <= {q.item for q in y}


def find_instances(s: Pattern, qs: QSequence) -> list[Position]:
    """All strictly increasing 1-based positions embedding ``s`` in ``qs``, lexicographic."""
    validate_pattern(s)
    label_sets = [{q.item for q in y} for y in qs.itemsets]
    n = len(label_sets)
    out: list[Position] = []

    def walk(v: int, start: int, prefix: tuple[int, ...]):
        if v == len(s):
            out.append(prefix)
            return
        need = set(s[v])
        # leave room for the remaining pattern itemsets
        for j in range(start, n - (len(s) - v - 1)):
            if need <= label_sets[j]:
                walk(v + 1, j + 1, prefix + (j + 1,))

    walk(0, 0, ())
    return out


def instance_utility(s: Pattern, p: Position, qs: QSequence) -> int:
    if len(p) != len(s) or any(a >= b for a, b in zip(p, p[1:])):
        raise ValueError(f"position {p!r} is not a valid position for {s!r}")
    total = 0
    for x, j in zip(s, p):
        if not 1 <= j <= qs.size:
            raise ValueError(f"itemset index {j} out of range")
        util = {q.item: q.utility for q in qs.itemsets[j - 1]}
        try:
            total += sum(util[i] for i in x)
        except KeyError:
            raise ValueError(f"itemset {j} of sequence {qs.sid} does not contain {x!r}") from None
    return total


def pattern_utility_in_seq(s: Pattern, qs: QSequence) -> int:
    """Maximum instance utility, 0 when ``s`` does not occur."""
    return max((instance_utility(s, p, qs) for p in find_instances(s, qs)), default=0)


def pattern_avg_utility_in_seq(s: Pattern, qs: QSequence) -> Fraction:
    return Fraction(pattern_utility_in_seq(s, qs), pattern_length(s))


def pattern_avg_utility(s: Pattern, d: Database) -> Fraction:
    return sum((pattern_avg_utility_in_seq(s, qs) for qs in d.sequences), Fraction(0))


def is_hausp(s: Pattern, d: Database, t: Threshold) -> bool:
    return pattern_avg_utility(s, d) >= t.minau


def format_pattern(s: Pattern, names: Mapping[int, str] | None = None) -> str:
    """``<{1,3},{2}>`` style rendering, optionally with item names."""
    name = (lambda i: names.get(i, str(i))) if names else str
    return "<" + ",".join("{" + ",".join(name(i) for i in x) + "}" for x in s) + ">"
