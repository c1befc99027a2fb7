"""Projected database: sequence arrays, item-index head tables, extension lists.

Sequence arrays are built once per database and shared by every projection.
Array slots are 0-based internally; ``ind``/``exind``/``sind`` values exposed
to callers are 1-based.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterator, NamedTuple

from .model import Database, Pattern, QSequence


class Mode(str, Enum):
    I = "i"
    S = "s"


@dataclass(frozen=True)
class SeqArrayEntry:
    ind: int
    item: int
    utility: int
    ru: int
    sind: int


class SeqArray:
    """Flattened q-sequence with suffix remaining utilities.

    ``ru[k]`` is the utility of everything after slot ``k``, so the last slot
    has ``ru == 0``.
    """

    __slots__ = ("sid", "items", "utils", "ru", "sind", "itemset_end", "head", "_slot")

    def __init__(self, qs: QSequence):
        self.sid = qs.sid
        items, utils, sind, ends = [], [], [], []
        for j, itemset in enumerate(qs.itemsets, 1):
            for q in itemset:
                items.append(q.item)
                utils.append(q.utility)
                sind.append(j)
            ends.append(len(items))
        ru = [0] * len(items)
        for k in range(len(items) - 2, -1, -1):
            ru[k] = utils[k + 1] + ru[k + 1]
        head: dict[int, list[int]] = {}
        for k, i in enumerate(items):
            head.setdefault(i, []).append(k)
        self.items = tuple(items)
        self.utils = tuple(utils)
        self.ru = tuple(ru)
        self.sind = tuple(sind)
        # itemset_end[j] = one past the last slot of 1-based itemset j (index 0 unused)
        self.itemset_end = (0, *ends)
        self.head = {i: tuple(v) for i, v in head.items()}
        self._slot = {(sind[k], i): k for k, i in enumerate(items)}

    def __len__(self):
        return len(self.items)

    def slot(self, sind: int, item: int) -> int | None:
        return self._slot.get((sind, item))

    def entries(self) -> list[SeqArrayEntry]:
        return [
            SeqArrayEntry(k + 1, self.items[k], self.utils[k], self.ru[k], self.sind[k])
            for k in range(len(self.items))
        ]

    def head_table(self) -> dict[int, list[int]]:
        """1-based occurrence indices per item label."""
        return {i: [k + 1 for k in v] for i, v in self.head.items()}


def build_seq_array(qs: QSequence) -> tuple[list[SeqArrayEntry], dict[int, list[int]]]:
    arr = SeqArray(qs)
    return arr.entries(), arr.head_table()


class ExtensionEntry(NamedTuple):
    """``pos`` is the 0-based slot of the extension item."""

    pos: int
    acu: int

    @property
    def exind(self) -> int:
        return self.pos + 1


class ProjectedDB:
    """Extension lists of one pattern over the shared sequence arrays.

    ``exlists`` maps the index of a sequence in the database to its
    extension entries, ascending by slot, one entry per extension occurrence
    holding the best instance utility ending there.
    """

    __slots__ = ("pattern", "arrays", "exlists", "aclen", "cache")

    def __init__(self, pattern: Pattern, arrays: tuple[SeqArray, ...], exlists: dict[int, list[ExtensionEntry]], aclen: int | None = None):
        self.pattern = pattern
        self.arrays = arrays
        self.exlists = exlists
        self.aclen = sum(len(x) for x in pattern) if aclen is None else aclen
        # per-node values reused by every child's bound
        self.cache: dict = {}

    @property
    def is_root(self) -> bool:
        return not self.pattern

    def __bool__(self):
        return bool(self.exlists) or self.is_root

    def sids(self) -> list[int]:
        return [self.arrays[k].sid for k in self.exlists]

    def rlen(self, k: int, entry: ExtensionEntry) -> int:
        return len(self.arrays[k]) - entry.exind

    def max_acu(self, k: int) -> int:
        return max(e.acu for e in self.exlists[k])

    def seq_utilities(self) -> Iterator[tuple[int, int]]:
        """``(sequence index, max instance utility)`` for every containing sequence."""
        for k, entries in self.exlists.items():
            yield k, max(e.acu for e in entries)

    def dump(self) -> str:
        """One ``sid exind acu rlen`` line per extension entry."""
        lines = []
        for k, entries in self.exlists.items():
            sid = self.arrays[k].sid
            for e in entries:
                lines.append(f"{sid} {e.exind} {e.acu} {self.rlen(k, e)}")
        return "\n".join(lines)


def project_root(d: Database) -> ProjectedDB:
    return ProjectedDB((), tuple(SeqArray(qs) for qs in d.sequences), {})


def extend_projection(p: ProjectedDB, item: int, mode: Mode | str) -> ProjectedDB:
    mode = Mode(mode)
    if p.is_root:
        if mode is not Mode.S:
            raise ValueError("the root can only be S-extended")
        exlists = {}
        for k, arr in enumerate(p.arrays):
            slots = arr.head.get(item)
            if slots:
                exlists[k] = [ExtensionEntry(q, arr.utils[q]) for q in slots]
        return ProjectedDB(((item,),), p.arrays, exlists)

    if mode is Mode.I:
        last = p.pattern[-1]
        if item <= last[-1]:
            raise ValueError(f"I-extension item {item} must exceed {last[-1]}")
        pattern = p.pattern[:-1] + (last + (item,),)
        exlists = {}
        for k, entries in p.exlists.items():
            arr = p.arrays[k]
            out = []
            for e in entries:
                # sorted itemsets: the item, if present, sits after the extension slot
                q = arr.slot(arr.sind[e.pos], item)
                if q is not None:
                    out.append(ExtensionEntry(q, e.acu + arr.utils[q]))
            if out:
                exlists[k] = out
        return ProjectedDB(pattern, p.arrays, exlists, p.aclen + 1)

    pattern = p.pattern + ((item,),)
    exlists = {}
    for k, entries in p.exlists.items():
        arr = p.arrays[k]
        slots = arr.head.get(item)
        if not slots:
            continue
        sind = arr.sind
        utils = arr.utils
        out = []
        best = -1
        n = len(entries)
        t = 0
        for q in slots:
            sq = sind[q]
            while t < n and sind[entries[t].pos] < sq:
                if entries[t].acu > best:
                    best = entries[t].acu
                t += 1
            if best >= 0:
                out.append(ExtensionEntry(q, best + utils[q]))
        if out:
            exlists[k] = out
    return ProjectedDB(pattern, p.arrays, exlists, p.aclen + 1)


def enumerate_extension_items(p: ProjectedDB) -> tuple[list[int], list[int]]:
    """Candidate I-extension and S-extension items, each ascending."""
    if p.is_root:
        raise ValueError("extension items are defined for non-root projections")
    ilist: set[int] = set()
    slist: set[int] = set()
    for k, entries in p.exlists.items():
        arr = p.arrays[k]
        for e in entries:
            ilist.update(arr.items[e.pos + 1 : arr.itemset_end[arr.sind[e.pos]]])
        first = entries[0].pos
        slist.update(arr.items[arr.itemset_end[arr.sind[first]] :])
    return sorted(ilist), sorted(slist)


def remaining_utility(p: ProjectedDB, sid: int, entry: ExtensionEntry) -> int:
    for k in p.exlists:
        if p.arrays[k].sid == sid:
            return p.arrays[k].ru[entry.pos]
    raise KeyError(f"sid {sid} is not in the projection of {p.pattern!r}")


def project_pattern(d_or_root, s: Pattern) -> ProjectedDB:
    """Projection of ``s`` grown item by item from the root."""
    p = d_or_root if isinstance(d_or_root, ProjectedDB) else project_root(d_or_root)
    for x in s:
        for w, i in enumerate(x):
            p = extend_projection(p, i, Mode.S if w == 0 else Mode.I)
    return p
