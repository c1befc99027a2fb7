"""Overestimation measures used to prune the pattern-growth search.

Every per-sequence helper returns ``{sequence index: Fraction}`` covering the
sequences of the projection it is given; the database-level measures are the
sums of those values. Nothing here sorts remaining-sequence items: the
rising-sequence utilities come from one suffix sweep per sequence array.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .model import Threshold, format_pattern
from .projection import ExtensionEntry, ProjectedDB, SeqArray


class RrsPolicy(str, Enum):
    """Which remaining-sequence occurrences count as "rising".

    ``GLOBAL`` admits every occurrence of an item whose utility summed over
    the pattern's remaining sequences (all containing sequences) reaches
    ``minau``; ``OCCURRENCE`` admits occurrences whose own utility reaches it.
    """

    GLOBAL = "global"
    OCCURRENCE = "occurrence"


class RrsView:
    """Rising-sequence utilities for one projection at one threshold.

    ``after[k][pos]`` is the admitted utility strictly after slot ``pos`` of
    sequence ``k``; it is filled from the earliest extension slot onwards.
    ``excluded`` counts remaining-sequence occurrences left out (the
    unpromising items).
    """

    __slots__ = ("projection", "minau", "policy", "labels", "after", "excluded", "_numerators")

    def __init__(self, p: ProjectedDB, minau: Fraction, policy: RrsPolicy | str = RrsPolicy.GLOBAL, counter: Counter | None = None):
        policy = RrsPolicy(policy)
        self.projection = p
        self.minau = minau
        self.policy = policy
        visits = 0
        if policy is RrsPolicy.GLOBAL:
            totals: dict[int, int] = {}
            for k, entries in p.exlists.items():
                arr = p.arrays[k]
                # the earliest extension slot has the longest remaining sequence
                for q in range(entries[0].pos + 1, len(arr)):
                    i = arr.items[q]
                    totals[i] = totals.get(i, 0) + arr.utils[q]
                visits += len(arr) - entries[0].pos - 1
            self.labels = {i for i, u in totals.items() if u >= minau}
        else:
            self.labels = set()
        self.after: dict[int, list[int]] = {}
        excluded = 0
        for k, entries in p.exlists.items():
            arr = p.arrays[k]
            n = len(arr)
            after = [0] * n
            acc = 0
            for q in range(n - 1, entries[0].pos, -1):
                after[q] = acc
                if self.admits(arr, q):
                    acc += arr.utils[q]
                    if policy is RrsPolicy.OCCURRENCE:
                        self.labels.add(arr.items[q])
                else:
                    excluded += 1
            after[entries[0].pos] = acc
            self.after[k] = after
            visits += n - entries[0].pos - 1
        self.excluded = excluded
        self._numerators = None
        if counter is not None:
            counter["rrs_visits"] += visits

    @staticmethod
    def _rising(p: ProjectedDB, afters: dict[int, list[int]]) -> dict[int, int]:
        out = {}
        for k, entries in p.exlists.items():
            last = len(p.arrays[k]) - 1
            after = afters[k]
            out[k] = max((e.acu + after[e.pos] for e in entries if e.pos < last), default=0)
        return out

    def numerators(self) -> dict[int, int]:
        """Best ``acu + u_rrs`` per sequence over entries with a remaining sequence."""
        if self._numerators is None:
            self._numerators = self._rising(self.projection, self.after)
        return self._numerators

    def admits(self, arr: SeqArray, q: int) -> bool:
        if self.policy is RrsPolicy.GLOBAL:
            return arr.items[q] in self.labels
        return arr.utils[q] >= self.minau

    @property
    def distinct_count(self) -> int:
        return len(self.labels)

    def u_rrs(self, k: int, entry: ExtensionEntry) -> int:
        return self.after[k][entry.pos]

    def values(self) -> dict[tuple[int, int], int]:
        """``{(sid, exind): u_rrs}`` for every extension entry."""
        p = self.projection
        return {
            (p.arrays[k].sid, e.exind): self.after[k][e.pos]
            for k, entries in p.exlists.items()
            for e in entries
        }


def compute_rrs(p: ProjectedDB, t: Threshold, policy: RrsPolicy | str = RrsPolicy.GLOBAL, counter: Counter | None = None) -> RrsView:
    return RrsView(p, t.minau if isinstance(t, Threshold) else Fraction(t), policy, counter)


def _peau_numerators(p: ProjectedDB) -> dict[int, int]:
    out = p.cache.get("peau")
    if out is None:
        out = {}
        for k, entries in p.exlists.items():
            arr = p.arrays[k]
            last = len(arr) - 1
            out[k] = max((e.acu + arr.ru[e.pos] for e in entries if e.pos < last), default=0)
        p.cache["peau"] = out
    return out


def _first_instances(p: ProjectedDB) -> dict[int, tuple[int, int]]:
    out = p.cache.get("first")
    if out is None:
        out = {k: first_instance(p.arrays[k], p.pattern) for k in p.exlists}
        p.cache["first"] = out
    return out


def _rising_numerators(p: ProjectedDB, rrs: RrsView) -> dict[int, int]:
    if rrs.projection is p:
        return rrs.numerators()
    return RrsView._rising(p, rrs.after)


def peau_ori_seq(p: ProjectedDB) -> dict[int, Fraction]:
    return {k: Fraction(v, p.aclen) for k, v in _peau_numerators(p).items()}


def peau_inc_seq(p: ProjectedDB) -> dict[int, Fraction]:
    return {k: Fraction(v, p.aclen + 1) for k, v in _peau_numerators(p).items()}


def peau_rev_seq(p: ProjectedDB, rrs: RrsView) -> dict[int, Fraction]:
    return {k: Fraction(v, p.aclen + 1) for k, v in _rising_numerators(p, rrs).items()}


def vpeau_adv_seq(p: ProjectedDB, rrs: RrsView) -> dict[int, Fraction]:
    den = p.aclen + rrs.distinct_count
    return {k: Fraction(v, den) for k, v in _rising_numerators(p, rrs).items()}


def _total(values: dict[int, Fraction]) -> Fraction:
    return sum(values.values(), Fraction(0))


def at_least(num: int, den: int, minau: Fraction) -> bool:
    """``num / den >= minau`` without building a Fraction."""
    return num * minau.denominator >= minau.numerator * den


# Every per-sequence value of one measure shares a denominator, so the
# ``*_parts`` helpers return (summed numerator, denominator).


def peau_ori_parts(p: ProjectedDB) -> tuple[int, int]:
    return sum(_peau_numerators(p).values()), p.aclen


def vpeau_adv_parts(p: ProjectedDB, rrs: RrsView) -> tuple[int, int]:
    return sum(_rising_numerators(p, rrs).values()), p.aclen + rrs.distinct_count


def peau_ori(p: ProjectedDB) -> Fraction:
    return Fraction(*peau_ori_parts(p))


def peau_inc(p: ProjectedDB) -> Fraction:
    return Fraction(sum(_peau_numerators(p).values()), p.aclen + 1)


def peau_rev(p: ProjectedDB, rrs: RrsView) -> Fraction:
    return Fraction(sum(_rising_numerators(p, rrs).values()), p.aclen + 1)


def vpeau_adv(p: ProjectedDB, rrs: RrsView) -> Fraction:
    return Fraction(*vpeau_adv_parts(p, rrs))


def rsau_seq(parent: ProjectedDB, child: ProjectedDB, base: dict[int, Fraction] | None = None) -> dict[int, Fraction]:
    """Parent's per-sequence value over the sequences that contain the child.

    ``base`` defaults to the parent's PEAU_Ori values; the Advance strategy
    passes the parent's VPEAU_Adv values instead.
    """
    if base is None:
        base = peau_ori_seq(parent)
    return {k: base[k] for k in child.exlists}


def rsau_parts(parent: ProjectedDB, child: ProjectedDB) -> tuple[int, int]:
    peau = _peau_numerators(parent)
    return sum(peau[k] for k in child.exlists), parent.aclen


def rsau(parent: ProjectedDB, child: ProjectedDB, base: dict[int, Fraction] | None = None) -> Fraction:
    if base is None:
        return Fraction(*rsau_parts(parent, child))
    return _total(rsau_seq(parent, child, base))


def first_instance(arr: SeqArray, pattern) -> tuple[int, int] | None:
    """Utility and extension slot of the lexicographically first instance."""
    total = 0
    j = 1
    n_sets = len(arr.itemset_end) - 1
    slot = -1
    for x in pattern:
        while j <= n_sets:
            slots = [arr.slot(j, i) for i in x]
            if None not in slots:
                total += sum(arr.utils[q] for q in slots)
                slot = slots[-1]
                j += 1
                break
            j += 1
        else:
            return None
    return total, slot


def _is_i_extension(parent: ProjectedDB, child: ProjectedDB) -> bool:
    return len(child.pattern) == len(parent.pattern)


def _anchor(parent_entries: list[ExtensionEntry], arr: SeqArray, child_pos: int, i_ext: bool) -> ExtensionEntry:
    """Last parent extension entry the child's first extension occurrence can follow."""
    sq = arr.sind[child_pos]
    best = None
    for e in parent_entries:
        s = arr.sind[e.pos]
        if (i_ext and s == sq) or (not i_ext and s < sq):
            best = e
        elif s >= sq:
            break
    if best is None:
        raise ValueError("child entry has no compatible parent entry")
    return best


def _trsau_numerators(parent: ProjectedDB, child: ProjectedDB) -> dict[int, int]:
    peau = _peau_numerators(parent)
    first = _first_instances(parent)
    i_ext = _is_i_extension(parent, child)
    out = {}
    for k, centries in child.exlists.items():
        arr = parent.arrays[k]
        ru = arr.ru
        num = peau[k]
        u1, pos1 = first[k]
        if pos1 < len(arr) - 1 and u1 + ru[pos1] == num:
            c1 = centries[0].pos
            em = _anchor(parent.exlists[k], arr, c1, i_ext)
            num -= ru[em.pos] - arr.utils[c1] - ru[c1]
        floor = max(e.acu + ru[e.pos] for e in centries)
        out[k] = num if num > floor else floor
    return out


def trsau_seq(parent: ProjectedDB, child: ProjectedDB) -> dict[int, Fraction]:
    """Tighter reduced bound per sequence containing the child.

    When the parent's PEAU in a sequence is reached by its first instance,
    the utility lying strictly between the parent's anchoring extension item
    and the child's first extension item is subtracted. The result never
    drops below ``max(acu' + ru') / |S|`` over the child's own extension
    entries, which dominates the average utility of the child and of every
    extension of it.
    """
    L = parent.aclen
    return {k: Fraction(v, L) for k, v in _trsau_numerators(parent, child).items()}


def trsau_parts(parent: ProjectedDB, child: ProjectedDB) -> tuple[int, int]:
    return sum(_trsau_numerators(parent, child).values()), parent.aclen


def trsau(parent: ProjectedDB, child: ProjectedDB) -> Fraction:
    return Fraction(*trsau_parts(parent, child))


def _vtrsau_numerators(parent: ProjectedDB, child: ProjectedDB, rrs: RrsView) -> dict[int, int]:
    base = rrs.numerators()
    first = _first_instances(parent)
    i_ext = _is_i_extension(parent, child)
    out = {}
    for k, centries in child.exlists.items():
        arr = parent.arrays[k]
        after = rrs.after[k]
        num = base[k]
        u1, pos1 = first[k]
        if pos1 < len(arr) - 1 and u1 + after[pos1] == num:
            c1 = centries[0].pos
            em = _anchor(parent.exlists[k], arr, c1, i_ext)
            num -= after[em.pos] - after[c1] - (arr.utils[c1] if rrs.admits(arr, c1) else 0)
        out[k] = num
    return out


def vtrsau_adv_seq(parent: ProjectedDB, child: ProjectedDB, rrs: RrsView) -> dict[int, Fraction]:
    """TRSAU counterpart built on the parent's VPEAU_Adv and rising utilities.

    ``rrs`` must be the parent's view. The subtracted gap counts only
    admitted occurrences strictly between the two extension items.
    """
    den = parent.aclen + rrs.distinct_count
    return {k: Fraction(v, den) for k, v in _vtrsau_numerators(parent, child, rrs).items()}


def vtrsau_adv_parts(parent: ProjectedDB, child: ProjectedDB, rrs: RrsView) -> tuple[int, int]:
    return sum(_vtrsau_numerators(parent, child, rrs).values()), parent.aclen + rrs.distinct_count


def vtrsau_adv(parent: ProjectedDB, child: ProjectedDB, rrs: RrsView) -> Fraction:
    return Fraction(*vtrsau_adv_parts(parent, child, rrs))


def utility_sum(p: ProjectedDB) -> int:
    """Sum over containing sequences of the best instance utility."""
    return sum(max(e.acu for e in entries) for entries in p.exlists.values())


def average_utility(p: ProjectedDB) -> Fraction:
    return Fraction(utility_sum(p), p.aclen)


@dataclass(frozen=True)
class BoundReport:
    """All seven measures for one pattern node.

    The reduced measures need a parent and are ``None`` for 1-sequences.
    """

    peau_ori: Fraction
    peau_inc: Fraction
    peau_rev: Fraction
    vpeau_adv: Fraction
    rsau: Fraction | None = None
    trsau: Fraction | None = None
    vtrsau_adv: Fraction | None = None


def bound_report(child: ProjectedDB, t: Threshold, policy: RrsPolicy | str = RrsPolicy.GLOBAL, parent: ProjectedDB | None = None, parent_rrs: RrsView | None = None) -> BoundReport:
    rrs = compute_rrs(child, t, policy)
    reduced = {}
    if parent is not None and not parent.is_root:
        if parent_rrs is None:
            parent_rrs = compute_rrs(parent, t, policy)
        reduced = dict(
            rsau=rsau(parent, child),
            trsau=trsau(parent, child),
            vtrsau_adv=vtrsau_adv(parent, child, parent_rrs),
        )
    return BoundReport(
        peau_ori=peau_ori(child),
        peau_inc=peau_inc(child),
        peau_rev=peau_rev(child, rrs),
        vpeau_adv=vpeau_adv(child, rrs),
        **reduced,
    )


def _fmt(v: Fraction | None) -> str:
    if v is None:
        return "-"
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def trace_line(pattern, au: Fraction, report: BoundReport, names=None) -> str:
    """``pattern | au | peau_ori | vpeau_adv | rsau | trsau | vtrsau_adv``."""
    fields = [format_pattern(pattern, names), _fmt(au), _fmt(report.peau_ori), _fmt(report.vpeau_adv), _fmt(report.rsau), _fmt(report.trsau), _fmt(report.vtrsau_adv)]
    return " | ".join(fields)
