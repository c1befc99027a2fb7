"""Brute-force ground truth.

Nothing here touches the projection or bounds modules: patterns come from
exhaustive enumeration of occurrence subsets, and bound values are recomputed
from raw instance positions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .bounds import BoundReport, RrsPolicy
from .model import (
    Database,
    Pattern,
    QSequence,
    Threshold,
    as_fraction,
    find_instances,
    instance_utility,
    pattern_length,
)

MAX_ORACLE_LENGTH = 8


class OracleLimitError(ValueError):
    pass


@dataclass(frozen=True)
class OracleConfig:
    max_pattern_length: int
    xi: Fraction | float | str = Fraction(0)

    def __post_init__(self):
        _check_limit(self.max_pattern_length)


def _check_limit(max_len: int):
    if not 1 <= max_len <= MAX_ORACLE_LENGTH:
        raise OracleLimitError(
            f"oracle max length must be within 1..{MAX_ORACLE_LENGTH} (got {max_len}); "
            "the enumeration is exponential, use the miner for longer patterns"
        )


def _occurrences(qs: QSequence) -> list[tuple[int, int, int]]:
    return [(j, q.item, q.utility) for j, y in enumerate(qs.itemsets, 1) for q in y]


def _instance_maxima(qs: QSequence, max_len: int) -> dict[Pattern, int]:
    """Best instance utility of every pattern of length <= max_len in ``qs``.

    Any non-empty subset of occurrences, grouped by itemset, is an instance
    of exactly one pattern, so walking all subsets visits every instance.
    """
    occ = _occurrences(qs)
    n = len(occ)
    best: dict[Pattern, int] = {}

    def walk(start: int, pattern: Pattern, last_set: int, util: int, length: int):
        for q in range(start, n):
            j, item, u = occ[q]
            if j == last_set:
                grown = pattern[:-1] + (pattern[-1] + (item,),)
            else:
                grown = pattern + ((item,),)
            total = util + u
            if best.get(grown, -1) < total:
                best[grown] = total
            if length + 1 < max_len:
                walk(q + 1, grown, j, total, length + 1)

    walk(0, (), 0, 0, 0)
    return best


def pattern_utilities(d: Database, max_len: int) -> dict[Pattern, Fraction]:
    """Average utility of every pattern of length <= max_len occurring in ``d``."""
    _check_limit(max_len)
    totals: dict[Pattern, int] = {}
    for qs in d.sequences:
        for s, u in _instance_maxima(qs, max_len).items():
            totals[s] = totals.get(s, 0) + u
    # every sequence's term shares the denominator |S|
    return {s: Fraction(u, pattern_length(s)) for s, u in totals.items()}


def enumerate_patterns(d: Database, max_len: int) -> set[Pattern]:
    return set(pattern_utilities(d, max_len))


def oracle_mine(d: Database, cfg: OracleConfig) -> list[tuple[Pattern, Fraction]]:
    t = Threshold.of(cfg.xi, d) if as_fraction(cfg.xi) > 0 else Threshold(Fraction(0), Fraction(0))
    found = pattern_utilities(d, cfg.max_pattern_length)
    return sorted((s, au) for s, au in found.items() if au >= t.minau)


# -- definitional bounds ----------------------------------------------------


def _parent(s: Pattern) -> tuple[Pattern, bool]:
    """Prefix one extension away, and whether ``s`` is its I-extension."""
    if len(s[-1]) > 1:
        return s[:-1] + (s[-1][:-1],), True
    return s[:-1], False


class _SeqView:
    """Occurrence-level helpers over one raw q-sequence."""

    def __init__(self, qs: QSequence):
        self.qs = qs
        self.occ = _occurrences(qs)

    def ext_index(self, j: int, item: int) -> int:
        for k, (jj, i, _) in enumerate(self.occ):
            if jj == j and i == item:
                return k
        raise ValueError("occurrence not found")

    def rest(self, k: int):
        return self.occ[k + 1 :]

    def u_rs(self, k: int) -> int:
        return sum(u for _, _, u in self.rest(k))


def _positions(s: Pattern, view: _SeqView):
    """``(position, instance utility, extension occurrence index)`` triples, lexicographic."""
    return [
        (p, instance_utility(s, p, view.qs), view.ext_index(p[-1], s[-1][-1]))
        for p in find_instances(s, view.qs)
    ]


def _node_values(s: Pattern, views: list[_SeqView], minau: Fraction, policy: RrsPolicy):
    """Per-sequence numerators, the rising-admission rule and |rrs|_d for ``s``."""
    L = pattern_length(s)
    found = {k: _positions(s, view) for k, view in enumerate(views)}
    found = {k: pos for k, pos in found.items() if pos}

    # every occurrence lying in the remaining sequence of at least one position
    rs_occ = {k: sorted({q for _, _, e in pos for q in range(e + 1, len(views[k].occ))}) for k, pos in found.items()}
    if policy is RrsPolicy.GLOBAL:
        totals: dict[int, int] = {}
        for k, qs_ in rs_occ.items():
            for q in qs_:
                _, i, u = views[k].occ[q]
                totals[i] = totals.get(i, 0) + u
        rising = {i for i, u in totals.items() if u >= minau}
        admit = lambda i, u: i in rising  # noqa: E731
    else:
        admit = lambda i, u: u >= minau  # noqa: E731
    labels = {views[k].occ[q][1] for k, qs_ in rs_occ.items() for q in qs_ if admit(*views[k].occ[q][1:])}

    def u_rrs(view, e):
        return sum(u for _, i, u in view.rest(e) if admit(i, u))

    per_seq = {}
    for k, pos in found.items():
        view = views[k]
        with_rs = [(p, u, e) for p, u, e in pos if e < len(view.occ) - 1]
        per_seq[k] = dict(
            positions=pos,
            ori=max((u + view.u_rs(e) for _, u, e in with_rs), default=0),
            rising=max((u + u_rrs(view, e) for _, u, e in with_rs), default=0),
        )
    return L, per_seq, len(labels), admit, u_rrs


def definitional_bounds(d: Database, s: Pattern, t: Threshold, policy: RrsPolicy | str = RrsPolicy.GLOBAL) -> BoundReport:
    """Every measure straight from instance positions; no projections."""
    policy = RrsPolicy(policy)
    views = [_SeqView(qs) for qs in d.sequences]

    L, node, dcount, _, _ = _node_values(s, views, t.minau, policy)
    peau_ori = sum((Fraction(v["ori"], L) for v in node.values()), Fraction(0))
    peau_inc = sum((Fraction(v["ori"], L + 1) for v in node.values()), Fraction(0))
    peau_rev = sum((Fraction(v["rising"], L + 1) for v in node.values()), Fraction(0))
    vpeau_adv = sum((Fraction(v["rising"], L + dcount) for v in node.values()), Fraction(0))
    report = dict(peau_ori=peau_ori, peau_inc=peau_inc, peau_rev=peau_rev, vpeau_adv=vpeau_adv)

    parent, i_ext = _parent(s)
    if parent:
        Lp, pnode, pd, admit, u_rrs = _node_values(parent, views, t.minau, policy)
        rsau = trsau = vtrsau = Fraction(0)
        for k, child in node.items():
            view = views[k]
            pv = pnode[k]
            rsau += Fraction(pv["ori"], Lp)
            _, u1, e1 = pv["positions"][0]
            c1_pos, _, c1 = child["positions"][0]
            jn = c1_pos[-1]
            anchors = [e for p, _, e in pv["positions"] if (p[-1] == jn if i_ext else p[-1] < jn)]
            em = max(anchors)
            has_rs = e1 < len(view.occ) - 1
            # item utility at the child's first extension occurrence
            ui = view.occ[c1][2]

            num = pv["ori"]
            if has_rs and u1 + view.u_rs(e1) == num:
                num -= view.u_rs(em) - ui - view.u_rs(c1)
            floor = max(u + view.u_rs(e) for _, u, e in child["positions"])
            trsau += Fraction(max(num, floor), Lp)

            vnum = pv["rising"]
            if has_rs and u1 + u_rrs(view, e1) == vnum:
                between = view.occ[em + 1 : c1]
                vnum -= sum(u for _, i, u in between if admit(i, u))
            vtrsau += Fraction(vnum, Lp + pd)
        report.update(rsau=rsau, trsau=trsau, vtrsau_adv=vtrsau)
    return BoundReport(**report)
