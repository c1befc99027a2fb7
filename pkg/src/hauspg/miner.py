"""Depth-first pattern growth with node-level and item-level pruning."""

from __future__ import annotations

import resource
import sys
import time
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

from . import bounds
from .bounds import RrsPolicy, RrsView
from .model import Database, Pattern, Threshold, as_fraction
from .projection import Mode, ProjectedDB, enumerate_extension_items, extend_projection, project_root


class Strategy(str, Enum):
    """Pairing of node bound and item bound.

    ``RSAU``: PEAU_Ori + RSAU. ``TRSAU``: PEAU_Ori + TRSAU.
    ``ADVANCE``: VPEAU_Adv + VTRSAU_Adv.
    """

    RSAU = "rsau"
    TRSAU = "trsau"
    ADVANCE = "advance"


class ConfigError(ValueError):
    pass


@dataclass
class MinerConfig:
    xi: Fraction | float | str
    strategy: Strategy | str = Strategy.TRSAU
    rrs_policy: RrsPolicy | str = RrsPolicy.GLOBAL
    max_pattern_length: int | None = None
    trace: bool = False
    # switches for the two pruning channels; results must not depend on them
    node_pruning: bool = True
    item_pruning: bool = True

    def __post_init__(self):
        try:
            self.xi = as_fraction(self.xi)
        except (ValueError, ZeroDivisionError) as exc:
            raise ConfigError(f"bad xi {self.xi!r}") from exc
        if not 0 < self.xi <= 1:
            raise ConfigError(f"xi must lie in (0, 1], got {self.xi}")
        self.strategy = Strategy(self.strategy)
        self.rrs_policy = RrsPolicy(self.rrs_policy)
        if self.max_pattern_length is not None and self.max_pattern_length < 1:
            raise ConfigError("max_pattern_length must be positive")


@dataclass
class MiningStats:
    candidates_generated: int = 0
    hausps_found: int = 0
    prunes: Counter = field(default_factory=Counter)
    wall_time: float = 0.0
    peak_memory_estimate: int = 0
    max_depth: int = 0
    trace: list[str] = field(default_factory=list)


ResultSet = list[tuple[Pattern, Fraction]]


def _peak_rss_bytes() -> int:
    rss = resource.getrusage(resource.RUSAGE_SELF).ru_maxrss
    # Linux reports KiB, macOS bytes
    return rss if sys.platform == "darwin" else rss * 1024


class _Run:
    def __init__(self, d: Database, cfg: MinerConfig):
        self.cfg = cfg
        self.t = Threshold.of(cfg.xi, d)
        self.minau = self.t.minau
        self._min_num = self.minau.numerator
        self._min_den = self.minau.denominator
        self.root = project_root(d)
        self.advance = cfg.strategy is Strategy.ADVANCE
        self.results: dict[Pattern, Fraction] = {}
        self.stats = MiningStats()
        self.names = None

    def node_bound(self, p: ProjectedDB) -> tuple[tuple[int, int], RrsView | None]:
        """Node measure as (numerator, denominator), plus the rising view for Advance."""
        if self.advance:
            rrs = bounds.compute_rrs(p, self.t, self.cfg.rrs_policy)
            self.stats.prunes["unpromising-item"] += rrs.excluded
            return bounds.vpeau_adv_parts(p, rrs), rrs
        return bounds.peau_ori_parts(p), None

    def item_bound(self, parent: ProjectedDB, child: ProjectedDB, parent_rrs: RrsView | None) -> tuple[int, int]:
        strategy = self.cfg.strategy
        if strategy is Strategy.RSAU:
            return bounds.rsau_parts(parent, child)
        if strategy is Strategy.TRSAU:
            return bounds.trsau_parts(parent, child)
        return bounds.vtrsau_adv_parts(parent, child, parent_rrs)

    def passes(self, bound: tuple[int, int]) -> bool:
        num, den = bound
        return num * self._min_den >= self._min_num * den

    def mine(self):
        start = time.perf_counter()
        for item in sorted({i for arr in self.root.arrays for i in arr.items}):
            child = extend_projection(self.root, item, Mode.S)
            self.aucalcu(child, self.root, None, 1)
        self.stats.hausps_found = len(self.results)
        self.stats.wall_time = time.perf_counter() - start
        self.stats.peak_memory_estimate = _peak_rss_bytes()
        ordered = sorted(self.results.items())
        return ordered, self.stats

    def aucalcu(self, child: ProjectedDB, parent: ProjectedDB, parent_rrs: RrsView | None, depth: int):
        stats = self.stats
        stats.candidates_generated += 1
        stats.max_depth = max(stats.max_depth, depth)
        if not child.exlists:
            return
        usum = bounds.utility_sum(child)
        au = None
        if self.passes((usum, child.aclen)):
            au = Fraction(usum, child.aclen)
            self.results[child.pattern] = au
        if self.cfg.trace:
            au = Fraction(usum, child.aclen)
            report = bounds.bound_report(child, self.t, self.cfg.rrs_policy, parent, parent_rrs)
            stats.trace.append(bounds.trace_line(child.pattern, au, report, self.names))
        limit = self.cfg.max_pattern_length
        if limit is not None and child.aclen >= limit:
            return
        bound, rrs = self.node_bound(child)
        if self.cfg.node_pruning and not self.passes(bound):
            stats.prunes["peau-node"] += 1
            return
        self.pgrowth(child, rrs, depth)

    def pgrowth(self, p: ProjectedDB, rrs: RrsView | None, depth: int):
        ilist, slist = enumerate_extension_items(p)
        for mode, items in ((Mode.I, ilist), (Mode.S, slist)):
            for item in items:
                child = extend_projection(p, item, mode)
                if self.cfg.item_pruning and not self.passes(self.item_bound(p, child, rrs)):
                    self.stats.prunes["irrelevant-item"] += 1
                    continue
                self.aucalcu(child, p, rrs, depth + 1)


def mine(d: Database, cfg: MinerConfig, names=None) -> tuple[ResultSet, MiningStats]:
    """All patterns with average utility >= xi * u(D), in pattern order."""
    run = _Run(d, cfg)
    run.names = names
    return run.mine()
