"""Dataset and result file formats, stats files and dataset generators.

Two dataset formats are read:

* ``spmf``: one sequence per line, ``item[utility]`` tokens, ``-1`` closing
  each itemset, ``-2`` closing the sequence, optional ``SUtility:N`` check.
* ``quantity``: ``item:qty`` tokens with the same separators plus an external
  utility sidecar of ``item eu`` lines.
"""

from __future__ import annotations

import logging
import random
import re
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Mapping, TextIO

from .model import Database, Pattern, QItem, QSequence

log = logging.getLogger(__name__)

_SPMF_TOKEN = re.compile(r"^(\S+?)\[(-?\d+)\]$")
_QTY_TOKEN = re.compile(r"^(\S+?):(-?\d+)$")


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None, source: str | None = None):
        self.message = message
        self.line = line
        self.source = source
        where = ""
        if source:
            where += f"{source}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {message}" if where else message)


def _lines(stream) -> Iterable[tuple[int, str]]:
    for no, raw in enumerate(stream, 1):
        line = raw.strip()
        if line and not line.startswith("#"):
            yield no, line


def detect_format(text: str) -> str:
    for _, line in _lines(text.splitlines()):
        tok = line.split()[0]
        if _SPMF_TOKEN.match(tok):
            return "spmf"
        if _QTY_TOKEN.match(tok):
            return "quantity"
        raise ParseError(f"cannot tell the format from token {tok!r}", 1)
    # nothing to parse; either reader yields an empty database
    return "spmf"


def parse_eu(stream) -> dict[str, int]:
    """``item eu`` lines, order preserved."""
    eu: dict[str, int] = {}
    for no, line in _lines(stream):
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(f"expected 'item eu', got {line!r}", no)
        name, value = parts
        try:
            v = int(value)
        except ValueError:
            raise ParseError(f"external utility {value!r} is not an integer", no) from None
        if v <= 0:
            raise ParseError(f"external utility of {name} must be positive", no)
        if name in eu:
            raise ParseError(f"duplicate external utility for {name}", no)
        eu[name] = v
    return eu


def _label_map(names: Iterable[str]) -> tuple[dict[str, int], dict[int, str] | None]:
    """Integer labels stay as they are; otherwise names are numbered in first-seen order."""
    names = list(names)
    if all(n.isdigit() for n in names):
        return {n: int(n) for n in names}, None
    labels = {n: k for k, n in enumerate(names, 1)}
    return labels, {k: n for n, k in labels.items()}


def _split_itemsets(tokens: list[str], no: int) -> list[list[str]]:
    if not tokens or tokens[-1] != "-2":
        raise ParseError("sequence must end with -2", no)
    body = tokens[:-1]
    itemsets, cur = [], []
    for tok in body:
        if tok == "-1":
            if not cur:
                raise ParseError("empty itemset", no)
            itemsets.append(cur)
            cur = []
        elif tok == "-2":
            raise ParseError("-2 before the end of the line", no)
        else:
            cur.append(tok)
    if cur:
        # tolerate a missing final -1
        itemsets.append(cur)
    if not itemsets:
        raise ParseError("empty sequence", no)
    return itemsets


def _finish_itemset(pairs: list[tuple[int, int, int]], sid: int, j: int, no: int) -> tuple[QItem, ...]:
    labels = [p[0] for p in pairs]
    if len(set(labels)) != len(labels):
        raise ParseError(f"duplicate item in itemset {j}", no)
    if labels != sorted(labels):
        log.warning("line %d: itemset %d of sequence %d was not sorted; sorting it", no, j, sid)
        pairs = sorted(pairs)
    return tuple(QItem(i, q, u) for i, q, u in pairs)


def _parse_spmf(stream, source=None) -> Database:
    seqs = []
    for no, line in _lines(stream):
        tokens = line.split()
        declared = None
        if tokens and tokens[-1].startswith("SUtility:"):
            try:
                declared = int(tokens[-1].split(":", 1)[1])
            except ValueError:
                raise ParseError(f"bad {tokens[-1]!r}", no, source) from None
            tokens = tokens[:-1]
        sid = len(seqs) + 1
        itemsets = []
        try:
            for j, raw in enumerate(_split_itemsets(tokens, no), 1):
                pairs = []
                for tok in raw:
                    m = _SPMF_TOKEN.match(tok)
                    if not m or not m.group(1).isdigit():
                        raise ParseError(f"bad token {tok!r}", no)
                    u = int(m.group(2))
                    if u <= 0:
                        raise ParseError(f"utility of item {m.group(1)} must be positive", no)
                    # per-occurrence utility input: quantity is taken as 1
                    pairs.append((int(m.group(1)), 1, u))
                itemsets.append(_finish_itemset(pairs, sid, j, no))
        except ParseError as exc:
            raise ParseError(exc.message, no, source) from None
        total = sum(q.utility for y in itemsets for q in y)
        if declared is not None and declared != total:
            raise ParseError(f"SUtility:{declared} does not match the item utilities ({total})", no, source)
        seqs.append(QSequence(sid, tuple(itemsets)))
    return Database(tuple(seqs))


def _parse_quantity(stream, eu: Mapping[str, int], source=None) -> tuple[Database, dict[int, str] | None]:
    labels, names = _label_map(eu)
    int_eu = {labels[n]: v for n, v in eu.items()}
    seqs = []
    for no, line in _lines(stream):
        sid = len(seqs) + 1
        itemsets = []
        try:
            raw_sets = _split_itemsets(line.split(), no)
        except ParseError as exc:
            raise ParseError(exc.message, no, source) from None
        for j, raw in enumerate(raw_sets, 1):
            pairs = []
            for tok in raw:
                m = _QTY_TOKEN.match(tok)
                if not m:
                    raise ParseError(f"bad token {tok!r}", no, source)
                name, q = m.group(1), int(m.group(2))
                if name not in labels:
                    raise ParseError(f"item {name} has no external utility", no, source)
                if q <= 0:
                    raise ParseError(f"quantity of item {name} must be positive", no, source)
                i = labels[name]
                pairs.append((i, q, q * int_eu[i]))
            try:
                itemsets.append(_finish_itemset(pairs, sid, j, no))
            except ParseError as exc:
                raise ParseError(exc.message, no, source) from None
        seqs.append(QSequence(sid, tuple(itemsets)))
    return Database(tuple(seqs), int_eu), names


def parse_qsdb(stream: TextIO | str, fmt: str | None = None, eu: Mapping[str, int] | TextIO | None = None, source: str | None = None) -> tuple[Database, dict[int, str] | None]:
    """Read a dataset. Returns the database and, for named items, label -> name."""
    text = stream if isinstance(stream, str) else stream.read()
    fmt = fmt or detect_format(text)
    if fmt == "spmf":
        return _parse_spmf(text.splitlines(), source), None
    if fmt == "quantity":
        if eu is None:
            raise ParseError("quantity input needs an external utility table", None, source)
        if not isinstance(eu, Mapping):
            eu = parse_eu(eu)
        return _parse_quantity(text.splitlines(), eu, source)
    raise ValueError(f"unknown format {fmt!r}")


def load_dataset(path: str | Path, eu_path: str | Path | None = None, fmt: str | None = None):
    eu = None
    if eu_path is not None:
        with open(eu_path) as f:
            eu = parse_eu(f)
    with open(path) as f:
        return parse_qsdb(f, fmt, eu, source=str(path))


def format_dataset(d: Database) -> str:
    lines = []
    for qs in d.sequences:
        sets = [" ".join(f"{q.item}[{q.utility}]" for q in y) for y in qs.itemsets]
        total = sum(q.utility for y in qs.itemsets for q in y)
        lines.append(" -1 ".join(sets) + f" -1 -2 SUtility:{total}")
    return "\n".join(lines) + "\n"


def write_dataset(d: Database, path: str | Path):
    Path(path).write_text(format_dataset(d))


# -- results -----------------------------------------------------------------


def fraction_text(v: Fraction) -> str:
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def format_results(results: Iterable[tuple[Pattern, Fraction]], names: Mapping[int, str] | None = None) -> str:
    """One ``1 2 -1 3 -2 #AUTIL: 40`` line per pattern; values are exact."""
    name = (lambda i: names.get(i, str(i))) if names else str
    lines = []
    for s, au in results:
        body = " -1 ".join(" ".join(name(i) for i in x) for x in s)
        lines.append(f"{body} -2 #AUTIL: {fraction_text(au)}")
    return "\n".join(lines) + ("\n" if lines else "")


def write_results(results, path: str | Path, names=None):
    Path(path).write_text(format_results(results, names))


def _label(token: str):
    # names that are not integers stay strings, which is enough for diffing
    return int(token) if token.isdigit() else token


def parse_results(text: str, labels: Mapping[str, int] | None = None) -> list[tuple[Pattern, Fraction]]:
    out = []
    for no, line in _lines(text.splitlines()):
        if "#AUTIL:" not in line:
            raise ParseError("missing #AUTIL", no)
        body, value = line.split("#AUTIL:", 1)
        tokens = body.split()
        if not tokens or tokens[-1] != "-2":
            raise ParseError("pattern must end with -2", no)
        itemsets = []
        for raw in " ".join(tokens[:-1]).split(" -1 ") if len(tokens) > 1 else []:
            names = raw.split()
            try:
                itemsets.append(tuple(labels[n] if labels else _label(n) for n in names))
            except (KeyError, ValueError):
                raise ParseError(f"bad item in {raw!r}", no) from None
        try:
            au = Fraction(value.strip())
        except ValueError:
            raise ParseError(f"bad utility {value.strip()!r}", no) from None
        out.append((tuple(itemsets), au))
    return out


def read_results(path: str | Path, labels=None):
    return parse_results(Path(path).read_text(), labels)


# -- stats ---------------------------------------------------------------------


def fingerprint(d: Database) -> dict[str, object]:
    lengths = [qs.length for qs in d.sequences]
    return dict(
        sequences=len(d),
        items=len(d.items()),
        total_utility=d.total_utility,
        avg_len=round(sum(lengths) / len(lengths), 3) if lengths else 0,
        max_len=max(lengths, default=0),
    )


def stats_record(stats, cfg, d: Database) -> dict[str, object]:
    rec: dict[str, object] = dict(
        candidates_generated=stats.candidates_generated,
        hausps_found=stats.hausps_found,
        wall_ms=round(stats.wall_time * 1000, 3),
        peak_mem_bytes=stats.peak_memory_estimate,
        max_depth=stats.max_depth,
    )
    for key in ("peau-node", "irrelevant-item", "unpromising-item"):
        rec[f"prunes.{key}"] = stats.prunes.get(key, 0)
    rec.update(
        {
            "config.xi": fraction_text(cfg.xi),
            "config.strategy": cfg.strategy.value,
            "config.rrs_policy": cfg.rrs_policy.value,
            "config.max_pattern_length": cfg.max_pattern_length if cfg.max_pattern_length is not None else "none",
        }
    )
    rec.update({f"dataset.{k}": v for k, v in fingerprint(d).items()})
    return rec


def format_stats(record: Mapping[str, object]) -> str:
    return "".join(f"{k}={v}\n" for k, v in record.items())


def parse_stats(text: str) -> dict[str, str]:
    return dict(line.split("=", 1) for _, line in _lines(text.splitlines()))


# -- generators ------------------------------------------------------------------


def duplicate_dataset(d: Database, k: int) -> Database:
    """``k`` back-to-back copies of ``d`` with fresh sids."""
    if k < 1:
        raise ValueError("duplication factor must be >= 1")
    seqs = []
    for _ in range(k):
        for qs in d.sequences:
            seqs.append(QSequence(len(seqs) + 1, qs.itemsets))
    return Database(tuple(seqs), dict(d.eu))


def synthetic_dataset(n_sequences: int, seed: int = 0, n_items: int = 40, max_itemsets: int = 8, max_itemset_size: int = 4, max_quantity: int = 5, max_eu: int = 20) -> Database:
    """Seeded random quantitative database with Zipf-like item popularity."""
    rng = random.Random(seed)
    items = list(range(1, n_items + 1))
    eu = {i: rng.randint(1, max_eu) for i in items}
    weights = [1 / r for r in range(1, n_items + 1)]
    seqs = []
    for sid in range(1, n_sequences + 1):
        itemsets = []
        for _ in range(rng.randint(1, max_itemsets)):
            size = rng.randint(1, max_itemset_size)
            chosen = set()
            while len(chosen) < size:
                chosen.add(rng.choices(items, weights)[0])
            itemsets.append(tuple(QItem(i, q, q * eu[i]) for i in sorted(chosen) for q in [rng.randint(1, max_quantity)]))
        seqs.append(QSequence(sid, tuple(itemsets)))
    return Database(tuple(seqs), eu)
