import io as stdio
import logging
from fractions import Fraction

import pytest

from conftest import NAMES, XI
from hauspg import io
from hauspg.cli import cli_main
from hauspg.miner import MinerConfig, mine
from hauspg.model import sequence_utility

QUANTITY = """\
# the worked example
a:2 c:8 -1 a:1 b:4 e:5 -1 c:1 d:1 -1 e:1 f:1 -1 -2
a:1 d:8 -1 b:2 f:3 -1 a:1 d:3 f:1 -1 b:1 d:1 -1 -2
a:1 c:3 -1 c:4 b:9 g:5 -1 b:1 d:7 -1 e:6 f:2 -1 -2
"""
EU_TEXT = "a 2\nc 4\nb 1\nd 3\ne 6\nf 5\ng 8\n"


@pytest.fixture
def files(tmp_path):
    data = tmp_path / "example.txt"
    eu = tmp_path / "eu.txt"
    data.write_text(QUANTITY)
    eu.write_text(EU_TEXT)
    return tmp_path, data, eu


def test_quantity_format_matches_fixture(db):
    d, names = io.parse_qsdb(QUANTITY, eu=stdio.StringIO(EU_TEXT))
    assert d == db
    assert names == NAMES


def test_spmf_line_with_unsorted_itemset(caplog):
    line = "2[4] 3[32] -1 2[2] 1[4] 5[30] -1 3[4] 4[3] -1 5[6] 6[5] -1 -2 SUtility:90"
    with caplog.at_level(logging.WARNING):
        d, names = io.parse_qsdb(line)
    assert names is None
    assert sequence_utility(d.sequences[0]) == 90
    assert [q.item for q in d.sequences[0].itemsets[1]] == [1, 2, 5]
    assert "not sorted" in caplog.text


def test_quantity_itemset_utilities():
    d, _ = io.parse_qsdb("a:2 c:8 -1 -2", eu={"a": 2, "c": 4})
    assert [q.utility for q in d.sequences[0].itemsets[0]] == [4, 32]


def test_empty_input():
    d, _ = io.parse_qsdb("")
    assert len(d) == 0 and d.total_utility == 0


def test_round_trip(db):
    text = io.format_dataset(db)
    back, _ = io.parse_qsdb(text)
    assert io.fingerprint(back) == io.fingerprint(db)
    assert [sequence_utility(qs) for qs in back.sequences] == [90, 63, 147]


@pytest.mark.parametrize(
    "text, line",
    [
        ("1[4] -1 -2 SUtility:4\n1[4] 2[5] -1 -2 SUtility:10\n", 2),
        ("# c\n1[4] -1 -1 -2\n", 2),
        ("1[0] -1 -2\n", 1),
        ("1[4] 1[5] -1 -2\n", 1),
        ("1[4] -1\n", 1),
        ("1[x] -1 -2\n", 1),
    ],
)
def test_spmf_errors_name_the_line(text, line):
    with pytest.raises(io.ParseError) as exc:
        io.parse_qsdb(text, fmt="spmf")
    assert exc.value.line == line


@pytest.mark.parametrize("text", ["a:1 z:2 -1 -2", "a:0 -1 -2", "a:1 a:2 -1 -2", "a:1 -1 -1 -2"])
def test_quantity_errors(text):
    with pytest.raises(io.ParseError) as exc:
        io.parse_qsdb(text, fmt="quantity", eu={"a": 1})
    assert exc.value.line == 1


def test_quantity_needs_eu():
    with pytest.raises(io.ParseError):
        io.parse_qsdb("a:1 -1 -2")


@pytest.mark.parametrize("text", ["a 0\n", "a\n", "a 1\na 2\n", "a x\n"])
def test_bad_eu_tables(text):
    with pytest.raises(io.ParseError):
        io.parse_eu(stdio.StringIO(text))


def test_results_format():
    assert io.format_results([(((7,),), Fraction(40))]) == "7 -2 #AUTIL: 40\n"
    text = io.format_results([(((1, 2), (5,)), Fraction(116, 3))])
    assert text == "1 2 -1 5 -2 #AUTIL: 116/3\n"
    assert io.parse_results(text) == [(((1, 2), (5,)), Fraction(116, 3))]
    assert io.format_results([]) == ""


def test_stats_record(db):
    cfg = MinerConfig(XI)
    _, stats = mine(db, cfg)
    rec = io.parse_stats(io.format_stats(io.stats_record(stats, cfg, db)))
    for key in ("candidates_generated", "hausps_found", "wall_ms", "peak_mem_bytes", "prunes.peau-node"):
        assert key in rec
    assert rec["hausps_found"] == "11"
    assert rec["dataset.total_utility"] == "300"


def test_duplicate_dataset(db):
    d2 = io.duplicate_dataset(db, 2)
    assert len(d2) == 6 and d2.total_utility == 600
    assert [qs.sid for qs in d2.sequences] == [1, 2, 3, 4, 5, 6]
    assert io.duplicate_dataset(db, 1) == db
    with pytest.raises(ValueError):
        io.duplicate_dataset(db, 0)


def test_synthetic_is_seeded():
    a = io.synthetic_dataset(20, seed=3)
    assert a == io.synthetic_dataset(20, seed=3)
    assert a != io.synthetic_dataset(20, seed=4)


def test_cli_mine_and_oracle_agree(files):
    tmp, data, eu = files
    out, ora, stats = tmp / "r.txt", tmp / "o.txt", tmp / "s.txt"
    assert cli_main(["mine", "--input", str(data), "--eu", str(eu), "--xi", "0.12", "--output", str(out), "--stats", str(stats)]) == 0
    assert cli_main(["oracle", "--input", str(data), "--eu", str(eu), "--xi", "0.12", "--max-len", "6", "--output", str(ora)]) == 0
    assert cli_main(["diff", str(out), str(ora)]) == 0
    assert "g -2 #AUTIL: 40" in out.read_text().splitlines()
    assert "hausps_found=11" in stats.read_text()


def test_cli_diff_reports_mismatch(tmp_path, capsys):
    a, b = tmp_path / "a", tmp_path / "b"
    a.write_text("7 -2 #AUTIL: 40\n")
    b.write_text("7 -2 #AUTIL: 41\n")
    assert cli_main(["diff", str(a), str(b)]) == 1
    assert cli_main(["diff", str(a), str(a)]) == 0


def test_cli_exit_codes(files, tmp_path):
    _, data, eu = files
    out = str(tmp_path / "r.txt")
    assert cli_main(["mine", "--input", str(data), "--eu", str(eu), "--xi", "1.5", "--output", out]) == 2
    assert cli_main(["mine", "--input", str(data), "--xi", "0.1", "--output", out, "--bogus"]) == 2
    assert cli_main([]) == 2
    assert cli_main(["mine", "--input", str(tmp_path / "none"), "--xi", "0.1", "--output", out]) == 4
    bad = tmp_path / "bad.txt"
    bad.write_text("1[4] -1 -2 SUtility:5\n")
    assert cli_main(["mine", "--input", str(bad), "--xi", "0.1", "--output", out]) == 3
    assert cli_main(["oracle", "--input", str(data), "--eu", str(eu), "--xi", "0.1", "--max-len", "12", "--output", out]) == 2


def test_cli_gen_and_bench(files, tmp_path):
    _, data, eu = files
    dup = tmp_path / "dup.txt"
    assert cli_main(["gen", "--input", str(data), "--eu", str(eu), "--dup", "2", "--output", str(dup)]) == 0
    d, _ = io.load_dataset(dup)
    assert d.total_utility == 600
    syn = tmp_path / "syn.txt"
    assert cli_main(["gen", "--synthetic", "15", "--seed", "2", "--output", str(syn)]) == 0
    assert len(io.load_dataset(syn)[0]) == 15

    report = tmp_path / "bench.txt"
    assert cli_main(["bench", "--input", str(data), "--eu", str(eu), "--xi-list", "0.10,0.12,0.14", "--strategies", "trsau", "--output", str(report)]) == 0
    found = [int(line.split("=")[1]) for line in report.read_text().splitlines() if line.startswith("hausps_found=")]
    assert len(found) == 3
    assert found == sorted(found, reverse=True)
