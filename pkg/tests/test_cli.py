import json

import pytest

from errortree.cli import main


@pytest.fixture()
def dict_file(tmp_path):
    path = tmp_path / "dict.txt"
    path.write_text("ACGT\nAGGT\nTTTT\n")
    return path


@pytest.fixture()
def built(dict_file, tmp_path, capsys):
    index = tmp_path / "d.idx"
    assert main(["build", "--input", str(dict_file), "--index", str(index), "--k", "2"]) == 0
    capsys.readouterr()
    return index


def test_build_summary(dict_file, tmp_path, capsys):
    index = tmp_path / "d.idx"
    rc = main(["build", "--input", str(dict_file), "--index", str(index), "--k", "1", "--json"])
    out = capsys.readouterr().out
    assert rc == 0
    record = json.loads(out)
    assert record["sequences"] == 3 and record["k"] == 1
    assert index.exists()


def test_build_missing_file(tmp_path):
    assert main(["build", "--input", str(tmp_path / "nope.txt"), "--index", str(tmp_path / "x.idx")]) == 2


def test_build_two_string_entry_count(tmp_path, capsys):
    # hand count: {"AA","AB"} at k=1 stores exactly one table entry
    src = tmp_path / "two.txt"
    src.write_text("AA\nAB\n")
    rc = main(["build", "--input", str(src), "--index", str(tmp_path / "two.idx"),
               "--k", "1", "--no-indels", "--alphabet", "ascii", "--json"])
    record = json.loads(capsys.readouterr().out)
    assert rc == 0 and record["table_entries"] == 1


def test_build_bad_symbol(tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("ACGT\nACGX\n")
    assert main(["build", "--input", str(bad), "--index", str(tmp_path / "x.idx")]) == 2


def test_query_output_sorted(built, capsys):
    rc = main(["query", "--index", str(built), "--pattern", "ACGT", "--k", "1"])
    out = capsys.readouterr().out
    assert rc == 0
    assert out.splitlines() == ["0\t0\thamming", "1\t1\thamming"]


def test_query_k_above_capability(built, capsys):
    assert main(["query", "--index", str(built), "--pattern", "ACGT", "--k", "3"]) == 3


def test_query_patterns_file(built, tmp_path, capsys):
    pats = tmp_path / "pats.txt"
    pats.write_text("ACGT\nTTTT\n")
    rc = main(["query", "--index", str(built), "--patterns-file", str(pats), "--k", "0", "--json"])
    out = capsys.readouterr().out
    assert rc == 0
    records = [json.loads(line) for line in out.splitlines()]
    assert {r["subject"] for r in records} == {0, 2}


def test_verify_pass_and_determinism(built, capsys):
    args = ["verify", "--index", str(built), "--metric", "edit", "--k", "2",
            "--samples", "30", "--seed", "9"]
    assert main(args) == 0
    first = capsys.readouterr().out
    assert main(args) == 0
    assert capsys.readouterr().out == first
    assert first.startswith("PASS")


def test_verify_zero_samples(built, capsys):
    assert main(["verify", "--index", str(built), "--samples", "0"]) == 0
    assert capsys.readouterr().out.startswith("PASS")


def test_verify_wildcard_metric(built, capsys):
    rc = main(["verify", "--index", str(built), "--metric", "wildcard", "--k", "2",
               "--samples", "40", "--seed", "2"])
    assert rc == 0
    assert capsys.readouterr().out.startswith("PASS")


def test_build_k0_exact_index(dict_file, tmp_path, capsys):
    index = tmp_path / "k0.idx"
    rc = main(["build", "--input", str(dict_file), "--index", str(index),
               "--k", "0", "--json"])
    record = json.loads(capsys.readouterr().out)
    assert rc == 0 and record["table_entries"] == 0
    rc = main(["query", "--index", str(index), "--pattern", "ACGT", "--k", "0"])
    assert rc == 0
    assert capsys.readouterr().out.splitlines() == ["0\t0\thamming"]


def test_stats_json_and_figure(built, tmp_path, capsys):
    figdir = tmp_path / "figs"
    rc = main(["stats", "--index", str(built), "--json", "--figures", str(figdir)])
    out = capsys.readouterr().out
    assert rc == 0
    record = json.loads(out)
    assert record["total_entries"] > 0 and "growth_ratio" in record
    assert (figdir / "table_profile.png").stat().st_size > 0


def test_bench_csv(built, tmp_path, capsys):
    figdir = tmp_path / "bfigs"
    rc = main(["bench", "--index", str(built), "--metric", "hamming", "--k", "1",
               "--samples", "10", "--seed", "4", "--figures", str(figdir), "--threads", "2"])
    out = capsys.readouterr().out
    assert rc == 0
    lines = out.splitlines()
    assert lines[0] == "phase,metric,k,queries,median_us,p95_us,total_ms"
    assert lines[1].startswith("index,hamming,1,10,")
    assert lines[2].startswith("oracle,hamming,1,10,")
    assert (figdir / "bench_latency.png").stat().st_size > 0


def test_bench_zero_queries(built, capsys):
    rc = main(["bench", "--index", str(built), "--samples", "0"])
    out = capsys.readouterr().out
    assert rc == 0
    assert out.splitlines() == ["phase,metric,k,queries,median_us,p95_us,total_ms"]


def test_text_mode_fasta(tmp_path, capsys):
    fasta = tmp_path / "t.fa"
    fasta.write_text(">chr1 test\nACGTACGT\nACGT\n>chr2\nTTTT\n")
    index = tmp_path / "t.idx"
    rc = main(["build", "--mode", "text", "--input", str(fasta), "--index", str(index),
               "--k", "1", "--m", "4"])
    assert rc == 0
    capsys.readouterr()
    rc = main(["query", "--index", str(index), "--pattern", "ACGT", "--k", "0"])
    out = capsys.readouterr().out
    assert rc == 0
    assert [line.split("\t")[0] for line in out.splitlines()] == ["1", "5", "9"]


def test_text_mode_requires_m(tmp_path):
    fasta = tmp_path / "t.fa"
    fasta.write_text("ACGT\n")
    assert main(["build", "--mode", "text", "--input", str(fasta),
                 "--index", str(tmp_path / "x.idx")]) == 2
