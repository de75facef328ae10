import json

import numpy as np
import pytest

import table8
from corpuskit.cli import main


def write_jsonl(path, objs):
    with open(path, "w", encoding="utf-8") as fh:
        for obj in objs:
            fh.write(json.dumps(obj) + "\n")


@pytest.fixture
def corpus_path(tmp_path):
    rng = np.random.default_rng(0)
    objs = []
    for i in range(300):
        words = rng.choice(["en", "to", "tre", "fire", "fem", "seks"],
                           size=rng.integers(3, 12))
        objs.append({
            "id": f"doc{i}",
            "text": " ".join(words),
            "language": ["nb", "sv", "en"][i % 3],
            "doc_type": ["book", "newspaper", "web"][i % 3],
            "source": f"s{i % 2}",
        })
    path = tmp_path / "corpus.jsonl"
    write_jsonl(path, objs)
    return path


def test_unknown_subcommand_exits_1(capsys):
    assert main(["frobnicate"]) == 1
    assert "Usage" in capsys.readouterr().err


def test_missing_required_option_exits_1():
    assert main(["lm", "train", "nothere.jsonl"]) == 1


def test_sample_fit_insufficient_sample_exits_2(tmp_path, capsys):
    scores = tmp_path / "scores.csv"
    scores.write_text("id,tokens,perplexity\na,3,10.0\nb,3,11.0\nc,3,12.0\n")
    code = main(["sample", "fit", "--scores", str(scores), "--ratio", "0.5",
                 "--out", str(tmp_path / "fit.json")])
    assert code == 2
    assert "insufficient sample" in capsys.readouterr().err


def test_full_pipeline_roundtrip(tmp_path, corpus_path, capsys):
    clean = tmp_path / "clean.jsonl"
    assert main(["corpus", "ingest", str(corpus_path), "--out", str(clean)]) == 0
    deduped = tmp_path / "dedup.jsonl"
    assert main(["corpus", "dedup", str(clean), "--out", str(deduped)]) == 0

    model = tmp_path / "model.arpa"
    assert main(["lm", "train", "--order", "2", "--out", str(model),
                 str(deduped)]) == 0
    scores = tmp_path / "scores.csv"
    assert main(["lm", "score", "--model", str(model), "--out", str(scores),
                 str(deduped)]) == 0
    assert scores.read_text().splitlines()[0] == "id,tokens,perplexity"

    fit = tmp_path / "fit.json"
    assert main(["sample", "fit", "--scores", str(scores), "--ratio", "0.8",
                 "--bins", "100", "--out", str(fit)]) == 0
    fit_data = json.loads(fit.read_text())
    assert abs(fit_data["ratio"] - 0.8) < 1e-12

    capsys.readouterr()
    assert main(["--seed", "5", "sample", "apply", "--fit", str(fit),
                 "--scores", str(scores), str(deduped)]) == 0
    out1 = capsys.readouterr().out
    assert main(["--seed", "5", "--workers", "8", "sample", "apply",
                 "--fit", str(fit), "--scores", str(scores), str(deduped)]) == 0
    out2 = capsys.readouterr().out
    assert out1 == out2  # byte-identical across worker counts
    kept = [json.loads(line) for line in out1.splitlines()]
    n_docs = len(deduped.read_text().splitlines())
    assert 0.6 * n_docs <= len(kept) <= 0.95 * n_docs

    assert main(["sample", "segment", "--scores", str(scores),
                 "--out-prefix", str(tmp_path / "seg_"), str(deduped)]) == 0
    sizes = {
        label: len((tmp_path / f"seg_{label}.jsonl").read_text().splitlines())
        for label in ("good", "medium", "bad")
    }
    assert sum(sizes.values()) == n_docs

    assert main(["corpus", "stats", "--whitespace-tokens", str(deduped)]) == 0
    stats_out = capsys.readouterr().out
    assert "fertility" in stats_out and "1.0" in stats_out


def test_balance_cli_deterministic(tmp_path, corpus_path, capsys):
    out1 = tmp_path / "b1.jsonl"
    out2 = tmp_path / "b2.jsonl"
    assert main(["--seed", "9", "corpus", "balance", str(corpus_path),
                 "--out", str(out1)]) == 0
    assert main(["--seed", "9", "--workers", "8", "corpus", "balance",
                 str(corpus_path), "--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_subset_cli_inline_predicate(tmp_path, corpus_path):
    out = tmp_path / "books.jsonl"
    assert main(["corpus", "subset", str(corpus_path), "--predicate",
                 "doc_type==book", "--out", str(out)]) == 0
    docs = [json.loads(line) for line in out.read_text().splitlines()]
    assert docs and all(d["doc_type"] == "book" for d in docs)


def test_impute_genre_cli(tmp_path):
    labeled = tmp_path / "labeled.jsonl"
    write_jsonl(labeled, [
        {"id": f"f{i}", "text": f"drage troll eventyr saga{i}",
         "doc_type": "book", "genre": "fiction"} for i in range(30)
    ] + [
        {"id": f"n{i}", "text": f"rapport analyse statistikk tall{i}",
         "doc_type": "book", "genre": "nonfiction"} for i in range(30)
    ])
    unlabeled = tmp_path / "unlabeled.jsonl"
    write_jsonl(unlabeled, [
        {"id": "u1", "text": "drage troll", "doc_type": "book"},
    ])
    out = tmp_path / "imputed.jsonl"
    assert main(["corpus", "impute-genre", "--labeled", str(labeled),
                 str(unlabeled), "--out", str(out)]) == 0
    (doc,) = [json.loads(line) for line in out.read_text().splitlines()]
    assert doc["genre"] == "fiction"


def test_validate_instructions_cli(tmp_path, capsys):
    path = tmp_path / "instructions.jsonl"
    write_jsonl(path, [
        {"instruction": "Svar", "output": "ok",
         "category": "Norwegian Culture", "domain": "Food"},
        {"instruction": "Svar", "output": "",
         "category": "Norwegian Culture", "domain": "Food"},
    ])
    assert main(["corpus", "validate-instructions", str(path)]) == 0
    captured = capsys.readouterr()
    assert "summary,passed,1" in captured.out


def test_report_cli_matches_published_totals(tmp_path, capsys):
    scores = tmp_path / "scores.csv"
    scores.write_text(table8.scores_csv())
    config = tmp_path / "skills.toml"
    config.write_text(table8.METRICS_TOML)
    assert main(["report", "--scores", str(scores), "--skills", str(config),
                 "--baseline", "base", "--out-prefix", str(tmp_path / "out_")]) == 0
    table_text = capsys.readouterr().out
    base_line = [l for l in table_text.splitlines()
                 if l.startswith("base ") or l == "base"
                 or l.startswith("base  ")][0]
    assert "413.98" in base_line
    gains_csv = (tmp_path / "out_gains.csv").read_text()
    extended = [l for l in gains_csv.splitlines() if l.startswith("extended,")][0]
    assert float(extended.split(",")[1]) == pytest.approx(6.73, abs=0.02)


def test_duplicate_id_exits_2(tmp_path, capsys):
    path = tmp_path / "dup.jsonl"
    write_jsonl(path, [{"id": "x", "text": "a"}, {"id": "x", "text": "b"}])
    assert main(["corpus", "ingest", str(path), "--out",
                 str(tmp_path / "o.jsonl")]) == 2
    assert "duplicate id" in capsys.readouterr().err
