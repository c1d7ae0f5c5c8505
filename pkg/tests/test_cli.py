"""End-to-end CLI tests on the bundled toy corpus."""

import json
from pathlib import Path

import pytest

from citealign.cli import main
from citealign.toydata import toy_corpus_path

GOLDEN_DIR = Path(__file__).parent / "golden"


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestIngest:
    def test_toy_corpus_counts(self, capsys):
        code, out, _ = run(capsys, "ingest", "--corpus", str(toy_corpus_path()))
        assert code == 0
        assert "full      13" in out
        assert "partial   7" in out
        assert "none      10" in out
        assert "total     30" in out

    def test_dangling_reference_exits_2(self, capsys, tmp_path):
        path = tmp_path / "bad.jsonl"
        path.write_text(
            '{"kind": "statement", "id": "s1", "response_id": "r1", "text": "t"}\n'
            '{"kind": "citation", "id": "c1", "document_text": "Doc text."}\n'
            '{"kind": "pair", "statement_id": "s1", "citation_id": "c99", '
            '"judgment": "none", "evidence_sentences": []}\n',
            encoding="utf-8",
        )
        code, _, err = run(capsys, "ingest", "--corpus", str(path))
        assert code == 2
        assert "dangling citation_id c99" in err

    def test_missing_file_exits_2(self, capsys, tmp_path):
        code, _, err = run(capsys, "ingest", "--corpus", str(tmp_path / "nope.jsonl"))
        assert code == 2


class TestUsageErrors:
    def test_unknown_flag_exits_1(self, capsys):
        code, _, err = run(capsys, "ingest", "--corpsu", "x")
        assert code == 1

    def test_missing_subcommand_exits_1(self, capsys):
        assert run(capsys, )[0] == 1

    def test_bad_cutoffs_exit_1(self, capsys, tmp_path):
        code, _, _ = run(
            capsys,
            "eval", "--corpus", "x", "--chunks", "y", "--scores", "z",
            "--cutoffs", "10,5",
        )
        assert code == 1


@pytest.fixture()
def pipeline(tmp_path, capsys):
    """Run chunk -> score -> eval on the toy corpus; return the artifact paths."""
    corpus = str(toy_corpus_path())
    chunks = tmp_path / "chunks.jsonl"
    scores = tmp_path / "scores.jsonl"
    out = tmp_path / "run"
    assert main(["chunk", "--corpus", corpus, "--out", str(chunks)]) == 0
    assert main(["score", "--corpus", corpus, "--chunks", str(chunks), "--out", str(scores)]) == 0
    assert (
        main(
            ["eval", "--corpus", corpus, "--chunks", str(chunks),
             "--scores", str(scores), "--out", str(out)]
        )
        == 0
    )
    capsys.readouterr()
    return {"corpus": corpus, "chunks": chunks, "scores": scores, "out": out}


class TestPipeline:
    def test_artifacts_exist_and_parse(self, pipeline):
        chunk_lines = pipeline["chunks"].read_text().strip().split("\n")
        assert len(chunk_lines) == 69  # 30 pairs over 15 documents of 2-3 chunks
        record = json.loads(chunk_lines[0])
        assert set(record) == {
            "citation_id", "index", "text", "word_count",
            "statement_id", "label", "match_score",
        }
        score_lines = [json.loads(l) for l in pipeline["scores"].read_text().strip().split("\n")]
        assert {r["metric"] for r in score_lines} == {"jaccard", "token_f1"}
        assert (pipeline["out"] / "results.jsonl").exists()
        assert (pipeline["out"] / "manifest.json").exists()

    def test_eval_prints_all_three_tables(self, capsys, pipeline):
        code, out, _ = run(
            capsys,
            "eval", "--corpus", pipeline["corpus"], "--chunks", str(pipeline["chunks"]),
            "--scores", str(pipeline["scores"]),
        )
        assert code == 0
        assert "## correlation" in out
        assert "## classification" in out
        assert "## retrieval" in out
        assert "| Metric | Pearson | Spearman | Kendall |" in out

    def test_eval_missing_metric_scores_exits_2(self, capsys, pipeline):
        code, _, err = run(
            capsys,
            "eval", "--corpus", pipeline["corpus"], "--chunks", str(pipeline["chunks"]),
            "--scores", str(pipeline["scores"]), "--metric", "bert_score",
        )
        assert code == 2
        assert "missing scores" in err

    def test_report_renders_from_export(self, capsys, pipeline):
        code, out, _ = run(
            capsys, "report", "--results", str(pipeline["out"]), "--protocol", "retrieval",
            "--format", "csv",
        )
        assert code == 0
        assert out.startswith("## retrieval")
        assert "Metric,NDCG@5,NDCG@10,NDCG@20" in out


class TestGoldenFiles:
    """The toy-corpus pipeline must keep reproducing the frozen reference run."""

    def test_export_matches_golden(self, pipeline):
        out = pipeline["out"]
        assert (out / "results.jsonl").read_bytes() == (GOLDEN_DIR / "results.jsonl").read_bytes()
        assert (out / "manifest.json").read_bytes() == (GOLDEN_DIR / "manifest.json").read_bytes()

    def test_report_matches_golden(self, capsys, pipeline, tmp_path):
        rendered = tmp_path / "tables.md"
        code, _, _ = run(
            capsys, "report", "--results", str(pipeline["out"]),
            "--format", "markdown", "--out", str(rendered),
        )
        assert code == 0
        assert rendered.read_bytes() == (GOLDEN_DIR / "tables.md").read_bytes()


class TestDeterminism:
    def test_two_full_runs_are_byte_identical(self, tmp_path, capsys):
        corpus = str(toy_corpus_path())
        outputs = []
        for name in ("first", "second"):
            base = tmp_path / name
            base.mkdir()
            chunks = base / "chunks.jsonl"
            scores = base / "scores.jsonl"
            out = base / "run"
            assert main(["chunk", "--corpus", corpus, "--out", str(chunks)]) == 0
            assert main(
                ["score", "--corpus", corpus, "--chunks", str(chunks), "--out", str(scores)]
            ) == 0
            assert main(
                ["eval", "--corpus", corpus, "--chunks", str(chunks),
                 "--scores", str(scores), "--out", str(out)]
            ) == 0
            outputs.append(
                (
                    chunks.read_bytes(),
                    scores.read_bytes(),
                    (out / "results.jsonl").read_bytes(),
                    (out / "manifest.json").read_bytes(),
                )
            )
        capsys.readouterr()
        assert outputs[0] == outputs[1]
