"""CLI subcommands: wiring, file outputs, exit codes, idempotence."""

import os
import subprocess
import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parent.parent
DATA = Path(__file__).resolve().parent / "data"


def run_cli(*argv, cwd=None):
    env = dict(os.environ)
    env["PYTHONPATH"] = str(ROOT / "src")
    return subprocess.run(
        [sys.executable, "-m", "rootspace", *argv],
        capture_output=True,
        text=True,
        env=env,
        cwd=cwd or ROOT,
    )


def test_usage_error_exit_1():
    proc = run_cli("test")
    assert proc.returncode == 1


def test_unknown_subcommand_exit_1():
    proc = run_cli("frobnicate")
    assert proc.returncode == 1


def test_gen_matches_golden(tmp_path):
    proc = run_cli(
        "gen",
        "--inventory", str(DATA / "toy_templates.tsv"),
        "--alphabet", "latin",
        "--corpus", str(DATA / "toy_corpus.tsv"),
        "--out", str(tmp_path),
    )
    assert proc.returncode == 0, proc.stderr
    got = (tmp_path / "candidates.tsv").read_bytes()
    assert got == (DATA / "golden_candidates.tsv").read_bytes()
    funnel = (tmp_path / "funnel.csv").read_text().splitlines()[1]
    assert funnel == "5,2,3,3,0"
    # idempotence: rerunning overwrites with identical bytes
    proc = run_cli(
        "gen",
        "--inventory", str(DATA / "toy_templates.tsv"),
        "--alphabet", "latin",
        "--corpus", str(DATA / "toy_corpus.tsv"),
        "--out", str(tmp_path),
    )
    assert proc.returncode == 0
    assert (tmp_path / "candidates.tsv").read_bytes() == got


def test_synth_then_test_planted(tmp_path):
    synth_dir = tmp_path / "synth"
    proc = run_cli(
        "synth", "--seed", "3",
        "--n-roots", "40", "--k-verbs", "3", "--dim", "30",
        "--region-radius", "0.5", "--denominal-noise", "0.1",
        "--out", str(synth_dir),
    )
    assert proc.returncode == 0, proc.stderr
    assert (synth_dir / "metadata.json").exists()
    test_dir = tmp_path / "results"
    proc = run_cli(
        "test",
        "--dataset", str(synth_dir / "dataset.tsv"),
        "--vectors", f"planted={synth_dir / 'vectors.txt'}",
        "--out", str(test_dir),
    )
    assert proc.returncode == 0, proc.stderr
    rows = (test_dir / "summary.csv").read_text().splitlines()
    assert rows[0] == "model_label,hypothesis,n,p_value,delta,magnitude,levene_p,method"
    h1 = dict(zip(rows[0].split(","), rows[1].split(",")))
    assert h1["model_label"] == "planted" and h1["hypothesis"] == "H1"
    assert float(h1["p_value"]) < 1e-3
    assert (test_dir / "records_planted.csv").exists()
    assert (test_dir / "diffs_planted.png").exists()


def test_synth_determinism(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for out in (a, b):
        proc = run_cli("synth", "--seed", "11", "--n-roots", "8", "--dim", "6",
                       "--k-verbs", "2", "--out", str(out))
        assert proc.returncode == 0, proc.stderr
    assert (a / "vectors.txt").read_bytes() == (b / "vectors.txt").read_bytes()
    assert (a / "dataset.tsv").read_bytes() == (b / "dataset.tsv").read_bytes()


def test_empty_dataset_exit_3_no_partial_output(tmp_path):
    empty = tmp_path / "empty.tsv"
    empty.write_text(
        "noun\tnoun_template\tnoun_lookup_form\troot\tdenominal\t"
        "denominal_template\troot_verbs\tstatus\n"
    )
    vec = tmp_path / "v.txt"
    vec.write_text("1 2\ntok 0.5 0.5\n")
    out = tmp_path / "out"
    proc = run_cli(
        "test", "--dataset", str(empty), "--vectors", f"v={vec}", "--out", str(out)
    )
    assert proc.returncode == 3
    assert not out.exists()


def test_data_error_exit_2(tmp_path):
    proc = run_cli(
        "gen",
        "--inventory", str(DATA / "toy_templates.tsv"),
        "--alphabet", "latin",
        "--corpus", str(tmp_path / "missing.tsv"),
        "--out", str(tmp_path / "out"),
    )
    assert proc.returncode == 2


def test_review_roundtrip_via_cli(tmp_path):
    gen_dir = tmp_path / "gen"
    run_cli(
        "gen",
        "--inventory", str(DATA / "toy_templates.tsv"),
        "--alphabet", "latin",
        "--corpus", str(DATA / "toy_corpus.tsv"),
        "--out", str(gen_dir),
    )
    exported = tmp_path / "review.tsv"
    proc = run_cli(
        "review-export",
        "--dataset", str(gen_dir / "candidates.tsv"),
        "--inventory", str(DATA / "toy_templates.tsv"),
        "--alphabet", "latin",
        "--out", str(exported),
    )
    assert proc.returncode == 0, proc.stderr
    assert exported.read_bytes() == (gen_dir / "candidates.tsv").read_bytes()
    # discard one row, import, check the final set
    lines = exported.read_text().splitlines()
    lines[1] = lines[1].replace("\tkept", "\tdiscarded")
    edited = tmp_path / "edited.tsv"
    edited.write_text("\n".join(lines) + "\n")
    final_dir = tmp_path / "final"
    proc = run_cli(
        "review-import",
        "--dataset", str(edited),
        "--inventory", str(DATA / "toy_templates.tsv"),
        "--alphabet", "latin",
        "--out", str(final_dir),
    )
    assert proc.returncode == 0, proc.stderr
    final_rows = (final_dir / "final.tsv").read_text().splitlines()
    assert len(final_rows) == 3  # header + 2 kept
    counts = (final_dir / "review_counts.csv").read_text().splitlines()[1]
    assert counts == "3,2,1"


def test_plot_outputs(tmp_path):
    synth_dir = tmp_path / "synth"
    run_cli("synth", "--seed", "5", "--n-roots", "6", "--dim", "5",
            "--k-verbs", "2", "--out", str(synth_dir))
    plot_dir = tmp_path / "plots"
    proc = run_cli(
        "plot",
        "--dataset", str(synth_dir / "dataset.tsv"),
        "--vectors", f"s={synth_dir / 'vectors.txt'}",
        "--out", str(plot_dir),
    )
    assert proc.returncode == 0, proc.stderr
    svgs = sorted(plot_dir.glob("*.svg"))
    csvs = sorted(plot_dir.glob("*.csv"))
    assert len(svgs) == 6 and len(csvs) == 6
    body = svgs[0].read_text()
    assert body.startswith("<svg") and body.rstrip().endswith("</svg>")
    for glyph in ("circle", "rect", "polygon"):
        assert f"<{glyph}" in body
    header = csvs[0].read_text().splitlines()[0]
    assert header == "token,kind,x,y"


def test_config_file_supplies_flags(tmp_path):
    config = tmp_path / "run.conf"
    config.write_text(
        "# fixture run\n"
        f"inventory = {DATA / 'toy_templates.tsv'}\n"
        "alphabet = latin\n"
        f"corpus = {DATA / 'toy_corpus.tsv'}\n"
        f"out = {tmp_path / 'gen'}\n"
    )
    proc = run_cli("gen", "--config", str(config))
    assert proc.returncode == 0, proc.stderr
    assert (tmp_path / "gen" / "candidates.tsv").exists()
    # explicit flag beats the config value
    proc = run_cli("gen", "--config", str(config), "--out", str(tmp_path / "other"))
    assert proc.returncode == 0
    assert (tmp_path / "other" / "candidates.tsv").exists()
