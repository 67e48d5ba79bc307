"""Vector file parsing, lookup normalization, and coverage filtering."""

import numpy as np
import pytest

from rootspace.datasetgen import DataPoint, SurfaceForm
from rootspace.errors import DimensionMismatch
from rootspace.morphology import Alphabet
from rootspace.vectors import (
    EmbeddingSpace,
    EmptyFile,
    NonNumericComponent,
    coverage_report,
    load_vectors,
    lookup,
    save_vectors,
)


def write(tmp_path, text, name="vecs.txt"):
    p = tmp_path / name
    p.write_text(text, encoding="utf-8")
    return p


def test_load_word2vec_header(tmp_path):
    path = write(tmp_path, "3 4\na 1 2 3 4\nb 0 0 1 0\nc -1 0.5 0 2\n")
    space = load_vectors(path)
    assert space.dim == 4 and len(space) == 3
    assert np.array_equal(space.table["a"], [1.0, 2.0, 3.0, 4.0])


def test_load_glove_headerless(tmp_path):
    path = write(tmp_path, "a 1 2 3 4\nb 5 6 7 8\n")
    space = load_vectors(path)
    assert space.dim == 4 and len(space) == 2


def test_dimension_mismatch(tmp_path):
    path = write(tmp_path, "2 4\na 1 2 3 4\nb 1 2 3\n")
    with pytest.raises(DimensionMismatch) as exc:
        load_vectors(path)
    assert exc.value.line == 3


def test_non_numeric_component(tmp_path):
    path = write(tmp_path, "a 1 2\nb 1 x\n")
    with pytest.raises(NonNumericComponent):
        load_vectors(path)
    path = write(tmp_path, "a 1 nan\n")
    with pytest.raises(NonNumericComponent):
        load_vectors(path)


def test_empty_file(tmp_path):
    with pytest.raises(EmptyFile):
        load_vectors(write(tmp_path, ""))
    with pytest.raises(EmptyFile):
        load_vectors(write(tmp_path, "0 5\n"))


def test_duplicates_last_wins(tmp_path):
    path = write(tmp_path, "a 1 2\na 3 4\n")
    space = load_vectors(path)
    assert space.n_duplicate_tokens == 1
    assert np.array_equal(space.table["a"], [3.0, 4.0])


def test_lookup_exact_and_missing(tmp_path):
    space = load_vectors(write(tmp_path, "tok 1 2 3\n"))
    assert np.array_equal(lookup(space, "tok"), [1.0, 2.0, 3.0])
    assert lookup(space, "other") is None


def test_lookup_final_form_normalization(tmp_path):
    # k has final variant K; a stored final-form token is found via its base spelling
    alphabet = Alphabet(letters="abkr", final_form_map={"k": "K"})
    space = load_vectors(write(tmp_path, "barK 1 0\nrab 0 1\n"), alphabet=alphabet)
    assert lookup(space, "bark") is not None
    assert lookup(space, "barK") is not None
    assert lookup(space, "rab") is not None


def test_save_load_roundtrip(tmp_path):
    rng = np.random.default_rng(0)
    table = {f"w{i}": rng.uniform(-1, 1, size=8) for i in range(20)}
    space = EmbeddingSpace(dim=8, table=table, source_label="test")
    out = tmp_path / "saved.txt"
    save_vectors(space, out)
    again = load_vectors(out)
    assert again.dim == 8 and len(again) == 20
    for token, vec in table.items():
        assert np.max(np.abs(again.table[token] - vec)) < 1e-6


def point(noun, denom, rvs):
    return DataPoint(
        noun=SurfaceForm(noun),
        noun_lookup_form=noun,
        denominal=SurfaceForm(denom),
        root_verbs=tuple(SurfaceForm(t) for t in rvs),
        status="kept",
    )


def make_space(tokens):
    return EmbeddingSpace(dim=2, table={t: np.array([1.0, 0.0]) for t in tokens})


def test_coverage_all_present():
    p = point("n1", "d1", ["v1", "v2"])
    report = coverage_report([p], make_space(["n1", "d1", "v1", "v2"]))
    assert report.n == 1 and report.points[0].k == 2


def test_coverage_denominal_missing_drops_point():
    p = point("n1", "d1", ["v1"])
    report = coverage_report([p], make_space(["n1", "v1"]))
    assert report.n == 0
    assert report.dropped_points == [("n1:d1", "denominal_missing", "d1")]


def test_coverage_verbs_drop_individually():
    p = point("n1", "d1", ["v1", "v2"])
    report = coverage_report([p], make_space(["n1", "d1", "v2"]))
    assert report.n == 1
    assert report.points[0].k == 1
    assert report.dropped_verbs == [("n1:d1", "v1")]
    # all verbs missing kills the point: k never reaches 0
    report = coverage_report([p], make_space(["n1", "d1"]))
    assert report.n == 0
    assert report.dropped_points[0][1] == "no_root_verbs_in_vocabulary"
