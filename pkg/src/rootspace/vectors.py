"""Static word-vector file parsing, lookup, and dataset coverage.

Supports the two common text layouts: word2vec/fastText ``.vec`` (first
line ``N D``) and headerless GloVe. Numbers are parsed as 64-bit floats;
the writer emits 6 significant digits.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .errors import DataError, DimensionMismatch
from .morphology import Alphabet, UnknownLetter

__all__ = [
    "EmbeddingSpace",
    "load_vectors",
    "save_vectors",
    "lookup",
    "coverage_report",
    "CoverageReport",
    "NonNumericComponent",
    "EmptyFile",
]


class NonNumericComponent(DataError):
    def __init__(self, message, line):
        self.line = line
        super().__init__(f"line {line}: {message}")


class EmptyFile(DataError):
    pass


@dataclass
class EmbeddingSpace:
    """token -> float64 vector, all of one dimension."""

    dim: int
    table: dict
    source_label: str = ""
    n_duplicate_tokens: int = 0
    alphabet: Alphabet | None = None

    def __len__(self):
        return len(self.table)

    def normalize_token(self, token: str) -> str:
        if self.alphabet is None:
            return token
        try:
            return self.alphabet.normalize(token)
        except UnknownLetter:
            return token


def _detect_format(first_line: str) -> str:
    fields = first_line.split()
    if len(fields) == 2:
        try:
            int(fields[0]), int(fields[1])
            return "word2vec_text"
        except ValueError:
            pass
    return "glove_text"


def load_vectors(
    path,
    fmt: str = "auto",
    source_label: str | None = None,
    alphabet: Alphabet | None = None,
) -> EmbeddingSpace:
    """Parse a vector text file; duplicate tokens keep the last row seen."""
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    lines = [(i, ln) for i, ln in enumerate(lines, start=1) if ln.strip()]
    if not lines:
        raise EmptyFile(f"{path}: no vector rows")
    if fmt == "auto":
        fmt = _detect_format(lines[0][1])
    dim = None
    if fmt == "word2vec_text":
        header = lines[0][1].split()
        if len(header) != 2:
            raise DimensionMismatch("bad word2vec header", line=lines[0][0])
        dim = int(header[1])
        lines = lines[1:]
        if not lines:
            raise EmptyFile(f"{path}: header but no rows")
    elif fmt != "glove_text":
        raise ValueError(f"unknown format {fmt!r}")

    space = EmbeddingSpace(
        dim=0,
        table={},
        source_label=source_label or Path(path).stem,
        alphabet=alphabet,
    )
    duplicates = 0
    for lineno, line in lines:
        fields = line.rstrip().split(" ")
        token, comps = fields[0], fields[1:]
        if dim is None:
            dim = len(comps)
            if dim == 0:
                raise DimensionMismatch("row with no components", line=lineno)
        if len(comps) != dim:
            raise DimensionMismatch(
                f"expected {dim} components, got {len(comps)}", line=lineno
            )
        try:
            vec = np.array([float(c) for c in comps], dtype=np.float64)
        except ValueError:
            raise NonNumericComponent(f"bad component in {token!r}", line=lineno) from None
        if not np.all(np.isfinite(vec)):
            raise NonNumericComponent(f"non-finite component in {token!r}", line=lineno)
        key = space.normalize_token(token)
        if key in space.table:
            duplicates += 1
        space.table[key] = vec
    space.dim = dim
    space.n_duplicate_tokens = duplicates
    return space


def save_vectors(space: EmbeddingSpace, path) -> None:
    """Write word2vec text format, 6 significant digits per component."""
    rows = [f"{len(space.table)} {space.dim}"]
    for token, vec in space.table.items():
        rows.append(token + " " + " ".join(f"{v:.6g}" for v in vec))
    Path(path).write_text("\n".join(rows) + "\n", encoding="utf-8")


def lookup(space: EmbeddingSpace, token: str):
    """Exact-match lookup after final-form normalization; None if absent."""
    return space.table.get(space.normalize_token(token))


@dataclass
class CoverageReport:
    points: list = field(default_factory=list)
    dropped_points: list = field(default_factory=list)  # (point_id, reason, token)
    dropped_verbs: list = field(default_factory=list)  # (point_id, token)

    @property
    def n(self):
        return len(self.points)


def coverage_report(points, space: EmbeddingSpace) -> CoverageReport:
    """Resolve every form of every point; drop what the vocabulary misses.

    A point dies when its noun lookup form or denominal is missing, or when
    none of its root verbs resolve; root verbs drop individually. k never
    grows and survivors always keep k >= 1.
    """
    report = CoverageReport()
    for point in points:
        if lookup(space, point.noun_lookup_form) is None:
            report.dropped_points.append(
                (point.point_id, "noun_missing", point.noun_lookup_form)
            )
            continue
        if lookup(space, point.denominal.text) is None:
            report.dropped_points.append(
                (point.point_id, "denominal_missing", point.denominal.text)
            )
            continue
        kept_rvs = []
        for rv in point.root_verbs:
            if lookup(space, rv.text) is None:
                report.dropped_verbs.append((point.point_id, rv.text))
            else:
                kept_rvs.append(rv)
        if not kept_rvs:
            report.dropped_points.append(
                (point.point_id, "no_root_verbs_in_vocabulary", "")
            )
            continue
        if len(kept_rvs) == point.k:
            report.points.append(point)
        else:
            report.points.append(replace(point, root_verbs=tuple(kept_rvs)))
    return report
