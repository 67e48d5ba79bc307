"""Corpus ingestion, candidate generation, attestation filter, review I/O.

The pipeline: match corpus nouns against nominal templates, derive a
denominal verb candidate for each mapped verb template plus the attested
root-derived verbs, keep candidates whose denominal is attested in the
corpus verb list, and round-trip the survivors through a tab-separated
review file a human can edit.

Review file columns (header required, order fixed)::

    noun  noun_template  noun_lookup_form  root  denominal
    denominal_template  root_verbs  status

``root_verbs`` is comma-separated; ``status`` is ``kept`` or ``discarded``
(``auto`` only in memory, never written). Unknown columns or statuses are
rejected.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .errors import DataError
from .morphology import (
    AmbiguityClass,
    Alphabet,
    Root,
    SurfaceForm,
    TemplateInventory,
    UnknownLetter,
    apply_template,
    denominal_root,
    extract_roots,
    inflect,
    pluralize,
)

__all__ = [
    "Corpus",
    "CorpusConfig",
    "DataPoint",
    "FunnelReport",
    "ingest_corpus",
    "generate_candidates",
    "attestation_filter",
    "export_for_review",
    "import_review",
    "MalformedLine",
    "EmptyCorpus",
    "MalformedReviewFile",
]

REVIEW_COLUMNS = (
    "noun",
    "noun_template",
    "noun_lookup_form",
    "root",
    "denominal",
    "denominal_template",
    "root_verbs",
    "status",
)

STATUS_AUTO = "auto"
STATUS_KEPT = "kept"
STATUS_DISCARDED = "discarded"


class MalformedLine(DataError):
    def __init__(self, message, line):
        self.line = line
        super().__init__(f"line {line}: {message}")


class EmptyCorpus(DataError):
    pass


class MalformedReviewFile(DataError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class CorpusConfig:
    """Column indices and PoS tag sets for a tagged-token corpus."""

    surface_col: int = 0
    pos_col: int = 1
    noun_tags: frozenset = frozenset({"N", "NN", "NOUN"})
    verb_tags: frozenset = frozenset({"V", "VB", "VERB"})


@dataclass(frozen=True)
class Corpus:
    noun_set: frozenset = frozenset()
    verb_set: frozenset = frozenset()
    token_counts: dict = field(default_factory=dict)
    n_skipped: int = 0


def ingest_corpus(stream, config: CorpusConfig, alphabet: Alphabet) -> Corpus:
    """Build a Corpus from tab-separated tagged-token lines.

    Tokens are final-form normalized; tokens whose letters fall outside the
    alphabet are counted in ``n_skipped`` rather than failing the run.
    """
    needed = max(config.surface_col, config.pos_col) + 1
    nouns, verbs = set(), set()
    counts = {}
    skipped = 0
    for lineno, line in enumerate(stream, start=1):
        line = line.rstrip("\n")
        if not line.strip():
            continue
        fields = line.split("\t")
        if len(fields) < needed:
            raise MalformedLine(
                f"need {needed} columns, got {len(fields)}", line=lineno
            )
        surface = fields[config.surface_col].strip()
        tag = fields[config.pos_col].strip()
        try:
            token = alphabet.normalize(surface)
        except UnknownLetter:
            skipped += 1
            continue
        counts[token] = counts.get(token, 0) + 1
        if tag in config.noun_tags:
            nouns.add(token)
        if tag in config.verb_tags:
            verbs.add(token)
    if not nouns and not verbs:
        raise EmptyCorpus("no tagged tokens found")
    return Corpus(
        noun_set=frozenset(nouns),
        verb_set=frozenset(verbs),
        token_counts=counts,
        n_skipped=skipped,
    )


@dataclass(frozen=True)
class DataPoint:
    """One noun, its denominal verb, and 1-5 root-derived verbs.

    ``noun``/``denominal``/``root_verbs`` carry (template, root) analyses
    when the point came out of the generator; points read back from a file
    without an inventory are surface-only and skip the analysis checks.
    """

    noun: SurfaceForm
    noun_lookup_form: str
    denominal: SurfaceForm
    root_verbs: tuple
    root: Root | None = None
    status: str = STATUS_AUTO

    def __post_init__(self):
        object.__setattr__(self, "root_verbs", tuple(self.root_verbs))
        if not 1 <= len(self.root_verbs) <= 5:
            raise ValueError(f"need 1-5 root verbs, got {len(self.root_verbs)}")
        if self.status not in (STATUS_AUTO, STATUS_KEPT, STATUS_DISCARDED):
            raise ValueError(f"bad status {self.status!r}")
        rv_texts = {rv.text for rv in self.root_verbs}
        if self.denominal.text in rv_texts:
            raise ValueError("denominal coincides with a root verb")
        if self.denominal.root is not None and self.noun.template is not None:
            if self.denominal.root != denominal_root(self.noun):
                raise ValueError("denominal root is not the augmented noun root")
        if self.root is not None:
            for rv in self.root_verbs:
                if rv.root is not None and rv.root != self.root:
                    raise ValueError("root verb does not share the point's root")

    @property
    def point_id(self) -> str:
        return f"{self.noun.text}:{self.denominal.text}"

    @property
    def k(self) -> int:
        return len(self.root_verbs)


@dataclass
class FunnelReport:
    n_candidates: int = 0
    n_auto_rejected: int = 0
    n_for_review: int = 0
    n_final: int = 0
    n_no_root_verbs: int = 0


def _lookup_form(noun: SurfaceForm) -> str:
    # plural disambiguation applies to imperative-homograph nouns only
    template = noun.template
    if (
        template.ambiguity_class is AmbiguityClass.IMPERATIVE_HOMOGRAPH
        and template.variant(len(noun.root)).plural_segments is not None
    ):
        return pluralize(noun)
    return noun.text


def generate_candidates(
    corpus: Corpus, inventory: TemplateInventory, counters: dict | None = None
) -> list[DataPoint]:
    """All (noun, denominal, root verbs) candidates the corpus supports.

    A root verb is kept when any of its inflected forms is attested in the
    corpus verb list; candidates with no attested root verb are dropped and
    counted under ``counters["no_attested_root_verbs"]``. A single noun can
    yield several candidates when more than one denominal template applies.
    Output is sorted by noun, then denominal template id.
    """
    points = {}
    dropped_no_rv = 0
    nominal = [t for t in inventory.nominal_templates if t.id in inventory.denominal_map]
    for noun_text in sorted(corpus.noun_set):
        for template in nominal:
            try:
                roots = extract_roots(noun_text, template)
            except UnknownLetter:
                continue
            for root in roots:
                noun_sf = apply_template(root, template)
                try:
                    aug = denominal_root(noun_sf)
                except (ValueError, UnknownLetter):
                    continue
                for den_id in inventory.denominal_map[template.id]:
                    den_template = inventory.templates[den_id]
                    if len(aug) not in den_template.arities:
                        continue
                    den_sf = apply_template(aug, den_template)
                    key = (noun_sf.text, den_sf.text)
                    if key in points:
                        continue
                    root_verbs = []
                    for rv_template in inventory.root_verb_templates:
                        if len(root) not in rv_template.arities:
                            continue
                        if any(
                            text in corpus.verb_set
                            for _, text in inflect(root, rv_template)
                        ):
                            root_verbs.append(apply_template(root, rv_template))
                    if not root_verbs:
                        dropped_no_rv += 1
                        continue
                    points[key] = DataPoint(
                        noun=noun_sf,
                        noun_lookup_form=_lookup_form(noun_sf),
                        denominal=den_sf,
                        root_verbs=tuple(root_verbs),
                        root=root,
                        status=STATUS_AUTO,
                    )
    if counters is not None:
        counters["no_attested_root_verbs"] = dropped_no_rv
    return sorted(
        points.values(), key=lambda p: (p.noun.text, p.denominal.template.id)
    )


def attestation_filter(points, corpus: Corpus):
    """Keep points whose denominal has an attested inflected form."""
    kept, rejected = [], []
    for point in points:
        attested = any(
            text in corpus.verb_set
            for _, text in inflect(point.denominal.root, point.denominal.template)
        )
        (kept if attested else rejected).append(point)
    report = FunnelReport(
        n_candidates=len(points),
        n_auto_rejected=len(rejected),
        n_for_review=len(kept),
        n_final=len(kept),
    )
    return kept, rejected, report


def _root_text(point: DataPoint) -> str:
    return point.root.text if point.root is not None else "-"


def export_for_review(points, path) -> None:
    """Write the review file; ``auto`` points go out as ``kept``."""
    if not points:
        raise ValueError("nothing to export")
    rows = ["\t".join(REVIEW_COLUMNS)]
    for p in points:
        status = STATUS_DISCARDED if p.status == STATUS_DISCARDED else STATUS_KEPT
        rows.append(
            "\t".join(
                [
                    p.noun.text,
                    p.noun.template.id if p.noun.template else "-",
                    p.noun_lookup_form,
                    _root_text(p),
                    p.denominal.text,
                    p.denominal.template.id if p.denominal.template else "-",
                    ",".join(rv.text for rv in p.root_verbs),
                    status,
                ]
            )
        )
    Path(path).write_text("\n".join(rows) + "\n", encoding="utf-8")


def _reanalyze(surface, template, expected_root):
    for root in extract_roots(surface, template):
        if root == expected_root:
            return apply_template(root, template)
    raise MalformedReviewFile(
        f"{surface!r} does not parse as {template.id} with root {expected_root.text!r}"
    )


def import_review(path, inventory: TemplateInventory | None = None) -> list[DataPoint]:
    """Read a review file back; analyses are rebuilt when an inventory is given.

    Rows whose template columns are ``-`` (synthetic data) stay surface-only.
    """
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines:
        raise MalformedReviewFile("empty review file")
    header = tuple(lines[0].split("\t"))
    if header != REVIEW_COLUMNS:
        raise MalformedReviewFile(f"bad header {header!r}", line=1)
    points = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        fields = line.split("\t")
        if len(fields) != len(REVIEW_COLUMNS):
            raise MalformedReviewFile(
                f"expected {len(REVIEW_COLUMNS)} fields, got {len(fields)}", line=lineno
            )
        (noun, noun_tpl, lookup, root_txt, denom, denom_tpl, rvs, status) = fields
        if status not in (STATUS_KEPT, STATUS_DISCARDED):
            raise MalformedReviewFile(f"unknown status {status!r}", line=lineno)
        rv_texts = [t for t in rvs.split(",") if t]
        if inventory is not None and noun_tpl != "-":
            try:
                template = inventory.templates[noun_tpl]
            except KeyError:
                raise MalformedReviewFile(
                    f"unknown template {noun_tpl!r}", line=lineno
                ) from None
            alphabet = template.alphabet
            if root_txt == "-":
                raise MalformedReviewFile("analyzed row lacks a root", line=lineno)
            root = Root(alphabet.segment(root_txt))
            try:
                noun_sf = _reanalyze(noun, template, root)
                den_sf = _reanalyze(
                    denom, inventory.templates[denom_tpl], denominal_root(noun_sf)
                )
            except MalformedReviewFile as exc:
                raise MalformedReviewFile(str(exc), line=lineno) from None
            root_verbs = []
            for text in rv_texts:
                for rv_tpl in inventory.root_verb_templates:
                    if root in extract_roots(text, rv_tpl):
                        root_verbs.append(apply_template(root, rv_tpl))
                        break
                else:
                    raise MalformedReviewFile(
                        f"root verb {text!r} does not parse", line=lineno
                    )
        else:
            noun_sf = SurfaceForm(noun)
            den_sf = SurfaceForm(denom)
            root = None
            root_verbs = [SurfaceForm(t) for t in rv_texts]
        try:
            points.append(
                DataPoint(
                    noun=noun_sf,
                    noun_lookup_form=lookup,
                    denominal=den_sf,
                    root_verbs=tuple(root_verbs),
                    root=root,
                    status=status,
                )
            )
        except ValueError as exc:
            raise MalformedReviewFile(str(exc), line=lineno) from None
    return points


def read_dataset(path) -> list[DataPoint]:
    """Surface-only load of a dataset file (no inventory needed)."""
    return import_review(path, inventory=None)
