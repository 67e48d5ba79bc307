"""Similarity statistics and the inferential suite.

For each data point the noun/denominal cosine similarity is compared with
the noun/root-verb similarities aggregated two ways:

* main hypothesis  - the denominal beats the MEAN root-verb similarity,
* strong hypothesis - it beats the MAX.

Both paired-difference samples go through a one-tailed Wilcoxon
signed-rank test (exact by enumeration up to a crossover n, tie-corrected
normal approximation with continuity correction above), Cliff's dominance
delta with the conventional magnitude labels, and a Levene pre-test on the
two similarity samples. No multiple-comparison correction is applied: the
strong hypothesis entails the main one by construction (max >= mean).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy import stats as spstats

from .errors import DimensionMismatch, StatsError, ZeroVector
from .reduction import reduce_rows
from .vectors import EmbeddingSpace, coverage_report, lookup

__all__ = [
    "SimilarityRecord",
    "TestResult",
    "SuiteConfig",
    "SuiteResult",
    "cosine_similarity",
    "similarity_records",
    "wilcoxon_one_tailed",
    "cliffs_delta",
    "magnitude_label",
    "levene_test",
    "run_suite",
    "write_records_csv",
    "write_summary_csv",
    "AllZeros",
    "EmptySample",
    "InsufficientData",
    "TooFewPoints",
]

# |delta| boundaries for negligible / small / medium / large; boundary
# values take the higher label.
MAGNITUDE_THRESHOLDS = (0.147, 0.33, 0.474)


class AllZeros(StatsError):
    pass


class EmptySample(StatsError):
    pass


class InsufficientData(StatsError):
    pass


class TooFewPoints(StatsError):
    pass


def cosine_similarity(u, v) -> float:
    """<u,v> / (|u||v|), clamped to [-1, 1] against rounding."""
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.shape != v.shape:
        raise DimensionMismatch(f"shapes {u.shape} vs {v.shape}")
    nu = np.linalg.norm(u)
    nv = np.linalg.norm(v)
    if nu == 0.0 or nv == 0.0:
        raise ZeroVector("cosine of a zero vector is undefined")
    return float(np.clip(np.dot(u, v) / (nu * nv), -1.0, 1.0))


@dataclass(frozen=True)
class SimilarityRecord:
    """Per-point similarities; the strong difference never exceeds the main one."""

    point_id: str
    s_denom: float
    s_root: tuple
    d_h1: float = field(init=False)
    d_h2: float = field(init=False)

    def __post_init__(self):
        if not self.s_root:
            raise EmptySample("record needs at least one root-verb similarity")
        object.__setattr__(self, "d_h1", self.s_denom - self.mean_s_root)
        object.__setattr__(self, "d_h2", self.s_denom - self.max_s_root)

    @property
    def k(self):
        return len(self.s_root)

    @property
    def mean_s_root(self):
        return float(np.mean(self.s_root))

    @property
    def max_s_root(self):
        return float(np.max(self.s_root))


def similarity_records(points, vector_of) -> list[SimilarityRecord]:
    """Build one record per point; ``vector_of`` maps token -> vector."""
    records = []
    for point in points:
        noun_vec = vector_of[point.noun_lookup_form]
        records.append(
            SimilarityRecord(
                point_id=point.point_id,
                s_denom=cosine_similarity(noun_vec, vector_of[point.denominal.text]),
                s_root=tuple(
                    cosine_similarity(noun_vec, vector_of[rv.text])
                    for rv in point.root_verbs
                ),
            )
        )
    return records


def _average_ranks(values: np.ndarray) -> np.ndarray:
    return spstats.rankdata(values, method="average")


def _exact_upper_tail(double_ranks, target) -> float:
    """P(W+ >= target/2) by counting subset sums; ranks doubled to integers."""
    total = int(double_ranks.sum())
    counts = np.zeros(total + 1, dtype=np.int64)
    counts[0] = 1
    for r in double_ranks:
        counts[r:] = counts[r:] + counts[:-r if r else None]
    return float(counts[target:].sum()) / 2.0 ** len(double_ranks)


def wilcoxon_one_tailed(diffs, method: str = "auto", exact_threshold: int = 20):
    """One-tailed signed-rank test of location > 0.

    Zero differences are dropped (classic zero-removal). Returns
    ``(p_value, method_used)`` with method ``"exact"`` (full enumeration of
    sign assignments, exact under ties) for n <= ``exact_threshold`` and
    ``"normal_approx"`` (tie-corrected variance, 0.5 continuity correction)
    above.
    """
    d = np.asarray([x for x in diffs if x != 0.0], dtype=np.float64)
    n = len(d)
    if n == 0:
        raise AllZeros("no informative pairs after zero removal")
    ranks = _average_ranks(np.abs(d))
    w_plus = float(ranks[d > 0].sum())
    if method == "auto":
        method = "exact" if n <= exact_threshold else "normal_approx"
    if method == "exact":
        double_ranks = np.rint(ranks * 2).astype(np.int64)
        target = int(round(w_plus * 2))
        return _exact_upper_tail(double_ranks, target), "exact"
    if method != "normal_approx":
        raise ValueError(f"unknown method {method!r}")
    mean = n * (n + 1) / 4.0
    var = n * (n + 1) * (2 * n + 1) / 24.0
    _, tie_counts = np.unique(np.abs(d), return_counts=True)
    var -= float(np.sum(tie_counts**3 - tie_counts)) / 48.0
    if var <= 0.0:
        return (1.0 if w_plus <= mean else 2.0**-n), "normal_approx"
    z = (w_plus - mean - 0.5) / math.sqrt(var)
    return float(spstats.norm.sf(z)), "normal_approx"


def magnitude_label(delta: float) -> str:
    a = abs(delta)
    if a < MAGNITUDE_THRESHOLDS[0]:
        return "negligible"
    if a < MAGNITUDE_THRESHOLDS[1]:
        return "small"
    if a < MAGNITUDE_THRESHOLDS[2]:
        return "medium"
    return "large"


def cliffs_delta(a, b):
    """Dominance delta of sample ``a`` over ``b`` and its magnitude label.

    delta = (#{a_i > b_j} - #{a_i < b_j}) / (|a| |b|), computed with exact
    integer counts via binary search on the sorted second sample.
    """
    a = list(a)
    b = list(b)
    if not a or not b:
        raise EmptySample("cliffs_delta needs two non-empty samples")
    sorted_b = np.sort(np.asarray(b, dtype=np.float64))
    arr_a = np.asarray(a, dtype=np.float64)
    gt = int(np.searchsorted(sorted_b, arr_a, side="left").sum())
    lt = int((len(b) - np.searchsorted(sorted_b, arr_a, side="right")).sum())
    delta = (gt - lt) / (len(a) * len(b))
    return delta, magnitude_label(delta)


def levene_test(a, b) -> float:
    """Classic Levene test on absolute deviations from the group means.

    Returns the p-value from F(1, n_a + n_b - 2).
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if len(a) < 2 or len(b) < 2:
        raise InsufficientData("each group needs at least 2 observations")
    za = np.abs(a - a.mean())
    zb = np.abs(b - b.mean())
    n_a, n_b = len(a), len(b)
    grand = np.concatenate([za, zb]).mean()
    numerator = (n_a + n_b - 2) * (
        n_a * (za.mean() - grand) ** 2 + n_b * (zb.mean() - grand) ** 2
    )
    denominator = np.sum((za - za.mean()) ** 2) + np.sum((zb - zb.mean()) ** 2)
    if denominator == 0.0:
        return 1.0 if numerator == 0.0 else 0.0
    stat = numerator / denominator
    return float(spstats.f.sf(stat, 1, n_a + n_b - 2))


@dataclass(frozen=True)
class TestResult:
    hypothesis: str  # "H1" | "H2"
    n: int
    p_value: float
    cliffs_delta: float
    magnitude: str
    levene_p: float
    method: str

    def __post_init__(self):
        if self.magnitude != magnitude_label(self.cliffs_delta):
            raise ValueError("magnitude label inconsistent with delta")


@dataclass(frozen=True)
class SuiteConfig:
    min_n: int = 5
    exact_threshold: int = 20
    force_dim: int | None = None
    alpha: float = 0.05  # only for the entailment diagnostic


@dataclass
class SuiteResult:
    label: str
    records: list
    results: dict  # "H1"/"H2" -> TestResult
    coverage: object
    reduced_dim: int
    notes: list = field(default_factory=list)


def run_suite(points, space: EmbeddingSpace, config: SuiteConfig = SuiteConfig()):
    """Coverage-filter, reduce, and test both hypotheses on one model."""
    coverage = coverage_report(points, space)
    kept = coverage.points
    if len(kept) < config.min_n:
        raise TooFewPoints(
            f"{len(kept)} covered points < min_n={config.min_n} for {space.source_label}"
        )
    tokens = sorted(
        {
            space.normalize_token(t)
            for p in kept
            for t in (
                p.noun_lookup_form,
                p.denominal.text,
                *(rv.text for rv in p.root_verbs),
            )
        }
    )
    rows = np.vstack([lookup(space, t) for t in tokens])
    coords, _, k_dim = reduce_rows(rows, force_dim=config.force_dim)
    vector_of = {t: coords[i] for i, t in enumerate(tokens)}
    # forms were normalized during coverage; route lookups through the same map
    vector_of = _NormalizedView(vector_of, space)
    records = similarity_records(kept, vector_of)

    s_denom = [r.s_denom for r in records]
    results = {}
    for name, diffs, aggregated in (
        ("H1", [r.d_h1 for r in records], [r.mean_s_root for r in records]),
        ("H2", [r.d_h2 for r in records], [r.max_s_root for r in records]),
    ):
        p, method = wilcoxon_one_tailed(
            diffs, exact_threshold=config.exact_threshold
        )
        delta, magnitude = cliffs_delta(s_denom, aggregated)
        results[name] = TestResult(
            hypothesis=name,
            n=len(records),
            p_value=p,
            cliffs_delta=delta,
            magnitude=magnitude,
            levene_p=levene_test(s_denom, aggregated),
            method=method,
        )

    notes = []
    if (
        results["H2"].p_value < config.alpha
        and results["H1"].p_value >= config.alpha
    ):
        # expected direction is strong => main; the reverse is worth flagging
        notes.append(
            "strong hypothesis significant while the main one is not; "
            "check the data"
        )
    return SuiteResult(
        label=space.source_label,
        records=records,
        results=results,
        coverage=coverage,
        reduced_dim=k_dim,
        notes=notes,
    )


class _NormalizedView:
    def __init__(self, table, space):
        self._table = table
        self._space = space

    def __getitem__(self, token):
        return self._table[self._space.normalize_token(token)]


RECORD_COLUMNS = "point_id,s_denom,k,mean_s_root,max_s_root,d_h1,d_h2"
SUMMARY_COLUMNS = "model_label,hypothesis,n,p_value,delta,magnitude,levene_p,method"


def write_records_csv(records, path) -> None:
    rows = [RECORD_COLUMNS]
    for r in records:
        rows.append(
            f"{r.point_id},{r.s_denom!r},{r.k},{r.mean_s_root!r},"
            f"{r.max_s_root!r},{r.d_h1!r},{r.d_h2!r}"
        )
    Path(path).write_text("\n".join(rows) + "\n", encoding="utf-8")


def write_summary_csv(labeled_results, path) -> None:
    """``labeled_results``: iterable of (label, {"H1": TestResult, ...})."""
    rows = [SUMMARY_COLUMNS]
    for label, results in labeled_results:
        for name in ("H1", "H2"):
            r = results[name]
            rows.append(
                f"{label},{name},{r.n},{r.p_value!r},{r.cliffs_delta!r},"
                f"{r.magnitude},{r.levene_p!r},{r.method}"
            )
    Path(path).write_text("\n".join(rows) + "\n", encoding="utf-8")
