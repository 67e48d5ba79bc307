"""Command-line front end wiring the pipeline end to end.

Subcommands::

    gen            corpus + inventory -> attested candidates + funnel report
    review-export  re-emit a dataset in canonical review form
    review-import  apply a human-edited review file -> final dataset
    test           dataset + vector files -> coverage, reduction, test suite
    plot           dataset + one vector file -> per-point 2D SVG + CSV
    synth          planted/null synthetic dataset + vector file

Every flag can also be given in a plain-text config file (``--config``)
as ``key = value`` lines with ``#`` comments; command-line flags win.

Exit codes: 0 success, 1 usage error, 2 data error, 3 statistical
precondition failure. No subcommand writes outside its ``--out`` target,
and outputs are only written once the whole computation has succeeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import datasetgen, figures, hypotheses, synthgeom, vectors
from .errors import DataError, StatsError
from .morphology import ALPHABETS, load_inventory
from .reduction import project2d_cosine_kernel
from .synthgeom import RNG_ALGORITHM, SynthConfig

__all__ = ["main"]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _parse_config_file(path) -> dict:
    values = {}
    for raw in Path(path).read_text(encoding="utf-8").splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise UsageError(f"config line without '=': {raw!r}")
        values[key.strip().replace("-", "_")] = value.strip()
    return values


def _merge_config(args) -> None:
    """Fill unset flags from the config file; flags always win."""
    if not getattr(args, "config", None):
        return
    values = _parse_config_file(args.config)
    for key, value in values.items():
        if not hasattr(args, key):
            continue
        if getattr(args, key) is None:
            if key == "vectors":
                setattr(args, key, value.split())
            else:
                setattr(args, key, value)


def _build_parser() -> _Parser:
    parser = _Parser(prog="rootspace")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="key = value config file")
        p.add_argument("--out", help="output directory (or file for review-export)")

    p = sub.add_parser("gen", description="generate and attest candidates")
    common(p)
    p.add_argument("--inventory", help="template inventory file")
    p.add_argument("--corpus", help="tagged-token corpus file")
    p.add_argument("--alphabet", choices=sorted(ALPHABETS), default=None)
    p.add_argument("--surface-col", type=int, default=None)
    p.add_argument("--pos-col", type=int, default=None)
    p.add_argument("--noun-tags", help="comma-separated noun PoS tags")
    p.add_argument("--verb-tags", help="comma-separated verb PoS tags")

    p = sub.add_parser("review-export", description="emit canonical review file")
    common(p)
    p.add_argument("--dataset", help="dataset/review file to re-emit")
    p.add_argument("--inventory")
    p.add_argument("--alphabet", choices=sorted(ALPHABETS), default=None)

    p = sub.add_parser("review-import", description="apply an edited review file")
    common(p)
    p.add_argument("--dataset", help="edited review file")
    p.add_argument("--inventory")
    p.add_argument("--alphabet", choices=sorted(ALPHABETS), default=None)

    p = sub.add_parser("test", description="run the hypothesis suite")
    common(p)
    p.add_argument("--dataset")
    p.add_argument(
        "--vectors",
        action="append",
        metavar="LABEL=PATH",
        help="vector file, repeatable",
    )
    p.add_argument("--format", choices=["auto", "word2vec_text", "glove_text"])
    p.add_argument("--alphabet", choices=sorted(ALPHABETS), default=None)
    p.add_argument("--min-n", type=int, default=None)
    p.add_argument("--force-dim", type=int, default=None)

    p = sub.add_parser("plot", description="per-point 2D projections")
    common(p)
    p.add_argument("--dataset")
    p.add_argument("--vectors", action="append", metavar="LABEL=PATH")
    p.add_argument("--format", choices=["auto", "word2vec_text", "glove_text"])
    p.add_argument("--alphabet", choices=sorted(ALPHABETS), default=None)

    p = sub.add_parser("synth", description="synthetic dataset + vectors")
    common(p)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--n-roots", type=int, default=None)
    p.add_argument("--k-verbs", type=int, default=None)
    p.add_argument("--dim", type=int, default=None)
    p.add_argument("--region-radius", type=float, default=None)
    p.add_argument("--denominal-noise", type=float, default=None)
    return parser


def _require(args, *names):
    for name in names:
        if getattr(args, name.replace("-", "_"), None) is None:
            raise UsageError(f"--{name} is required")


def _alphabet(args):
    return ALPHABETS[args.alphabet or "hebrew"]()


def _load_inventory(args, alphabet):
    _require(args, "inventory")
    return load_inventory(args.inventory, alphabet)


def _outdir(args) -> Path:
    _require(args, "out")
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _parse_vector_args(args):
    _require(args, "vectors")
    pairs = []
    for item in args.vectors:
        label, sep, path = item.partition("=")
        if not sep:
            label, path = Path(item).stem, item
        pairs.append((label, path))
    return pairs


def _cmd_gen(args) -> int:
    alphabet = _alphabet(args)
    inventory = _load_inventory(args, alphabet)
    _require(args, "corpus")
    config = datasetgen.CorpusConfig(
        surface_col=int(args.surface_col) if args.surface_col is not None else 0,
        pos_col=int(args.pos_col) if args.pos_col is not None else 1,
        noun_tags=frozenset(args.noun_tags.split(","))
        if args.noun_tags
        else datasetgen.CorpusConfig.noun_tags,
        verb_tags=frozenset(args.verb_tags.split(","))
        if args.verb_tags
        else datasetgen.CorpusConfig.verb_tags,
    )
    with open(args.corpus, encoding="utf-8") as fh:
        corpus = datasetgen.ingest_corpus(fh, config, alphabet)
    counters = {}
    candidates = datasetgen.generate_candidates(corpus, inventory, counters)
    kept, rejected, report = datasetgen.attestation_filter(candidates, corpus)
    report.n_no_root_verbs = counters.get("no_attested_root_verbs", 0)
    out = _outdir(args)
    if kept:
        datasetgen.export_for_review(kept, out / "candidates.tsv")
    if rejected:
        datasetgen.export_for_review(rejected, out / "rejected.tsv")
    (out / "funnel.csv").write_text(
        "n_candidates,n_auto_rejected,n_for_review,n_final,n_no_root_verbs\n"
        f"{report.n_candidates},{report.n_auto_rejected},{report.n_for_review},"
        f"{report.n_final},{report.n_no_root_verbs}\n",
        encoding="utf-8",
    )
    print(
        f"gen: {report.n_candidates} candidates -> {report.n_for_review} kept "
        f"({report.n_auto_rejected} unattested)"
    )
    return 0


def _load_dataset(args):
    _require(args, "dataset")
    inventory = None
    if args.inventory:
        inventory = load_inventory(args.inventory, _alphabet(args))
    return datasetgen.import_review(args.dataset, inventory)


def _cmd_review_export(args) -> int:
    points = _load_dataset(args)
    _require(args, "out")
    out = Path(args.out)
    if out.suffix != ".tsv":
        out.mkdir(parents=True, exist_ok=True)
        out = out / "review.tsv"
    datasetgen.export_for_review(points, out)
    print(f"review-export: {len(points)} rows -> {out}")
    return 0


def _cmd_review_import(args) -> int:
    points = _load_dataset(args)
    final = [p for p in points if p.status == datasetgen.STATUS_KEPT]
    out = _outdir(args)
    if final:
        datasetgen.export_for_review(final, out / "final.tsv")
    (out / "review_counts.csv").write_text(
        "n_reviewed,n_kept,n_discarded\n"
        f"{len(points)},{len(final)},{len(points) - len(final)}\n",
        encoding="utf-8",
    )
    print(f"review-import: kept {len(final)} of {len(points)}")
    return 0


def _cmd_test(args) -> int:
    _require(args, "dataset")
    points = datasetgen.read_dataset(args.dataset)
    alphabet = ALPHABETS[args.alphabet]() if args.alphabet else None
    config = hypotheses.SuiteConfig(
        min_n=int(args.min_n) if args.min_n is not None else 5,
        force_dim=int(args.force_dim) if args.force_dim is not None else None,
    )
    # compute everything first so a failure leaves no partial outputs
    suite_results = []
    for label, path in _parse_vector_args(args):
        space = vectors.load_vectors(
            path, fmt=args.format or "auto", source_label=label, alphabet=alphabet
        )
        suite_results.append(hypotheses.run_suite(points, space, config))
    out = _outdir(args)
    for result in suite_results:
        hypotheses.write_records_csv(result.records, out / f"records_{result.label}.csv")
        rows = ["point_id,item,token,reason"]
        for point_id, reason, token in result.coverage.dropped_points:
            rows.append(f"{point_id},point,{token},{reason}")
        for point_id, token in result.coverage.dropped_verbs:
            rows.append(f"{point_id},root_verb,{token},missing")
        (out / f"coverage_{result.label}.csv").write_text(
            "\n".join(rows) + "\n", encoding="utf-8"
        )
        figures.write_diff_histogram(
            result.records, result.label, out / f"diffs_{result.label}.png"
        )
        for note in result.notes:
            print(f"note [{result.label}]: {note}", file=sys.stderr)
    hypotheses.write_summary_csv(
        [(r.label, r.results) for r in suite_results], out / "summary.csv"
    )
    for r in suite_results:
        for name in ("H1", "H2"):
            tr = r.results[name]
            print(
                f"{r.label} {name}: n={tr.n} p={tr.p_value:.3g} "
                f"delta={tr.cliffs_delta:.2f} ({tr.magnitude})"
            )
    return 0


def _cmd_plot(args) -> int:
    _require(args, "dataset")
    points = datasetgen.read_dataset(args.dataset)
    pairs = _parse_vector_args(args)
    label, path = pairs[0]
    alphabet = ALPHABETS[args.alphabet]() if args.alphabet else None
    space = vectors.load_vectors(
        path, fmt=args.format or "auto", source_label=label, alphabet=alphabet
    )
    plots = []
    skipped = []
    for index, point in enumerate(points):
        tokens = [
            point.noun_lookup_form,
            point.denominal.text,
            *(rv.text for rv in point.root_verbs),
        ]
        kinds = ["noun", "denominal"] + ["verb"] * point.k
        vecs = [vectors.lookup(space, t) for t in tokens]
        present = [i for i, v in enumerate(vecs) if v is not None]
        if len(present) < 3:
            skipped.append(point.point_id)
            continue
        coords = project2d_cosine_kernel([vecs[i] for i in present])
        plots.append(
            (
                index,
                point.point_id,
                coords,
                [tokens[i] for i in present],
                [kinds[i] for i in present],
            )
        )
    out = _outdir(args)
    for index, point_id, coords, tokens, kinds in plots:
        stem = f"point_{index:03d}"
        figures.write_point_svg(coords, tokens, kinds, out / f"{stem}.svg", title=point_id)
        figures.write_point_csv(coords, tokens, kinds, out / f"{stem}.csv")
    if skipped:
        print(f"plot: skipped {len(skipped)} points with <3 resolvable tokens",
              file=sys.stderr)
    print(f"plot: wrote {len(plots)} point figures to {out}")
    return 0


def _cmd_synth(args) -> int:
    _require(args, "seed")
    config = SynthConfig(
        n_roots=int(args.n_roots) if args.n_roots is not None else 60,
        k_verbs=int(args.k_verbs) if args.k_verbs is not None else 4,
        dim=int(args.dim) if args.dim is not None else 50,
        region_radius=float(args.region_radius)
        if args.region_radius is not None
        else 0.5,
        denominal_noise=float(args.denominal_noise)
        if args.denominal_noise is not None
        else 0.1,
        seed=int(args.seed),
    )
    points, space = synthgeom.generate(config)
    out = _outdir(args)
    datasetgen.export_for_review(points, out / "dataset.tsv")
    vectors.save_vectors(space, out / "vectors.txt")
    metadata = {
        "rng": RNG_ALGORITHM,
        "seed": config.seed,
        "n_roots": config.n_roots,
        "k_verbs": config.k_verbs,
        "dim": config.dim,
        "region_radius": config.region_radius,
        "denominal_noise": config.denominal_noise,
        "regime": "null" if config.null_regime else "planted",
    }
    (out / "metadata.json").write_text(
        json.dumps(metadata, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    print(f"synth: {len(points)} points, {len(space.table)} vectors -> {out}")
    return 0


_COMMANDS = {
    "gen": _cmd_gen,
    "review-export": _cmd_review_export,
    "review-import": _cmd_review_import,
    "test": _cmd_test,
    "plot": _cmd_plot,
    "synth": _cmd_synth,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        _merge_config(args)
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except synthgeom.InvalidConfig as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except StatsError as exc:
        print(f"statistical precondition failed: {exc}", file=sys.stderr)
        return 3
    except (DataError, OSError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
