"""Command line: ``bertvec export --model ID --words PATH --out PATH``."""

from __future__ import annotations

import argparse
import sys

from .export import (
    ExportRequest,
    ModelLoadFailure,
    TokenizationFailure,
    export,
    read_word_list,
)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise SystemExit(self._usage_exit(message))

    def _usage_exit(self, message):
        print(f"usage error: {message}", file=sys.stderr)
        return 1


def main(argv=None) -> int:
    parser = _Parser(prog="bertvec")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("export", description="export word vectors")
    p.add_argument("--model", required=True, help="model identifier or local path")
    p.add_argument("--words", required=True, help="word list file, one per line")
    p.add_argument("--out", required=True, help="output vector file")
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 1
    try:
        words = read_word_list(args.words)
        request = ExportRequest(words=words, model_id=args.model, output_path=args.out)
        out = export(request)
    except (ValueError, OSError, ModelLoadFailure, TokenizationFailure) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"export: {len(words)} vectors -> {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
