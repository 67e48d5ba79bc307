"""Dump per-word transformer vectors into word2vec text format.

Each word is fed to the model alone (with the tokenizer's standard
sequence delimiters). For every sub-token the last 4 hidden layers are
summed; the word vector is the average of those sums over the sub-tokens,
with delimiter positions excluded. The output file is plain word2vec
text (``N D`` header, one ``word v1 .. vD`` row per input word, input
order preserved), so any loader of that format can consume it. A sidecar
``<out>.meta.json`` records the model id and the layer policy.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

__all__ = [
    "ExportRequest",
    "ModelLoadFailure",
    "TokenizationFailure",
    "read_word_list",
    "export",
]

LAYERS_SUMMED = 4


class ModelLoadFailure(Exception):
    pass


class TokenizationFailure(Exception):
    def __init__(self, word):
        self.word = word
        super().__init__(f"word {word!r} produced no content sub-tokens")


@dataclass(frozen=True)
class ExportRequest:
    words: tuple
    model_id: str
    output_path: Path

    def __post_init__(self):
        object.__setattr__(self, "words", tuple(self.words))
        object.__setattr__(self, "output_path", Path(self.output_path))
        if not self.words:
            raise ValueError("word list is empty")
        if len(set(self.words)) != len(self.words):
            raise ValueError("word list contains duplicates")


def read_word_list(path) -> tuple:
    """One word per line, UTF-8; blanks skipped, duplicates dropped in order."""
    seen = {}
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        word = line.strip()
        if word:
            seen.setdefault(word, None)
    return tuple(seen)


def _load(model_id):
    import torch  # local import keeps module importable without torch
    from transformers import AutoModel, AutoTokenizer

    try:
        tokenizer = AutoTokenizer.from_pretrained(model_id)
        model = AutoModel.from_pretrained(model_id)
    except Exception as exc:
        raise ModelLoadFailure(f"cannot load {model_id!r}: {exc}") from exc
    model.eval()
    torch.set_grad_enabled(False)
    return tokenizer, model


def _word_vector(word, tokenizer, model):
    import torch

    encoded = tokenizer(word, return_tensors="pt", return_special_tokens_mask=True)
    special = encoded.pop("special_tokens_mask")[0]
    with torch.no_grad():
        output = model(**encoded, output_hidden_states=True)
    summed = torch.stack(output.hidden_states[-LAYERS_SUMMED:]).sum(dim=0)[0]
    content = summed[special == 0]
    if content.shape[0] == 0:
        raise TokenizationFailure(word)
    return content.mean(dim=0).double().numpy()


def export(request: ExportRequest) -> Path:
    """Run the model over the word list and write the vector file."""
    tokenizer, model = _load(request.model_id)
    dim = model.config.hidden_size
    rows = [None] * len(request.words)
    for i, word in enumerate(request.words):
        vec = _word_vector(word, tokenizer, model)
        if vec.shape[0] != dim:
            raise ModelLoadFailure(
                f"model emitted dim {vec.shape[0]}, config says {dim}"
            )
        rows[i] = vec
    lines = [f"{len(request.words)} {dim}"]
    for word, vec in zip(request.words, rows):
        lines.append(word + " " + " ".join(f"{v:.8g}" for v in vec))
    out = request.output_path
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text("\n".join(lines) + "\n", encoding="utf-8")
    meta = {
        "model": request.model_id,
        "hidden_size": dim,
        "n_words": len(request.words),
        "layer_policy": (
            f"sum of the last {LAYERS_SUMMED} hidden layers, inclusive of the "
            "final encoder output; sub-token vectors averaged with sequence "
            "delimiter positions excluded"
        ),
        "context": "words fed in isolation, no surrounding sentence",
    }
    Path(str(out) + ".meta.json").write_text(
        json.dumps(meta, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    return out
