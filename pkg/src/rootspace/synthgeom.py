"""Synthetic embedding spaces with planted root-region geometry.

Each synthetic root gets a unit center direction on the sphere; its noun
and root-derived verbs are the center rotated by the configured angular
spread toward independent random orthogonal directions. Placing every
item at exactly its spread angle (random direction, fixed radius) makes
the similarity of two same-anchor items symmetric around its mean, which
the signed-rank test needs for its nominal level under the null; drawing
the angle uniformly in [0, spread] instead skews the paired differences
and measurably inflates the test's false-positive rate.

In the planted regime (denominal_noise < region_radius) the denominal is
a small perturbation of the noun, so it sits closer to the noun than the
verbs do. At denominal_noise == region_radius the generator switches to
the null regime: the denominal is drawn exactly like one more root verb,
making it exchangeable with them - the calibration baseline.

Randomness comes from the counter-based Philox4x64 generator keyed per
root as (seed, root_index), so generation is reproducible and roots are
independent of each other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .datasetgen import DataPoint, STATUS_KEPT
from .errors import DataError
from .morphology import SurfaceForm
from .vectors import EmbeddingSpace

__all__ = ["SynthConfig", "generate", "InvalidConfig", "RNG_ALGORITHM"]

RNG_ALGORITHM = "philox4x64 keyed (seed, root_index)"


class InvalidConfig(DataError):
    pass


@dataclass(frozen=True)
class SynthConfig:
    n_roots: int
    k_verbs: int
    dim: int
    region_radius: float
    denominal_noise: float
    seed: int

    def __post_init__(self):
        if self.dim < 3:
            raise InvalidConfig("dim must be >= 3")
        if self.n_roots < 5:
            raise InvalidConfig("n_roots must be >= 5")
        if not 1 <= self.k_verbs <= 5:
            raise InvalidConfig("k_verbs must be in 1..5")
        if not 0.0 < self.denominal_noise <= self.region_radius < math.pi / 2:
            raise InvalidConfig(
                "need 0 < denominal_noise <= region_radius < pi/2"
            )
        if not 0 <= self.seed < 2**64:
            raise InvalidConfig("seed must fit in 64 bits")

    @property
    def null_regime(self) -> bool:
        return self.denominal_noise == self.region_radius


def _unit(vec: np.ndarray) -> np.ndarray:
    return vec / np.linalg.norm(vec)


def _perturb(center: np.ndarray, spread: float, rng) -> np.ndarray:
    """Rotate ``center`` by exactly ``spread`` toward a random orthogonal
    direction; the result is unit-norm."""
    theta = spread
    while True:
        g = rng.standard_normal(center.shape[0])
        ortho = g - np.dot(g, center) * center
        norm = np.linalg.norm(ortho)
        if norm > 1e-12:
            break
    ortho /= norm
    return _unit(math.cos(theta) * center + math.sin(theta) * ortho)


def generate(config: SynthConfig):
    """Synthetic (data points, embedding space) pair; pure given the config."""
    table = {}
    points = []
    for i in range(config.n_roots):
        rng = np.random.Generator(np.random.Philox(key=[config.seed, i]))
        center = _unit(rng.standard_normal(config.dim))
        noun = _perturb(center, config.region_radius, rng)
        verbs = [
            _perturb(center, config.region_radius, rng)
            for _ in range(config.k_verbs)
        ]
        if config.null_regime:
            denom = _perturb(center, config.region_radius, rng)
        else:
            denom = _perturb(noun, config.denominal_noise, rng)
        noun_tok = f"r{i}_noun"
        denom_tok = f"r{i}_denom"
        verb_toks = [f"r{i}_v{j + 1}" for j in range(config.k_verbs)]
        table[noun_tok] = noun
        table[denom_tok] = denom
        for tok, vec in zip(verb_toks, verbs):
            table[tok] = vec
        points.append(
            DataPoint(
                noun=SurfaceForm(noun_tok),
                noun_lookup_form=noun_tok,
                denominal=SurfaceForm(denom_tok),
                root_verbs=tuple(SurfaceForm(t) for t in verb_toks),
                status=STATUS_KEPT,
            )
        )
    space = EmbeddingSpace(
        dim=config.dim,
        table=table,
        source_label=f"synth_seed{config.seed}",
    )
    return points, space
