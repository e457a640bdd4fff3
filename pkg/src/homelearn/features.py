"""Feature vectors for object views and scenes.

Stands in for a CNN pipeline: each category gets a deterministic unit-norm
mean on the hypersphere, and views are that mean plus seeded isotropic
Gaussian noise. Precomputed embeddings can also be replayed from a text file
(one `label<TAB>v1,v2,...,vD` line per vector, `#` comments allowed).
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from pathlib import Path

import numpy as np

DEFAULT_DIM = 64

_SEED_MASK = (1 << 64) - 1


class EmbeddingFormatError(ValueError):
    """Raised for malformed embedding files; message names the line."""


def _label_entropy(label: str) -> int:
    digest = hashlib.sha256(label.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "little")


@dataclass(frozen=True)
class SyntheticCategoryModel:
    label: str
    mean: np.ndarray
    view_noise_sigma: float
    seed: int

    @property
    def dim(self) -> int:
        return self.mean.shape[0]


@dataclass(frozen=True)
class EmbeddingRecord:
    label: str
    vector: np.ndarray


def validate_feature(values: np.ndarray, dim: int) -> np.ndarray:
    """Check a feature vector's shape and finiteness; returns a float64 view."""
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 1 or arr.shape[0] != dim:
        raise ValueError(f"feature vector must have dimension {dim}, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("feature vector contains non-finite entries")
    return arr


def l2_normalize(values: np.ndarray) -> np.ndarray:
    arr = np.asarray(values, dtype=np.float64)
    norm = float(np.linalg.norm(arr))
    if norm == 0.0:
        raise ValueError("cannot normalize a zero vector")
    return arr / norm


def make_category_model(label: str, seed: int, sigma: float, dim: int = DEFAULT_DIM) -> SyntheticCategoryModel:
    """Deterministic category prototype: unit-norm mean keyed by (label, seed, dim)."""
    if not label:
        raise ValueError("label must be non-empty")
    if sigma < 0:
        raise ValueError("sigma must be >= 0")
    if dim < 1:
        raise ValueError("dim must be >= 1")
    ss = np.random.SeedSequence([seed & _SEED_MASK, _label_entropy(label), dim])
    rng = np.random.default_rng(ss)
    vec = rng.standard_normal(dim)
    norm = float(np.linalg.norm(vec))
    while norm < 1e-12:  # measure-zero, but keep the invariant unconditional
        vec = rng.standard_normal(dim)
        norm = float(np.linalg.norm(vec))
    mean = vec / norm
    mean.setflags(write=False)
    return SyntheticCategoryModel(label=label, mean=mean, view_noise_sigma=float(sigma), seed=int(seed))


def sample_view(model: SyntheticCategoryModel, view_index: int) -> np.ndarray:
    """One noisy view of the category, deterministic in (model, view_index)."""
    if view_index < 0:
        raise ValueError("view_index must be >= 0")
    if model.view_noise_sigma == 0.0:
        return model.mean.copy()
    ss = np.random.SeedSequence(
        [model.seed & _SEED_MASK, _label_entropy(model.label), model.dim, 1 + view_index]
    )
    rng = np.random.default_rng(ss)
    return model.mean + rng.standard_normal(model.dim) * model.view_noise_sigma


def load_embeddings(path: str | Path, dim: int = DEFAULT_DIM, normalize: bool = False) -> list[EmbeddingRecord]:
    """Parse an embedding file into records, validating dimension per line."""
    records: list[EmbeddingRecord] = []
    text = Path(path).read_text(encoding="utf-8")
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "\t" not in line:
            raise EmbeddingFormatError(f"line {lineno}: expected 'label<TAB>values'")
        label, _, value_part = line.partition("\t")
        label = label.strip()
        if not label:
            raise EmbeddingFormatError(f"line {lineno}: empty label")
        try:
            values = np.array([float(v) for v in value_part.split(",")], dtype=np.float64)
        except ValueError as exc:
            raise EmbeddingFormatError(f"line {lineno}: bad value ({exc})") from None
        if values.shape[0] != dim:
            raise EmbeddingFormatError(
                f"line {lineno}: expected {dim} values, got {values.shape[0]}"
            )
        if not np.all(np.isfinite(values)):
            raise EmbeddingFormatError(f"line {lineno}: non-finite value")
        if normalize:
            values = l2_normalize(values)
        records.append(EmbeddingRecord(label=label, vector=values))
    return records
