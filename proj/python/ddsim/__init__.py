"""Duality diagram similarity between network representations.

Thin Python layer over the C++ core. Feature arrays are (n, d) matrices or
(n, c, h, w) feature maps; configurations are preset names (see ``presets()``)
or dicts with ``normalization`` / ``metric`` / ``comparison`` blocks.
"""

import json as _json

from ._core import (  # noqa: F401
    DDSError,
    cka,
    cka_direct,
    double_center,
    load_features,
    median_bandwidth,
    normalize,
    pairwise_matrix,
    precision_recall_at_k,
    presets,
    rsa,
    save_features,
    score,
    u_center,
)
from . import _core


def _config_text(config):
    if config is None:
        return ""
    if isinstance(config, str):
        return _json.dumps({"preset": config})
    return _json.dumps(config)


def config_digest(config=None):
    return _core.config_digest(_config_text(config))


def dds(x, y, config=None, image_ids=None):
    """Similarity score between two representations of the same images."""
    return _core.dds(x, y, _config_text(config), image_ids)


def affinity_matrix(sources, targets=None, config=None, image_ids=None):
    """Model x model similarity. ``sources``/``targets`` map model id -> features."""
    src = list(sources.items()) if isinstance(sources, dict) else list(sources)
    tgt = None
    if targets is not None:
        tgt = list(targets.items()) if isinstance(targets, dict) else list(targets)
    return _core.affinity_matrix(src, tgt, _config_text(config), image_ids)


def eval_against_groundtruth(affinity, groundtruth, source_ids, target_ids, exclude_self=True):
    return _core.eval_against_groundtruth(affinity, groundtruth, list(source_ids), list(target_ids), exclude_self)


__all__ = [
    "DDSError",
    "affinity_matrix",
    "cka",
    "cka_direct",
    "config_digest",
    "dds",
    "double_center",
    "eval_against_groundtruth",
    "load_features",
    "median_bandwidth",
    "normalize",
    "pairwise_matrix",
    "precision_recall_at_k",
    "presets",
    "rsa",
    "save_features",
    "score",
    "u_center",
]
