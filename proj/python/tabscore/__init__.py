"""Table extraction evaluation metrics: detection, structure and end-to-end scores."""

import json as _json
import os as _os

from . import _core
from ._core import (
    TabscoreError,
    average_precision,
    content_jaccard,
    d_ece,
    expected_indicator,
    grits_content,
    grits_topology,
    load_corpus,
    normalize_markup,
    score_pair,
    teds,
)

__version__ = "0.1.0"

__all__ = [
    "TabscoreError",
    "average_precision",
    "content_jaccard",
    "d_ece",
    "evaluate_corpus",
    "expected_indicator",
    "grits_content",
    "grits_topology",
    "load_corpus",
    "normalize_markup",
    "score_pair",
    "teds",
]


def evaluate_corpus(path, config=None):
    """Scores a JSONL corpus; returns the summary as a dict.

    ``config`` takes the same keys as a JSON config file (mode, theta_j,
    theta_c, density, bins, weighting, thresholds, nms_iou, filter_empty).
    """
    text = _json.dumps(config) if config else ""
    return _json.loads(_core.evaluate_corpus(_os.fspath(path), text))
