# SPDX-License-Identifier: Apache-2.0
# Copyright 2026 The capassist authors
"""Python access to the capassist caption-checking core.

Functions taking ``bundle`` expect interchange-bundle JSON text. Structured
results come back as plain dicts and lists.
"""

import json as _json

from . import _capassist as _native
from ._capassist import (
    Error,
    build_prompt,
    find_mentions,
    normalize_figure_id,
    paired_t_test,
    parse_rating_response,
    student_t_quantile,
    t_confidence_interval,
)

__all__ = [
    "Error",
    "analyze",
    "build_prompt",
    "find_mentions",
    "generate",
    "mention_index",
    "normalize_figure_id",
    "paired_t_test",
    "parse_rating_response",
    "rank1_report",
    "rate",
    "roundtrip_bundle",
    "student_t_quantile",
    "t_confidence_interval",
    "tlx_report",
]


def roundtrip_bundle(bundle):
    """Parse and re-serialize a bundle; returns the canonical JSON text."""
    return _native.roundtrip_bundle(bundle)


def mention_index(bundle):
    return _json.loads(_native.mention_index(bundle))


def analyze(bundle, figure_id, caption=None):
    """Six-aspect check table from the rule backend."""
    return _json.loads(_native.analyze(bundle, figure_id, caption))


def rate(bundle, figure_id, caption=None):
    """Offline heuristic rating: 1 + number of satisfied content aspects."""
    return _json.loads(_native.rate(bundle, figure_id, caption))


def generate(bundle, figure_id, num_beams=5, max_words=None):
    return _json.loads(_native.generate(bundle, figure_id, num_beams, max_words))


def tlx_report(csv_text, pairs=(), level=0.95):
    return _json.loads(_native.tlx_report(csv_text, list(pairs), level))


def rank1_report(csv_text):
    return _json.loads(_native.rank1_report(csv_text))
