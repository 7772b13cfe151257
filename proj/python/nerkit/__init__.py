"""Audit, score, diff and repair CoNLL-03 style NER corpora."""

from ._core import (
    Corpus,
    NerkitError,
    agreement,
    apply_patch,
    classify_errors,
    convert,
    count_mention_errors,
    diff,
    parse,
    read,
    repair_transitions,
    run_cli,
    score,
)

__all__ = [
    "Corpus",
    "NerkitError",
    "agreement",
    "apply_patch",
    "classify_errors",
    "convert",
    "count_mention_errors",
    "diff",
    "parse",
    "read",
    "repair_transitions",
    "run_cli",
    "score",
]
