"""Graded word similarity in context (GWSC) toolkit.

Builds lexical-semantic fine-tuning datasets, fine-tunes a pluggable
transformer encoder with word-pair heads, predicts per-layer in-context
word similarity and similarity change, and scores predictions with the
GWSC correlation metrics. The pipeline is exposed as a FastAPI service;
the ``gwsc`` command is a thin client for it.
"""

__version__ = "0.1.0"
