"""Deterministic scene-layout engine.

Procedural golden layouts, rule validation, corruption datasets, layout
metrics, the enrich/generate/critique/refine agent loop and scene bundle
compilation.
"""

__version__ = "0.1.0"
