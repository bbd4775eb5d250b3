"""Virtual and welded links as Gauss codes: moves, invariants and tube complexes."""

from .diagram import GaussCode, canonical_form, mirror_vertical, parse, serialize, writhe

__version__ = "0.1.0"

__all__ = ["GaussCode", "parse", "serialize", "canonical_form", "mirror_vertical", "writhe"]
