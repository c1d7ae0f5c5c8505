"""Locator for the bundled toy corpus (30 annotated pairs, all three levels)."""

from importlib import resources
from pathlib import Path


def toy_corpus_path() -> Path:
    """Path of the toy corpus shipped with the package."""
    return Path(str(resources.files("citealign").joinpath("data/toy_corpus.jsonl")))
