"""The fixed categories used by the verification suites."""

from __future__ import annotations

from functools import lru_cache
from importlib import resources

from .fincat import FinCategory, category_from_json

import json

SUITE = ("terminal", "walking_arrow", "walking_iso", "chain3", "monoid2")


@lru_cache(maxsize=None)
def load(name: str) -> FinCategory:
    text = resources.files(__package__).joinpath("data", f"{name}.json").read_text()
    return category_from_json(json.loads(text))


def suite() -> dict[str, FinCategory]:
    return {name: load(name) for name in SUITE}


def data_path(name: str):
    return resources.files(__package__).joinpath("data", f"{name}.json")
