"""Bundled example graphs."""

from __future__ import annotations

from importlib import resources
from pathlib import Path

from ..equivalence import Dmeg
from ..graph import Dmg
from ..io import parse_dmeg, parse_graph


def fixture_names() -> list[str]:
    root = resources.files(__name__)
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def fixture_text(name: str) -> str:
    path = resources.files(__name__) / f"{name}.json"
    if not path.is_file():
        raise FileNotFoundError(f"no bundled fixture named {name!r}; "
                                f"available: {', '.join(fixture_names())}")
    return path.read_text(encoding="utf-8")


def fixture_path(name: str) -> Path:
    return Path(str(resources.files(__name__) / f"{name}.json"))


def load_fixture(name: str) -> Dmg:
    return parse_graph(fixture_text(name))


def load_dmeg_fixture(name: str) -> Dmeg:
    return parse_dmeg(fixture_text(name))


def graph_fixture_names() -> list[str]:
    """Fixtures holding plain graphs (not DMEG documents)."""
    return [n for n in fixture_names() if "dmeg" not in n]
