"""Bundled example theories and stories, with machine-checked expectations.

The manifest records, for every entry, the probabilities and causation
verdicts the engine must reproduce; the test suite walks all of them.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources

from ..core import Theory
from ..textio import StoryDocument, load_theory, parse_story


@dataclass(frozen=True)
class ProbabilityCheck:
    query: str
    context: tuple[str, ...]
    expect: str
    note: str


@dataclass(frozen=True)
class CompleteCheck:
    story: str
    cause: str
    effect: str
    expect: bool
    note: str


@dataclass(frozen=True)
class PartialCheck:
    outcome: tuple[str, ...]
    effect: str
    candidate: str
    expect: str
    note: str


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    theory_file: str
    story_files: tuple[str, ...]
    probabilities: tuple[ProbabilityCheck, ...]
    complete: tuple[CompleteCheck, ...]
    partial: tuple[PartialCheck, ...]


def read_text(filename: str) -> str:
    return resources.files(__package__).joinpath(filename).read_text(encoding="utf-8")


def theory(name: str) -> Theory:
    """Load and validate a bundled theory by entry name or file name."""
    filename = name if name.endswith(".cpl") else f"{name}.cpl"
    return load_theory(read_text(filename))


def story(filename: str, for_theory: Theory) -> StoryDocument:
    return parse_story(read_text(filename), for_theory)


def entries() -> tuple[CorpusEntry, ...]:
    raw = json.loads(read_text("manifest.json"))
    out = []
    for item in raw["entries"]:
        out.append(CorpusEntry(
            name=item["name"],
            theory_file=item["theory"],
            story_files=tuple(item["stories"]),
            probabilities=tuple(
                ProbabilityCheck(
                    p["query"], tuple(p["context"]), p["expect"], p["note"]
                )
                for p in item["probabilities"]
            ),
            complete=tuple(
                CompleteCheck(
                    c["story"], c["cause"], c["effect"], c["expect"], c["note"]
                )
                for c in item["complete"]
            ),
            partial=tuple(
                PartialCheck(
                    tuple(p["outcome"]), p["effect"], p["candidate"],
                    p["expect"], p["note"],
                )
                for p in item["partial"]
            ),
        ))
    return tuple(out)
