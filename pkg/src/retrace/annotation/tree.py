"""The citation-intent decision tree.

Annotators pick an intent by walking macro category -> subcategory
column -> row -> option, reading a guide sentence that substitutes
their current choices. The tree ships as a versioned JSON config so
teams can extend it; loading validates every leaf against the intent
vocabulary and every vocabulary entry against the leaves.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Mapping, Sequence

from ..errors import ConfigError, DomainError
from ..jsonio import read_json


@dataclass(frozen=True)
class TraversalState:
    """Either a resolved leaf (complete) or the next question to ask."""

    complete: bool
    function: str | None = None
    question: str | None = None
    options: tuple[str, ...] = ()
    guide_sentence: str | None = None

    def to_dict(self) -> dict:
        return {
            "complete": self.complete,
            "function": self.function,
            "question": self.question,
            "options": list(self.options),
            "guide_sentence": self.guide_sentence,
        }


class CitoDecisionTree:
    def __init__(self, config: Mapping):
        self.vocabulary: tuple[str, ...] = tuple(config["vocabulary"])
        self.macros: list[dict] = list(config["macros"])
        self.version = config.get("version", 1)
        self._validate()

    @classmethod
    def default(cls) -> "CitoDecisionTree":
        raw = resources.files("retrace.data").joinpath("cito_decision_tree.json").read_text("utf-8")
        return cls(json.loads(raw))

    @classmethod
    def load(cls, path: str | Path) -> "CitoDecisionTree":
        return cls(read_json(path))

    def _validate(self) -> None:
        if len(set(self.vocabulary)) != len(self.vocabulary):
            raise ConfigError("intent vocabulary has duplicates")
        leaves = set(self.leaf_functions())
        unknown = leaves - set(self.vocabulary)
        if unknown:
            raise ConfigError(f"tree leaves not in vocabulary: {sorted(unknown)}")
        unreachable = set(self.vocabulary) - leaves
        if unreachable:
            raise ConfigError(f"vocabulary entries unreachable in tree: {sorted(unreachable)}")

    def leaf_functions(self) -> list[str]:
        out = []
        for macro in self.macros:
            for column in macro["columns"]:
                for row in column["rows"]:
                    for opt in row["options"]:
                        out.append(opt["function"])
        return out

    def leaf_paths(self) -> dict[str, tuple[str, ...]]:
        """One concrete path per leaf function (first occurrence wins)."""
        paths: dict[str, tuple[str, ...]] = {}
        for macro in self.macros:
            for column in macro["columns"]:
                for row in column["rows"]:
                    for opt in row["options"]:
                        paths.setdefault(
                            opt["function"],
                            (macro["name"], column["name"], row["row"], opt["key"]),
                        )
        return paths

    def guide_sentence(self, macro_name: str) -> str | None:
        for macro in self.macros:
            if macro["name"] == macro_name:
                return macro.get("guide_sentence")
        return None

    def traverse(self, choice_path: Sequence[str]) -> TraversalState:
        """Resolve a (possibly partial) path of ordered selections.

        Full paths (macro, column, row, option) return the leaf; partial
        paths return the next question and its valid options, which is
        what drives the annotation UI. Invalid selections raise a
        DomainError listing the valid options at that point.
        """
        path = list(choice_path)
        macro_names = tuple(m["name"] for m in self.macros)
        if not path:
            return TraversalState(
                complete=False, question="macro_category", options=macro_names
            )
        macro = self._pick(path[0], {m["name"]: m for m in self.macros}, "macro category")
        guide = macro.get("guide_sentence")
        columns = {c["name"]: c for c in macro["columns"]}
        if len(path) == 1:
            return TraversalState(
                complete=False, question="subcategory",
                options=tuple(columns), guide_sentence=guide,
            )
        column = self._pick(path[1], columns, "subcategory")
        rows = {r["row"]: r for r in column["rows"]}
        if len(path) == 2:
            return TraversalState(
                complete=False, question="row", options=tuple(rows), guide_sentence=guide
            )
        row = self._pick(path[2], rows, "row")
        options = {o["key"]: o for o in row["options"]}
        if len(path) == 3:
            return TraversalState(
                complete=False, question="option", options=tuple(options), guide_sentence=guide
            )
        if len(path) > 4:
            raise DomainError(f"path too long: {len(path)} selections (max 4)")
        option = self._pick(path[3], options, "option")
        return TraversalState(complete=True, function=option["function"], guide_sentence=guide)

    @staticmethod
    def _pick(selection: str, valid: Mapping[str, dict], what: str):
        if selection not in valid:
            raise DomainError(
                f"invalid {what} {selection!r}; valid options: {sorted(valid)}"
            )
        return valid[selection]

    def to_dict(self) -> dict:
        return {
            "version": self.version,
            "vocabulary": list(self.vocabulary),
            "macros": self.macros,
        }
