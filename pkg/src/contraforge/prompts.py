"""Prompt template loading and rendering.

Templates ship as package data and can be overridden per-template with file
paths from the run config.
"""

from importlib import resources
from typing import Dict, Optional

TEMPLATE_NAMES = (
    "metadata",
    "base_document",
    "select_target",
    "generate_contradiction",
    "blend",
    "pairwise_embed",
    "judge",
    "verifiability",
)


class PromptLibrary:
    def __init__(self, overrides: Optional[Dict[str, str]] = None):
        """`overrides` maps template name -> file path."""
        self._cache: Dict[str, str] = {}
        self._overrides = dict(overrides or {})

    def get(self, name: str) -> str:
        if name not in TEMPLATE_NAMES:
            raise KeyError(f"unknown prompt template {name!r}")
        if name not in self._cache:
            if name in self._overrides:
                with open(self._overrides[name], encoding="utf-8") as fh:
                    self._cache[name] = fh.read()
            else:
                ref = resources.files("contraforge") / "prompt_templates" / f"{name}.txt"
                self._cache[name] = ref.read_text(encoding="utf-8")
        return self._cache[name]

    def render(self, name: str, **fields: str) -> str:
        return self.get(name).format(**fields)
