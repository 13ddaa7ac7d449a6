"""Shipped test corpus: organization profile, domain tree, mini documents,
injected contradictions, and a labeled mini gold set."""

from dataclasses import dataclass
from importlib import resources
from typing import Dict, List, Tuple

import yaml

from ..corpus import (
    ContradictionRecord,
    ContradictionType,
    Document,
    DomainTree,
    GoldItem,
    OrganizationProfile,
    RecordStore,
    contains_normalized,
)


class FixtureError(Exception):
    pass


@dataclass(frozen=True)
class FixtureSet:
    profile: OrganizationProfile
    tree: DomainTree
    documents: List[Document]
    injected: List[ContradictionRecord]
    gold: List[GoldItem]
    few_shot_examples: str
    type_examples: Dict[ContradictionType, Tuple[str, str]]


def _data_path(name: str):
    return resources.files("contraforge") / "fixtures" / "data" / name


def _read_text(name: str) -> str:
    return _data_path(name).read_text(encoding="utf-8")


def load_profile() -> OrganizationProfile:
    raw = yaml.safe_load(_read_text("profile.yaml"))
    return OrganizationProfile(
        name=raw["name"], description=raw["description"], locations=raw["locations"]
    )


def load_domain_tree() -> DomainTree:
    raw = yaml.safe_load(_read_text("domains.yaml"))
    return DomainTree(
        domains=[(d["name"], list(d["subdomains"])) for d in raw["domains"]]
    )


def _load_jsonl(name: str):
    with resources.as_file(_data_path(name)) as path:
        return RecordStore(path).load()


def load_fixtures() -> FixtureSet:
    """Load and validate the shipped fixture corpus."""
    profile = load_profile()
    tree = load_domain_tree()
    documents = _load_jsonl("mini_docs.jsonl")
    injected = _load_jsonl("injected.jsonl")
    gold = _load_jsonl("mini_gold.jsonl")
    raw_examples = yaml.safe_load(_read_text("type_examples.yaml"))
    type_examples = {
        ContradictionType(name): (pair["target"], pair["contradiction"])
        for name, pair in raw_examples.items()
    }
    fixtures = FixtureSet(
        profile=profile,
        tree=tree,
        documents=documents,
        injected=injected,
        gold=gold,
        few_shot_examples=_read_text("few_shot_examples.txt"),
        type_examples=type_examples,
    )
    _validate(fixtures)
    return fixtures


def _validate(fx: FixtureSet) -> None:
    if len(fx.documents) != 12:
        raise FixtureError(f"expected 12 mini documents, found {len(fx.documents)}")
    if len(fx.injected) != 6:
        raise FixtureError(f"expected 6 injected contradictions, found {len(fx.injected)}")
    types = {rec.ctype for rec in fx.injected}
    if types != set(ContradictionType):
        raise FixtureError(f"injected records do not cover all types: {types}")
    docs = {d.id: d for d in fx.documents}
    for rec in fx.injected:
        source = docs[rec.source_doc]
        host = docs[rec.host_doc]
        if not contains_normalized(source.body, rec.target_statement):
            raise FixtureError(f"{rec.id}: target missing from source {source.id}")
        if not contains_normalized(host.body, rec.contradiction_statement):
            raise FixtureError(f"{rec.id}: contradiction missing from host {host.id}")
        if rec.mode.value == "pairwise" and contains_normalized(
            host.body, rec.target_statement
        ):
            raise FixtureError(f"{rec.id}: target leaked into pairwise host {host.id}")
    if len(fx.gold) != 40:
        raise FixtureError(f"expected 40 gold pairs, found {len(fx.gold)}")
    gold_types = {
        item.extras.get("ctype") for item in fx.gold if item.extras.get("ctype")
    }
    if gold_types < {t.value for t in ContradictionType}:
        raise FixtureError(f"gold set does not cover all contradiction types: {gold_types}")
