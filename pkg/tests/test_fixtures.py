"""Invariants of the shipped fixture corpus."""

import pytest

from contraforge.corpus import (
    ContradictionType,
    Mode,
    contains_normalized,
    pair_key,
)
from contraforge.fixtures import (
    FixtureError,
    load_domain_tree,
    load_fixtures,
    load_profile,
)


@pytest.fixture(scope="module")
def fx():
    return load_fixtures()


class TestProfileAndTree:
    def test_profile_loads(self):
        profile = load_profile()
        assert profile.name
        assert len(profile.locations) >= 2

    def test_domain_tree_loads(self):
        tree = load_domain_tree()
        assert len(tree.domains) >= 3
        for name, subs in tree.domains:
            assert name and len(subs) >= 2


class TestDocuments:
    def test_twelve_documents(self, fx):
        assert len(fx.documents) == 12
        assert len({d.id for d in fx.documents}) == 12

    def test_documents_are_gated(self, fx):
        for doc in fx.documents:
            assert doc.ppl_base > 1.0
            assert len(doc.body.split("\n\n")) >= 4

    def test_metadata_complete(self, fx):
        for doc in fx.documents:
            meta = doc.metadata
            assert meta.title and meta.department and meta.location
            assert meta.date.startswith("2024")


class TestInjected:
    def test_six_records_cover_all_types(self, fx):
        assert len(fx.injected) == 6
        assert {rec.ctype for rec in fx.injected} == set(ContradictionType)

    def test_containment_invariants(self, fx):
        docs = {d.id: d for d in fx.documents}
        for rec in fx.injected:
            assert contains_normalized(docs[rec.source_doc].body, rec.target_statement)
            assert contains_normalized(docs[rec.host_doc].body, rec.contradiction_statement)

    def test_pairwise_omission(self, fx):
        docs = {d.id: d for d in fx.documents}
        pairwise = [r for r in fx.injected if r.mode == Mode.PAIRWISE]
        assert pairwise, "fixture set must include pairwise injections"
        for rec in pairwise:
            assert rec.host_doc != rec.source_doc
            assert not contains_normalized(docs[rec.host_doc].body, rec.target_statement)

    def test_self_records_host_their_source(self, fx):
        for rec in fx.injected:
            if rec.mode == Mode.SELF:
                assert rec.host_doc == rec.source_doc


class TestGold:
    def test_forty_labeled_pairs(self, fx):
        assert len(fx.gold) == 40
        assert all(item.human_label in (0, 1) for item in fx.gold)

    def test_keys_consistent_and_unique(self, fx):
        keys = [item.key for item in fx.gold]
        assert len(set(keys)) == 40
        for item in fx.gold:
            assert item.key == pair_key(item.doc1_chunk, item.doc2_chunk, item.mode)

    def test_both_labels_and_modes_present(self, fx):
        labels = {item.human_label for item in fx.gold}
        assert labels == {0, 1}
        assert {item.mode for item in fx.gold} == {Mode.SELF, Mode.PAIRWISE}

    def test_typed_positives_cover_all_types(self, fx):
        typed = {item.extras.get("ctype") for item in fx.gold if item.extras.get("ctype")}
        assert typed >= {t.value for t in ContradictionType}


class TestSupportingAssets:
    def test_few_shot_examples_non_trivial(self, fx):
        assert len(fx.few_shot_examples.split()) > 50

    def test_type_examples_cover_all_types(self, fx):
        assert set(fx.type_examples) == set(ContradictionType)
        for target, contradiction in fx.type_examples.values():
            assert target and contradiction and target != contradiction


class TestValidation:
    def test_loader_is_deterministic(self, fx):
        again = load_fixtures()
        assert [d.id for d in again.documents] == [d.id for d in fx.documents]
        assert [g.key for g in again.gold] == [g.key for g in fx.gold]

    def test_validator_rejects_missing_documents(self, fx):
        import contraforge.fixtures as fixtures_mod

        broken = fixtures_mod.FixtureSet(
            profile=fx.profile, tree=fx.tree, documents=fx.documents[:5],
            injected=fx.injected, gold=fx.gold,
            few_shot_examples=fx.few_shot_examples, type_examples=fx.type_examples,
        )
        with pytest.raises(FixtureError, match="12 mini documents"):
            fixtures_mod._validate(broken)

    def test_validator_rejects_type_gap(self, fx):
        import contraforge.fixtures as fixtures_mod

        trimmed = [r for r in fx.injected if r.ctype != ContradictionType.NUMERICAL]
        broken = fixtures_mod.FixtureSet(
            profile=fx.profile, tree=fx.tree, documents=fx.documents,
            injected=trimmed, gold=fx.gold,
            few_shot_examples=fx.few_shot_examples, type_examples=fx.type_examples,
        )
        with pytest.raises(FixtureError):
            fixtures_mod._validate(broken)
