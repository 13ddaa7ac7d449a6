"""Document generation: perplexity, the fluency gate, metadata assembly, and
trailer parsing."""

import math
import random

import pytest

from contraforge.fixtures import load_domain_tree, load_profile
from contraforge.generation import (
    DEFAULT_PPL_CAP,
    FluencyReport,
    GateExhausted,
    GenerationError,
    draw_date,
    fluency_gate,
    generate_base_document,
    generate_document,
    generate_metadata,
    paragraphs,
    perplexity,
    split_trailers,
)
from contraforge.prompts import PromptLibrary
from contraforge.providers import MockChat, MockLogprobs

from .conftest import make_doc, make_meta

PROMPTS = PromptLibrary()
PROFILE = load_profile()
TREE = load_domain_tree()


class TestPerplexity:
    def test_uniform_model_equals_vocab_size(self):
        """A uniform model over V tokens has perplexity exactly V."""
        for v in (2, 18, 50, 50257):
            lp = [-math.log(v)] * 7
            assert perplexity(lp) == pytest.approx(v, rel=1e-12)

    def test_hand_computed_value(self):
        # mean of [-1, -2, -3] is -2, so perplexity is e^2
        assert perplexity([-1.0, -2.0, -3.0]) == pytest.approx(math.exp(2.0), abs=1e-12)

    def test_single_token(self):
        assert perplexity([-0.5]) == pytest.approx(math.exp(0.5))

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            perplexity([])

    def test_positive_logprobs_rejected(self):
        with pytest.raises(ValueError):
            perplexity([-1.0, 0.5])

    def test_zero_logprob_allowed(self):
        assert perplexity([0.0, 0.0]) == 1.0

    def test_random_sequences_bounded_below(self):
        rng = random.Random(5)
        for _ in range(100):
            lp = [-rng.uniform(0, 6) for _ in range(rng.randint(1, 40))]
            assert perplexity(lp) >= 1.0


class TestFluencyGate:
    def test_accepts_at_cap_inclusive(self, doc):
        """The cap comparison is <=: a document whose perplexity equals the
        cap exactly is accepted, one epsilon above is not."""

        class Exact:
            def token_logprobs(self, text):
                return [-math.log(22.0)] * 10

        ppl = fluency_gate(doc, Exact(), ppl_cap=1e9).ppl
        assert ppl == pytest.approx(22.0, rel=1e-12)
        assert fluency_gate(doc, Exact(), ppl_cap=ppl).accepted
        assert not fluency_gate(doc, Exact(), ppl_cap=math.nextafter(ppl, 0)).accepted

    def test_rejects_above_cap(self, doc):
        class Above:
            def token_logprobs(self, text):
                return [-math.log(22.0) - 1e-9] * 10

        assert not fluency_gate(doc, Above(), ppl_cap=22.0).accepted

    def test_default_cap(self, doc):
        report = fluency_gate(doc, MockLogprobs(vocab_size=18))
        assert report.accepted and report.ppl == pytest.approx(18.0)
        assert report.token_count == len(doc.body.split())


class TestMetadata:
    BLOCK = (
        "TITLE: Renewal Directive\n"
        "TOPIC: procurement renewal obligations\n"
        "DATE: 2024-03-18\n"
        "DEPARTMENT: Legal Affairs\n"
        "LOCATION: Denver\n"
        "DOC_TYPE: policy memo\n"
        "AUTHORITY_LEVEL: departmental\n"
    )

    def _generate(self, chat, rng=None):
        return generate_metadata(
            chat, PROMPTS, PROFILE, TREE,
            "Contract Law", TREE.subdomains("Contract Law")[0],
            rng or random.Random(1),
        )

    def test_single_call_success(self):
        chat = MockChat(responder=lambda r: self.BLOCK)
        meta = self._generate(chat)
        assert meta.topic == "procurement renewal obligations"
        assert meta.date == "2024-03-18"
        assert len(chat.calls) == 1

    def test_reprompt_fills_missing_fields(self):
        replies = iter([self.BLOCK.replace("LOCATION: Denver\n", ""), self.BLOCK])
        chat = MockChat(responder=lambda r: next(replies))
        meta = self._generate(chat)
        assert meta.location == "Denver"
        assert len(chat.calls) == 2
        assert "LOCATION" in chat.calls[1].user

    def test_failure_after_reprompt(self):
        chat = MockChat(responder=lambda r: "TITLE: only a title")
        with pytest.raises(GenerationError, match="missing fields"):
            self._generate(chat)

    def test_out_of_window_date_treated_missing(self):
        bad = self.BLOCK.replace("2024-03-18", "2031-01-01")
        replies = iter([bad, self.BLOCK])
        chat = MockChat(responder=lambda r: next(replies))
        assert self._generate(chat).date == "2024-03-18"
        assert len(chat.calls) == 2

    def test_unknown_subdomain_rejected(self):
        with pytest.raises(ValueError):
            generate_metadata(
                MockChat(), PROMPTS, PROFILE, TREE,
                "Contract Law", "Not A Subdomain", random.Random(0),
            )

    def test_draw_date_stays_in_window(self):
        rng = random.Random(9)
        for _ in range(200):
            date = draw_date(("2024-01-01", "2024-12-31"), rng)
            assert "2024-01-01" <= date <= "2024-12-31"


BODY4 = (
    "Alpha paragraph one with enough words to stand alone as prose.\n\n"
    "Beta paragraph two follows with plenty of additional detail here.\n\n"
    "Gamma paragraph three continues the body of this sample document.\n\n"
    "Delta paragraph four completes the minimum paragraph requirement."
)

TRAILED = (
    BODY4
    + "\n\nNEW PEOPLE META DATA:\n- Dana Okafor, Counsel, Aerodyne Systems\n"
    + "\nNEW DOCUMENT META DATA:\n- Register 7F, dated 2024-03-18\n"
)


class TestTrailers:
    def test_split_both_trailers(self):
        body, people, docmeta = split_trailers(TRAILED)
        assert body == BODY4
        assert people == ["Dana Okafor, Counsel, Aerodyne Systems"]
        assert docmeta == ["Register 7F, dated 2024-03-18"]

    def test_missing_trailers_are_none(self):
        body, people, docmeta = split_trailers(BODY4)
        assert body == BODY4 and people is None and docmeta is None

    def test_header_match_tolerates_formatting(self):
        text = BODY4 + "\n\n  new people meta data :\n- Someone, Role, Org\n"
        _, people, _ = split_trailers(text)
        assert people == ["Someone, Role, Org"]

    def test_paragraphs_split(self):
        assert len(paragraphs(BODY4)) == 4
        assert paragraphs("one\n\n\n\ntwo") == ["one", "two"]


class TestBaseDocument:
    def _generate(self, chat, **kw):
        return generate_base_document(
            chat, PROMPTS, make_meta(), PROFILE,
            "Contract Law", "Procurement Contracts", "doc-01", **kw,
        )

    def test_happy_path(self):
        chat = MockChat(responder=lambda r: TRAILED)
        doc = self._generate(chat)
        assert doc.body == BODY4
        assert doc.people_meta and doc.doc_meta
        assert "trailer_warning" not in doc.extras

    def test_short_body_regenerates(self):
        replies = iter(["Too short.\n\nOnly two.", TRAILED])
        chat = MockChat(responder=lambda r: next(replies))
        doc = self._generate(chat)
        assert doc.body == BODY4
        assert len(chat.calls) == 2

    def test_short_body_exhausts_attempts(self):
        chat = MockChat(responder=lambda r: "Too short.")
        with pytest.raises(GenerationError, match="shorter than"):
            self._generate(chat, max_attempts=3)
        assert len(chat.calls) == 3

    def test_missing_trailers_reprompted_once(self):
        replies = iter([BODY4, TRAILED])
        chat = MockChat(responder=lambda r: next(replies))
        doc = self._generate(chat)
        assert doc.people_meta == ["Dana Okafor, Counsel, Aerodyne Systems"]
        assert "trailer" in chat.calls[1].user.lower()

    def test_persistently_missing_trailers_warn(self):
        chat = MockChat(responder=lambda r: BODY4)
        doc = self._generate(chat)
        assert doc.extras.get("trailer_warning") is True
        assert doc.people_meta == [] and doc.doc_meta == []


class TestGenerateDocument:
    def _driver(self, chat, logprobs, **kw):
        return generate_document(
            chat, logprobs, PROMPTS, make_meta(), PROFILE,
            "Contract Law", "Procurement Contracts", "doc-01", **kw,
        )

    def test_sets_ppl_base(self):
        chat = MockChat(responder=lambda r: TRAILED)
        doc, report = self._driver(chat, MockLogprobs(vocab_size=18))
        assert doc.ppl_base == pytest.approx(18.0)
        assert report.accepted and report.attempts == 1

    def test_gate_exhaustion_carries_reports(self):
        class TooPerplexed:
            def token_logprobs(self, text):
                return [-math.log(30.0)] * 5

        chat = MockChat(responder=lambda r: TRAILED)
        with pytest.raises(GateExhausted) as exc:
            self._driver(chat, TooPerplexed(), max_attempts=4)
        assert len(exc.value.reports) == 4
        assert all(not r.accepted for r in exc.value.reports)
        assert [r.attempts for r in exc.value.reports] == [1, 2, 3, 4]

    def test_boundary_cap_is_inclusive(self):
        class NearCap:
            def token_logprobs(self, text):
                return [-math.log(DEFAULT_PPL_CAP)] * 5

        chat = MockChat(responder=lambda r: TRAILED)
        probe = NearCap().token_logprobs("")
        ppl = math.exp(-sum(probe) / len(probe))
        doc, report = self._driver(chat, NearCap(), ppl_cap=ppl)
        assert report.accepted and doc.ppl_base == pytest.approx(DEFAULT_PPL_CAP)
