"""Acceptance criteria for the toolkit, one test per criterion.

Each test prints a single PASS or FAIL line (written past pytest's capture)
so a run of this module reads as a checklist. Tolerances are pinned in the
assertions; never loosen them to make a test pass.
"""

import contextlib
import functools
import math
import random
import sys
import time

import pytest

from contraforge.agreement import UndefinedAgreement, cohen_kappa, kripp_alpha
from contraforge.annotation import build_gold_union
from contraforge.config import load_config
from contraforge.corpus import (
    CandidatePair,
    ContradictionRecord,
    Mode,
    RecordStore,
    contains_normalized,
    pair_key,
)
from contraforge.evaluation import ConfusionMatrix, metrics, round3
from contraforge.fixtures import load_fixtures
from contraforge.generation import perplexity
from contraforge.injection import DeltaGate, delta_rel, validate_injection
from contraforge.mining import MiningConfig, candidate_pairs, hybrid_score, mine
from contraforge.pipeline import latest_documents, run_pipeline
from contraforge.providers import MockEmbedding

from .oracles.agreement_oracle import oracle_cohen_kappa, oracle_kripp_alpha
from .oracles.topk_oracle import brute_force_topk


def criterion(name):
    """Print one PASS/FAIL line per criterion, visible despite capture."""

    def decorate(func):
        @functools.wraps(func)
        def wrapper(*args, **kwargs):
            try:
                func(*args, **kwargs)
            except BaseException:
                print(f"FAIL {name}", file=sys.__stdout__, flush=True)
                raise
            print(f"PASS {name}", file=sys.__stdout__, flush=True)

        return wrapper

    return decorate


class TestAcceptance:
    @criterion("hybrid-score algebra over the full confidence grid")
    def test_hybrid_score_algebra(self):
        started = time.perf_counter()
        grid = [i / 100 for i in range(101)]
        for p_nli in grid:
            for p_llm in grid:
                for l_nli in (0, 1):
                    for l_llm in (0, 1):
                        s, label = hybrid_score(l_nli, p_nli, l_llm, p_llm)
                        total = p_nli + p_llm
                        if total == 0:
                            w_nli = w_llm = 0.5
                        else:
                            w_nli, w_llm = p_nli / total, p_llm / total
                        assert abs(w_nli + w_llm - 1.0) <= 1e-12
                        if l_nli == l_llm:
                            # agreement: the score is exactly the agreed label
                            assert s == float(l_nli)
                            assert label == l_nli
                        else:
                            # disagreement: label 1 iff the 1-predicting model
                            # is strictly more confident
                            p_one = p_nli if l_nli == 1 else p_llm
                            p_zero = p_llm if l_nli == 1 else p_nli
                            assert label == (1 if p_one > p_zero else 0)
                            if p_nli == p_llm:
                                # disagreeing tie sits at s = 0.5, below strict tau
                                assert s == pytest.approx(0.5, abs=1e-12)
                                assert label == 0
        assert time.perf_counter() - started < 1.0

    @criterion("perplexity identity and the relative-perplexity gate")
    def test_perplexity_and_gate(self):
        # uniform model over V tokens has perplexity exactly V
        for vocab in (2, 50, 50257):
            logprobs = [-math.log(vocab)] * 40
            assert perplexity(logprobs) == pytest.approx(vocab, abs=1e-9 * vocab)

        gate = DeltaGate(delta_self_max=0.05, delta_pair_max=0.075, ppl_cap=22.0)
        # absolute cap: 22.0 accepted, 22.0 + epsilon rejected
        assert validate_injection(22.0, 22.0, Mode.SELF, gate).passed
        rejected = validate_injection(22.0, 22.0 + 1e-9, Mode.SELF, gate)
        assert not rejected.passed and rejected.reason == "ppl_cap"

        # twelve hand-computed relative-change cases
        cases = [
            # (base, contr, mode, passes, reason)
            (20.0, 20.0, Mode.SELF, True, None),          # delta 0
            (20.0, 21.0, Mode.SELF, True, None),          # delta 0.05 boundary
            (20.0, 21.000001, Mode.SELF, False, "delta_self"),
            (20.0, 21.5, Mode.SELF, False, "delta_self"), # delta 0.075 over self
            (20.0, 21.5, Mode.PAIRWISE, True, None),      # 0.075 boundary pairwise
            (20.0, 21.500001, Mode.PAIRWISE, False, "delta_pair"),
            (20.0, 19.0, Mode.SELF, True, None),          # improvement passes
            (21.5, 22.0, Mode.SELF, True, None),          # within delta, at cap
            (21.9, 22.05, Mode.SELF, False, "ppl_cap"),   # cap dominates small delta
            (23.0, 22.5, Mode.SELF, False, "ppl_cap"),    # improves but over cap
            (10.0, 10.75, Mode.PAIRWISE, True, None),     # 0.075 boundary again
            (10.0, 11.0, Mode.PAIRWISE, False, "delta_pair"),
        ]
        for base, contr, mode, passes, reason in cases:
            result = validate_injection(base, contr, mode, gate)
            assert result.passed is passes, (base, contr, mode)
            assert result.reason == reason, (base, contr, mode)
            expected_delta = (contr - base) / base
            assert delta_rel(base, contr) == pytest.approx(expected_delta, abs=1e-12)

    @criterion("top-k candidate filtering equals the brute-force oracle")
    def test_topk_matches_oracle(self):
        started = time.perf_counter()
        rng = random.Random(7)
        words = [f"term{i:03d}" for i in range(140)]

        def chunk_pool(n):
            return [
                " ".join(rng.choice(words) for _ in range(rng.randint(10, 16)))
                for _ in range(n)
            ]

        class JitteredEmbedding:
            """Mock embeddings with deterministic per-text jitter.

            The plain hash-bucket embedder yields many exactly tied cosines
            (small integer count vectors), and a tied k-th rank makes the
            retained set depend on last-bit float ordering. The jitter keeps
            every similarity generically distinct so the oracle comparison
            is exact.
            """

            def __init__(self):
                self.inner = MockEmbedding(dim=32)
                self.cache = {}

            def embed(self, texts):
                fresh = [t for t in texts if t not in self.cache]
                if fresh:
                    for text, vec in zip(fresh, self.inner.embed(fresh)):
                        jitter = random.Random(text)
                        self.cache[text] = [
                            x + jitter.uniform(-1e-4, 1e-4) for x in vec
                        ]
                return [list(self.cache[t]) for t in texts]

        embedder = JitteredEmbedding()
        # the full (k, theta) grid runs in both modes; the pairwise sweep
        # uses the smaller corpus to keep the whole check under budget
        for size, modes in ((40, (Mode.SELF, Mode.PAIRWISE)), (200, (Mode.SELF,))):
            src = chunk_pool(size)
            dst = chunk_pool(size)
            for k in (1, 5, 10):
                for theta_s in (0.0, 0.55, 0.9):
                    cfg = MiningConfig(k=k, theta_s=theta_s)
                    for mode in modes:
                        d = src if mode == Mode.SELF else dst
                        got = {
                            p.key: p.similarity
                            for p in candidate_pairs(
                                src, d, cfg, embedder, mode, "d1",
                                "d1" if mode == Mode.SELF else "d2")
                        }
                        expected = brute_force_topk(src, d, embedder, k, theta_s, mode)
                        assert set(got) == set(expected)
                        for key, sim in got.items():
                            assert sim == pytest.approx(expected[key], abs=1e-9)
        assert time.perf_counter() - started < 10.0

    @criterion("judge calls never exceed the forwarded-pair count")
    def test_judge_call_budget(self):
        class CountingNli:
            def __init__(self):
                self.calls = 0

            def classify(self, a, b):
                self.calls += 1
                import hashlib

                from contraforge.providers import NliVerdict
                digest = hashlib.sha256(f"{a}\x1f{b}".encode()).digest()
                label = "contradiction" if digest[0] % 3 == 0 else "neutral"
                conf = 0.6 if digest[1] % 2 == 0 else 0.9
                return NliVerdict(label, conf)

        class CountingJudge:
            def __init__(self):
                self.calls = 0

            def judge(self, a, b):
                self.calls += 1
                from contraforge.providers import JudgeVerdict
                return JudgeVerdict(1, "scripted", 0.8)

        fx = load_fixtures()
        nli, judge = CountingNli(), CountingJudge()
        cfg = MiningConfig(theta_s=0.3)
        mined = mine(fx.documents, Mode.SELF, cfg, MockEmbedding(), nli, judge)
        forwarded = sum(1 for p in mined if p.forwarded)
        assert 0 < forwarded < len(mined)
        assert judge.calls <= forwarded

    @criterion("kappa and alpha match independent oracles")
    def test_iaa_matches_oracles(self):
        # fixed fixture: p_o = 0.75, p_e = 0.5, kappa = 0.5
        fixture = {
            "a": {f"i{n}": v for n, v in enumerate([1, 1, 0, 0])},
            "b": {f"i{n}": v for n, v in enumerate([1, 0, 0, 0])},
        }
        assert cohen_kappa(fixture) == pytest.approx(0.5, abs=1e-12)

        perfect = {
            "a": {"i0": 1, "i1": 0, "i2": 1},
            "b": {"i0": 1, "i1": 0, "i2": 1},
        }
        assert cohen_kappa(perfect) == pytest.approx(1.0, abs=1e-12)
        assert kripp_alpha(perfect) == pytest.approx(1.0, abs=1e-12)

        rng = random.Random(99)
        checked_kappa = checked_alpha = 0
        while checked_kappa < 20 or checked_alpha < 20:
            n_annotators = rng.randint(2, 4)
            n_items = rng.randint(4, 15)
            labels = {}
            for a in range(n_annotators):
                labels[f"ann{a}"] = {
                    f"i{i:02d}": rng.randrange(2)
                    for i in range(n_items)
                    if rng.random() > 0.2  # missing labels allowed
                }
            expected_alpha = oracle_kripp_alpha(labels)
            if expected_alpha is None:
                with pytest.raises(UndefinedAgreement):
                    kripp_alpha(labels)
            else:
                assert kripp_alpha(labels) == pytest.approx(expected_alpha, abs=1e-9)
                checked_alpha += 1
            if n_annotators == 2:
                try:
                    expected_kappa = oracle_cohen_kappa(labels)
                except AssertionError:
                    continue
                if expected_kappa is None:
                    with pytest.raises(UndefinedAgreement):
                        cohen_kappa(labels)
                else:
                    assert cohen_kappa(labels) == pytest.approx(expected_kappa,
                                                                abs=1e-9)
                    checked_kappa += 1

    @criterion("metrics fixture reproduces 92.0 / 89.5 / 89.5 / 89.5")
    def test_metrics_fixture(self):
        accuracy, precision, recall, f1 = metrics(ConfusionMatrix(34, 4, 4, 58))
        assert round3(accuracy) == 0.920
        assert round3(precision) == 0.895
        assert round3(recall) == 0.895
        assert round3(f1) == 0.895

        # degenerate 0/0 ratios are undefined, never reported as 0
        _, precision, _, f1 = metrics(ConfusionMatrix(0, 0, 3, 5))
        assert precision is None and f1 is None
        _, _, recall, f1 = metrics(ConfusionMatrix(0, 3, 0, 5))
        assert recall is None and f1 is None

    @criterion("deterministic end-to-end mock run with full injected recovery")
    def test_end_to_end_mock_run(self, tmp_path):
        cfg = load_config(overrides={
            "corpus": {"documents_per_domain": 2, "domains": []},
            "injection": {"policy": {
                "Contract Law": "interleave_pairs",
                "Compliance and Regulation": "interleave_pairs",
                "Internal Policy and Governance": "interleave_pairs",
                "Dispute Resolution and Litigation": "self_each_doc",
                "Terms and Service Management": "self_each_doc",
            }},
        })
        started = time.perf_counter()
        path = tmp_path / "run.jsonl"
        manifest = run_pipeline(cfg, str(path))
        assert time.perf_counter() - started < 30.0

        store = RecordStore(path)
        docs = latest_documents(store)
        assert len(docs) == 10
        assert len({d.domain for d in docs.values()}) == 5

        injected = store.load_kind(ContradictionRecord)
        assert injected
        for rec in injected:
            host = docs[rec.host_doc]
            assert contains_normalized(host.body, rec.contradiction_statement)
            if rec.mode == Mode.SELF:
                assert rec.host_doc == rec.source_doc
                assert contains_normalized(host.body, rec.target_statement)
            else:
                assert not contains_normalized(host.body, rec.target_statement)

        # the colluding mock NLI recovers every injected pair
        mined = {p.key: p for p in store.load_kind(CandidatePair)}
        for rec in injected:
            key = pair_key(rec.target_statement, rec.contradiction_statement, rec.mode)
            assert key in mined
            assert mined[key].hybrid_label == 1

        reports = manifest.results["evaluation"]
        assert all(r["recall"] == 1.0 for r in reports if r["detector"] == "hybrid")

        # repeating the identical run is byte-identical
        path2 = tmp_path / "run2.jsonl"
        run_pipeline(cfg, str(path2))
        assert path.read_bytes() == path2.read_bytes()

    @criterion("gold union is idempotent, deduplicated, and complete")
    def test_gold_union(self):
        fx = load_fixtures()
        injected = fx.injected
        assert len(injected) == 6

        def as_pair(rec, extra_source):
            return CandidatePair(
                key=pair_key(rec.target_statement, rec.contradiction_statement,
                             rec.mode),
                mode=rec.mode, doc1=rec.source_doc, doc2=rec.host_doc,
                doc1_chunk=rec.target_statement,
                doc2_chunk=rec.contradiction_statement,
                similarity=0.8, source={extra_source},
            )

        detector_outputs = [
            [as_pair(rec, "nli") for rec in injected[:4]],
            [as_pair(rec, "llm") for rec in injected[2:]],
            [as_pair(rec, "hybrid") for rec in injected],
        ]
        gold = build_gold_union(detector_outputs, injected)
        keys = [g.key for g in gold]
        assert len(keys) == len(set(keys)) == 6
        expected = {
            pair_key(r.target_statement, r.contradiction_statement, r.mode)
            for r in injected
        }
        assert set(keys) == expected
        assert all("injected" in g.sources for g in gold)
        # sources accumulate across detectors
        overlap = [g for g in gold if g.key == detector_outputs[0][2].key][0]
        assert {"nli", "llm", "hybrid", "injected"} <= overlap.sources
        # idempotence: unioning the union changes nothing
        again = build_gold_union(detector_outputs + detector_outputs,
                                 list(injected) + list(injected))
        assert again == gold
