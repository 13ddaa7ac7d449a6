"""How the hybrid detector fuses NLI and LLM-judge verdicts.

The mining stage classifies each candidate pair twice. The NLI model is
cheap and runs on every pair; the LLM judge is expensive and only sees pairs
the forwarding rule selects. This script walks through the scoring algebra
on hand-picked cases.
"""

from contraforge import MiningConfig, hybrid_score
from contraforge.corpus import CandidatePair, Mode, pair_key
from contraforge.mining import nli_stage

# --- The fusion rule -------------------------------------------------------
#
# Each model contributes a binary label weighted by its confidence, with the
# weights normalized to sum to one:
#
#   s = w_nli * l_nli + w_llm * l_llm,   w_nli = p_nli / (p_nli + p_llm)
#
# and the pair is a contradiction iff s strictly exceeds tau (default 0.5).

print("agreement: both say contradiction, score is exactly the label")
s, label = hybrid_score(l_nli=1, p_nli=0.91, l_llm=1, p_llm=0.62)
print(f"  s={s}, label={label}")

print("\ndisagreement: the more confident model wins")
s, label = hybrid_score(l_nli=1, p_nli=0.9, l_llm=0, p_llm=0.45)
print(f"  NLI 1@0.90 vs judge 0@0.45 -> s={s:.3f}, label={label}")
s, label = hybrid_score(l_nli=1, p_nli=0.45, l_llm=0, p_llm=0.9)
print(f"  NLI 1@0.45 vs judge 0@0.90 -> s={s:.3f}, label={label}")

print("\ntied confidences with disagreeing labels land exactly on tau,")
print("and the strict threshold resolves the tie to negative")
s, label = hybrid_score(l_nli=1, p_nli=0.7, l_llm=0, p_llm=0.7)
print(f"  s={s}, label={label}")

# --- The forwarding rule ---------------------------------------------------
#
# A pair reaches the judge iff the NLI label is contradiction, or the NLI
# confidence is at or below theta_conf (an uncertain negative is worth a
# second opinion). Confident negatives are final without a judge call.


class FixedNli:
    def __init__(self, label, confidence):
        self.label, self.confidence = label, confidence

    def classify(self, c1, c2):
        from contraforge.providers import NliVerdict
        return NliVerdict(self.label, self.confidence)


cfg = MiningConfig()  # theta_conf = 0.7
c1 = "The notice period for termination is thirty days from written notice."
c2 = "The notice period for termination is ninety days from written notice."
pair = CandidatePair(
    key=pair_key(c1, c2, Mode.SELF), mode=Mode.SELF,
    doc1="doc-01", doc2="doc-01", doc1_chunk=c1, doc2_chunk=c2, similarity=0.97,
)

print("\nforwarding decisions (theta_conf = 0.7)")
for label, conf in [("contradiction", 0.95), ("neutral", 0.65), ("neutral", 0.75),
                    ("entailment", 0.55)]:
    staged = nli_stage(pair, cfg, FixedNli(label, conf))
    verdict = "forwarded to judge" if staged.forwarded else "final negative"
    print(f"  {label:<13} @ {conf:.2f} -> {verdict}")
