"""A scripted chat mock that understands every pipeline prompt.

It recognizes each rendered template by its opening line and synthesizes a
deterministic reply from a hash of the prompt and a fixed seed, so full
end-to-end runs are reproducible byte for byte without any model backend.
"""

import hashlib
import re
from typing import List, Optional

from .providers import ChatRequest

_DEPARTMENTS = (
    "Legal Affairs",
    "Compliance",
    "Procurement Legal",
    "Service Operations",
    "Internal Policy and Governance",
)
_DOC_TYPES = ("policy memo", "procedure notice", "bulletin", "contract addendum")
_AUTHORITY = ("departmental", "executive", "board-approved")
_SUBLOCATIONS = ("Denver", "Austin", "Hamburg", "Lyon", "Singapore", "Tokyo")
_NAMES = (
    "Elena Marchetti", "Jonas Brekke", "Priya Nair", "Marcus Webb",
    "Mei Lin Tan", "Dana Okafor", "Akiko Matsuda", "Sofia Ibarra",
    "Tomas Keller", "Fiona Zhang",
)

_TRAILERS = """
NEW PEOPLE META DATA:
- {name}, {role}, Aerodyne Systems

NEW DOCUMENT META DATA:
- {doc_ref}, dated {date}
"""


def _grab(prompt: str, start_marker: str, end_markers: List[str]) -> str:
    """Text between a marker line and the first following end marker."""
    idx = prompt.find(start_marker)
    if idx == -1:
        return ""
    begin = idx + len(start_marker)
    end = len(prompt)
    for marker in end_markers:
        j = prompt.find(marker, begin)
        if j != -1:
            end = min(end, j)
    return prompt[begin:end].strip()


def _grab_line(prompt: str, prefix: str) -> str:
    for line in prompt.splitlines():
        if line.startswith(prefix):
            return line[len(prefix):].strip()
    return ""


def rotate_digits(text: str) -> str:
    """Deterministic numeric perturbation: every digit d becomes (d+3) mod 10."""
    return re.sub(r"\d", lambda m: str((int(m.group(0)) + 3) % 10), text)


class ScriptedPipelineChat:
    """Deterministic stand-in for the chat backend across all pipeline prompts."""

    def __init__(self, seed: int = 0):
        self.seed = seed
        self.calls: List[ChatRequest] = []

    def _digest(self, material: str) -> bytes:
        return hashlib.sha256(f"{self.seed}:{material}".encode("utf-8")).digest()

    def _pick(self, material: str, options, salt: str = ""):
        d = self._digest(salt + material)
        return options[int.from_bytes(d[:4], "big") % len(options)]

    def complete(self, req: ChatRequest) -> str:
        self.calls.append(req)
        prompt = req.user
        if prompt.startswith("You are drafting document metadata"):
            return self._metadata(prompt)
        if "This document is a sibling" in prompt:
            return self._pairwise(prompt)
        if prompt.startswith("Generate a professional, coherent business document"):
            return self._base_document(prompt)
        if prompt.startswith("You are analyzing a business document"):
            return self._select_target(prompt)
        if prompt.startswith("You are helping generate business documents"):
            return self._contradiction(prompt)
        if prompt.startswith("You are an expert business writer"):
            return self._blend(prompt)
        if prompt.startswith("You are an expert at detecting logical contradictions"):
            return (
                '{"contradiction": true, "reasoning": "The statements assert '
                'incompatible facts about the same subject.", "confidence": 0.85}'
            )
        if prompt.startswith("You are assessing a confirmed contradiction"):
            category = self._pick(prompt, ("retrieval_verifiable", "retrieval_resistant"))
            return (
                f'{{"category": "{category}", "justification": "Decided from the '
                f'availability of public authoritative sources.", "confidence": 0.7}}'
            )
        raise ValueError("scripted chat does not recognize this prompt")

    # -- per-template replies ---------------------------------------------

    def _metadata(self, prompt: str) -> str:
        domain = _grab_line(prompt, "LEGAL DOMAIN:")
        subdomain = _grab_line(prompt, "SUBDOMAIN:")
        date = _grab_line(prompt, "TARGET DATE:")
        topic_noun = self._pick(prompt, (
            "renewal obligations", "escalation windows", "disclosure duties",
            "retention schedules", "approval workflows",
        ))
        return "\n".join([
            f"TITLE: {subdomain} Directive {self._digest(prompt)[:2].hex()}",
            f"TOPIC: {subdomain} {topic_noun} within {domain}",
            f"DATE: {date}",
            f"DEPARTMENT: {self._pick(prompt, _DEPARTMENTS)}",
            f"LOCATION: {self._pick(prompt, _SUBLOCATIONS)}",
            f"DOC_TYPE: {self._pick(prompt, _DOC_TYPES)}",
            f"AUTHORITY_LEVEL: {self._pick(prompt, _AUTHORITY)}",
        ])

    def _fact_sentence(self, topic: str, date: str, material: str) -> str:
        amount = 5 + int.from_bytes(self._digest("amt" + material)[:2], "big") % 90
        return (
            f"The {topic} budget allocation is fixed at exactly "
            f"${amount}M effective from {date} onward for all teams."
        )

    def _body_paragraphs(self, topic: str, date: str, material: str) -> List[str]:
        name = self._pick(material, _NAMES, "nm")
        site = self._pick(material, _SUBLOCATIONS, "st")
        serial = self._digest(material)[:3].hex()
        return [
            f"Section 1. Purpose. This document sets the operating rules for {topic} "
            f"across Aerodyne Systems sites. "
            + self._fact_sentence(topic, date, material),
            f"Section 2. Ownership. Accountability for {topic} rests with {name}, "
            f"who operates from the {site} office and reports monthly on reference {serial}. "
            f"Every owner confirms their duties in writing within five business days of assignment.",
            f"Section 3. Procedure. Requests concerning {topic} are filed through the "
            f"document control desk and acknowledged within two business days of receipt. "
            f"Each request receives a tracking number tied to reference {serial} for audit purposes.",
            f"Section 4. Review. This document is reviewed every quarter and republished "
            f"when the rules for {topic} change in any material way. "
            f"Archived revisions stay available in the records center for seven full years.",
        ]

    def _trailers(self, material: str, date: str) -> str:
        return _TRAILERS.format(
            name=self._pick(material, _NAMES, "tr"),
            role="Program Owner",
            doc_ref=f"Reference Register {self._digest(material)[:2].hex().upper()}",
            date=date,
        )

    def _base_document(self, prompt: str) -> str:
        topic = _grab(prompt, "The topic is '", ["'"]) or "general operations"
        m = re.search(r"close to (\S+) and associate", prompt)
        date = m.group(1) if m else "2024-06-01"
        body = "\n\n".join(self._body_paragraphs(topic, date, prompt))
        return body + "\n" + self._trailers(prompt, date)

    def _select_target(self, prompt: str) -> str:
        document = _grab(prompt, "DOCUMENT:", [])
        for sentence in re.split(r"(?<=[.!?])\s+", document):
            if "$" in sentence and any(c.isdigit() for c in sentence):
                return sentence.strip()
        # fall back to the first sentence with a digit
        for sentence in re.split(r"(?<=[.!?])\s+", document):
            if any(c.isdigit() for c in sentence):
                return sentence.strip()
        return document.split(".")[0].strip() + "."

    def _contradiction(self, prompt: str) -> str:
        target = _grab(prompt, "TARGET STATEMENT:", ["ORIGINAL DOCUMENT:"])
        ctype = "Numerical" if any(c.isdigit() for c in target) else "Policy Reversal"
        flipped = rotate_digits(target)
        if flipped == target:
            flipped = "This requirement is rescinded in full with immediate effect."
        return f"CONTRADICTION TYPE: {ctype}\n{flipped}"

    def _blend(self, prompt: str) -> str:
        base = _grab(prompt, "DOCUMENT:", ["ORIGINAL TARGET STATEMENT:"])
        contradiction = _grab(
            prompt, "CONTRADICTION PARAGRAPH:", ["Return ONLY the final"]
        )
        paragraphs = [p for p in re.split(r"\n\s*\n", base) if p.strip()]
        paragraphs.insert(len(paragraphs) - 1, contradiction)
        date = "2024-06-01"
        return "\n\n".join(paragraphs) + "\n" + self._trailers(prompt, date)

    def _pairwise(self, prompt: str) -> str:
        topic = _grab(prompt, "The topic is '", ["'"]) or "general operations"
        contradiction = _grab(
            prompt, "STATEMENT TO INCORPORATE:", ["Instructions:"]
        )
        m = re.search(r"close to (\S+),", prompt)
        date = m.group(1) if m else "2024-06-01"
        paragraphs = self._body_paragraphs(topic, date, "sibling:" + prompt)
        paragraphs.insert(2, contradiction)
        return "\n\n".join(paragraphs) + "\n" + self._trailers(prompt, date)
