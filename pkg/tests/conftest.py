import pytest

from contraforge.corpus import Document, DocumentMetadata


def make_meta(**overrides) -> DocumentMetadata:
    fields = dict(
        title="Renewal Directive 12",
        topic="contract renewal obligations",
        date="2024-03-18",
        department="Legal Affairs",
        location="Denver",
        doc_type="policy memo",
        authority_level="departmental",
    )
    fields.update(overrides)
    return DocumentMetadata(**fields)


def make_doc(doc_id="doc-01", body=None, domain="Contract Law",
             subdomain="Procurement Contracts", ppl_base=None, **overrides) -> Document:
    if body is None:
        body = (
            "Section 1. Renewal notices are issued ninety days before expiry "
            "by the contract desk for every active agreement.\n\n"
            "Section 2. Suppliers acknowledge renewal terms in writing within "
            "ten business days of receiving the notice from the desk.\n\n"
            "Section 3. Unacknowledged renewals escalate to the department "
            "head for a decision within five additional business days.\n\n"
            "Section 4. The registry retains all renewal correspondence for "
            "seven years in the records center for audit access."
        )
    return Document(
        id=doc_id, metadata=make_meta(), domain=domain, subdomain=subdomain,
        body=body, ppl_base=ppl_base, **overrides,
    )


@pytest.fixture
def doc():
    return make_doc()
