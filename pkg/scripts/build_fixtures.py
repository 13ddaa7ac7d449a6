#!/usr/bin/env python3
"""Regenerate the shipped fixture corpus under src/contraforge/fixtures/data/.

The mini corpus is authored here: 12 documents across the five default legal
domains, 6 injected contradictions (one per type), and a 40-pair labeled
gold set. Run from the repository root after editing.
"""

import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from contraforge.corpus import (
    ContradictionRecord,
    ContradictionType,
    Document,
    DocumentMetadata,
    GoldItem,
    Mode,
    RecordStore,
    pair_key,
)

DATA = os.path.join(
    os.path.dirname(__file__), "..", "src", "contraforge", "fixtures", "data"
)


def meta(title, topic, date, department, location, doc_type, authority):
    return DocumentMetadata(
        title=title, topic=topic, date=date, department=department,
        location=location, doc_type=doc_type, authority_level=authority,
    )


def para(*sentences):
    return " ".join(sentences)


# ---------------------------------------------------------------------------
# Injected statements (referenced from both documents and records)
# ---------------------------------------------------------------------------

T_TEMPORAL = "All mediation summaries must be submitted to the appointed mediator by January 15, 2025."
C_TEMPORAL = "Mediation summaries are due for submission at the end of Q1 2025."

T_REVERSAL = "Participation in pre-arbitration mediation is mandatory for all commercial disputes."
C_REVERSAL = "Participation in pre-arbitration mediation is not permitted for commercial disputes."

T_NUMERICAL = "The service credit pool for fiscal year 2024 is set at a $12M surplus."
C_NUMERICAL = "The fiscal year 2024 service credit pool carries a $5M deficit."

T_AUTHORITY = "The Aerodyne vendor code of conduct was issued by the Compliance Office."
C_AUTHORITY = "The Aerodyne vendor code of conduct was issued by the Strategy Unit."

T_PROCESS = "All regulatory filings are submitted via the central compliance portal before the quarterly deadline."
C_PROCESS = "All regulatory filings are submitted through the department admins on paper forms."

T_SPECIFICITY = "The conflict of interest declaration requirement applies globally to every Aerodyne office."
C_SPECIFICITY = "The conflict of interest declaration requirement applies only to APAC offices."


def build_documents():
    docs = []

    # Dispute Resolution and Litigation (self-contradiction domain)
    docs.append(Document(
        id="dr-001",
        metadata=meta("Mediation Procedures Update", "Submission deadlines for mediation summaries",
                      "2024-11-04", "Legal Affairs", "U.S.", "policy memo", "departmental"),
        domain="Dispute Resolution and Litigation", subdomain="Mediation Procedures",
        body="\n\n".join([
            para("Section 1. Purpose.",
                 "This memo defines the mediation summary workflow for all commercial disputes handled by Aerodyne Systems.",
                 T_TEMPORAL),
            para("Section 2. Preparation.",
                 "Case leads prepare a summary of no more than ten pages covering claims, exposure, and settlement posture.",
                 "Elena Marchetti, Senior Dispute Counsel, reviews every summary before release."),
            para("Section 3. Distribution.",
                 C_TEMPORAL,
                 "Upon submission, summaries are distributed to the opposing party's legal team and the appointed mediator."),
            para("Section 4. Records.",
                 "The Litigation Support Office retains all summaries for seven years in the Denver records center.",
                 "Questions go to litigation-support@aerodyne.example."),
        ]),
        ppl_base=14.2, ppl_final=14.8,
        people_meta=["Elena Marchetti, Senior Dispute Counsel, Aerodyne Legal Affairs"],
        doc_meta=["Mediation Summary Form MS-12, revised 2024-10-01"],
    ))

    docs.append(Document(
        id="dr-002",
        metadata=meta("Pre-Arbitration Mediation Policy", "Mediation requirements before arbitration",
                      "2024-09-17", "Legal Affairs", "Europe", "policy memo", "executive"),
        domain="Dispute Resolution and Litigation", subdomain="Arbitration Clauses",
        body="\n\n".join([
            para("Section 1. Scope.",
                 "This policy governs dispute escalation for all Aerodyne commercial contracts signed after March 1, 2024.",
                 T_REVERSAL),
            para("Section 2. Mediator selection.",
                 "The Amsterdam office maintains the approved mediator roster, curated by Jonas Brekke, Head of Dispute Resolution."),
            para("Section 3. Exceptions.",
                 C_REVERSAL,
                 "Escalations proceed directly to arbitration under the Geneva rules."),
            para("Section 4. Reporting.",
                 "Quarterly dispute statistics are filed with the General Counsel by the tenth business day of the following quarter."),
        ]),
        ppl_base=15.1, ppl_final=15.6,
        people_meta=["Jonas Brekke, Head of Dispute Resolution, Aerodyne Europe"],
        doc_meta=["Approved Mediator Roster 2024-Q3"],
    ))

    docs.append(Document(
        id="dr-003",
        metadata=meta("Litigation Hold Procedure", "Preservation obligations during litigation",
                      "2024-06-12", "Legal Affairs", "U.S.", "procedure notice", "departmental"),
        domain="Dispute Resolution and Litigation", subdomain="Litigation Holds",
        body="\n\n".join([
            para("Section 1. Trigger.",
                 "A litigation hold is issued within two business days of credible notice of a claim against Aerodyne Systems."),
            para("Section 2. Custodians.",
                 "Named custodians acknowledge the hold through the records portal within five business days.",
                 "Priya Nair, Records Manager, tracks acknowledgements from the Austin records center."),
            para("Section 3. Preservation.",
                 "Custodians suspend deletion of email, chat, and file shares related to the matter until the hold is released in writing."),
            para("Section 4. Release.",
                 "Only the General Counsel releases a hold, and the release notice names every custodian it covers."),
        ]),
        ppl_base=13.8,
        people_meta=["Priya Nair, Records Manager, Aerodyne U.S."],
        doc_meta=["Litigation Hold Notice Template LH-3"],
    ))

    # Terms and Service Management (self-contradiction domain)
    docs.append(Document(
        id="ts-001",
        metadata=meta("Service Credit Policy 2024", "Service credits for availability misses",
                      "2024-04-08", "Service Operations", "U.S.", "policy memo", "departmental"),
        domain="Terms and Service Management", subdomain="Service Level Agreements",
        body="\n\n".join([
            para("Section 1. Funding.",
                 T_NUMERICAL,
                 "Credits are granted for every verified breach of the 99.5 percent monthly availability target."),
            para("Section 2. Claims.",
                 "Customers file credit claims through the service desk within thirty days of the affected month.",
                 "Claims are reviewed by Marcus Webb, Director of Service Operations, in the Phoenix operations center."),
            para("Section 3. Accounting.",
                 C_NUMERICAL,
                 "Finance reconciles granted credits against the pool at each quarter close."),
            para("Section 4. Reporting.",
                 "A credit utilization report is delivered to account managers on the fifth business day of each month."),
        ]),
        ppl_base=14.9, ppl_final=15.4,
        people_meta=["Marcus Webb, Director of Service Operations, Aerodyne U.S."],
        doc_meta=["Availability Report Template AR-7"],
    ))

    docs.append(Document(
        id="ts-002",
        metadata=meta("Support Escalation Matrix", "Escalation tiers and response times",
                      "2024-07-22", "Service Operations", "Asia", "procedure notice", "departmental"),
        domain="Terms and Service Management", subdomain="Support Escalation",
        body="\n\n".join([
            para("Section 1. Tiers.",
                 "Severity 1 incidents receive a response within fifteen minutes around the clock from the Singapore operations hub."),
            para("Section 2. Ownership.",
                 "Each escalation is owned by a named incident manager until resolution.",
                 "Mei Lin Tan, Escalation Lead, assigns ownership for the Asia region."),
            para("Section 3. Communication.",
                 "Status updates are posted to the customer portal every thirty minutes for severity 1 and every two hours for severity 2."),
            para("Section 4. Review.",
                 "Post-incident reviews are completed within five business days and filed in the service knowledge base."),
        ]),
        ppl_base=14.1,
        people_meta=["Mei Lin Tan, Escalation Lead, Aerodyne Asia"],
        doc_meta=["Incident Review Form IR-2"],
    ))

    # Contract Law (interleaved pairwise domain)
    docs.append(Document(
        id="cl-001",
        metadata=meta("Vendor Conduct Requirements", "Conduct obligations for external vendors",
                      "2024-02-19", "Procurement Legal", "U.S.", "contract addendum", "executive"),
        domain="Contract Law", subdomain="Vendor Agreements",
        body="\n\n".join([
            para("Section 1. Authority.",
                 T_AUTHORITY,
                 "It binds every vendor with an active master services agreement."),
            para("Section 2. Obligations.",
                 "Vendors certify compliance annually and report conflicts within ten business days.",
                 "Certifications are countersigned by Dana Okafor, Procurement Counsel, in the Chicago office."),
            para("Section 3. Breach.",
                 "Any breach of the code triggers suspension of new purchase orders pending review."),
            para("Section 4. Term.",
                 "These requirements remain in force until superseded by a written amendment signed by both parties."),
        ]),
        ppl_base=15.3,
        people_meta=["Dana Okafor, Procurement Counsel, Aerodyne U.S."],
        doc_meta=["Vendor Code of Conduct v4, dated 2024-01-15"],
    ))

    docs.append(Document(
        id="cl-002",
        metadata=meta("Vendor Onboarding Addendum", "Onboarding obligations for new vendors",
                      "2024-03-05", "Procurement Legal", "Europe", "contract addendum", "departmental"),
        domain="Contract Law", subdomain="Vendor Agreements",
        body="\n\n".join([
            para("Section 1. Onboarding.",
                 "New vendors complete security and ethics onboarding before their first purchase order.",
                 C_AUTHORITY),
            para("Section 2. Documentation.",
                 "Onboarding evidence is archived in the contract lifecycle system by the Lyon procurement team."),
            para("Section 3. Contacts.",
                 "Questions are routed to Henrik Dalgaard, Vendor Relations Manager, at the Lyon office."),
            para("Section 4. Review.",
                 "Onboarding requirements are reviewed every January and republished with the annual procurement calendar."),
        ]),
        ppl_base=14.6, ppl_final=15.2,
        people_meta=["Henrik Dalgaard, Vendor Relations Manager, Aerodyne Europe"],
        doc_meta=["Procurement Calendar 2024"],
    ))

    docs.append(Document(
        id="cl-003",
        metadata=meta("Joint Venture IP Framework", "Ownership of jointly developed IP",
                      "2024-05-30", "IP Counsel", "Asia", "framework agreement", "board-approved"),
        domain="Contract Law", subdomain="Joint Ventures",
        body="\n\n".join([
            para("Section 1. Coverage.",
                 "All joint development projects initiated after April 10, 2024 adhere strictly to this framework."),
            para("Section 2. Ownership.",
                 "Background IP remains with the contributing party; foreground IP vests jointly unless a project charter states otherwise."),
            para("Section 3. Administration.",
                 "The Tokyo IP desk, led by Akiko Matsuda, Senior IP Counsel, administers charters and filings."),
            para("Section 4. Disputes.",
                 "Ownership disputes follow the dispute resolution policy and are recorded in the IP register within ten days."),
        ]),
        ppl_base=15.0,
        people_meta=["Akiko Matsuda, Senior IP Counsel, Aerodyne Asia"],
        doc_meta=["Project Charter Template JV-1"],
    ))

    # Compliance and Regulation (interleaved pairwise domain)
    docs.append(Document(
        id="cr-001",
        metadata=meta("Regulatory Filing Procedure", "Quarterly regulatory filing workflow",
                      "2024-01-25", "Compliance", "U.S.", "procedure notice", "departmental"),
        domain="Compliance and Regulation", subdomain="Regulatory Reporting",
        body="\n\n".join([
            para("Section 1. Workflow.",
                 T_PROCESS,
                 "The portal validates each filing against the current schema before acceptance."),
            para("Section 2. Ownership.",
                 "Filing owners are named in the compliance calendar maintained by Sofia Ibarra, Regulatory Affairs Lead, in Washington."),
            para("Section 3. Deadlines.",
                 "Quarterly filings close on the last business day of the month following quarter end."),
            para("Section 4. Escalation.",
                 "Validation failures escalate to the compliance duty officer within four hours."),
        ]),
        ppl_base=14.4,
        people_meta=["Sofia Ibarra, Regulatory Affairs Lead, Aerodyne U.S."],
        doc_meta=["Compliance Calendar 2024"],
    ))

    docs.append(Document(
        id="cr-002",
        metadata=meta("Audit Readiness Bulletin", "Preparation for the 2024 regulator audit",
                      "2024-08-14", "Compliance", "Europe", "bulletin", "departmental"),
        domain="Compliance and Regulation", subdomain="Audit Readiness",
        body="\n\n".join([
            para("Section 1. Schedule.",
                 "The 2024 regulator audit window opens on October 7, 2024 at the Hamburg site."),
            para("Section 2. Evidence.",
                 C_PROCESS,
                 "Admins log each paper form in the evidence ledger on the day of receipt."),
            para("Section 3. Interviews.",
                 "Process owners attend preparation interviews run by Tomas Keller, Audit Readiness Manager."),
            para("Section 4. Follow-up.",
                 "Findings are remediated on a thirty-day clock tracked in the compliance dashboard."),
        ]),
        ppl_base=14.7, ppl_final=15.5,
        people_meta=["Tomas Keller, Audit Readiness Manager, Aerodyne Europe"],
        doc_meta=["Evidence Ledger EL-9"],
    ))

    # Internal Policy and Governance (interleaved pairwise domain)
    docs.append(Document(
        id="ip-001",
        metadata=meta("Conflict of Interest Policy", "Declaration duties for all staff",
                      "2024-03-28", "Internal Policy and Governance", "U.S.", "policy memo", "board-approved"),
        domain="Internal Policy and Governance", subdomain="Conflict of Interest",
        body="\n\n".join([
            para("Section 1. Duty.",
                 T_SPECIFICITY,
                 "Declarations are renewed every January and whenever circumstances change."),
            para("Section 2. Review.",
                 "Declarations are reviewed by Fiona Zhang, Director of Internal Policy, and archived for six years."),
            para("Section 3. Breach.",
                 "Failure to declare a conflict results in disciplinary review under the employee handbook."),
            para("Section 4. Support.",
                 "The policy desk answers declaration questions within two business days at policy-desk@aerodyne.example."),
        ]),
        ppl_base=13.9,
        people_meta=["Fiona Zhang, Director of Internal Policy, Aerodyne U.S."],
        doc_meta=["Declaration Form COI-1"],
    ))

    docs.append(Document(
        id="ip-002",
        metadata=meta("Governance Update Q2", "Quarterly governance changes",
                      "2024-06-03", "Internal Policy and Governance", "Asia", "bulletin", "departmental"),
        domain="Internal Policy and Governance", subdomain="Conflict of Interest",
        body="\n\n".join([
            para("Section 1. Changes.",
                 "This bulletin summarizes governance changes effective in the second quarter of 2024.",
                 C_SPECIFICITY),
            para("Section 2. Oversight.",
                 "The Conflict of Interest Declaration process is overseen by Dr. Ravi Kumar, Policy Compliance Officer."),
            para("Section 3. Training.",
                 "Refreshed governance training ships to all people managers in the Singapore office by June 30, 2024."),
            para("Section 4. Contacts.",
                 "Regional questions go to the governance desk in each office listed in the directory."),
        ]),
        ppl_base=14.3, ppl_final=15.0,
        people_meta=["Dr. Ravi Kumar, Policy Compliance Officer, Aerodyne Asia"],
        doc_meta=["Governance Training Pack 2024-Q2"],
    ))

    return docs


def build_injected():
    def rec(rid, mode, ctype, target, contradiction, source, host, delta):
        return ContradictionRecord(
            id=rid, mode=mode, ctype=ctype, target_statement=target,
            contradiction_statement=contradiction, source_doc=source,
            host_doc=host, delta_rel=delta,
        )

    return [
        rec("inj-001", Mode.SELF, ContradictionType.TEMPORAL,
            T_TEMPORAL, C_TEMPORAL, "dr-001", "dr-001", 0.042),
        rec("inj-002", Mode.SELF, ContradictionType.POLICY_REVERSAL,
            T_REVERSAL, C_REVERSAL, "dr-002", "dr-002", 0.033),
        rec("inj-003", Mode.SELF, ContradictionType.NUMERICAL,
            T_NUMERICAL, C_NUMERICAL, "ts-001", "ts-001", 0.034),
        rec("inj-004", Mode.PAIRWISE, ContradictionType.AUTHORITY,
            T_AUTHORITY, C_AUTHORITY, "cl-001", "cl-002", 0.041),
        rec("inj-005", Mode.PAIRWISE, ContradictionType.PROCESS,
            T_PROCESS, C_PROCESS, "cr-001", "cr-002", 0.054),
        rec("inj-006", Mode.PAIRWISE, ContradictionType.SPECIFICITY,
            T_SPECIFICITY, C_SPECIFICITY, "ip-001", "ip-002", 0.049),
    ]


# Extra labeled pairs filling the gold set out to 40.
EXTRA_PAIRS = [
    # (mode, label, ctype or None, statement 1, statement 2)
    (Mode.SELF, 1, "temporal",
     "The export license review starts on February 1, 2024.",
     "The export license review starts in the final week of June 2024."),
    (Mode.SELF, 1, "temporal",
     "Badge renewals are completed by March 31, 2024.",
     "Badge renewals are completed no earlier than September 2024."),
    (Mode.PAIRWISE, 1, "temporal",
     "All required reports are submitted by March 30, 2024, without exceptions.",
     "The required regulatory reports will be submitted by April 15, 2024."),
    (Mode.SELF, 1, "numerical",
     "The retention bonus pool totals $4.5M for 2024.",
     "The retention bonus pool totals $1.2M for 2024."),
    (Mode.PAIRWISE, 1, "numerical",
     "Severance equals twelve weeks of base pay.",
     "Severance equals four weeks of base pay."),
    (Mode.SELF, 1, "authority",
     "The travel freeze was ordered by the Finance Committee.",
     "The travel freeze was ordered by the Facilities Office."),
    (Mode.PAIRWISE, 1, "authority",
     "The crisis policy is enforced by the team led by Fiona Zhang, Director of Internal Policy.",
     "The crisis policy is enforced by the office of Dr. Ravi Kumar, Policy Compliance Officer."),
    (Mode.SELF, 1, "process",
     "Expense claims are filed through the finance portal with digital receipts.",
     "Expense claims are mailed to the regional office with original paper receipts."),
    (Mode.PAIRWISE, 1, "process",
     "Security incidents are reported by calling the 24-hour hotline.",
     "Security incidents are reported exclusively by encrypted email to the duty officer."),
    (Mode.SELF, 1, "policy_reversal",
     "Contractors are permitted to access the design vault under escort.",
     "Contractors are barred from the design vault under all circumstances."),
    (Mode.PAIRWISE, 1, "policy_reversal",
     "Disclosure of sensitive information without authorization is a breach of this agreement.",
     "Unauthorized disclosure of sensitive information is not a breach of this agreement until May 15, 2024."),
    (Mode.SELF, 1, "specificity",
     "The safety standard applies to every Aerodyne facility worldwide.",
     "The safety standard applies only to the Toulouse assembly line."),
    (Mode.PAIRWISE, 1, "specificity",
     "The licensing framework covers all partner institutes.",
     "The licensing framework covers only government research agencies."),
    (Mode.SELF, 1, "numerical",
     "The audit sampled 250 supplier invoices.",
     "The audit sampled 60 supplier invoices."),
    # Non-contradictory pairs (label 0)
    (Mode.SELF, 0, None,
     "The mediation roster is maintained by the Amsterdam office.",
     "Quarterly dispute statistics are filed with the General Counsel."),
    (Mode.SELF, 0, None,
     "Custodians acknowledge litigation holds through the records portal.",
     "The records center retains summaries for seven years."),
    (Mode.PAIRWISE, 0, None,
     "Severity 1 incidents receive a response within fifteen minutes.",
     "Post-incident reviews are completed within five business days."),
    (Mode.PAIRWISE, 0, None,
     "New vendors complete ethics onboarding before their first purchase order.",
     "Onboarding evidence is archived in the contract lifecycle system."),
    (Mode.SELF, 0, None,
     "Seconded employees retain ownership of IP developed during the joint venture.",
     "Project charters are administered by the Tokyo IP desk."),
    (Mode.PAIRWISE, 0, None,
     "The audit window opens on October 7, 2024 at the Hamburg site.",
     "Findings are remediated on a thirty-day clock."),
    (Mode.SELF, 0, None,
     "Declarations are renewed every January.",
     "The policy desk answers questions within two business days."),
    (Mode.PAIRWISE, 0, None,
     "Governance training ships to people managers by June 30, 2024.",
     "Regional questions go to the governance desk in each office."),
    (Mode.SELF, 0, None,
     "Credit claims are filed within thirty days of the affected month.",
     "Finance reconciles granted credits at each quarter close."),
    (Mode.PAIRWISE, 0, None,
     "The compliance portal validates filings against the current schema.",
     "Filing owners are named in the compliance calendar."),
    (Mode.SELF, 0, None,
     "Status updates are posted every thirty minutes for severity 1 incidents.",
     "Escalations are owned by a named incident manager until resolution."),
    (Mode.PAIRWISE, 0, None,
     "Vendors certify compliance annually.",
     "Certifications are countersigned by Procurement Counsel."),
    (Mode.SELF, 0, None,
     "Background IP remains with the contributing party.",
     "Ownership disputes are recorded in the IP register within ten days."),
    (Mode.PAIRWISE, 0, None,
     "A litigation hold is issued within two business days of credible notice.",
     "Only the General Counsel releases a hold."),
    (Mode.SELF, 0, None,
     "The onboarding calendar is republished every January.",
     "Questions are routed to the Vendor Relations Manager."),
    (Mode.PAIRWISE, 0, None,
     "Preparation interviews are run by the Audit Readiness Manager.",
     "Process owners attend preparation interviews before the audit."),
    (Mode.SELF, 0, None,
     "The approved mediator roster is curated quarterly.",
     "Escalations proceed under the Geneva rules when mediation fails."),
    (Mode.PAIRWISE, 0, None,
     "Incident ownership for Asia is assigned by the Escalation Lead.",
     "The Singapore hub responds to severity 1 incidents around the clock."),
    (Mode.SELF, 0, None,
     "The credit utilization report ships on the fifth business day monthly.",
     "Account managers receive the utilization report by email."),
    (Mode.PAIRWISE, 0, None,
     "Validation failures escalate to the duty officer within four hours.",
     "The compliance dashboard tracks remediation progress."),
]


def build_gold(injected):
    items = []
    for rec in injected:
        key = pair_key(rec.target_statement, rec.contradiction_statement, rec.mode)
        items.append(GoldItem(
            key=key, mode=rec.mode,
            doc1_chunk=rec.target_statement, doc2_chunk=rec.contradiction_statement,
            sources={"injected"}, human_label=1,
            extras={"ctype": rec.ctype.value},
        ))
    for mode, label, ctype, s1, s2 in EXTRA_PAIRS:
        key = pair_key(s1, s2, mode)
        extras = {"ctype": ctype} if ctype else {}
        items.append(GoldItem(
            key=key, mode=mode, doc1_chunk=s1, doc2_chunk=s2,
            sources={"hybrid"}, human_label=label, extras=extras,
        ))
    assert len(items) == 40, len(items)
    assert len({i.key for i in items}) == 40, "duplicate gold keys"
    return sorted(items, key=lambda i: i.key)


def write(path, records):
    if os.path.exists(path):
        os.remove(path)
    store = RecordStore(path)
    store.append_all(records)
    print(f"wrote {len(records):3d} records -> {os.path.relpath(path)}")


def main():
    docs = build_documents()
    injected = build_injected()
    gold = build_gold(injected)
    write(os.path.join(DATA, "mini_docs.jsonl"), docs)
    write(os.path.join(DATA, "injected.jsonl"), injected)
    write(os.path.join(DATA, "mini_gold.jsonl"), gold)


if __name__ == "__main__":
    main()
