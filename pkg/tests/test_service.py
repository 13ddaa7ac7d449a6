"""HTTP API surface: auth, the queue flow, consolidation views, IAA,
adjudication, reviews, and gold export, exercised through a test client."""

import pytest
from fastapi.testclient import TestClient

from contraforge.annotation import AnnotationService
from contraforge.corpus import GoldItem, Mode, RecordStore, pair_key, record_to_dict
from contraforge.service import TOKEN_HEADER, app_from_store, create_app


def _items(n=3):
    items = []
    for i in range(n):
        c1 = f"Statement number {i} about the first policy position here."
        c2 = f"Statement number {i} about the second policy position here."
        items.append(GoldItem(
            key=pair_key(c1, c2, Mode.SELF), mode=Mode.SELF,
            doc1_chunk=c1, doc2_chunk=c2,
        ))
    return sorted(items, key=lambda g: g.key)


def _client(items=None, token="", annotators=("ann1", "ann2")):
    service = AnnotationService(
        items if items is not None else _items(),
        annotators=list(annotators),
        clock=lambda: "2024-06-01T00:00:00+00:00",
    )
    app = create_app(service, token=token)
    return TestClient(app), service


class TestAuth:
    def test_missing_token_rejected(self):
        client, _ = _client(token="secret")
        assert client.get("/api/queue/next", params={"annotator": "ann1"}).status_code == 401

    def test_wrong_token_rejected(self):
        client, _ = _client(token="secret")
        resp = client.get("/api/iaa", headers={TOKEN_HEADER: "nope"})
        assert resp.status_code == 401

    def test_good_token_accepted(self):
        client, _ = _client(token="secret")
        resp = client.get("/api/iaa", headers={TOKEN_HEADER: "secret"})
        assert resp.status_code == 200

    def test_empty_token_disables_auth(self):
        client, _ = _client(token="")
        assert client.get("/api/iaa").status_code == 200


class TestQueueAndLabels:
    def test_queue_serves_and_advances(self):
        client, service = _client()
        keys = sorted(service.items)
        resp = client.get("/api/queue/next", params={"annotator": "ann1"})
        assert resp.status_code == 200
        body = resp.json()
        assert body["item"]["key"] == keys[0]
        assert body["remaining"] == 3

        post = client.post("/api/labels", json={
            "annotator": "ann1", "key": keys[0], "label": 1,
        })
        assert post.status_code == 200
        assert post.json()["timestamp"] == "2024-06-01T00:00:00+00:00"

        body = client.get("/api/queue/next", params={"annotator": "ann1"}).json()
        assert body["item"]["key"] == keys[1]
        assert body["remaining"] == 2

    def test_queue_drained(self):
        client, service = _client(_items(1))
        key = sorted(service.items)[0]
        client.post("/api/labels", json={"annotator": "ann1", "key": key, "label": 0})
        body = client.get("/api/queue/next", params={"annotator": "ann1"}).json()
        assert body == {"item": None, "remaining": 0}

    def test_unknown_annotator_404(self):
        client, _ = _client()
        assert client.get("/api/queue/next",
                          params={"annotator": "ghost"}).status_code == 404

    def test_unknown_key_404(self):
        client, _ = _client()
        resp = client.post("/api/labels", json={
            "annotator": "ann1", "key": "missing", "label": 1,
        })
        assert resp.status_code == 404

    def test_bad_label_rejected(self):
        client, service = _client()
        key = sorted(service.items)[0]
        resp = client.post("/api/labels", json={
            "annotator": "ann1", "key": key, "label": 3,
        })
        assert resp.status_code == 422

    def test_resubmission_is_idempotent_for_state(self):
        client, service = _client()
        key = sorted(service.items)[0]
        for _ in range(2):
            client.post("/api/labels", json={"annotator": "ann1", "key": key, "label": 1})
        item = client.get(f"/api/items/{key}").json()
        assert item["labels"] == {"ann1": 1}


class TestItemView:
    def test_consolidated_item(self):
        client, service = _client()
        key = sorted(service.items)[0]
        client.post("/api/labels", json={"annotator": "ann1", "key": key, "label": 1})
        client.post("/api/labels", json={"annotator": "ann2", "key": key, "label": 1})
        body = client.get(f"/api/items/{key}").json()
        assert body["human_label"] == 1
        assert body["labels"] == {"ann1": 1, "ann2": 1}
        assert body["agreement"] == 1.0
        assert body["sources"] == []

    def test_missing_item_404(self):
        client, _ = _client()
        assert client.get("/api/items/absent").status_code == 404


class TestIaa:
    def test_report_shape(self):
        client, service = _client()
        for key in sorted(service.items):
            client.post("/api/labels", json={"annotator": "ann1", "key": key, "label": 1})
            client.post("/api/labels", json={"annotator": "ann2", "key": key, "label": 1})
        body = client.get("/api/iaa").json()
        assert body["percent_agreement"] == 1.0
        assert body["n_items"] == 3 and body["n_annotators"] == 2
        assert "cohen_kappa" in body and "kripp_alpha" in body

    def test_mode_filter(self):
        client, _ = _client()
        assert client.get("/api/iaa", params={"mode": "self"}).status_code == 200
        assert client.get("/api/iaa", params={"mode": "sideways"}).status_code == 422


class TestAdjudication:
    def test_queue_and_submit(self):
        client, service = _client()
        key = sorted(service.items)[0]
        client.post("/api/labels", json={"annotator": "ann1", "key": key, "label": 1})
        client.post("/api/labels", json={"annotator": "ann2", "key": key, "label": 0})
        queued = client.get("/api/adjudication").json()["items"]
        assert [i["key"] for i in queued] == [key]

        resp = client.post("/api/adjudication", json={
            "sme": "expert", "key": key, "label": 1,
        })
        assert resp.status_code == 200
        assert client.get("/api/adjudication").json()["items"] == []
        item = client.get(f"/api/items/{key}").json()
        assert item["human_label"] == 1 and item["adjudicated"] is True

    def test_unknown_key_404(self):
        client, _ = _client()
        resp = client.post("/api/adjudication", json={
            "sme": "expert", "key": "missing", "label": 0,
        })
        assert resp.status_code == 404


class TestReviews:
    def test_submit_review(self):
        client, _ = _client()
        resp = client.post("/api/reviews", json={
            "annotator": "ann1", "doc_id": "doc-01",
            "likert": {"fluency": 4, "specificity": 5, "coherence": 4, "legitimacy": 3},
            "detected": True,
        })
        assert resp.status_code == 200
        assert resp.json()["kind"] == "doc_review"

    def test_incomplete_likert_422(self):
        client, _ = _client()
        resp = client.post("/api/reviews", json={
            "annotator": "ann1", "doc_id": "doc-01",
            "likert": {"fluency": 4}, "detected": False,
        })
        assert resp.status_code == 422


class TestExportAndWiring:
    def test_export_gold(self):
        client, service = _client()
        for key in sorted(service.items):
            client.post("/api/labels", json={"annotator": "ann1", "key": key, "label": 1})
            client.post("/api/labels", json={"annotator": "ann2", "key": key, "label": 1})
        items = client.get("/api/export/gold").json()["items"]
        assert [i["key"] for i in items] == sorted(service.items)
        assert all(i["human_label"] == 1 for i in items)

    def test_app_from_store_round_trip(self, tmp_path):
        path = tmp_path / "run.jsonl"
        store = RecordStore(path)
        for item in _items(2):
            store.append(item)
        app = app_from_store(str(path), annotators=["ann1"])
        client = TestClient(app)
        keys = [i.key for i in _items(2)]
        client.post("/api/labels", json={"annotator": "ann1", "key": keys[0], "label": 1})
        # a second app over the same store sees the submitted label
        revived = TestClient(app_from_store(str(path), annotators=["ann1"]))
        assert revived.get(f"/api/items/{keys[0]}").json()["labels"] == {"ann1": 1}

    def test_static_dir_mounted(self, tmp_path):
        (tmp_path / "index.html").write_text("<h1>annotation ui</h1>")
        service = AnnotationService(_items(1), annotators=["ann1"])
        app = create_app(service, static_dir=str(tmp_path))
        client = TestClient(app)
        resp = client.get("/")
        assert resp.status_code == 200
        assert "annotation ui" in resp.text
