import pytest
from fastapi.testclient import TestClient

from phonlesson import synthesize_test_wav
from phonlesson.service import create_app

from conftest import listing_lesson, write_project


@pytest.fixture
def client(tmp_path):
    root = write_project(tmp_path / "proj", listing_lesson())
    return TestClient(create_app(root))


@pytest.fixture
def fresh_client(tmp_path):
    return TestClient(create_app(tmp_path / "empty"))


def revision(client):
    return client.get("/lesson").json()["revision"]


class TestLessonCrud:
    def test_get_lesson(self, client):
        doc = client.get("/lesson").json()
        assert doc["revision"] == 0
        assert len(doc["rules"]) == 1
        assert doc["rules"][0]["examples"][0]["audio"]["src"] == "Exemple1_R1.wav"

    def test_post_rule_then_get(self, client):
        resp = client.post(
            "/rules",
            json={"xhtml": "<p><span>new rule</span></p>"},
            headers={"If-Match": "0"},
        )
        assert resp.status_code == 201
        rule_id = resp.json()["id"]
        doc = client.get("/lesson").json()
        assert any(r["id"] == rule_id for r in doc["rules"])

    def test_mutation_without_if_match_rejected(self, client):
        resp = client.post("/rules", json={"xhtml": "<p><span>x</span></p>"})
        assert resp.status_code == 400

    def test_stale_revision_conflict(self, client):
        headers = {"If-Match": "0"}
        assert client.post("/rules", json={"xhtml": "<p><span>a</span></p>"}, headers=headers).status_code == 201
        resp = client.post("/rules", json={"xhtml": "<p><span>b</span></p>"}, headers=headers)
        assert resp.status_code == 409

    def test_delete_rule_cascade_count(self, client):
        resp = client.delete("/rules/1", headers={"If-Match": "0"})
        assert resp.json()["removed"] == 3

    def test_delete_unknown_rule_404(self, client):
        assert client.delete("/rules/99", headers={"If-Match": "0"}).status_code == 404

    def test_put_title(self, client):
        resp = client.put(
            "/lesson/title", content="<p><span>New title</span></p>", headers={"If-Match": "0"}
        )
        assert resp.status_code == 200
        assert "New title" in client.get("/lesson").json()["title"]

    def test_put_node_text_round_trips_fragment(self, client):
        fragment = '<p><span>W</span><span style="color:#FF0000;font-size:18px">a</span><span>tch</span></p>'
        resp = client.put("/nodes/1.1/text", content=fragment, headers={"If-Match": "0"})
        assert resp.status_code == 200
        doc = client.get("/lesson").json()
        assert doc["rules"][0]["examples"][0]["xhtml"] == fragment

    def test_put_text_bad_fragment_400(self, client):
        resp = client.put("/nodes/1/text", content="<p><script>x</script></p>", headers={"If-Match": "0"})
        assert resp.status_code == 400

    def test_put_text_unknown_node_404(self, client):
        resp = client.put("/nodes/7/text", content="<p><span>x</span></p>", headers={"If-Match": "0"})
        assert resp.status_code == 404


class TestAudioEndpoints:
    def test_upload_probe_duration(self, client):
        wav = synthesize_test_wav(1000, 44100, 1, 16)
        resp = client.post("/nodes/1/audio", content=wav, headers={"If-Match": "0"})
        assert resp.status_code == 200
        assert resp.json()["durationMs"] == 1000

    def test_upload_non_pcm_422(self, client):
        resp = client.post("/nodes/1/audio", content=b"not a wav", headers={"If-Match": "0"})
        assert resp.status_code == 422

    def test_delete_audio_falls_back_to_default_display(self, client):
        assert client.delete("/nodes/1.1/audio", headers={"If-Match": "0"}).status_code == 200
        timeline = client.get("/timeline").json()
        kinds = {
            (ev["kind"], ev["exampleId"])
            for seg in timeline["segments"]
            for ev in seg["events"]
        }
        assert ("startExampleAudio", 1) not in kinds
        # text slot falls back to the 3000 ms default display span
        assert timeline["segments"][0]["durMs"] == 28000 - 2000 + 3000


class TestPipelineEndpoints:
    def test_timeline(self, client):
        doc = client.get("/timeline").json()
        assert doc["segments"][0]["durMs"] == 28000

    def test_compile_returns_smil_and_timeline(self, client):
        doc = client.post("/compile").json()
        assert '<par xml:id="1" dur="28s">' in doc["smil"]
        assert doc["timeline"]["totalMs"] == 28000

    def test_compiled_smil_served(self, client):
        client.post("/compile")
        resp = client.get("/dist/lesson.smil")
        assert resp.status_code == 200
        assert 'dur="28s"' in resp.text

    def test_palette(self, client):
        entries = client.get("/palette").json()
        assert {"char": "ə", "name": "schwa"} in entries

    def test_service_matches_cli_output(self, client, tmp_path):
        from click.testing import CliRunner

        from phonlesson.cli import main

        smil_api = client.post("/compile").json()["smil"]
        root = write_project(tmp_path / "same", listing_lesson())
        CliRunner().invoke(main, ["compile", "--project", str(root)])
        smil_cli = (root / "dist" / "lesson.smil").read_text(encoding="utf-8")
        assert smil_api == smil_cli


class TestFreshProject:
    def test_starts_with_empty_draft(self, fresh_client):
        doc = fresh_client.get("/lesson").json()
        assert doc["rules"] == []

    def test_timeline_of_empty_draft_400(self, fresh_client):
        assert fresh_client.get("/timeline").status_code == 400
