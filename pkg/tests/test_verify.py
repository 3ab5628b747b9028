import json

from freewh import surface, verify
from freewh.verify import passed, report_digest, verify_all, verify_inverse_claim
from freewh.words import parse_word


def test_full_report_passes():
    report = verify_all()
    assert passed(report)
    assert report["schema"] == 1
    assert [c["id"] for c in report["claims"]] == ["inverse-asymmetry", "lift", "keep", "conjugation"]
    assert report["fixtures"] == {"klein_cover": 1, "push_tables": 1, "keep_maps": 1}
    claim = report["claims"][0]["data"]
    assert claim["min_length"] == 6 and claim["orbit_size"] == 24
    assert claim["inverse_equivalent"] is False
    assert all(c["anchor"] for c in report["claims"])


def test_lift_report_dictionary():
    data = verify.verify_lift()["data"]
    assert data["lift"] == "b^2 a^-2 b a"
    assert "I[a->c^-1, b->a, c->b]" in data["type_i_letter_equality"]["exact"]
    assert verify.replay_check(data["witness"], data["lift"], verify.W_TEXT)


def test_witnesses_replay_by_application():
    data = verify_inverse_claim()["data"]
    pinned = data["witnesses"]["pinned"]
    assert verify.replay_check(pinned, pinned["source"], pinned["target"])
    m = data["witnesses"]["a_inverse"]
    assert verify.replay_check({"map": m}, "a", "a^-1")
    assert verify.PINNED(parse_word(verify.W_TEXT, verify.F3)) == parse_word(
        data["controls"]["pinned_image"], verify.F3
    )


def test_mutations_fail():
    for word in ("a", "a b", "a b^2 a^-1 b^-1"):
        claim = verify_inverse_claim(word)
        assert claim["result"] == "FAIL", word
    assert not passed(verify_all(word="a b"))


def test_corrupted_fixture_reports_invariant(tmp_path):
    data = surface._read(surface.PUSH_FIXTURE, None)
    data["moves"]["p1v"]["inverse"][1] = "y^2"
    path = tmp_path / "push.json"
    path.write_text(json.dumps(data))
    report = verify_all(push_path=path)
    assert not passed(report)
    bad = {c["id"]: c for c in report["claims"] if c["result"] == "FAIL"}
    assert set(bad) == {"keep", "conjugation"}
    assert bad["keep"]["data"]["invariant"] == "automorphism"


def test_missing_fixture(tmp_path):
    report = verify_all(keep_path=tmp_path / "absent.json")
    keep = next(c for c in report["claims"] if c["id"] == "keep")
    assert keep["result"] == "FAIL" and keep["data"]["invariant"] == "missing"


def test_deterministic_across_threads():
    assert report_digest(verify_all()) == report_digest(verify_all(threads=2))
