import random

import pytest

from phonlesson import (
    AudioSource,
    StyledText,
    TimingConfig,
    lessons_equal,
    load_sph,
    new_lesson,
    save_sph,
)
from phonlesson.errors import (
    DuplicateId,
    InvalidAudio,
    MalformedDocument,
    PathTraversal,
    PositionOutOfRange,
    UnknownNode,
    UnknownSchemaVersion,
)

from conftest import listing_lesson, random_lesson


def plain(s):
    return StyledText.plain(s)


class TestEditing:
    def test_new_lesson_is_empty_draft(self):
        lesson = new_lesson(plain("Lesson 1"))
        assert lesson.rules == []
        assert lesson.timing.lead_in_ms == 1000

    def test_empty_title_accepted_as_draft(self):
        lesson = new_lesson(StyledText())
        assert lesson.title.plain_text() == ""

    def test_add_rule_appends_with_id_1(self):
        lesson = new_lesson(plain("t"))
        assert lesson.add_rule(plain("r")) == 1
        assert [r.id for r in lesson.rules] == [1]

    def test_add_rule_at_front_keeps_ids(self):
        lesson = new_lesson(plain("t"))
        lesson.add_rule(plain("one"))
        lesson.add_rule(plain("two"), position=0)
        assert [r.id for r in lesson.rules] == [2, 1]

    def test_add_rule_position_out_of_range(self):
        lesson = new_lesson(plain("t"))
        with pytest.raises(PositionOutOfRange):
            lesson.add_rule(plain("r"), position=5)

    def test_ids_never_reused_after_delete(self):
        lesson = new_lesson(plain("t"))
        lesson.add_rule(plain("one"))
        lesson.add_rule(plain("two"))
        lesson.delete_rule(1)
        assert lesson.add_rule(plain("three")) == 3

    def test_example_ids_per_rule(self):
        lesson = new_lesson(plain("t"))
        r = lesson.add_rule(plain("r"))
        assert lesson.add_example(r, plain("e1")) == 1
        assert lesson.add_example(r, plain("e2")) == 2
        assert [e.id for e in lesson.rule(r).examples] == [1, 2]

    def test_add_example_unknown_rule(self):
        lesson = new_lesson(plain("t"))
        with pytest.raises(UnknownNode):
            lesson.add_example(99, plain("e"))

    def test_delete_rule_cascades_examples(self):
        lesson = new_lesson(plain("t"))
        r = lesson.add_rule(plain("r"))
        lesson.add_example(r, plain("e1"))
        lesson.add_example(r, plain("e2"))
        assert lesson.delete_rule(r) == 3
        assert lesson.rules == []

    def test_delete_rule_without_examples(self):
        lesson = new_lesson(plain("t"))
        r = lesson.add_rule(plain("r"))
        assert lesson.delete_rule(r) == 1

    def test_delete_unknown_rule(self):
        lesson = new_lesson(plain("t"))
        with pytest.raises(UnknownNode):
            lesson.delete_rule(1)


class TestAudioAttachment:
    def test_attach_sets_duration(self):
        lesson = new_lesson(plain("t"))
        r = lesson.add_rule(plain("r"))
        lesson.attach_audio((r,), AudioSource("Regle 1.wav", 9000))
        assert lesson.rule(r).audio.duration_ms == 9000

    def test_reattach_overwrites(self):
        lesson = new_lesson(plain("t"))
        r = lesson.add_rule(plain("r"))
        lesson.attach_audio((r,), AudioSource("a.wav", 1000))
        lesson.attach_audio((r,), AudioSource("b.wav", 2000))
        assert lesson.rule(r).audio.src == "b.wav"

    def test_zero_duration_rejected(self):
        lesson = new_lesson(plain("t"))
        r = lesson.add_rule(plain("r"))
        with pytest.raises(InvalidAudio):
            lesson.attach_audio((r,), AudioSource("a.wav", 0))

    def test_traversal_src_rejected(self):
        lesson = new_lesson(plain("t"))
        r = lesson.add_rule(plain("r"))
        with pytest.raises(PathTraversal):
            lesson.attach_audio((r,), AudioSource("../x.wav", 100))
        with pytest.raises(PathTraversal):
            lesson.attach_audio((r,), AudioSource("/etc/x.wav", 100))

    def test_detach_clears(self):
        lesson = new_lesson(plain("t"))
        r = lesson.add_rule(plain("r"))
        lesson.attach_audio((r,), AudioSource("a.wav", 1000))
        lesson.detach_audio((r,))
        assert lesson.rule(r).audio is None


class TestTimingConfig:
    def test_sanity_bound(self):
        with pytest.raises(ValueError):
            TimingConfig(lead_in_ms=3_600_000)

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            TimingConfig(tail_ms=-1)


class TestSphRoundTrip:
    def test_empty_draft_round_trips(self):
        lesson = new_lesson(plain("Lesson 1"))
        assert lessons_equal(load_sph(save_sph(lesson)), lesson)

    def test_listing_lesson_round_trips(self):
        lesson = listing_lesson()
        again = load_sph(save_sph(lesson))
        assert lessons_equal(again, lesson)

    def test_save_is_deterministic(self):
        lesson = listing_lesson()
        assert save_sph(lesson) == save_sph(lesson)

    def test_randomized_round_trip(self):
        rng = random.Random(31)
        for _ in range(250):
            lesson = random_lesson(rng)
            doc = save_sph(lesson)
            again = load_sph(doc)
            assert lessons_equal(again, lesson)
            assert save_sph(again) == doc

    def test_traversal_src_rejected_on_load(self):
        doc = save_sph(listing_lesson()).replace('src="Regle 1.wav"', 'src="../x.wav"')
        with pytest.raises(PathTraversal):
            load_sph(doc)

    def test_unknown_version_rejected(self):
        doc = save_sph(listing_lesson()).replace('version="1.0"', 'version="9.9"')
        with pytest.raises(UnknownSchemaVersion):
            load_sph(doc)

    def test_duplicate_rule_id_rejected(self):
        lesson = new_lesson(plain("t"))
        lesson.add_rule(plain("a"))
        lesson.add_rule(plain("b"))
        doc = save_sph(lesson).replace('<rule id="2">', '<rule id="1">')
        with pytest.raises(DuplicateId):
            load_sph(doc)

    def test_malformed_xml_rejected(self):
        with pytest.raises(MalformedDocument):
            load_sph("<lesson version='1.0'><oops></lesson>")

    def test_ids_continue_after_load(self):
        lesson = new_lesson(plain("t"))
        lesson.add_rule(plain("a"))
        lesson.add_rule(plain("b"))
        again = load_sph(save_sph(lesson))
        assert again.add_rule(plain("c")) == 3


class TestEditScriptInvariants:
    def test_random_edit_scripts_keep_invariants(self):
        rng = random.Random(43)
        for _ in range(50):
            lesson = new_lesson(plain("t"))
            for _ in range(60):
                op = rng.random()
                rule_ids = [r.id for r in lesson.rules]
                if op < 0.4 or not rule_ids:
                    lesson.add_rule(plain("r"), rng.randrange(len(lesson.rules) + 1))
                elif op < 0.55:
                    lesson.delete_rule(rng.choice(rule_ids))
                elif op < 0.8:
                    lesson.add_example(rng.choice(rule_ids), plain("e"))
                else:
                    lesson.attach_audio(
                        (rng.choice(rule_ids),), AudioSource("a.wav", 500)
                    )
                ids = [r.id for r in lesson.rules]
                assert len(ids) == len(set(ids))
                for rule in lesson.rules:
                    ex_ids = [e.id for e in rule.examples]
                    assert len(ex_ids) == len(set(ex_ids))
