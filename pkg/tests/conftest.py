import random

import pytest

from phonlesson import (
    AudioSource,
    Lesson,
    Marker,
    Run,
    StyledText,
    TimingConfig,
    canonicalize,
    new_lesson,
    save_sph,
    synthesize_test_wav,
)

# Alphabet for randomized texts: ASCII, a few Latin-1 letters, IPA and
# modifier/diacritic codepoints, general punctuation.
TEXT_ALPHABET = (
    "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789 ',.-?!&<>\"/();:"
    "àâçéèêëîïôùûü"
    + "".join(chr(cp) for cp in range(0x0250, 0x02B0))
    + "ˈˌː́̀–’"
)

FONT_FAMILIES = ["Arial", "Times New Roman", "Courier", "DejaVu Sans"]


def random_marker(rng: random.Random) -> Marker:
    return Marker(
        color="#%06X" % rng.randrange(1 << 24) if rng.random() < 0.6 else None,
        font_family=rng.choice(FONT_FAMILIES) if rng.random() < 0.4 else None,
        font_size_px=rng.randrange(6, 97) if rng.random() < 0.5 else None,
        bold=rng.random() < 0.3,
        italic=rng.random() < 0.2,
    )


def random_text(rng: random.Random, min_len=1, max_len=12) -> str:
    n = rng.randrange(min_len, max_len + 1)
    return "".join(rng.choice(TEXT_ALPHABET) for _ in range(n))


def random_styled(rng: random.Random, max_runs=4) -> StyledText:
    runs = []
    for _ in range(rng.randrange(1, max_runs + 1)):
        marker = random_marker(rng) if rng.random() < 0.5 else None
        runs.append(Run(random_text(rng), marker))
    st = canonicalize(runs)
    if st.is_blank():
        st = canonicalize([Run("x"), *st.runs])
    return st


def random_timing(rng: random.Random) -> TimingConfig:
    return TimingConfig(
        lead_in_ms=rng.randrange(0, 5001),
        inter_gap_ms=rng.randrange(0, 5001),
        tail_ms=rng.randrange(0, 5001),
        default_display_ms=rng.randrange(1, 8001),
    )


def random_lesson(rng: random.Random, max_rules=10, max_examples=5) -> Lesson:
    lesson = new_lesson(random_styled(rng))
    lesson.timing = random_timing(rng)
    for i in range(rng.randrange(1, max_rules + 1)):
        rule_id = lesson.add_rule(random_styled(rng))
        if rng.random() < 0.8:
            lesson.attach_audio(
                (rule_id,), AudioSource(f"r{rule_id}.wav", rng.randrange(100, 30001))
            )
        for _ in range(rng.randrange(0, max_examples + 1)):
            ex_id = lesson.add_example(rule_id, random_styled(rng))
            if rng.random() < 0.8:
                lesson.attach_audio(
                    (rule_id, ex_id),
                    AudioSource(f"r{rule_id}e{ex_id}.wav", rng.randrange(100, 30001)),
                )
    return lesson


def listing_lesson() -> Lesson:
    """The fixture that reproduces the published generated-code timings:
    rule audio 9 s, example audios 2 s and 13 s, default timing config."""
    title = StyledText.plain("Lesson 1")
    lesson = new_lesson(title)
    rule_text = canonicalize(
        [
            Run("The vowel "),
            Run("a", Marker(color="#FF0000", font_family="Arial", font_size_px=18, bold=True)),
            Run(" is pronounced short"),
        ]
    )
    r = lesson.add_rule(rule_text)
    lesson.attach_audio((r,), AudioSource("Regle 1.wav", 9000))
    e1 = lesson.add_example(
        r,
        canonicalize(
            [Run("W"), Run("a", Marker(color="#FF0000", font_size_px=18)), Run("tch")]
        ),
    )
    lesson.attach_audio((r, e1), AudioSource("Exemple1_R1.wav", 2000))
    e2 = lesson.add_example(
        r,
        canonicalize(
            [Run("B"), Run("a", Marker(color="#FF0000", font_size_px=18)), Run("th")]
        ),
    )
    lesson.attach_audio((r, e2), AudioSource("Exemple2_R1.wav", 13000))
    return lesson


def write_project(root, lesson: Lesson, audio_durations: dict[str, int] | None = None):
    """Materialize a lesson as an on-disk project with synthesized wav assets."""
    root.mkdir(parents=True, exist_ok=True)
    (root / "lesson.sph").write_text(save_sph(lesson), encoding="utf-8")
    assets = root / lesson.asset_base.rstrip("/")
    durations = audio_durations or {}
    for rule in lesson.rules:
        for node in [rule, *rule.examples]:
            if node.audio is None:
                continue
            ms = durations.get(node.audio.src, node.audio.duration_ms) or 1000
            assets.mkdir(parents=True, exist_ok=True)
            (assets / node.audio.src).write_bytes(
                synthesize_test_wav(ms, 8000, 1, 16)
            )
    return root


@pytest.fixture
def fixture_lesson():
    return listing_lesson()


@pytest.fixture
def fixture_project(tmp_path):
    return write_project(tmp_path / "proj", listing_lesson())
