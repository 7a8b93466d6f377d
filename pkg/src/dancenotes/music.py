"""Note-sequence data model and emission as JSON or standard MIDI files.

The entire vocabulary is the C major pentatonic scale C4 D4 E4 G4 A4, encoded
as ordinals 0-4 ordered by pitch.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .exceptions import InvalidInputError, NotesFormatError
from .validation import as_note_array, check_ordinal, check_positive_int

PENTATONIC_MIDI = (60, 62, 64, 67, 69)  # C4 D4 E4 G4 A4
FIRST_NOTE = 2  # every generator starts on E4
GENERATOR_TAGS = ("offline", "baseline", "online")

TICKS_PER_QUARTER = 480
TEMPO_US_PER_QUARTER = 500_000  # 120 BPM
NOTE_VELOCITY = 90
MIDI_PROGRAM = 0  # acoustic grand piano


def ordinal_to_midi(ordinal) -> int:
    """Map a note ordinal 0-4 to its MIDI pitch."""
    return PENTATONIC_MIDI[check_ordinal(ordinal)]


@dataclass(frozen=True)
class NoteEvent:
    index: int
    ordinal: int
    midi_pitch: int
    onset_s: float
    duration_s: float


@dataclass(frozen=True)
class NoteSequence:
    """Ordinals on the every-k-frames grid, tagged with their generator."""

    notes: np.ndarray
    k: int = 6
    fps: int = 30
    generator_tag: str = "offline"

    def __post_init__(self):
        notes = as_note_array(self.notes)
        notes.setflags(write=False)
        object.__setattr__(self, "notes", notes)
        object.__setattr__(self, "k", check_positive_int(self.k, "k"))
        object.__setattr__(self, "fps", check_positive_int(self.fps, "fps"))
        if self.generator_tag not in GENERATOR_TAGS:
            raise NotesFormatError(
                f"generator_tag must be one of {GENERATOR_TAGS}, got {self.generator_tag!r}"
            )

    def __len__(self) -> int:
        return int(self.notes.size)

    @property
    def note_duration_s(self) -> float:
        return self.k / self.fps

    @property
    def events(self) -> list[NoteEvent]:
        dur = self.note_duration_s
        return [
            NoteEvent(
                index=i,
                ordinal=int(o),
                midi_pitch=PENTATONIC_MIDI[int(o)],
                onset_s=i * dur,
                duration_s=dur,
            )
            for i, o in enumerate(self.notes)
        ]


def _encode_varint(value: int) -> bytes:
    """MIDI variable-length quantity, big-endian 7-bit groups."""
    if value < 0:
        raise InvalidInputError("delta time cannot be negative")
    groups = [value & 0x7F]
    value >>= 7
    while value:
        groups.append((value & 0x7F) | 0x80)
        value >>= 7
    return bytes(reversed(groups))


def write_midi(seq: NoteSequence, path) -> int:
    """Write a format-0 standard MIDI file; returns the number of bytes written.

    One fixed-tempo track at 480 ticks/quarter and 120 BPM; every note is a
    velocity-90 note-on/note-off pair on channel 0 lasting k/fps seconds
    (rounded half up to ticks). Output bytes are a pure function of ``seq``.
    """
    if len(seq) == 0:
        raise InvalidInputError("cannot write an empty note sequence")
    ticks_per_second = TICKS_PER_QUARTER * 1_000_000 / TEMPO_US_PER_QUARTER
    duration_ticks = int(seq.note_duration_s * ticks_per_second + 0.5)

    track = bytearray()
    track += b"\x00\xff\x51\x03" + struct.pack(">I", TEMPO_US_PER_QUARTER)[1:]
    track += b"\x00" + struct.pack(">BB", 0xC0, MIDI_PROGRAM)
    for o in seq.notes:
        pitch = PENTATONIC_MIDI[int(o)]
        track += b"\x00" + struct.pack(">BBB", 0x90, pitch, NOTE_VELOCITY)
        track += _encode_varint(duration_ticks) + struct.pack(">BBB", 0x80, pitch, 0)
    track += b"\x00\xff\x2f\x00"

    blob = b"MThd" + struct.pack(">IHHH", 6, 0, 1, TICKS_PER_QUARTER)
    blob += b"MTrk" + struct.pack(">I", len(track)) + bytes(track)
    Path(path).write_bytes(blob)
    return len(blob)


def write_notes_json(seq: NoteSequence, path) -> None:
    """Serialize a note sequence; lossless inverse of :func:`read_notes_json`."""
    doc = {
        "k": seq.k,
        "fps": seq.fps,
        "generator": seq.generator_tag,
        "notes": [int(o) for o in seq.notes],
    }
    Path(path).write_text(json.dumps(doc, separators=(",", ":")) + "\n")


def read_notes_json(path_or_text) -> NoteSequence:
    """Parse and validate a notes JSON document."""
    try:
        is_path = isinstance(path_or_text, (str, Path)) and Path(str(path_or_text)).exists()
    except OSError:  # raw JSON text longer than NAME_MAX
        is_path = False
    if is_path:
        text = Path(path_or_text).read_text()
    else:
        text = path_or_text
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise NotesFormatError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise NotesFormatError("notes document must be a JSON object")
    for key in ("k", "fps", "generator", "notes"):
        if key not in doc:
            raise NotesFormatError(f"notes document is missing '{key}'")
    try:
        notes = as_note_array(doc["notes"])
    except InvalidInputError as exc:
        raise NotesFormatError(str(exc)) from exc
    return NoteSequence(notes, k=doc["k"], fps=doc["fps"], generator_tag=doc["generator"])
