"""dancenotes: generate pentatonic note sequences from dance pose streams.

Three generators share one objective (correlation between dance and music
self-similarity): an offline beam search over whole recordings, a
similarity-threshold baseline, and a trainable conv+LSTM model that runs on
live pose streams.
"""

from .baseline import ThresholdBaseline, baseline_generate, fit_threshold, interval_sims
from .evaluation import (
    EvalRow,
    flatness,
    mean_correlation,
    next_note_accuracy,
    sequence_correlation,
    write_report,
)
from .exceptions import (
    DatasetFormatError,
    EngineError,
    InvalidInputError,
    NotesFormatError,
    NumericError,
    PoseParseError,
    ProtocolError,
    WeightFormatError,
)
from .music import (
    FIRST_NOTE,
    PENTATONIC_MIDI,
    NoteEvent,
    NoteSequence,
    ordinal_to_midi,
    read_notes_json,
    write_midi,
    write_notes_json,
)
from .offline import (
    BeamSearchGenerator,
    ExhaustiveResult,
    SearchConfig,
    beam_generate,
    exhaustive_generate,
    window_score,
)
from .online import (
    Dataset,
    ModelConfig,
    ModelParams,
    OnlineNoteModel,
    RollingState,
    TrainingExample,
    build_examples,
    desk_config,
    generate_notes,
    init_params,
    load_dataset,
    load_params,
    paper_config,
    predict_next,
    save_dataset,
    save_params,
    train,
)
from .pose import (
    DanceSequence,
    SynthConfig,
    denormalize_keypoints,
    load_pose_json,
    normalize_keypoints,
    synth_dance,
    write_pose_json,
)
from .server import create_app
from .session import StreamingSession
from .similarity import (
    cosine_sim,
    dance_music_corr,
    dance_sim_matrix,
    music_sim_matrix,
    nn_resize,
    pearson,
    pose_similarity,
)

__version__ = "0.1.0"

__all__ = [
    "BeamSearchGenerator",
    "DanceSequence",
    "Dataset",
    "DatasetFormatError",
    "EngineError",
    "EvalRow",
    "ExhaustiveResult",
    "FIRST_NOTE",
    "InvalidInputError",
    "ModelConfig",
    "ModelParams",
    "NoteEvent",
    "NoteSequence",
    "NotesFormatError",
    "NumericError",
    "OnlineNoteModel",
    "PENTATONIC_MIDI",
    "PoseParseError",
    "ProtocolError",
    "RollingState",
    "SearchConfig",
    "StreamingSession",
    "SynthConfig",
    "ThresholdBaseline",
    "TrainingExample",
    "WeightFormatError",
    "baseline_generate",
    "beam_generate",
    "build_examples",
    "cosine_sim",
    "create_app",
    "dance_music_corr",
    "dance_sim_matrix",
    "denormalize_keypoints",
    "desk_config",
    "exhaustive_generate",
    "fit_threshold",
    "flatness",
    "generate_notes",
    "init_params",
    "interval_sims",
    "load_dataset",
    "load_params",
    "load_pose_json",
    "mean_correlation",
    "music_sim_matrix",
    "next_note_accuracy",
    "nn_resize",
    "normalize_keypoints",
    "ordinal_to_midi",
    "paper_config",
    "pearson",
    "pose_similarity",
    "predict_next",
    "read_notes_json",
    "save_dataset",
    "save_params",
    "sequence_correlation",
    "synth_dance",
    "train",
    "window_score",
    "write_midi",
    "write_notes_json",
    "write_pose_json",
    "write_report",
]
