"""Real-time next-note model: config, data, network, training, inference."""

from .config import ModelConfig, desk_config, paper_config
from .examples import (
    Dataset,
    TrainingExample,
    build_examples,
    dance_window_matrix,
    load_dataset,
    note_history_onehot,
    save_dataset,
)
from .inference import OnlineNoteModel, RollingState, generate_notes, predict_next
from .network import (
    ModelParams,
    expected_shapes,
    forward,
    init_params,
    loss_and_grad,
    predict_logits,
    softmax,
)
from .training import TrainingLog, accuracy, train
from .weights_io import load_params, save_params

__all__ = [
    "Dataset",
    "ModelConfig",
    "ModelParams",
    "OnlineNoteModel",
    "RollingState",
    "TrainingExample",
    "TrainingLog",
    "accuracy",
    "build_examples",
    "dance_window_matrix",
    "desk_config",
    "expected_shapes",
    "forward",
    "generate_notes",
    "init_params",
    "load_dataset",
    "load_params",
    "loss_and_grad",
    "note_history_onehot",
    "paper_config",
    "predict_logits",
    "predict_next",
    "save_dataset",
    "save_params",
    "softmax",
    "train",
]
