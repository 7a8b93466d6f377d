"""Architecture and training configuration for the real-time note model."""

from __future__ import annotations

from dataclasses import dataclass, replace

from ..exceptions import InvalidInputError
from ..validation import N_NOTES

PAPER_CONV_FILTERS = (64, 128, 128, 256, 512, 32)
PAPER_FC_SIZES = (512, 256, 128)
DESK_CONV_FILTERS = (16, 32, 32, 32)
DESK_FC_SIZES = (64, 32)


@dataclass(frozen=True)
class ModelConfig:
    """Hyperparameters of the conv + recurrent next-note classifier.

    ``window_frames`` x ``window_frames`` dance-similarity windows feed the
    conv stack; ``window_notes`` past notes feed the recurrent branch. The
    frames-per-note interval is implied: k = window_frames // window_notes.
    """

    window_frames: int = 60
    window_notes: int = 10
    conv_filters: tuple = DESK_CONV_FILTERS
    kernel: int = 3
    pool_after: tuple = (1, 3)  # 1-based conv indices followed by 2x2 max pool
    rnn_hidden: int = 32
    fc_sizes: tuple = DESK_FC_SIZES
    classes: int = N_NOTES
    lr: float = 2e-4
    epochs: int = 200
    batch: int = 32
    adam_beta1: float = 0.9
    adam_beta2: float = 0.999
    adam_eps: float = 1e-8
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "conv_filters", tuple(int(f) for f in self.conv_filters))
        object.__setattr__(self, "pool_after", tuple(sorted(int(p) for p in self.pool_after)))
        object.__setattr__(self, "fc_sizes", tuple(int(s) for s in self.fc_sizes))
        if self.kernel % 2 != 1 or self.kernel < 1:
            raise InvalidInputError(f"kernel size must be odd, got {self.kernel}")
        if self.classes != N_NOTES:
            raise InvalidInputError(f"classes must be {N_NOTES}, got {self.classes}")
        if self.window_notes < 1 or self.window_frames < 1:
            raise InvalidInputError("window sizes must be positive")
        if self.window_frames % self.window_notes != 0:
            raise InvalidInputError(
                f"window_frames {self.window_frames} must be a multiple of "
                f"window_notes {self.window_notes}"
            )
        if not self.conv_filters:
            raise InvalidInputError("need at least one conv layer")
        if any(p < 1 or p > len(self.conv_filters) for p in self.pool_after):
            raise InvalidInputError("pool_after indices must reference conv layers (1-based)")
        if self.rnn_hidden < 1:
            raise InvalidInputError("rnn_hidden must be positive")

    @property
    def k(self) -> int:
        return self.window_frames // self.window_notes

    @property
    def concat_len(self) -> int:
        return self.conv_filters[-1] + self.rnn_hidden

    def spatial_sizes(self) -> list[int]:
        """Spatial edge length after each conv layer (post pooling)."""
        size = self.window_frames
        sizes = []
        for i in range(1, len(self.conv_filters) + 1):
            if i in self.pool_after:
                size //= 2
            sizes.append(size)
        return sizes

    def arch_fields(self) -> tuple:
        """The fields that determine tensor shapes (the weight-file config echo)."""
        return (
            self.window_frames,
            self.window_notes,
            self.kernel,
            self.rnn_hidden,
            self.classes,
            self.conv_filters,
            self.pool_after,
            self.fc_sizes,
        )


def desk_config(**overrides) -> ModelConfig:
    """Small preset sized for synthetic corpora and CPU training."""
    return replace(ModelConfig(), **overrides)


def paper_config(**overrides) -> ModelConfig:
    """Full-size preset: 6 conv layers with filters 64..512,32 and FC 512/256/128."""
    return replace(
        ModelConfig(conv_filters=PAPER_CONV_FILTERS, fc_sizes=PAPER_FC_SIZES), **overrides
    )
