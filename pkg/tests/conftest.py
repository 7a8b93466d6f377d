import numpy as np
import pytest

from dancenotes import SynthConfig, synth_dance
from dancenotes.online.config import ModelConfig


def tiny_model_config(**overrides) -> ModelConfig:
    """Small net for fast unit tests; window 12 frames / 4 notes (k=3)."""
    base = dict(
        window_frames=12,
        window_notes=4,
        conv_filters=(3, 4),
        pool_after=(1,),
        rnn_hidden=5,
        fc_sizes=(8,),
        epochs=2,
        batch=8,
        seed=0,
    )
    base.update(overrides)
    return ModelConfig(**base)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def short_dance():
    """Structured 4-second dance (120 frames, 20 notes at k=6)."""
    return synth_dance(SynthConfig(duration_s=4.0, seed=7))


@pytest.fixture
def block_dance():
    """Two clean pose blocks with a hard boundary, no noise blur."""
    rng = np.random.default_rng(3)
    a = rng.normal(size=36)
    a /= np.linalg.norm(a)
    b = rng.normal(size=36)
    b /= np.linalg.norm(b)
    frames = np.concatenate([np.tile(a, (30, 1)), np.tile(b, (30, 1))])
    from dancenotes import DanceSequence

    return DanceSequence(np.clip(frames, -1.0, 1.0), fps=30, source_id="blocks")


def random_pose_frames(rng, n):
    """Valid random pose frames in [-1, 1]."""
    return np.clip(rng.normal(scale=0.4, size=(n, 36)), -1.0, 1.0)
