"""Audio-driven talking-face dubbing with per-channel affine deformation."""
from .adaat import AdaATParams, adaat_transform, translation_params
from .losses import (
    FrozenPyramid,
    dubbing_total_loss,
    gan_losses,
    lip_sync_loss,
    lip_sync_penalty,
    perception_loss,
)
from .model import DubbingModel, dub_frame
from .sync import (
    SyncScorer,
    build_sync_scorer,
    sync_scorer_from_checkpoint,
    sync_validation_accuracy,
    train_sync_scorer,
)
from .train import (
    MODULE_ID,
    build_dubbing_model,
    clip_training_arrays,
    dubbing_model_from_checkpoint,
    train_dubbing,
)

__all__ = [
    "AdaATParams", "adaat_transform", "translation_params",
    "FrozenPyramid", "dubbing_total_loss", "gan_losses", "lip_sync_loss",
    "lip_sync_penalty", "perception_loss", "DubbingModel", "dub_frame",
    "SyncScorer", "build_sync_scorer", "sync_scorer_from_checkpoint",
    "sync_validation_accuracy", "train_sync_scorer",
    "MODULE_ID", "build_dubbing_model", "clip_training_arrays",
    "dubbing_model_from_checkpoint", "train_dubbing",
]
