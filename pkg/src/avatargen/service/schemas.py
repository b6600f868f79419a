"""Pydantic request/response models for the HTTP API."""
from __future__ import annotations

from typing import Any, Optional

from pydantic import BaseModel, Field


class ConfiguredRequest(BaseModel):
    config: Optional[dict] = Field(None, description="Inline configuration tree")
    config_path: Optional[str] = Field(None, description="Path to a YAML config file")


class TrainRequest(ConfiguredRequest):
    out: str = Field(..., description="Where to write the checkpoint")
    recognizer: Optional[str] = Field(None, description="Recognizer checkpoint (voiceconv only)")
    sync: Optional[str] = Field(None, description="Sync-scorer checkpoint (dubbing only)")


class TrainResponse(BaseModel):
    module: str
    checkpoint: str
    steps: int
    config_hash: str
    final_loss: Any = None
    validation_accuracy: Optional[float] = None


class GenerateItem(BaseModel):
    text: str
    language_tag: str
    template_id: str
    target_speaker: int
    output_dir: str
    checkpoints: dict[str, str]
    swap_source: Optional[str] = None


class GenerateRequest(ConfiguredRequest, GenerateItem):
    pass


class GenerateResponse(BaseModel):
    manifest: dict


class BatchRequest(ConfiguredRequest):
    requests: Optional[list[GenerateItem]] = None
    requests_path: Optional[str] = None


class BatchResult(BaseModel):
    index: int
    status: str
    output_dir: str
    manifest: Optional[str] = None
    video_frames: Optional[int] = None
    error: Optional[str] = None
    stage: Optional[str] = None


class BatchResponse(BaseModel):
    results: list[BatchResult]
    succeeded: int
    failed: int


class EvaluateRequest(ConfiguredRequest):
    generated: str
    reference: str
    scorer: str
    audio: Optional[str] = None
    out: Optional[str] = None


class EvaluateResponse(BaseModel):
    psnr_db: float
    ssim: float
    lse_d: float
    lse_c: float
    per_frame_psnr: list[float]
    per_frame_ssim: list[float]
    frames: int
    config_echo: dict


class ExportCorpusRequest(ConfiguredRequest):
    out: str


class ExportCorpusResponse(BaseModel):
    directory: str
    train_clips: int
    val_clips: int
    config_hash: str


class PhonemesRequest(ConfiguredRequest):
    text: str
    language_tag: str


class PhonemesResponse(BaseModel):
    language_tag: str
    phonemes: list[int]


class HealthResponse(BaseModel):
    status: str
    version: str
