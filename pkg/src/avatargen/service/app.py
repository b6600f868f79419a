"""FastAPI service wrapping the core package.

Validation problems map to 400, missing/corrupt checkpoints to 422, pipeline
stage failures to 500 with the stage name in the payload.
"""
from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..errors import AvatarGenError, CheckpointError, PipelineStageError, ValidationError
from ..pipeline import GenerationRequest, load_requests_file
from . import ops
from .schemas import (
    BatchRequest,
    BatchResponse,
    BatchResult,
    EvaluateRequest,
    EvaluateResponse,
    ExportCorpusRequest,
    ExportCorpusResponse,
    GenerateRequest,
    GenerateResponse,
    HealthResponse,
    PhonemesRequest,
    PhonemesResponse,
    TrainRequest,
    TrainResponse,
)


def create_app() -> FastAPI:
    app = FastAPI(title="avatargen", version=__version__)

    @app.exception_handler(AvatarGenError)
    async def avatargen_error_handler(_: Request, exc: AvatarGenError):
        if isinstance(exc, PipelineStageError):
            return JSONResponse(
                status_code=500,
                content={"error": str(exc), "stage": exc.stage, "request": exc.request_echo},
            )
        status = 422 if isinstance(exc, CheckpointError) else 400
        return JSONResponse(status_code=status, content={"error": str(exc)})

    @app.get("/health", response_model=HealthResponse)
    def health():
        return HealthResponse(status="ok", version=__version__)

    def _cfg(body):
        return ops.resolve_config(body.config, body.config_path)

    @app.post("/train/recognizer", response_model=TrainResponse)
    def train_recognizer(body: TrainRequest):
        return ops.train_recognizer_op(_cfg(body), body.out)

    @app.post("/train/voiceconv", response_model=TrainResponse)
    def train_voiceconv(body: TrainRequest):
        if not body.recognizer:
            raise ValidationError("voiceconv training needs 'recognizer' checkpoint path")
        return ops.train_voiceconv_op(_cfg(body), body.recognizer, body.out)

    @app.post("/train/faceswap", response_model=TrainResponse)
    def train_faceswap(body: TrainRequest):
        return ops.train_faceswap_op(_cfg(body), body.out)

    @app.post("/train/sync", response_model=TrainResponse)
    def train_sync(body: TrainRequest):
        return ops.train_sync_op(_cfg(body), body.out)

    @app.post("/train/dubbing", response_model=TrainResponse)
    def train_dubbing(body: TrainRequest):
        if not body.sync:
            raise ValidationError("dubbing training needs 'sync' checkpoint path")
        return ops.train_dubbing_op(_cfg(body), body.sync, body.out)

    @app.post("/generate", response_model=GenerateResponse)
    def generate(body: GenerateRequest):
        request = GenerationRequest(
            text=body.text,
            language_tag=body.language_tag,
            template_id=body.template_id,
            target_speaker=body.target_speaker,
            output_dir=body.output_dir,
            checkpoints=body.checkpoints,
            swap_source=body.swap_source,
        )
        return GenerateResponse(manifest=ops.generate_op(request, _cfg(body)))

    @app.post("/generate/batch", response_model=BatchResponse)
    def generate_batch(body: BatchRequest):
        if (body.requests is None) == (body.requests_path is None):
            raise ValidationError("give either 'requests' or 'requests_path'")
        if body.requests_path is not None:
            requests = load_requests_file(body.requests_path)
        else:
            requests = [GenerationRequest(**item.model_dump()) for item in body.requests]
        results = ops.generate_batch_op(requests, _cfg(body))
        ok = sum(1 for r in results if r["status"] == "ok")
        return BatchResponse(
            results=[BatchResult(**r) for r in results],
            succeeded=ok,
            failed=len(results) - ok,
        )

    @app.post("/evaluate", response_model=EvaluateResponse)
    def evaluate(body: EvaluateRequest):
        return ops.evaluate_op(
            body.generated, body.reference, body.scorer, _cfg(body),
            audio=body.audio, out=body.out,
        )

    @app.post("/corpus/export", response_model=ExportCorpusResponse)
    def export_corpus(body: ExportCorpusRequest):
        return ops.export_corpus_op(_cfg(body), body.out)

    @app.post("/phonemes", response_model=PhonemesResponse)
    def phonemes(body: PhonemesRequest):
        return ops.phonemes_op(body.text, body.language_tag, _cfg(body))

    return app


app = create_app()
