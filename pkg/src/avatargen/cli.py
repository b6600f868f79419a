"""Command-line client.

Every verb is a thin wrapper that builds the same payload the HTTP API
accepts and dispatches it either to a running server (``--server URL``) or to
the in-process service layer. Results print as JSON.
"""
from __future__ import annotations

import json
import sys

import click

from .errors import AvatarGenError
from .pipeline import GenerationRequest, load_requests_file
from .service import ops


def _dispatch(ctx, endpoint: str, payload: dict, local_fn):
    server = ctx.obj.get("server")
    if server:
        import httpx

        response = httpx.post(f"{server.rstrip('/')}{endpoint}", json=payload, timeout=3600.0)
        if response.status_code != 200:
            click.echo(response.text, err=True)
            sys.exit(1)
        result = response.json()
    else:
        try:
            result = local_fn()
        except AvatarGenError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(1)
    click.echo(json.dumps(result, indent=1, sort_keys=True))
    return result


@click.group()
@click.option("--server", default=None, envvar="AVATARGEN_SERVER",
              help="Base URL of a running avatargen service; default runs in-process.")
@click.pass_context
def main(ctx, server):
    ctx.ensure_object(dict)
    ctx.obj["server"] = server


def _config_options(fn):
    fn = click.option("--config", "config_path", default=None,
                      help="YAML config file (defaults apply when omitted)")(fn)
    return fn


@main.command(name="train-recognizer")
@_config_options
@click.option("--out", required=True, help="Checkpoint output path")
@click.pass_context
def train_recognizer(ctx, config_path, out):
    """Train the phoneme recognizer on the synthetic corpus."""
    payload = {"config_path": config_path, "out": out}
    _dispatch(ctx, "/train/recognizer", payload,
              lambda: ops.train_recognizer_op(ops.resolve_config(None, config_path), out))


@main.command(name="train-vc")
@_config_options
@click.option("--recognizer", required=True, help="Recognizer checkpoint path")
@click.option("--out", required=True, help="Checkpoint output path")
@click.pass_context
def train_vc(ctx, config_path, recognizer, out):
    """Train the voice-conversion synthesizer (needs a recognizer)."""
    payload = {"config_path": config_path, "recognizer": recognizer, "out": out}
    _dispatch(ctx, "/train/voiceconv", payload,
              lambda: ops.train_voiceconv_op(ops.resolve_config(None, config_path), recognizer, out))


@main.command(name="train-faceswap")
@_config_options
@click.option("--out", required=True, help="Checkpoint output path")
@click.pass_context
def train_faceswap(ctx, config_path, out):
    """Train the face-swap generator and discriminators."""
    payload = {"config_path": config_path, "out": out}
    _dispatch(ctx, "/train/faceswap", payload,
              lambda: ops.train_faceswap_op(ops.resolve_config(None, config_path), out))


@main.command(name="train-sync")
@_config_options
@click.option("--out", required=True, help="Checkpoint output path")
@click.pass_context
def train_sync(ctx, config_path, out):
    """Train the audio-visual sync scorer."""
    payload = {"config_path": config_path, "out": out}
    _dispatch(ctx, "/train/sync", payload,
              lambda: ops.train_sync_op(ops.resolve_config(None, config_path), out))


@main.command(name="train-dubbing")
@_config_options
@click.option("--sync", required=True, help="Trained sync-scorer checkpoint path")
@click.option("--out", required=True, help="Checkpoint output path")
@click.pass_context
def train_dubbing(ctx, config_path, sync, out):
    """Train the dubbing network (needs a trained sync scorer)."""
    payload = {"config_path": config_path, "sync": sync, "out": out}
    _dispatch(ctx, "/train/dubbing", payload,
              lambda: ops.train_dubbing_op(ops.resolve_config(None, config_path), sync, out))


@main.command()
@_config_options
@click.option("--text", required=True)
@click.option("--language", "language_tag", required=True)
@click.option("--template", "template_id", required=True)
@click.option("--target-speaker", type=int, required=True)
@click.option("--out", "output_dir", required=True, help="Output directory")
@click.option("--recognizer", required=True, help="Recognizer checkpoint")
@click.option("--vc", required=True, help="Voice-conversion checkpoint")
@click.option("--dubbing", required=True, help="Dubbing checkpoint")
@click.option("--faceswap", default=None, help="Face-swap checkpoint")
@click.option("--swap-source", default=None, help="Source face image for swapping")
@click.pass_context
def generate(ctx, config_path, text, language_tag, template_id, target_speaker,
             output_dir, recognizer, vc, dubbing, faceswap, swap_source):
    """Generate a talking-avatar clip from text."""
    checkpoints = {"recognizer": recognizer, "voiceconv": vc, "dubbing": dubbing}
    if faceswap:
        checkpoints["faceswap"] = faceswap
    payload = {
        "config_path": config_path, "text": text, "language_tag": language_tag,
        "template_id": template_id, "target_speaker": target_speaker,
        "output_dir": output_dir, "checkpoints": checkpoints, "swap_source": swap_source,
    }

    def local():
        cfg = ops.resolve_config(None, config_path)
        request = GenerationRequest(
            text=text, language_tag=language_tag, template_id=template_id,
            target_speaker=target_speaker, output_dir=output_dir,
            checkpoints=checkpoints, swap_source=swap_source,
        )
        return {"manifest": ops.generate_op(request, cfg)}

    _dispatch(ctx, "/generate", payload, local)


@main.command(name="generate-batch")
@_config_options
@click.option("--requests", "requests_path", required=True,
              help="YAML/JSON file with a list of generation requests")
@click.pass_context
def generate_batch(ctx, config_path, requests_path):
    """Generate many clips; failures are isolated per request."""
    payload = {"config_path": config_path, "requests_path": requests_path}

    def local():
        cfg = ops.resolve_config(None, config_path)
        results = ops.generate_batch_op(load_requests_file(requests_path), cfg)
        ok = sum(1 for r in results if r["status"] == "ok")
        return {"results": results, "succeeded": ok, "failed": len(results) - ok}

    _dispatch(ctx, "/generate/batch", payload, local)


@main.command()
@_config_options
@click.option("--generated", required=True, help="Directory with generated frames")
@click.option("--reference", required=True, help="Directory with reference frames")
@click.option("--scorer", required=True, help="Sync-scorer checkpoint")
@click.option("--audio", default=None, help="Audio features (.npy) or waveform (.raw)")
@click.option("--out", default=None, help="Where to write report.json")
@click.pass_context
def evaluate(ctx, config_path, generated, reference, scorer, audio, out):
    """PSNR/SSIM plus sync-error metrics for generated frames."""
    payload = {
        "config_path": config_path, "generated": generated, "reference": reference,
        "scorer": scorer, "audio": audio, "out": out,
    }

    def local():
        cfg = ops.resolve_config(None, config_path)
        return ops.evaluate_op(generated, reference, scorer, cfg, audio=audio, out=out)

    _dispatch(ctx, "/evaluate", payload, local)


@main.command(name="export-corpus")
@_config_options
@click.option("--out", required=True, help="Corpus output directory")
@click.pass_context
def export_corpus(ctx, config_path, out):
    """Write the synthetic corpus as PNG frames + raw arrays + manifest."""
    payload = {"config_path": config_path, "out": out}

    def local():
        return ops.export_corpus_op(ops.resolve_config(None, config_path), out)

    _dispatch(ctx, "/corpus/export", payload, local)


@main.command()
@_config_options
@click.option("--text", required=True)
@click.option("--language", "language_tag", required=True)
@click.pass_context
def phonemes(ctx, config_path, text, language_tag):
    """Show the phoneme ids a text maps to."""
    payload = {"config_path": config_path, "text": text, "language_tag": language_tag}

    def local():
        return ops.phonemes_op(text, language_tag, ops.resolve_config(None, config_path))

    _dispatch(ctx, "/phonemes", payload, local)


@main.command()
@click.option("--host", default="127.0.0.1")
@click.option("--port", default=8321, type=int)
def serve(host, port):
    """Run the HTTP service."""
    import uvicorn

    uvicorn.run("avatargen.service.app:app", host=host, port=port)


if __name__ == "__main__":
    main()
