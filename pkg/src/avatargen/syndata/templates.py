"""Parametric cartoon face templates and the procedural frame renderer.

Faces are drawn analytically (anti-aliased discs and ellipses) so the mouth
state is an explicit scalar: the mouth interior is a bright-red ellipse whose
height grows with ``mouth_aperture``, which makes the red-channel mass of the
mouth region strictly monotone in the aperture.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ValidationError

# face_params layout (all unitless in [0, 1])
PARAM_NAMES = (
    "skin_tone",
    "face_radius",
    "eye_dx",
    "eye_dy",
    "eye_size",
    "mouth_width",
    "mouth_y",
    "hue_shift",
)

MOUTH_RED = 0.95  # strictly above any skin red (0.35..0.65), keeps monotonicity


@dataclass(frozen=True)
class AvatarTemplate:
    template_id: str
    face_params: np.ndarray
    resolution: int = 64

    def __post_init__(self):
        params = np.asarray(self.face_params, dtype=np.float64)
        if params.shape != (len(PARAM_NAMES),):
            raise ValidationError(
                f"face_params must have {len(PARAM_NAMES)} entries, got shape {params.shape}"
            )
        if np.any(params < 0.0) or np.any(params > 1.0):
            raise ValidationError("face_params must all lie in [0, 1]")
        r = self.resolution
        if r < 32 or r > 128 or (r & (r - 1)) != 0:
            raise ValidationError(f"resolution must be a power of two in [32, 128], got {r}")
        object.__setattr__(self, "face_params", params)

    def param(self, name: str) -> float:
        return float(self.face_params[PARAM_NAMES.index(name)])


def make_templates(count: int, seed: int, resolution: int = 64) -> list[AvatarTemplate]:
    """Deterministic library of visually distinct templates."""
    if count < 1:
        raise ValidationError("template count must be >= 1")
    rng = np.random.default_rng(seed)
    templates = []
    for i in range(count):
        params = rng.uniform(0.15, 0.85, size=len(PARAM_NAMES))
        templates.append(AvatarTemplate(f"t{i}", params, resolution))
    return templates


def _soft_disc(xx, yy, cx, cy, rx, ry):
    # anti-aliased ellipse coverage in [0,1]; ~1px soft edge along the minor axis
    d = np.sqrt(((xx - cx) / rx) ** 2 + ((yy - cy) / ry) ** 2)
    return np.clip((1.0 - d) * min(rx, ry) + 0.5, 0.0, 1.0)


def _face_geometry(template: AvatarTemplate):
    h = template.resolution
    p = template.param
    face_r = (0.28 + 0.12 * p("face_radius")) * h
    eye_dx = (0.12 + 0.10 * p("eye_dx")) * h
    eye_dy = (0.10 + 0.08 * p("eye_dy")) * h
    eye_r = (0.03 + 0.03 * p("eye_size")) * h
    mouth_cy = (0.18 + 0.10 * p("mouth_y")) * h
    mouth_rx = (0.10 + 0.10 * p("mouth_width")) * h
    return face_r, eye_dx, eye_dy, eye_r, mouth_cy, mouth_rx


def mouth_region(template: AvatarTemplate) -> tuple[int, int, int, int]:
    """Mouth bounding box (y0, y1, x0, x1) with margin for pose jitter."""
    h = template.resolution
    c = h / 2.0
    *_, mouth_cy, mouth_rx = _face_geometry(template)
    max_ry = _mouth_ry(template, 1.0)
    margin = 6.0  # covers <=4 px translation + <=5 deg rotation of the face
    y0 = int(max(0, np.floor(c + mouth_cy - max_ry - margin)))
    y1 = int(min(h, np.ceil(c + mouth_cy + max_ry + margin)))
    x0 = int(max(0, np.floor(c - mouth_rx - margin)))
    x1 = int(min(h, np.ceil(c + mouth_rx + margin)))
    return y0, y1, x0, x1


def _mouth_ry(template: AvatarTemplate, aperture: float) -> float:
    h = template.resolution
    return (0.006 + 0.064 * aperture) * h


def render_face(
    template: AvatarTemplate,
    mouth_aperture: float,
    pose_jitter: np.ndarray | tuple[float, float, float] = (0.0, 0.0, 0.0),
) -> np.ndarray:
    """Render one frame as a [1, 3, H, W] array in [0, 1].

    ``pose_jitter`` is (dx_px, dy_px, rotation_deg); translations are clamped
    to +-4 px and rotations to +-5 deg so alignment stays learnable.
    """
    if not (0.0 <= mouth_aperture <= 1.0):
        raise ValidationError(f"mouth_aperture must lie in [0, 1], got {mouth_aperture}")
    dx, dy, rot = (float(v) for v in np.asarray(pose_jitter, dtype=np.float64).reshape(3))
    dx = float(np.clip(dx, -4.0, 4.0))
    dy = float(np.clip(dy, -4.0, 4.0))
    rot = float(np.clip(rot, -5.0, 5.0))

    h = template.resolution
    p = template.param
    face_r, eye_dx, eye_dy, eye_r, mouth_cy, mouth_rx = _face_geometry(template)

    ys, xs = np.mgrid[0:h, 0:h].astype(np.float64)
    c = h / 2.0
    # rotate/translate sample coordinates into the canonical face frame
    th = np.deg2rad(rot)
    xr = np.cos(th) * (xs - c - dx) + np.sin(th) * (ys - c - dy)
    yr = -np.sin(th) * (xs - c - dx) + np.cos(th) * (ys - c - dy)

    skin_red = 0.35 + 0.30 * p("skin_tone")
    skin = np.array([skin_red, 0.55 + 0.25 * p("hue_shift") * 0.4, 0.45])
    bg = np.array([0.10, 0.12 + 0.08 * p("hue_shift"), 0.18])
    eye_col = np.array([0.08, 0.08, 0.10])
    mouth_col = np.array([MOUTH_RED, 0.15, 0.18])

    img = np.empty((3, h, h), dtype=np.float64)
    img[:] = bg[:, None, None]

    face = _soft_disc(xr, yr, 0.0, 0.0, face_r, face_r * 1.08)
    img = img * (1 - face) + skin[:, None, None] * face

    for side in (-1.0, 1.0):
        eye = _soft_disc(xr, yr, side * eye_dx, -eye_dy, eye_r, eye_r)
        img = img * (1 - eye) + eye_col[:, None, None] * eye

    mouth = _soft_disc(xr, yr, 0.0, mouth_cy, mouth_rx, _mouth_ry(template, mouth_aperture))
    img = img * (1 - mouth) + mouth_col[:, None, None] * mouth

    return np.clip(img, 0.0, 1.0)[None].astype(np.float32)


def mouth_region_sum(frame: np.ndarray, template: AvatarTemplate) -> float:
    """Red-channel intensity mass over the mouth region of a [1,3,H,W] frame."""
    y0, y1, x0, x1 = mouth_region(template)
    return float(np.asarray(frame)[0, 0, y0:y1, x0:x1].sum())


def apply_mouth_mask(frames: np.ndarray, template: AvatarTemplate) -> np.ndarray:
    """Zero the mouth region; the dubbing model must inpaint it from audio."""
    out = np.array(frames, copy=True)
    y0, y1, x0, x1 = mouth_region(template)
    out[..., y0:y1, x0:x1] = 0.0
    return out
