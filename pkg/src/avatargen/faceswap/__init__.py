"""Identity-injection face swapping with weak feature matching."""
from .losses import (
    SwapLossWeights,
    adversarial_losses,
    identity_loss,
    reconstruction_loss,
    swap_total_loss,
    weak_feature_matching_loss,
)
from .model import IdentityExtractor, LayeredDiscriminator, SwapGenerator, SwapModel
from .train import (
    MODULE_ID,
    build_swap_model,
    render_pool,
    swap_forward,
    swap_model_from_checkpoint,
    train_faceswap,
)

__all__ = [
    "SwapLossWeights", "adversarial_losses", "identity_loss", "reconstruction_loss",
    "swap_total_loss", "weak_feature_matching_loss",
    "IdentityExtractor", "LayeredDiscriminator", "SwapGenerator", "SwapModel",
    "MODULE_ID", "build_swap_model", "render_pool", "swap_forward",
    "swap_model_from_checkpoint", "train_faceswap",
]
