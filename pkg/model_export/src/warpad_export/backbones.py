"""Supported backbone registry.

Every entry loads (or constructs) an eval-mode module mapping already
mean/std-normalized pixels [N,3,S,S] float32 to embeddings [N,D] float32 --
the summary-token output, consumed raw.

The dinov2_* family downloads checkpoints through torch.hub and therefore
needs network access or a warm hub cache. ``debug_vit_tiny`` is a seeded,
fully deterministic in-package transformer used for pipeline self-tests and
CI; it needs nothing external.
"""

from __future__ import annotations

from dataclasses import dataclass

import torch
from torch import nn

from .errors import ExportError

IMAGENET_NORM = ((0.485, 0.456, 0.406), (0.229, 0.224, 0.225))

_DINOV2_HUB = "facebookresearch/dinov2"
_DINOV2_DIMS = {
    "dinov2_vits14": 384,
    "dinov2_vitb14": 768,
    "dinov2_vitl14": 1024,
    "dinov2_vitg14": 1536,
    # register-token variants: summary token is still the first output feature
    "dinov2_vitl14_reg": 1024,
    "dinov2_vitg14_reg": 1536,
}

DEBUG_BACKBONE = "debug_vit_tiny"
_DEBUG_DIMS = 64


@dataclass(frozen=True)
class BackboneInfo:
    backbone_id: str
    embedding_dims: int
    normalization: tuple
    patch_multiple: int  # input_size must be a multiple of this


def supported_ids() -> list:
    return sorted(_DINOV2_DIMS) + [DEBUG_BACKBONE]


def info(backbone_id: str) -> BackboneInfo:
    if backbone_id in _DINOV2_DIMS:
        return BackboneInfo(backbone_id, _DINOV2_DIMS[backbone_id], IMAGENET_NORM, 14)
    if backbone_id == DEBUG_BACKBONE:
        return BackboneInfo(backbone_id, _DEBUG_DIMS, IMAGENET_NORM, 4)
    raise ExportError(
        f"unknown backbone {backbone_id!r}; supported: {', '.join(supported_ids())}"
    )


def load_backbone(backbone_id: str, input_size: int) -> nn.Module:
    meta = info(backbone_id)
    if input_size < meta.patch_multiple or input_size % meta.patch_multiple:
        raise ExportError(
            f"{backbone_id} requires input_size to be a positive multiple of "
            f"{meta.patch_multiple}, got {input_size}"
        )
    if backbone_id == DEBUG_BACKBONE:
        model = TinyVit(input_size=input_size, dims=_DEBUG_DIMS)
    else:
        try:
            model = torch.hub.load(_DINOV2_HUB, backbone_id)
        except Exception as exc:
            raise ExportError(
                f"could not fetch {backbone_id} from torch.hub "
                f"(network or cache required): {exc}"
            ) from exc
    model.eval()
    return model


class Block(nn.Module):
    """Pre-norm transformer block."""

    def __init__(self, dims: int, heads: int):
        super().__init__()
        self.norm1 = nn.LayerNorm(dims)
        self.attn = nn.MultiheadAttention(dims, heads, batch_first=True)
        self.norm2 = nn.LayerNorm(dims)
        self.mlp = nn.Sequential(nn.Linear(dims, dims * 2), nn.GELU(), nn.Linear(dims * 2, dims))

    def forward(self, x):
        h = self.norm1(x)
        attn_out, _ = self.attn(h, h, h, need_weights=False)
        x = x + attn_out
        return x + self.mlp(self.norm2(x))


class TinyVit(nn.Module):
    """Small deterministic vision transformer returning its summary token.

    Weights derive from a fixed torch seed, so exports are reproducible.
    """

    def __init__(self, input_size: int, dims: int = 64, depth: int = 2, heads: int = 4):
        super().__init__()
        patch = max(p for p in (16, 8, 4, 2, 1) if input_size % p == 0)
        generator_state = torch.random.get_rng_state()
        torch.manual_seed(271828)
        self.patch_embed = nn.Conv2d(3, dims, kernel_size=patch, stride=patch)
        tokens = (input_size // patch) ** 2
        self.cls_token = nn.Parameter(torch.randn(1, 1, dims) * 0.02)
        self.pos_embed = nn.Parameter(torch.randn(1, tokens + 1, dims) * 0.02)
        self.blocks = nn.ModuleList([Block(dims, heads) for _ in range(depth)])
        self.norm = nn.LayerNorm(dims)
        torch.random.set_rng_state(generator_state)

    def forward(self, pixels):
        t = self.patch_embed(pixels).flatten(2).transpose(1, 2)
        cls = self.cls_token.expand(t.shape[0], -1, -1)
        seq = torch.cat([cls, t], dim=1) + self.pos_embed
        for block in self.blocks:
            seq = block(seq)
        return self.norm(seq[:, 0])
