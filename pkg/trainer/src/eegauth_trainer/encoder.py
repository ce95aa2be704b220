"""1-D residual encoder for multichannel epochs."""

from __future__ import annotations

from dataclasses import dataclass

import torch
from torch import nn


@dataclass(frozen=True)
class EncoderSpec:
    in_channels: int = 93
    stage_widths: tuple[int, ...] = (32, 64, 128, 256)
    embedding_dim: int = 128
    normalize: bool = True

    def validate(self) -> "EncoderSpec":
        if self.embedding_dim < 8:
            raise ValueError("embedding_dim must be >= 8")
        return self


class ResidualBlock(nn.Module):
    def __init__(self, in_width: int, out_width: int, stride: int):
        super().__init__()
        self.conv1 = nn.Conv1d(in_width, out_width, 3, stride=stride, padding=1, bias=False)
        self.bn1 = nn.BatchNorm1d(out_width)
        self.conv2 = nn.Conv1d(out_width, out_width, 3, padding=1, bias=False)
        self.bn2 = nn.BatchNorm1d(out_width)
        self.relu = nn.ReLU(inplace=True)
        if stride != 1 or in_width != out_width:
            self.skip = nn.Sequential(
                nn.Conv1d(in_width, out_width, 1, stride=stride, bias=False),
                nn.BatchNorm1d(out_width),
            )
        else:
            self.skip = nn.Identity()

    def forward(self, x):
        out = self.relu(self.bn1(self.conv1(x)))
        out = self.bn2(self.conv2(out))
        return self.relu(out + self.skip(x))


class ResNet1D(nn.Module):
    """Stem conv (kernel 7, stride 2), four residual stages, global
    average pooling, linear projection, optional L2 normalization."""

    def __init__(self, spec: EncoderSpec = EncoderSpec()):
        super().__init__()
        spec.validate()
        self.spec = spec
        widths = spec.stage_widths
        self.stem = nn.Sequential(
            nn.Conv1d(spec.in_channels, widths[0], 7, stride=2, padding=3, bias=False),
            nn.BatchNorm1d(widths[0]),
            nn.ReLU(inplace=True),
        )
        blocks = []
        prev = widths[0]
        for i, width in enumerate(widths):
            blocks.append(ResidualBlock(prev, width, stride=1 if i == 0 else 2))
            prev = width
        self.stages = nn.Sequential(*blocks)
        self.pool = nn.AdaptiveAvgPool1d(1)
        self.proj = nn.Linear(widths[-1], spec.embedding_dim)

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        out = self.proj(self.pool(self.stages(self.stem(x))).squeeze(-1))
        if self.spec.normalize:
            out = torch.nn.functional.normalize(out, dim=-1, eps=1e-12)
        return out
