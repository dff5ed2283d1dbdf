"""
Kernels de excitação ψ(t) normalizados (∫₀^∞ ψ = 1, ψ(t) = 0 para t <= 0).
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Union

import numpy as np
from scipy.special import erf

from errors import invalid_kernel

ArrayLike = Union[float, np.ndarray]


class KernelShape(str, Enum):
    """Formas de kernel suportadas."""
    BOXCAR = "boxcar"
    EXP_DECAY = "exp_decay"
    HALF_GAUSSIAN = "half_gaussian"

    @classmethod
    def parse(cls, name: str) -> "KernelShape":
        """Aceita 'ExpDecay', 'exp_decay', 'EXP-DECAY', ..."""
        key = str(name).replace("_", "").replace("-", "").lower()
        for shape in cls:
            if shape.value.replace("_", "") == key:
                return shape
        raise invalid_kernel(str(name), float("nan"))


@dataclass(frozen=True)
class Kernel:
    """
    Kernel ψ com escala T0 (dias).

    Boxcar: (1/T0)·1{0<t<=T0}
    ExpDecay: (1/T0)·exp(-t/T0)
    HalfGaussian: sqrt(2/(π·T0²))·exp(-t²/(2·T0²))
    """
    shape: KernelShape
    T0: float

    def __post_init__(self):
        if not isinstance(self.shape, KernelShape):
            object.__setattr__(self, "shape", KernelShape.parse(self.shape))
        if not (math.isfinite(self.T0) and self.T0 > 0):
            raise invalid_kernel(self.shape.value, self.T0)

    def __call__(self, dt: ArrayLike) -> ArrayLike:
        return self.evaluate(dt)

    def evaluate(self, dt: ArrayLike) -> ArrayLike:
        """ψ(dt); zero para dt <= 0."""
        x = np.asarray(dt, dtype=float)
        s = self.T0
        with np.errstate(over="ignore", invalid="ignore"):
            if self.shape is KernelShape.BOXCAR:
                out = np.where((x > 0) & (x <= s), 1.0 / s, 0.0)
            elif self.shape is KernelShape.EXP_DECAY:
                out = np.where(x > 0, np.exp(-np.maximum(x, 0.0) / s) / s, 0.0)
            else:
                out = np.where(x > 0, math.sqrt(2.0 / (math.pi * s * s)) * np.exp(-(x * x) / (2 * s * s)), 0.0)
        return out if out.ndim else float(out)

    def right_limit(self, dt: ArrayLike) -> ArrayLike:
        """lim_{u↓dt} ψ(u). Usado como limite do thinning e no nó esquerdo da quadratura."""
        x = np.asarray(dt, dtype=float)
        s = self.T0
        with np.errstate(over="ignore", invalid="ignore"):
            if self.shape is KernelShape.BOXCAR:
                out = np.where((x >= 0) & (x < s), 1.0 / s, 0.0)
            elif self.shape is KernelShape.EXP_DECAY:
                out = np.where(x >= 0, np.exp(-np.maximum(x, 0.0) / s) / s, 0.0)
            else:
                out = np.where(x >= 0, math.sqrt(2.0 / (math.pi * s * s)) * np.exp(-(x * x) / (2 * s * s)), 0.0)
        return out if out.ndim else float(out)

    def integral(self, t: ArrayLike) -> ArrayLike:
        """Ψ(t) = ∫₀ᵗ ψ(u) du; zero para t <= 0, tende a 1."""
        x = np.maximum(np.asarray(t, dtype=float), 0.0)
        s = self.T0
        if self.shape is KernelShape.BOXCAR:
            out = np.minimum(x, s) / s
        elif self.shape is KernelShape.EXP_DECAY:
            out = -np.expm1(-x / s)
        else:
            out = erf(x / (math.sqrt(2.0) * s))
        return out if np.ndim(out) else float(out)

    def to_dict(self) -> dict:
        return {"shape": self.shape.value, "T0": float(self.T0)}

    @classmethod
    def from_dict(cls, data: dict) -> "Kernel":
        try:
            return cls(KernelShape.parse(data["shape"]), float(data["T0"]))
        except (KeyError, TypeError, ValueError):
            raise invalid_kernel(str(data.get("shape") if isinstance(data, dict) else data), float("nan")) from None
