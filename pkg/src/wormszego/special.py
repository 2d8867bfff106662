"""Overflow-free elementary pieces shared by the symbol evaluators."""

from __future__ import annotations

import math

import numpy as np

LOG2 = math.log(2.0)


def log_cosh(x):
    """``log ch(x)`` without overflow for large ``|x|``."""
    ax = np.abs(np.asarray(x, dtype=float))
    return ax + np.log1p(np.exp(-2.0 * ax)) - LOG2


def weighted(profile: np.ndarray, log_weight: np.ndarray) -> np.ndarray:
    """``exp(log_weight) * profile`` with ``0 * inf`` read as 0.

    Entries where the profile vanishes stay zero even when the weight would
    overflow; anywhere else an overflow propagates as ``inf``.
    """
    p = np.asarray(profile, dtype=complex)
    lw = np.asarray(log_weight, dtype=float)
    out = np.zeros(np.broadcast(p, lw).shape, dtype=complex)
    pb = np.broadcast_to(p, out.shape)
    lwb = np.broadcast_to(lw, out.shape)
    nz = pb != 0
    mag = np.abs(pb[nz])
    with np.errstate(over="ignore", invalid="ignore"):
        # the phase is taken from angle(): complex division misbehaves on subnormals
        out[nz] = np.exp(lwb[nz] + np.log(mag)) * np.exp(1j * np.angle(pb[nz]))
    return out
