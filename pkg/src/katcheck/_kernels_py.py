"""Fallback fusion kernels in numpy, used when the compiled module is unavailable.

Layer ``m`` of a bounded language is a flat ``uint8`` array indexed by
``alpha0, (p1, alpha1), ..., (pm, alpham)`` in big-endian mixed radix. Viewed as
``(-1, n_atoms)`` its last axis is the final atom; viewed as
``(n_atoms, -1)`` its first axis is the initial atom. Fusing layer ``i`` with
layer ``j`` therefore pairs every row of the first view with the matching row
of the second, and the result lands contiguously in layer ``i + j``.
"""

import numpy as np


def fuse_or(out, left, right, n_atoms):
    width = right.shape[0] // n_atoms
    if width == 0:
        return
    if out.shape[0] != left.shape[0] * width:
        raise ValueError("output layer has the wrong size")
    idx = np.flatnonzero(left)
    if idx.size == 0:
        return
    out.reshape(-1, width)[idx] |= right.reshape(n_atoms, width)[idx % n_atoms]

