import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from katcheck import _kernels_py, kernels


def _layers(rng, n_atoms, n_letters, i, j):
    size = lambda m: n_atoms * (n_letters * n_atoms) ** m  # noqa: E731
    left = (rng.random(size(i)) < 0.3).astype(np.uint8)
    right = (rng.random(size(j)) < 0.3).astype(np.uint8)
    return left, right, np.zeros(size(i + j), dtype=np.uint8)


def test_fallback_example():
    # one atom, one letter: layers are plain bit vectors of length 1
    out = np.zeros(1, dtype=np.uint8)
    _kernels_py.fuse_or(out, np.ones(1, np.uint8), np.ones(1, np.uint8), 1)
    assert out.tolist() == [1]


def test_size_mismatch_rejected():
    with pytest.raises(ValueError):
        kernels.fuse_or(np.zeros(3, np.uint8), np.ones(4, np.uint8), np.ones(4, np.uint8), 2)


@pytest.mark.skipif(kernels.BACKEND != "cython", reason="compiled kernels not built")
@given(st.integers(0, 2**32), st.sampled_from([1, 2, 4]), st.integers(1, 2), st.integers(0, 2),
       st.integers(0, 2))
def test_backends_agree(seed, n_atoms, n_letters, i, j):
    from katcheck import _kernels

    rng = np.random.default_rng(seed)
    left, right, out = _layers(rng, n_atoms, n_letters, i, j)
    expected = out.copy()
    _kernels_py.fuse_or(expected, left, right, n_atoms)
    _kernels.fuse_or(out, left, right, n_atoms)
    assert np.array_equal(out, expected)


def test_reference_loop_agrees():
    rng = np.random.default_rng(0)
    left, right, out = _layers(rng, 4, 2, 2, 1)
    kernels.fuse_or(out, left, right, 4)
    width = right.shape[0] // 4
    slow = np.zeros_like(out)
    for t in np.flatnonzero(left):
        slow[t * width:(t + 1) * width] |= right[(t % 4) * width:(t % 4 + 1) * width]
    assert np.array_equal(out, slow)


def test_environment_forces_fallback():
    env = dict(os.environ, KATCHECK_PURE_PYTHON="1")
    code = "from katcheck import kernels; print(kernels.BACKEND)"
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True)
    assert out.stdout.strip() == "python"
