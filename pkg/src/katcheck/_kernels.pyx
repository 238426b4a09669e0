# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled guarded-string fusion over dense layer bitmaps."""


def fuse_or(unsigned char[::1] out, const unsigned char[::1] left,
            const unsigned char[::1] right, Py_ssize_t n_atoms):
    """OR the fusion of ``left`` and ``right`` into ``out`` (layouts as in _kernels_py)."""
    cdef Py_ssize_t width = right.shape[0] // n_atoms
    cdef Py_ssize_t n_left = left.shape[0]
    cdef Py_ssize_t t, s, base, src
    if width == 0:
        return
    if out.shape[0] != n_left * width:
        raise ValueError("output layer has the wrong size")
    with nogil:
        for t in range(n_left):
            if left[t]:
                base = t * width
                src = (t % n_atoms) * width
                for s in range(width):
                    out[base + s] |= right[src + s]

