"""Dense helpers for operators acting on chains of two-state tensor factors.

A state vector over n factors lives in C^(2^n); factor 0 is the leftmost
(most significant bit) of the flattened index.  All functions accept either
a vector of length 2^n or a matrix whose rows carry the tensor index, and
left-multiply by the embedded gate.
"""

import numpy as np


def _as_batch(arr, n):
    arr = np.asarray(arr, dtype=complex)
    if arr.shape[0] != 2 ** n:
        raise ValueError(f"leading dimension {arr.shape[0]} != 2^{n}")
    if arr.ndim == 1:
        return arr[:, None], True
    return arr, False


def apply_one_site(arr, gate, site, n):
    """Apply a 2x2 gate to tensor factor `site` (0-based) of `arr`."""
    mat, was_vec = _as_batch(arr, n)
    m = mat.shape[1]
    t = mat.reshape((2,) * n + (m,))
    t = np.moveaxis(t, site, 0)
    shape = t.shape
    t = np.asarray(gate, dtype=complex) @ t.reshape(2, -1)
    t = np.moveaxis(t.reshape(shape), 0, site)
    out = t.reshape(2 ** n, m)
    return out[:, 0] if was_vec else out


def apply_two_site(arr, gate, first, second, n):
    """Apply a 4x4 gate whose row index is (bit of `first`, bit of `second`)."""
    if first == second:
        raise ValueError("two-site gate needs distinct factors")
    mat, was_vec = _as_batch(arr, n)
    m = mat.shape[1]
    t = mat.reshape((2,) * n + (m,))
    t = np.moveaxis(t, (first, second), (0, 1))
    shape = t.shape
    t = np.asarray(gate, dtype=complex) @ t.reshape(4, -1)
    t = np.moveaxis(t.reshape(shape), (0, 1), (first, second))
    out = t.reshape(2 ** n, m)
    return out[:, 0] if was_vec else out


def one_site_operator(gate, site, n):
    """Dense 2^n x 2^n embedding of a 2x2 gate at `site`."""
    return apply_one_site(np.eye(2 ** n, dtype=complex), gate, site, n)


def two_site_operator(gate, first, second, n):
    """Dense 2^n x 2^n embedding of a 4x4 gate on (`first`, `second`)."""
    return apply_two_site(np.eye(2 ** n, dtype=complex), gate, first, second, n)


def bit_table(n):
    """Array of shape (2^n, n): bit_table[i, j] is bit j of index i (factor 0 MSB)."""
    idx = np.arange(2 ** n)
    return (idx[:, None] >> (n - 1 - np.arange(n))[None, :]) & 1
