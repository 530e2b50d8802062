"""Local integrability data: R-matrices and boundary K-matrices.

Two-site matrices act on C^2 x C^2 with basis order (00, 01, 10, 11).
`r_matrix` is regular, R(1) = P (the permutation); `r_matrix_pasep` is the
one-parameter deformation with R^(0)(x) = R(x).  The boundary matrices carry
the injection rate (through a = 1/alpha - 1 and the fugacity e^mu) on the
left and the ejection rate (through b = 1/beta - 1) on the right.
"""

import numpy as np

from .tensorops import two_site_operator

_POLE_TOL = 1e-12


def r_matrix(x):
    """Bulk R-matrix [[1,0,0,0],[0,0,x,0],[0,1,1-x,0],[0,0,0,1]]."""
    x = complex(x)
    return np.array(
        [[1, 0, 0, 0], [0, 0, x, 0], [0, 1, 1 - x, 0], [0, 0, 0, 1]],
        dtype=complex,
    )


def r_matrix_pasep(q, x):
    """Partially asymmetric R-matrix; reduces to r_matrix(x) at q = 0."""
    q = complex(q)
    x = complex(x)
    den = q * x - 1
    if abs(den) < _POLE_TOL:
        raise ValueError(f"R^(q) pole: q*x - 1 = {den:.3e}")
    return np.array(
        [
            [1, 0, 0, 0],
            [0, (x - 1) * q / den, (q - 1) * x / den, 0],
            [0, (q - 1) / den, (x - 1) / den, 0],
            [0, 0, 0, 1],
        ],
        dtype=complex,
    )


def k_matrix(x, params):
    """Left boundary matrix K(x); K(1) is the identity."""
    x = complex(x)
    a = params.a
    den = x * a + 1
    if abs(den) < _POLE_TOL:
        raise ValueError(f"K pole: x*a + 1 = {den:.3e}")
    emu = np.exp(params.mu)
    return np.array(
        [[(a + x) * x / den, 0], [emu * (1 - x ** 2) / den, 1]], dtype=complex
    )


def k_tilde_matrix(x, params):
    """Right boundary matrix Kt(x) = [[1,1],[0,x b]] / (x b + 1)."""
    x = complex(x)
    b = params.b
    den = x * b + 1
    if abs(den) < _POLE_TOL:
        raise ValueError(f"Kt pole: x*b + 1 = {den:.3e}")
    return np.array([[1, 1], [0, x * b]], dtype=complex) / den


def check_yang_baxter(x, y, q=None):
    """Max-norm residual of R12(x/y) R13(x) R23(y) - R23(y) R13(x) R12(x/y).

    Evaluated densely on the triple tensor space.  Pass q for the partially
    asymmetric R-matrix.
    """
    rm = r_matrix if q is None else (lambda arg: r_matrix_pasep(q, arg))
    r12 = two_site_operator(rm(x / y), 0, 1, 3)
    r13 = two_site_operator(rm(x), 0, 2, 3)
    r23 = two_site_operator(rm(y), 1, 2, 3)
    return float(np.abs(r12 @ r13 @ r23 - r23 @ r13 @ r12).max())
