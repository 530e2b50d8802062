"""Open-boundary TASEP: generator construction, brute-force spectrum, simulator.

Conventions
-----------
A configuration of L sites is (tau_1, ..., tau_L), tau_j in {0, 1}.  The
probability vector is indexed by i = sum_j tau_j 2^(L-j), i.e. site 1 is the
most significant bit: index 0 is the empty lattice, 2^L - 1 the full one.
The master equation is dP/dt = M P.  The generator is

    M(mu) = B_1(mu) + sum_k w_{k,k+1} + Bt_L

with injection block B(mu) = [[-alpha, 0], [alpha e^mu, 0]] acting on site 1,
hopping block w on neighbouring pairs, and ejection block Bt on site L.  At
mu = 0 every column sums to zero; for mu != 0 the top eigenvalue is the
scaled cumulant generating function of the injected-particle current.

Boundary rates are often re-expressed through a = 1/alpha - 1 and
b = 1/beta - 1; both are derived quantities here, never stored.
"""

import os
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .tensorops import apply_one_site, apply_two_site, bit_table

DENSE_CAP_DEFAULT = 14
DENSE_CAP_ENV = "BETHE_TASEP_DENSE_CAP"

_W_HOP = np.array(
    [[0, 0, 0, 0], [0, 0, 1, 0], [0, 0, -1, 0], [0, 0, 0, 0]], dtype=float
)


def dense_cap(override=None):
    """Largest L for which dense 2^L x 2^L work is permitted."""
    if override is not None:
        return int(override)
    return int(os.environ.get(DENSE_CAP_ENV, DENSE_CAP_DEFAULT))


@dataclass(frozen=True)
class ModelParams:
    """Model parameters: size, boundary rates, fugacity exponent, inhomogeneities.

    `z` holds the per-site spectral shifts used by the transfer-matrix
    construction; the physical point is z = (1, ..., 1), the default.
    """

    L: int
    alpha: float
    beta: float
    mu: float = 0.0
    z: tuple = None

    def __post_init__(self):
        if self.L < 1:
            raise ValueError(f"L must be >= 1, got {self.L}")
        if not (self.alpha > 0):
            raise ValueError(f"alpha must be > 0, got {self.alpha}")
        if not (self.beta > 0):
            raise ValueError(f"beta must be > 0, got {self.beta}")
        z = self.z
        if z is None:
            z = (1.0,) * self.L
        z = tuple(complex(v) for v in z)
        if len(z) != self.L:
            raise ValueError(f"need L={self.L} inhomogeneities, got {len(z)}")
        if any(v == 0 for v in z):
            raise ValueError("inhomogeneities must be nonzero")
        object.__setattr__(self, "z", z)

    @property
    def a(self):
        return 1.0 / self.alpha - 1.0

    @property
    def b(self):
        return 1.0 / self.beta - 1.0

    @property
    def fugacity(self):
        return float(np.exp(self.mu))

    @property
    def z_array(self):
        return np.asarray(self.z, dtype=complex)

    def is_homogeneous(self, tol=1e-12):
        return bool(np.all(np.abs(self.z_array - 1.0) <= tol))


def generic_inhomogeneities(L):
    """Deterministic pairwise-distinct inhomogeneities 1 + 0.1j*i for tests."""
    return tuple(1.0 + 0.1j * (j + 1) for j in range(L))


def build_markov(params, cap=None):
    """Dense generator M(mu) on the 2^L configuration space.

    Columns sum to zero when mu = 0.  Rejects L beyond the dense cap.
    """
    cap = dense_cap(cap)
    if params.L > cap:
        raise ValueError(
            f"L={params.L} exceeds the dense cap {cap} "
            f"(override with cap= or ${DENSE_CAP_ENV})"
        )
    L = params.L
    dim = 2 ** L
    binj = np.array(
        [[-params.alpha, 0.0], [params.alpha * np.exp(params.mu), 0.0]]
    )
    bej = np.array([[0.0, params.beta], [0.0, -params.beta]])
    m = apply_one_site(np.eye(dim), binj, 0, L)
    for k in range(L - 1):
        m += apply_two_site(np.eye(dim), _W_HOP, k, k + 1, L)
    m += apply_one_site(np.eye(dim), bej, L - 1, L)
    m = m.real
    if not np.all(np.isfinite(m)):
        raise FloatingPointError("non-finite entries in generator")
    return m


def exact_spectrum(m, cap=None, residual_tol=1e-9):
    """Full eigendecomposition of a (generally non-normal) generator.

    Returns (eigenvalues, eigenvectors); column i of the second array is the
    eigenvector for eigenvalue i, scaled so its largest-modulus entry is 1.
    """
    m = np.asarray(m)
    dim = m.shape[0]
    if m.shape != (dim, dim):
        raise ValueError("matrix must be square")
    if dim > 2 ** dense_cap(cap):
        raise ValueError(f"dimension {dim} exceeds dense cap 2^{dense_cap(cap)}")
    w, v = scipy.linalg.eig(m)
    for i in range(dim):
        col = v[:, i]
        piv = np.argmax(np.abs(col))
        v[:, i] = col / col[piv]
    resid = np.linalg.norm(m @ v - v * w[None, :], axis=0)
    scale = np.linalg.norm(v, axis=0)
    bad = resid > residual_tol * scale
    if np.any(bad):
        raise RuntimeError(
            f"eigensolver residual {resid[bad].max():.3e} above "
            f"{residual_tol:g}; cond(V) = {np.linalg.cond(v):.3e}"
        )
    return w, v


def stationary_vector(m, tol=1e-10):
    """Kernel vector of a mu = 0 generator, normalized to total probability 1."""
    m = np.asarray(m, dtype=float)
    dim = m.shape[0]
    colsum = np.abs(m.sum(axis=0)).max()
    scale = max(np.abs(m).max(), 1.0)
    if colsum > 1e-8 * scale:
        raise ValueError(f"not a stochastic generator: column sums up to {colsum:.3e}")
    u, s, vh = np.linalg.svd(m)
    kernel_dim = int(np.sum(s <= tol * max(s[0], 1.0)))
    if kernel_dim != 1:
        raise ValueError(f"kernel dimension {kernel_dim} != 1 (singular values {s[-3:]})")
    p = vh[-1].conj()
    p = p.real if abs(p.imag).max() < 1e-12 else p
    p = np.real_if_close(p)
    if p.sum() < 0:
        p = -p
    if p.min() < -1e-10 * max(p.max(), 1.0):
        raise ValueError(f"kernel vector has negative component {p.min():.3e}")
    p = np.clip(p, 0.0, None)
    return p / p.sum()


@dataclass(frozen=True)
class DensityProfile:
    """Time-averaged site occupancies from a kinetic Monte Carlo run."""

    occupancy: np.ndarray
    samples: int
    elapsed: float


def simulate_gillespie(params, t_max, seed, burn_in=None, max_events=10 ** 8):
    """Continuous-time kinetic Monte Carlo for the physical (mu = 0) dynamics.

    Exponential waiting times; occupancies are time-averaged over
    [burn_in, t_max] (default burn_in = t_max / 2).  Deterministic given seed.
    """
    if t_max <= 0:
        raise ValueError("t_max must be positive")
    if burn_in is None:
        burn_in = 0.5 * t_max
    if not (0 <= burn_in < t_max):
        raise ValueError("burn_in must lie in [0, t_max)")
    L = params.L
    rng = np.random.default_rng(seed)
    tau = np.zeros(L, dtype=np.int8)
    occ_time = np.zeros(L)
    t = 0.0
    events = 0
    rates = np.empty(L + 1)
    moves = np.empty(L + 1, dtype=np.int64)
    while t < t_max and events < max_events:
        nmoves = 0
        if tau[0] == 0:
            rates[nmoves] = params.alpha
            moves[nmoves] = -1  # injection
            nmoves += 1
        for k in range(L - 1):
            if tau[k] == 1 and tau[k + 1] == 0:
                rates[nmoves] = 1.0
                moves[nmoves] = k
                nmoves += 1
        if tau[L - 1] == 1:
            rates[nmoves] = params.beta
            moves[nmoves] = L  # ejection
            nmoves += 1
        total = rates[:nmoves].sum()
        dt = rng.exponential(1.0 / total)
        t_next = t + dt
        lo = max(t, burn_in)
        hi = min(t_next, t_max)
        if hi > lo:
            occ_time += tau * (hi - lo)
        if t_next >= t_max:
            t = t_next
            break
        pick = np.searchsorted(np.cumsum(rates[:nmoves]), total * rng.uniform())
        mv = moves[pick]
        if mv == -1:
            tau[0] = 1
        elif mv == L:
            tau[L - 1] = 0
        else:
            tau[mv] = 0
            tau[mv + 1] = 1
        t = t_next
        events += 1
    window = min(t, t_max) - burn_in
    return DensityProfile(occupancy=occ_time / window, samples=events, elapsed=window)


def kernel_marginals(params):
    """Exact stationary occupancies <tau_j> from the mu = 0 kernel vector."""
    p = stationary_vector(build_markov(ModelParams(params.L, params.alpha, params.beta)))
    bits = bit_table(params.L)
    return bits.T @ p
