"""Two-qubit state constructors, parametric families, and seeded sampling.

Basis order is ``|00>, |01>, |10>, |11>`` everywhere.  Constructors return
plain complex ndarrays: shape ``(4,)`` for state vectors, ``(4, 4)`` for
density matrices.  Samplers accept either an integer seed or an existing
:class:`numpy.random.Generator`, so sweeps can hand out substreams.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidState, OutOfRange
from .linalg import dagger, frobenius_distance, kron, partial_transpose, trace
from .measures import boundary_p_range


def _check_unit(name, value):
    value = float(value)
    if not 0.0 <= value <= 1.0:
        raise OutOfRange(f"{name} must lie in [0, 1], got {value!r}")
    return value


def projector(psi):
    """Rank-1 projector ``|psi><psi|``; batched over leading axes."""
    psi = np.asarray(psi, dtype=complex)
    return psi[..., :, None] * np.conjugate(psi)[..., None, :]


def phi_q(q):
    """``sqrt(q)|00> + sqrt(1-q)|11>``."""
    q = _check_unit("q", q)
    return np.array([math.sqrt(q), 0.0, 0.0, math.sqrt(1.0 - q)], dtype=complex)


def psi_r(r):
    """``sqrt(r)|01> - sqrt(1-r)|10>``."""
    r = _check_unit("r", r)
    return np.array([0.0, math.sqrt(r), -math.sqrt(1.0 - r), 0.0], dtype=complex)


def phi_plus():
    """The Bell state ``(|00> + |11>)/sqrt(2)``."""
    return phi_q(0.5)


def psi_minus_0011():
    """``(|00> - |11>)/sqrt(2)``: a Bell state supported on ``|00>, |11>``
    (not the singlet, which lives on ``|01>, |10>``)."""
    s = 1.0 / math.sqrt(2.0)
    return np.array([s, 0.0, 0.0, -s], dtype=complex)


def sigma_pqr(p, q, r):
    """Rank-(at most)-2 mixture ``p |phi_q><phi_q| + (1-p) |psi_r><psi_r|``.

    In the computational basis this has diagonal
    ``(pq, (1-p)r, (1-p)(1-r), p(1-q))``, corner entries ``p sqrt(q(1-q))``
    at (0,3)/(3,0) and middle entries ``-(1-p) sqrt(r(1-r))`` at (1,2)/(2,1).
    """
    p = _check_unit("p", p)
    return p * projector(phi_q(q)) + (1.0 - p) * projector(psi_r(r))


def sigma_mems(c):
    """``c |phi+><phi+| + (1-c) |10><10|``.

    Among all states of concurrence ``c`` this family attains the least
    possible negativity, and conjecturally the least binegativity.
    """
    c = _check_unit("c", c)
    ten = np.array([0.0, 0.0, 1.0, 0.0], dtype=complex)
    return c * projector(phi_plus()) + (1.0 - c) * projector(ten)


def _clamped_sqrt_arg(x, tol=1e-12):
    # family formulas touch zero at the interval ends; anything clearly
    # negative means the caller left the feasible set
    if x < -tol:
        raise OutOfRange(f"square-root argument {x:.3e} is negative")
    return max(x, 0.0)


def _into_unit(name, x, tol=1e-12):
    if x < -tol or x > 1.0 + tol:
        raise OutOfRange(f"{name} = {x!r} falls outside [0, 1]")
    return min(max(x, 0.0), 1.0)


def boundary_family(c, nu, p):
    """The ``sigma_pqr`` state with concurrence ``c`` and negativity ``nu``
    at mixing parameter ``p``.

    For fixed ``(c, nu)`` with ``nu`` strictly between ``nu_of_c(c)`` and
    ``c``, a one-parameter family of sigma_pqr states realizes exactly that
    measure pair while the binegativity decreases strictly in ``p``.  The
    parameter runs over ``boundary_p_range(c, nu)``; the ends attain the
    conjectured upper (``p_min``) and lower (``p_max``) binegativity limits.

    Raises :class:`InfeasibleRegion` for an unrealizable ``(c, nu)`` pair
    (including the degenerate edge ``c = nu``, which pure states cover) and
    :class:`OutOfRange` for ``p`` outside the interval by more than 1e-12.
    """
    c = float(c)
    nu = float(nu)
    p = float(p)
    p_min, p_max = boundary_p_range(c, nu)
    if p < p_min - 1e-12 or p > p_max + 1e-12:
        raise OutOfRange(
            f"p = {p!r} outside [{p_min!r}, {p_max!r}] for c = {c!r}, nu = {nu!r}"
        )
    p = min(max(p, p_min), p_max)
    scale = math.sqrt(c * c - nu * nu) / (2.0 * c)
    q_arg = (p - 0.5 * (c - nu)) * (p + 0.5 * (c + nu))
    q = 0.5 + scale / p * math.sqrt(_clamped_sqrt_arg(q_arg))
    r_arg = (p - 0.5 * (c - nu) - c * (nu + 1.0) / (c - nu)) * (
        p + 0.5 * (c + nu) - c * (nu + 1.0) / (c + nu)
    )
    r = 0.5 + scale / (1.0 - p) * math.sqrt(_clamped_sqrt_arg(r_arg))
    return sigma_pqr(p, _into_unit("q_p", q), _into_unit("r_p", r))


@dataclass(frozen=True)
class SchmidtForm:
    """Schmidt data of a two-qubit pure state: the larger coefficient ``mu``
    and local unitaries with
    ``psi = kron(local_a, local_b) @ (sqrt(mu)|00> + sqrt(1-mu)|11>)``."""

    mu: float
    local_a: np.ndarray
    local_b: np.ndarray

    def reconstruct(self):
        core = np.array(
            [math.sqrt(self.mu), 0.0, 0.0, math.sqrt(1.0 - self.mu)], dtype=complex
        )
        return kron(self.local_a, self.local_b) @ core


def schmidt(psi):
    """Schmidt decomposition of a unit vector, with ``mu >= 1/2``."""
    psi = np.asarray(psi, dtype=complex)
    amp = psi.reshape(2, 2)
    u, s, vh = np.linalg.svd(amp)
    mu = min(float(s[0] ** 2), 1.0)
    return SchmidtForm(mu, u, vh.T)


def as_generator(seed):
    """Accept an integer seed or pass an existing Generator through."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def random_pure(seed, size=None):
    """Haar-random state vectors: normalized independent complex Gaussians.

    ``size=None`` gives one vector of shape ``(4,)``; ``size=k`` a stack
    ``(k, 4)``.
    """
    rng = as_generator(seed)
    shape = (4,) if size is None else (int(size), 4)
    g = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    return g / np.linalg.norm(g, axis=-1, keepdims=True)


def random_mixed(rank, seed, size=None):
    """Induced-measure random density matrices ``G G^dagger / Tr`` with
    ``G`` a complex Gaussian 4 x rank matrix.

    ``rank=1`` reproduces Haar-random pure states.
    """
    rank = int(rank)
    if rank not in (1, 2, 3, 4):
        raise OutOfRange(f"rank must be 1..4, got {rank}")
    rng = as_generator(seed)
    shape = (4, rank) if size is None else (int(size), 4, rank)
    g = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    m = g @ dagger(g)
    tr = np.asarray(trace(m).real)
    return m / tr[..., None, None]


def is_ppt(rho, tol=1e-11):
    """True when the partial transpose has no eigenvalue below ``-tol``.

    For two qubits this is exactly the separability verdict.  Batched input
    gives a boolean array.
    """
    w = np.linalg.eigvalsh(partial_transpose(np.asarray(rho, dtype=complex)))
    out = w[..., 0] >= -tol
    return bool(out) if out.ndim == 0 else out


def validate_density_matrix(rho):
    """Check the density-matrix invariants, raising :class:`InvalidState`
    that names the violated one.  Returns the validated complex array."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise InvalidState(f"dimension: expected a 4x4 matrix, got shape {rho.shape}")
    if not np.all(np.isfinite(rho)):
        raise InvalidState("finiteness: matrix contains NaN or Inf entries")
    herm = float(frobenius_distance(rho, dagger(rho)))
    if herm > 1e-12:
        raise InvalidState(f"hermiticity: defect {herm:.3e} exceeds 1e-12")
    tr = complex(trace(rho)).real
    if abs(tr - 1.0) > 1e-11:
        raise InvalidState(f"trace: {tr!r} differs from 1 by more than 1e-11")
    low = float(np.linalg.eigvalsh(rho)[0])
    if low < -1e-11:
        raise InvalidState(f"positivity: eigenvalue {low:.3e} below -1e-11")
    return rho
