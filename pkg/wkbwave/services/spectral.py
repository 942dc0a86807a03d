"""
Spectral service: Hermitian discretization of h2, symmetric eigensolvers,
the lambda -> omega map and the non-dispersive initial-value propagator
"""
import logging
import math
from typing import List, Optional, Sequence

import numpy as np
from scipy.integrate import trapezoid
from scipy.linalg import LinAlgError, eigh, eigh_tridiagonal

from wkbwave.exceptions import ConvergenceFailure, InsufficientHistory
from wkbwave.models.grids import AxisGrid, SampledField
from wkbwave.models.media import MediumModel
from wkbwave.models.results import Boundary, DiscreteOperator, EigenPair
from wkbwave.services.media import invert_f

logger = logging.getLogger(__name__)

MIN_POINTS = 16
ZERO_FLOOR = 1e-10   # eigenvalue floor, relative to the operator norm
ZERO_MODE = 1e-12    # below this (relative) sin(sqrt(lam) t)/sqrt(lam) -> t


def discretize_h2(model: MediumModel, grid: AxisGrid, boundary: Boundary) -> DiscreteOperator:
    """
    Flux-form discretization of h2 = eps2^{-1/2} p mu2^{-1} p eps2^{-1/2}

    (h2 f)_i = -s_i [m_{i+1/2} (s f)_{i+1} - (m_{i+1/2} + m_{i-1/2}) (s f)_i
                     + m_{i-1/2} (s f)_{i-1}] / dz^2

    with s = eps2^{-1/2} at the samples and m = 1/mu2 at the midpoints. The
    matrix is the congruence S T S of a symmetric tridiagonal T.

    Args:
        model: Medium model (eps2, mu2)
        grid: z grid, n >= 16
        boundary: dirichlet (walls at z_min, z_max) or periodic (period z_max - z_min)

    Returns:
        DiscreteOperator on the unknown samples
    """
    boundary = Boundary(boundary)
    if grid.n < MIN_POINTS:
        raise ValueError(f"discretize_h2 needs n >= {MIN_POINTS}, got {grid.n}")
    z, dz = grid.z, grid.dz

    if boundary == Boundary.DIRICHLET:
        nodes = z[1:-1]
        m_minus = 1.0 / np.asarray(model.mu2(nodes - 0.5 * dz))
        m_plus = 1.0 / np.asarray(model.mu2(nodes + 0.5 * dz))
        corner_m = 0.0
        coupling = m_plus[:-1]
    else:
        nodes = z[:-1]
        m_half = 1.0 / np.asarray(model.mu2(nodes + 0.5 * dz))
        m_plus = m_half
        m_minus = np.roll(m_half, 1)
        corner_m = m_half[-1]
        coupling = m_half[:-1]

    eps = np.asarray(model.eps2(nodes))
    if np.any(eps <= 0) or np.any(m_plus <= 0) or np.any(m_minus <= 0):
        raise ValueError("eps2 and mu2 must be positive on the grid")
    s = eps ** -0.5

    diag = s ** 2 * (m_plus + m_minus) / dz ** 2
    offdiag = -s[:-1] * s[1:] * coupling / dz ** 2
    corner = -s[-1] * s[0] * corner_m / dz ** 2 if boundary == Boundary.PERIODIC else 0.0

    return DiscreteOperator(
        grid=grid,
        boundary=boundary,
        diag=diag,
        offdiag=offdiag,
        corner=corner,
        scale=s,
        provenance=f"eps2={model.eps2.kind.value}, mu2={model.mu2.kind.value}",
    )


def _fix_signs(vectors: np.ndarray) -> np.ndarray:
    """First significant component of every column positive"""
    out = vectors.copy()
    for j in range(out.shape[1]):
        col = out[:, j]
        idx = int(np.argmax(np.abs(col) > 1e-8 * np.max(np.abs(col))))
        if col[idx] < 0:
            out[:, j] = -col
    return out


def _solve(op: DiscreteOperator, select: str, select_range) -> tuple:
    try:
        if op.boundary == Boundary.DIRICHLET:
            lam, vec = eigh_tridiagonal(
                op.diag, op.offdiag, select=select, select_range=select_range,
                lapack_driver="stebz" if select != "a" else "stemr",
            )
        else:
            kwargs = {}
            if select == "i":
                kwargs["subset_by_index"] = list(select_range)
            elif select == "v":
                kwargs["subset_by_value"] = list(select_range)
            lam, vec = eigh(op.dense(), driver="evr", **kwargs)
    except LinAlgError as e:
        raise ConvergenceFailure(f"symmetric eigensolver failed: {e}") from e
    if not np.all(np.isfinite(lam)):
        raise ConvergenceFailure("symmetric eigensolver returned non-finite eigenvalues")
    return lam, _fix_signs(vec)


def _pairs(op: DiscreteOperator, lam: np.ndarray, vec: np.ndarray,
           model: Optional[MediumModel]) -> List[EigenPair]:
    floor = ZERO_FLOOR * op.norm
    pairs = []
    for j in range(lam.size):
        value = float(lam[j])
        if value < -floor:
            raise ConvergenceFailure(f"eigenvalue {value:.3e} below the numerical zero floor")
        value = 0.0 if abs(value) < floor else value
        values = op.to_grid(vec[:, j] / math.sqrt(op.grid.dz))
        omega = omega_from_lambda(model, value) if model is not None else None
        pairs.append(EigenPair(
            lam=value,
            vector=SampledField(grid=op.grid, values=values, label=f"eigvec_{j}"),
            omega=omega,
        ))
    return pairs


def eigensolve(op: DiscreteOperator, k: int, model: Optional[MediumModel] = None) -> List[EigenPair]:
    """
    The k lowest eigenpairs of a discretized h2

    Dirichlet operators use bisection + inverse iteration on the tridiagonal
    form, periodic ones the symmetric dense solver. Vectors are box-normalized
    (sum |v|^2 dz = 1 over the unknowns) with the first significant component
    positive.

    Args:
        op: Discrete operator
        k: Number of pairs, 1 <= k <= op.size
        model: When given, each pair carries omega = f^{-1}(sqrt(lam))

    Raises:
        ConvergenceFailure: LAPACK did not converge
    """
    if not 1 <= k <= op.size:
        raise ValueError(f"k must be in [1, {op.size}], got {k}")
    lam, vec = _solve(op, "i", (0, k - 1))
    logger.info(f"Eigensolve ({op.boundary.value}, size {op.size}): {k} lowest pairs")
    return _pairs(op, lam, vec, model)


def eigensolve_interval(op: DiscreteOperator, lam_min: float, lam_max: float,
                        model: Optional[MediumModel] = None) -> List[EigenPair]:
    """All eigenpairs with lam_min < lam <= lam_max"""
    if not lam_max > lam_min:
        raise ValueError("lam_max must exceed lam_min")
    lam, vec = _solve(op, "v", (lam_min, lam_max))
    logger.info(f"Eigensolve ({op.boundary.value}): {lam.size} pairs in ({lam_min:.6g}, {lam_max:.6g}]")
    return _pairs(op, lam, vec, model)


def omega_from_lambda(model: MediumModel, lam: float) -> float:
    """
    Frequency of an h2 eigenvalue: solve f(omega) = sqrt(lam)

    Raises:
        OutOfRange: sqrt(lam) outside f(window)
    """
    if lam < 0:
        raise ValueError(f"lam must be non-negative, got {lam}")
    return invert_f(model, math.sqrt(lam))


def apply_h2(op: DiscreteOperator, values: np.ndarray) -> np.ndarray:
    """h2 applied to grid samples (boundary samples are ignored / returned as 0 or periodic copy)"""
    x = np.asarray(values)[op.unknowns]
    y = op.diag * x
    y[:-1] += op.offdiag * x[1:]
    y[1:] += op.offdiag * x[:-1]
    if op.boundary == Boundary.PERIODIC:
        y[0] += op.corner * x[-1]
        y[-1] += op.corner * x[0]
    return op.to_grid(y)


def rayleigh_quotient(op: DiscreteOperator, values: np.ndarray) -> float:
    x = np.asarray(values)[op.unknowns]
    hx = apply_h2(op, values)[op.unknowns]
    return float(np.real(np.vdot(x, hx) / np.vdot(x, x)))


def similarity_transform(op: DiscreteOperator) -> np.ndarray:
    """Dense discrete Omega2^2 = eps2^{-1/2} h2 eps2^{1/2} (not symmetric)"""
    s = op.scale
    return (s[:, None] * op.dense()) / s[None, :]


class NondispersivePropagator:
    """
    Formal solution E(t) = cos(Omega t) E0 + Omega^{-1} sin(Omega t) Edot0 in
    the eigenbasis of h2 (psi = eps2^{1/2} E).

    The zero-mode limit sin(sqrt(lam) t)/sqrt(lam) -> t is used for
    lam < 1e-12 ||h2||.
    """

    def __init__(self, model: MediumModel, grid: AxisGrid, boundary: Boundary,
                 e0: SampledField, e0_dot: SampledField):
        if not model.nondispersive:
            raise ValueError("NondispersivePropagator requires eps1 = mu1 = 1")
        if len(e0.values) != grid.n or len(e0_dot.values) != grid.n:
            raise ValueError("initial fields must live on the propagation grid")
        self.grid = grid
        self.op = discretize_h2(model, grid, boundary)
        lam, vec = _solve(self.op, "a", None)
        self.lam = np.clip(lam, 0.0, None)
        self.vectors = vec
        self.omega = np.sqrt(self.lam)
        self.zero = self.lam < ZERO_MODE * self.op.norm

        s = self.op.scale
        psi0 = np.asarray(e0.values)[self.op.unknowns] / s
        psi0_dot = np.asarray(e0_dot.values)[self.op.unknowns] / s
        self.a = vec.T @ psi0
        self.b = vec.T @ psi0_dot
        logger.info(f"Propagator ready: {lam.size} modes, {int(np.sum(self.zero))} zero mode(s)")

    def amplitudes(self, t: float) -> np.ndarray:
        w = self.omega
        safe = np.where(self.zero, 1.0, w)
        sinc = np.where(self.zero, t, np.sin(w * t) / safe)
        return np.cos(w * t) * self.a + sinc * self.b

    def amplitude_rates(self, t: float) -> np.ndarray:
        w = self.omega
        return -w * np.sin(w * t) * self.a + np.cos(w * t) * self.b

    def _to_field(self, coefficients: np.ndarray, label: str) -> SampledField:
        psi = self.vectors @ coefficients
        return SampledField(grid=self.grid, values=self.op.to_grid(self.op.scale * psi), label=label)

    def field(self, t: float) -> SampledField:
        return self._to_field(self.amplitudes(t), f"E(t={t:.17g})")

    def rate(self, t: float) -> SampledField:
        return self._to_field(self.amplitude_rates(t), f"dE/dt(t={t:.17g})")

    def modal_energy(self, t: float) -> float:
        """(1/2) sum_k (lam_k |a_k(t)|^2 + |a_k'(t)|^2) dz"""
        a, ad = self.amplitudes(t), self.amplitude_rates(t)
        return 0.5 * float(np.sum(self.lam * np.abs(a) ** 2 + np.abs(ad) ** 2)) * self.grid.dz


def evolve_nondispersive(model: MediumModel, grid: AxisGrid, boundary: Boundary,
                         e0: SampledField, e0_dot: SampledField, t: float) -> SampledField:
    """E(t) for non-dispersive media from (E0, dE0/dt)"""
    return NondispersivePropagator(model, grid, boundary, e0, e0_dot).field(t)


def reconstruct_b(model: MediumModel, grid: AxisGrid, times: Sequence[float],
                  e_history: Sequence[SampledField], b0: SampledField) -> SampledField:
    """
    B_y(z, t) = B0(z) - int_0^t dE_x/dz dtau (trapezoid in time, central differences in z)

    Faraday's law carries no material factor: model is not read.

    Args:
        model: medium the history was computed in
        grid: z grid of the fields
        times: Uniform, increasing sample times (first one is the B0 time)
        e_history: E_x at each time
        b0: B_y at times[0]

    Raises:
        InsufficientHistory: fewer than two time samples
    """
    t = np.asarray(times, dtype=float)
    if t.size < 2 or len(e_history) < 2:
        raise InsufficientHistory("reconstruct_b needs at least two time samples")
    if len(e_history) != t.size:
        raise ValueError("times and e_history lengths differ")
    steps = np.diff(t)
    if np.any(steps <= 0) or not np.allclose(steps, steps[0], rtol=1e-9, atol=0.0):
        raise ValueError("time samples must be uniform and increasing")

    e = np.stack([np.asarray(f.values) for f in e_history])
    de_dz = np.gradient(e, grid.dz, axis=1, edge_order=2)
    values = np.asarray(b0.values) - trapezoid(de_dz, x=t, axis=0)
    return SampledField(grid=grid, values=values, label=f"B_y(t={t[-1]:.17g})")
