"""Two-photon HOM algebra and dip fitting.

Overlap and bunching probability are related by ``p_b = (1 + r) / 2``.  The
delay model gives ``r(dt) = V exp(-dt^2 dw^2 / 2)``; measured dips are fitted to
``C(x) = A (1 - B x) (1 - V exp(-(x - x0)^2 / sigma^2))``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import IndistError, OutOfRangeOverlap, OutOfRangeProbability, clamp_unit


class NonPositiveWidth(IndistError, ValueError):
    pass


class InsufficientData(IndistError, ValueError):
    pass


class NonConvergence(IndistError, RuntimeError):
    pass


def bunching_to_overlap(p_b: float, with_flag: bool = False):
    """Overlap ``2 p_b - 1`` clamped to [0, 1].

    With ``with_flag=True`` returns ``(r, clamped)``.
    """
    if not (0.0 <= p_b <= 1.0):
        raise OutOfRangeProbability(f"bunching probability {p_b} outside [0, 1]")
    r, flag = clamp_unit(2.0 * p_b - 1.0)
    return (r, flag) if with_flag else r


def overlap_to_bunching(r: float) -> float:
    if not (0.0 <= r <= 1.0):
        raise OutOfRangeOverlap(f"overlap {r} outside [0, 1]")
    return (1.0 + r) / 2.0


@dataclass(frozen=True)
class DelayModel:
    visibility: float
    width: float
    delay: float = 0.0


def gaussian_overlap(m: DelayModel) -> float:
    if not m.width > 0:
        raise NonPositiveWidth(f"spectral width must be positive, got {m.width}")
    if m.delay == 0:
        return float(m.visibility)
    return float(m.visibility * math.exp(-0.5 * (m.delay * m.width) ** 2))


def gaussian_overlap_array(visibility, width, delay):
    """Vectorised form of :func:`gaussian_overlap` (no validation)."""
    return visibility * np.exp(-0.5 * (np.asarray(delay) * width) ** 2)


# ---------------------------------------------------------------------------
# Dip curve
# ---------------------------------------------------------------------------

PARAM_NAMES = ("A", "B", "V", "x0", "sigma")


@dataclass(frozen=True)
class DipCurveParams:
    A: float
    B: float
    V: float
    x0: float
    sigma: float

    def as_array(self) -> np.ndarray:
        return np.array([self.A, self.B, self.V, self.x0, self.sigma], dtype=float)

    @classmethod
    def from_array(cls, p) -> "DipCurveParams":
        return cls(*(float(x) for x in p))


def _model(p: np.ndarray, x: np.ndarray) -> np.ndarray:
    A, B, V, x0, s = p
    g = np.exp(-((x - x0) ** 2) / s**2)
    return A * (1 - B * x) * (1 - V * g)


def _jacobian(p: np.ndarray, x: np.ndarray) -> np.ndarray:
    A, B, V, x0, s = p
    u = x - x0
    g = np.exp(-(u**2) / s**2)
    drift = 1 - B * x
    dip = 1 - V * g
    J = np.empty((x.size, 5))
    J[:, 0] = drift * dip
    J[:, 1] = -A * x * dip
    J[:, 2] = -A * drift * g
    # d/dx0 and d/dsigma of -V g
    J[:, 3] = -A * drift * V * g * (2 * u / s**2)
    J[:, 4] = -A * drift * V * g * (2 * u**2 / s**3)
    return J


def dip_curve(p: DipCurveParams, dx):
    out = _model(p.as_array(), np.asarray(dx, dtype=float))
    return float(out) if np.ndim(out) == 0 else out


@dataclass(frozen=True)
class DipFit:
    params: DipCurveParams
    covariance: np.ndarray
    residual_norm: float
    chi2: float
    dof: int
    iterations: int

    @property
    def sigmas(self) -> DipCurveParams:
        return DipCurveParams.from_array(np.sqrt(np.clip(np.diag(self.covariance), 0, None)))


def initial_guess(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Deterministic, data-driven start for :func:`fit_dip`."""
    order = np.argsort(x)
    x, y = x[order], y[order]
    imin = int(np.argmin(y))
    x0 = x[imin]
    far = np.argsort(-np.abs(x - x0), kind="stable")
    n_tail = max(1, int(math.ceil(0.2 * x.size)))
    A = float(np.mean(y[far[:n_tail]]))
    V = min(max(1.0 - y[imin] / A, 1e-3), 1.0) if A > 0 else 0.5
    half = A * (1 - V / 2)

    def crossing(idx):
        # walk outward from the minimum until the half-depth level is reached
        for i0, i1 in zip(idx[:-1], idx[1:]):
            if y[i0] <= half <= y[i1]:
                t = (half - y[i0]) / (y[i1] - y[i0]) if y[i1] != y[i0] else 0.0
                return x[i0] + t * (x[i1] - x[i0])
        return None

    right = crossing(list(range(imin, x.size)))
    left = crossing(list(range(imin, -1, -1)))
    widths = [abs(c - x0) for c in (left, right) if c is not None]
    hwhm = float(np.mean(widths)) if widths else (x[-1] - x[0]) / 4
    if hwhm <= 0:
        hwhm = (x[-1] - x[0]) / 4
    sigma = hwhm / math.sqrt(math.log(2.0))
    return np.array([A, 0.0, V, x0, sigma])


def fit_dip(points, max_iter: int = 200, xtol: float = 1e-10) -> DipFit:
    """Weighted least-squares fit of the HOM dip model.

    ``points`` is a sequence of ``(dx, count)`` or ``(dx, count, sigma)``.
    Missing or non-positive sigmas default to ``sqrt(count)`` floored at 1.
    Levenberg-style damped Gauss-Newton; the step is accepted only if it
    lowers chi2, otherwise the damping grows tenfold.
    """
    pts = [tuple(p) for p in points]
    if len(pts) < 6:
        raise InsufficientData(f"need at least 6 points, got {len(pts)}")
    x = np.array([p[0] for p in pts], dtype=float)
    y = np.array([p[1] for p in pts], dtype=float)
    sig = np.array([p[2] if len(p) > 2 and p[2] is not None and p[2] > 0 else 0.0 for p in pts])
    poisson = np.maximum(np.sqrt(np.clip(y, 0, None)), 1.0)
    sig = np.where(sig > 0, sig, poisson)
    w = 1.0 / sig

    p = initial_guess(x, y)
    r = (y - _model(p, x)) * w
    chi2 = float(r @ r)
    lam = 1e-3
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        J = _jacobian(p, x) * w[:, None]
        JTJ = J.T @ J
        g = J.T @ r
        while True:
            H = JTJ + lam * np.diag(np.diag(JTJ) + 1e-300)
            try:
                step = np.linalg.solve(H, g)
            except np.linalg.LinAlgError:
                step = np.linalg.lstsq(H, g, rcond=None)[0]
            trial = p + step
            trial[4] = abs(trial[4]) if trial[4] != 0 else p[4]
            rt = (y - _model(trial, x)) * w
            chi2_t = float(rt @ rt)
            if chi2_t <= chi2 or not np.isfinite(chi2):
                break
            lam *= 10.0
            if lam > 1e16:
                break
        rel = np.max(np.abs(step) / (np.abs(p) + 1e-12))
        if chi2_t <= chi2:
            p, r, chi2 = trial, rt, chi2_t
            lam = max(lam / 10.0, 1e-12)
        # lam blow-up: no downhill step exists at working precision
        if rel < xtol or lam > 1e16:
            converged = True
            break
    if not converged:
        raise NonConvergence(f"no convergence after {it} iterations (chi2={chi2:.6g})")
    J = _jacobian(p, x) * w[:, None]
    cov = np.linalg.pinv(J.T @ J)
    return DipFit(DipCurveParams.from_array(p), cov, float(math.sqrt(chi2)), chi2, x.size - 5, it)
