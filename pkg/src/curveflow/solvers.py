"""Variational smoothing with the area prior and an epsilon-TV baseline.

All three models start from ``U = f`` and take one explicit gradient step
per outer iteration:

* ``l2_area``:  ``U += dt * (-A^T(AU - f) + lam * WMC(U))``
* ``l1_area``:  primal-dual splitting of ``|AU - f|_1 + lam * R_area(U)``;
  the slack ``b`` has a closed form (soft threshold) and the scaled dual
  ``d`` is a clamp, so only ``d`` and ``U`` are carried between iterations.
* ``l2_epstv``: plain gradient descent on ``0.5|U - f|^2 + lam * EpsTV(U)``.
"""

from __future__ import annotations

import functools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from .core import (
    DivergenceError,
    IdentityOperator,
    LinearOperator,
    ParameterError,
    Stencil3,
    StencilOperator,
    as_image,
)
from .energies import EnergyConfig, energy
from .operators import DX, DY, gradient, wmc_half_laplace
from .synthetic import phantom_discs  # noqa: F401  (part of this module's surface)

log = logging.getLogger(__name__)

MODELS = ("l2_area", "l1_area", "l2_epstv")


@dataclass(frozen=True)
class SolverConfig:
    model: str = "l2_area"
    lam: float = 1.0
    alpha: float = 1.0
    dt: float | None = None
    iters: int = 500
    eps: float = 1.0
    tol: float = 1e-6
    operator: LinearOperator = field(default_factory=IdentityOperator)

    def __post_init__(self):
        if self.model not in MODELS:
            raise ParameterError(f"unknown model {self.model!r}; choose from {', '.join(MODELS)}")
        if not self.lam >= 0:
            raise ParameterError(f"lambda must be >= 0, got {self.lam}")
        if not self.alpha > 0:
            raise ParameterError(f"alpha must be > 0, got {self.alpha}")
        if self.dt is not None and not self.dt > 0:
            raise ParameterError(f"dt must be > 0, got {self.dt}")
        if self.iters < 1:
            raise ParameterError(f"iters must be >= 1, got {self.iters}")
        if self.model == "l2_epstv" and not self.eps > 0:
            raise ParameterError("the epsilon-TV model needs eps > 0")

    @property
    def step(self) -> float:
        """Descent step: ``dt`` if given, else 0.15 capped so that ``lam * step <= 1``
        (0.1 and ``0.5 / lam`` for the epsilon-TV baseline)."""
        if self.dt is not None:
            return float(self.dt)
        if self.model == "l2_epstv":
            return 0.1 if self.lam <= 5 else 0.5 / self.lam
        return 0.15 if self.lam <= 1 / 0.15 else 1.0 / self.lam


@dataclass
class SolveReport:
    image: np.ndarray
    fidelity: list[float] = field(default_factory=list)
    regularization: list[float] = field(default_factory=list)
    converged: bool = False
    lam: float = 0.0

    @property
    def iterations(self) -> int:
        return len(self.fidelity)

    @property
    def total(self) -> list[float]:
        return [f + self.lam * r for f, r in zip(self.fidelity, self.regularization)]

    def rows(self):
        """``(iter, fidelity, regularization, total)`` tuples, 1-based."""
        for i, (f, r, t) in enumerate(zip(self.fidelity, self.regularization, self.total), start=1):
            yield i, f, r, t


def shrink(r, alpha: float):
    """Closed-form slack: ``r - alpha`` above ``alpha``, ``r + alpha`` below
    ``-alpha``, zero in between."""
    r = np.asarray(r, dtype=np.float64)
    return np.where(r > alpha, r - alpha, np.where(r < -alpha, r + alpha, 0.0))


def dual_clamp(r, alpha: float):
    """Updated scaled dual ``d = r - shrink(r)``, i.e. ``r`` clipped to ``[-alpha, alpha]``."""
    return np.clip(np.asarray(r, dtype=np.float64), -alpha, alpha)


def _area(u):
    return energy(u, EnergyConfig("area"))


def _quiet(fn):
    """Silence overflow warnings; divergence is reported by :func:`_check`."""
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        with np.errstate(over="ignore", invalid="ignore"):
            return fn(*args, **kwargs)
    return wrapper


def _check(u, t, model):
    if not np.all(np.isfinite(u)):
        raise DivergenceError(t, f"{model}: non-finite values at iteration {t}; reduce dt")


def _converged(u_new, u_old, tol):
    scale = max(float(np.linalg.norm(u_old)), 1e-300)
    return float(np.linalg.norm(u_new - u_old)) / scale < tol


def l2_area_step(u, f, cfg: SolverConfig) -> np.ndarray:
    A = cfg.operator
    return u + cfg.step * (-A.adjoint(A.apply(u) - f) + cfg.lam * wmc_half_laplace(u))


@_quiet
def solve_l2_area(f, cfg: SolverConfig, callback: Callable | None = None) -> SolveReport:
    """Least squares data term with the area prior, via its WMC gradient."""
    if cfg.model != "l2_area":
        raise ParameterError(f"solve_l2_area needs model='l2_area', got {cfg.model!r}")
    f = as_image(f)
    A = cfg.operator
    u = f.copy()
    rep = SolveReport(image=u, lam=cfg.lam)
    if cfg.lam * cfg.step > 1:
        log.warning("lam*dt = %.3g > 1; the WMC step may overshoot", cfg.lam * cfg.step)
    for t in range(1, cfg.iters + 1):
        u_new = l2_area_step(u, f, cfg)
        _check(u_new, t, cfg.model)
        rep.fidelity.append(0.5 * float(np.sum((A.apply(u_new) - f) ** 2)))
        rep.regularization.append(_area(u_new))
        if callback is not None:
            callback(t, u_new)
        done = _converged(u_new, u, cfg.tol)
        u = u_new
        if done:
            rep.converged = True
            break
    rep.image = u
    return rep


@_quiet
def solve_l1_area(f, cfg: SolverConfig, callback: Callable | None = None) -> SolveReport:
    """Absolute-deviation data term with the area prior (primal-dual).

    ``callback(t, state)`` receives a dict with ``u, r, b, d_old, d_new``.
    """
    if cfg.model != "l1_area":
        raise ParameterError(f"solve_l1_area needs model='l1_area', got {cfg.model!r}")
    f = as_image(f)
    A = cfg.operator
    a = cfg.alpha
    u = f.copy()
    d = np.zeros_like(f)
    rep = SolveReport(image=u, lam=cfg.lam)
    for t in range(1, cfg.iters + 1):
        r = A.apply(u) - f + d
        b = shrink(r, a)
        d_new = dual_clamp(r, a)
        u_new = u + cfg.step * (cfg.lam * wmc_half_laplace(u) - A.adjoint(2.0 * d_new - d) / a)
        _check(u_new, t, cfg.model)
        if callback is not None:
            callback(t, {"u": u_new, "r": r, "b": b, "d_old": d, "d_new": d_new})
        rep.fidelity.append(float(np.sum(np.abs(A.apply(u_new) - f))))
        rep.regularization.append(_area(u_new))
        done = _converged(u_new, u, cfg.tol)
        u, d = u_new, d_new
        if done:
            rep.converged = True
            break
    rep.image = u
    return rep


def epstv_gradient(u, eps: float) -> np.ndarray:
    """Gradient of ``sum(sqrt(eps + |grad U|^2))`` (exact for the discrete sum)."""
    gx, gy = gradient(u)
    s = np.sqrt(eps + gx * gx + gy * gy)
    return DX.adjoint(gx / s) + DY.adjoint(gy / s)


@_quiet
def solve_l2_epstv(f, cfg: SolverConfig, callback: Callable | None = None) -> SolveReport:
    """Baseline: gradient descent on ``0.5|AU - f|^2 + lam * EpsTV(U)``."""
    if cfg.model != "l2_epstv":
        raise ParameterError(f"solve_l2_epstv needs model='l2_epstv', got {cfg.model!r}")
    f = as_image(f)
    A = cfg.operator
    u = f.copy()
    rep = SolveReport(image=u, lam=cfg.lam)
    ecfg = EnergyConfig("epstv", eps=cfg.eps)
    for t in range(1, cfg.iters + 1):
        grad = A.adjoint(A.apply(u) - f) + cfg.lam * epstv_gradient(u, cfg.eps)
        u_new = u - cfg.step * grad
        _check(u_new, t, cfg.model)
        rep.fidelity.append(0.5 * float(np.sum((A.apply(u_new) - f) ** 2)))
        rep.regularization.append(energy(u_new, ecfg))
        if callback is not None:
            callback(t, u_new)
        done = _converged(u_new, u, cfg.tol)
        u = u_new
        if done:
            rep.converged = True
            break
    rep.image = u
    return rep


_SOLVERS = {"l2_area": solve_l2_area, "l1_area": solve_l1_area, "l2_epstv": solve_l2_epstv}


def solve(f, cfg: SolverConfig, callback=None) -> SolveReport:
    return _SOLVERS[cfg.model](f, cfg, callback)


def box_blur_operator() -> StencilOperator:
    """3x3 box blur, an example of a non-identity imaging operator."""
    w = Fraction(1, 9)
    return StencilOperator(Stencil3(((w, w, w), (w, w, w), (w, w, w)), "box"))
