"""Time-dependent coefficient triples and their accumulated window integrals.

A coefficient set holds the diffusion matrix A(t), drift vector b(t) and
coupling matrix C(t) on [0, T]. Everything downstream depends on them only
through the window integrals ``int_F(t, tau) = integral of F over [tau, t]``
and the SPD/exponential functions derived from those.
"""

import threading
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import PchipInterpolator

from . import matfun
from .errors import DomainError, InconclusiveEstimate, NotPositiveDefinite
from .quadrature import DEFAULT_TOL, adaptive_quadrature

# Fraction of T below which a window (t - tau) counts as degenerate.
WINDOW_FLOOR = 1e-13

_SPD_PROBE_POINTS = 33
_LADDER_WINDOWS = 8


@dataclass(frozen=True)
class Constant:
    """Coefficient that does not depend on time."""

    value: np.ndarray

    is_constant = True

    def __call__(self, t):
        return self.value

    def span(self):
        return None


@dataclass(frozen=True)
class Affine:
    """Coefficient value0 + t * slope."""

    value0: np.ndarray
    slope: np.ndarray

    is_constant = False

    def __call__(self, t):
        return self.value0 + t * self.slope

    def span(self):
        return None


class Tabulated:
    """Coefficient given by samples, joined by monotone cubic interpolation."""

    is_constant = False

    def __init__(self, times, values):
        times = np.asarray(times, dtype=float)
        values = np.asarray(values, dtype=float)
        if times.ndim != 1 or times.size < 2:
            raise DomainError("tabulated preset needs at least two samples")
        if not np.all(np.diff(times) > 0):
            raise DomainError("tabulated sample times must be strictly increasing")
        if values.shape[0] != times.size:
            raise DomainError("tabulated times and values disagree in length")
        if not np.all(np.isfinite(values)):
            raise DomainError("tabulated values must be finite")
        self.times = times
        self.values = values
        self._interp = PchipInterpolator(times, values, axis=0)

    def __call__(self, t):
        lo, hi = self.times[0], self.times[-1]
        if t < lo or t > hi:
            raise DomainError(
                f"tabulated samples cover [{lo:g}, {hi:g}], requested t={t:g}"
            )
        return self._interp(t)

    def span(self):
        return float(self.times[0]), float(self.times[-1])


def _as_preset(raw, shape):
    """Wrap plain arrays in a Constant preset; validate the shape either way."""
    if isinstance(raw, (Constant, Affine, Tabulated)):
        probe = np.asarray(raw(raw.span()[0] if raw.span() else 0.0), dtype=float)
        if probe.shape != shape:
            raise DomainError(f"preset has shape {probe.shape}, expected {shape}")
        return raw
    value = np.asarray(raw, dtype=float)
    if value.shape != shape:
        raise DomainError(f"coefficient has shape {value.shape}, expected {shape}")
    return Constant(value)


@dataclass(frozen=True)
class AccumulatedIntegrals:
    """Window integrals of (A, b, C) over [tau, t] and their derived functions.

    ``ia``/``ib``/``ic`` are the entrywise integrals; the remaining fields are
    the SPD square-root family of ``ia`` and the exponentials of ``ic`` and
    its transpose that the kernels and sharp constants are built from.
    """

    tau: float
    t: float
    ia: np.ndarray
    ib: np.ndarray
    ic: np.ndarray
    ia_sqrt: np.ndarray
    ia_inv_sqrt: np.ndarray
    ia_inv: np.ndarray
    ia_eigenvalues: np.ndarray  # descending
    det_ia_sqrt: float
    exp_ic: np.ndarray
    exp_ic_star: np.ndarray
    quad_error: float

    @property
    def n(self):
        return self.ia.shape[0]

    @property
    def log_gauss_norm(self):
        """log of the kernel normalization (2 sqrt(pi))^n * det ia_sqrt."""
        return self.n * np.log(2.0 * np.sqrt(np.pi)) + np.log(self.det_ia_sqrt)


@dataclass(frozen=True)
class CoefficientSet:
    """The triple (A(t), b(t), C(t)) on [0, T] for an n-dim, m-component system."""

    n: int
    m: int
    T: float
    A: object
    b: object
    C: object
    _cache: dict = field(default_factory=dict, repr=False, compare=False)
    _lock: threading.Lock = field(
        default_factory=threading.Lock, repr=False, compare=False
    )

    def __post_init__(self):
        if self.n < 1 or self.m < 1:
            raise DomainError("dimensions n and m must be >= 1")
        if not self.T > 0:
            raise DomainError("final time T must be positive")
        for preset, name, lo_hi in (
            (self.A, "A", None),
            (self.b, "b", None),
            (self.C, "C", None),
        ):
            span = preset.span()
            if span is not None and (span[0] > 0.0 or span[1] < self.T):
                raise DomainError(
                    f"tabulated samples for {name} cover [{span[0]:g}, {span[1]:g}] "
                    f"but must cover [0, {self.T:g}]"
                )
        for t in np.linspace(0.0, self.T, _SPD_PROBE_POINTS):
            a = matfun.symmetrize(self.A(t))
            w = np.linalg.eigvalsh(a)
            if w[0] <= 0.0:
                raise NotPositiveDefinite(
                    w[0], 0.0, f"A({t:g}) is not positive definite"
                )

    def accumulated(self, tau, t, tol=DEFAULT_TOL) -> AccumulatedIntegrals:
        """Cached window integrals for [tau, t]; see integrate_coefficients."""
        key = (float(tau), float(t), float(tol))
        with self._lock:
            hit = self._cache.get(key)
        if hit is not None:
            return hit
        acc = integrate_coefficients(self, tau, t, tol)
        with self._lock:
            self._cache.setdefault(key, acc)
        return acc


def coefficient_set(n=1, m=1, T=1.0, A=None, b=None, C=None) -> CoefficientSet:
    """Build a CoefficientSet, wrapping plain values in constant presets.

    ``A`` defaults to the identity, ``b`` and ``C`` to zero. Scalars are
    accepted for A and C and are placed on the diagonal / as 1x1 blocks.
    """
    if A is None:
        A = np.eye(n)
    if b is None:
        b = np.zeros(n)
    if C is None:
        C = np.zeros((m, m))
    if np.isscalar(A):
        A = float(A) * np.eye(n)
    if np.isscalar(C):
        C = np.array([[float(C)]]) if m == 1 else float(C) * np.eye(m)
    if np.isscalar(b):
        b = np.full(n, float(b))
    A = _as_preset(A, (n, n))
    b = _as_preset(b, (n,))
    C = _as_preset(C, (m, m))
    return CoefficientSet(n=n, m=m, T=float(T), A=A, b=b, C=C)


def _supremum_scale(preset, tau, t):
    probe = np.linspace(tau, t, 9)
    return max(float(np.max(np.abs(np.asarray(preset(s), dtype=float)))) for s in probe)


def integrate_coefficients(cs, tau, t, tol=DEFAULT_TOL) -> AccumulatedIntegrals:
    """Adaptive-quadrature window integrals of (A, b, C) over [tau, t].

    Raises NotPositiveDefinite when the accumulated diffusion integral is
    degenerate and DomainError when the window itself is (tau >= t or below
    the window floor), or when tabulated data does not cover it.
    """
    tau = float(tau)
    t = float(t)
    if tau < 0.0 or t > cs.T or not tau < t:
        raise DomainError(f"window [{tau:g}, {t:g}] must satisfy 0 <= tau < t <= T")
    if t - tau < WINDOW_FLOOR * cs.T:
        raise DomainError(
            f"window {t - tau:g} is below the degeneracy floor {WINDOW_FLOOR * cs.T:g}"
        )

    quad_err = 0.0
    parts = {}
    for name, preset in (("A", cs.A), ("b", cs.b), ("C", cs.C)):
        scale = tol * (t - tau) * (1.0 + _supremum_scale(preset, tau, t))
        res = adaptive_quadrature(
            lambda s, p=preset: np.asarray(p(s), dtype=float), tau, t, tol=scale
        )
        parts[name] = np.asarray(res.value, dtype=float)
        quad_err = max(quad_err, res.error)

    ia = matfun.symmetrize(parts["A"])
    w, v = matfun.sym_eigen(ia)
    floor = 1e-12 * max(1.0, abs(w[0]))
    if w[-1] <= floor:
        raise NotPositiveDefinite(w[-1], floor, "accumulated A integral is degenerate")
    sqrt_w = np.sqrt(w)
    ia_sqrt = matfun.symmetrize(v @ np.diag(sqrt_w) @ v.T)
    ia_inv_sqrt = matfun.symmetrize(v @ np.diag(1.0 / sqrt_w) @ v.T)
    ia_inv = matfun.symmetrize(v @ np.diag(1.0 / w) @ v.T)
    ic = parts["C"]
    return AccumulatedIntegrals(
        tau=tau,
        t=t,
        ia=ia,
        ib=parts["b"],
        ic=ic,
        ia_sqrt=ia_sqrt,
        ia_inv_sqrt=ia_inv_sqrt,
        ia_inv=ia_inv,
        ia_eigenvalues=w,
        det_ia_sqrt=float(np.prod(sqrt_w)),
        exp_ic=matfun.matrix_exp(ic),
        exp_ic_star=matfun.matrix_exp(ic.T),
        quad_error=quad_err,
    )


def window_scaling_exponents(cs, t, tol=DEFAULT_TOL):
    """Power-law exponents of the kernel ingredients as the window shrinks.

    Returns ``(kernel_exponent, gradient_exponent)`` such that, as tau -> t,
    ``det ia_sqrt(t, tau) ~ (t - tau)^kernel_exponent`` and
    ``|ia_inv_sqrt(t, tau)| ~ (t - tau)^(-gradient_exponent)``.

    Exact (n/2, 1/2) for constant A; otherwise a log-log least-squares fit
    over a geometric ladder of windows, raising InconclusiveEstimate when the
    fit does not look like a power law.
    """
    if cs.A.is_constant:
        return 0.5 * cs.n, 0.5
    t = float(t)
    if not 0.0 < t <= cs.T:
        raise DomainError(f"t={t:g} outside (0, T]")
    widths = t * 2.0 ** -(np.arange(_LADDER_WINDOWS) + 3.0)
    log_det = []
    log_grad = []
    for h in widths:
        acc = cs.accumulated(t - h, t, tol)
        norm_inv_sqrt = 1.0 / np.sqrt(acc.ia_eigenvalues[-1])
        log_det.append(np.log(acc.det_ia_sqrt))
        log_grad.append(np.log(norm_inv_sqrt))
    log_h = np.log(widths)
    design = np.stack([log_h, np.ones_like(log_h)], axis=1)
    (k_slope, _), res_k, _, _ = np.linalg.lstsq(design, np.asarray(log_det), rcond=None)
    (g_slope, _), res_g, _, _ = np.linalg.lstsq(design, np.asarray(log_grad), rcond=None)
    misfit = max(float(res_k[0]) if res_k.size else 0.0,
                 float(res_g[0]) if res_g.size else 0.0)
    if not np.isfinite(k_slope) or not np.isfinite(g_slope) or misfit > 1e-2:
        raise InconclusiveEstimate(
            f"log-log fit residual {misfit:.3g}; scaling exponents unreliable"
        )
    return float(k_slope), float(-g_slope)


def commutation_defect(cs, t, tol=DEFAULT_TOL) -> float:
    """Spectral norm of C(t) int_C(t,0) - int_C(t,0) C(t).

    Zero when C commutes with its own running integral (constant C, or
    mutually commuting values), which is when the exponential-substitution
    form of the kernels is classically valid.
    """
    acc = cs.accumulated(0.0, t, tol)
    c = np.asarray(cs.C(t), dtype=float)
    defect = c @ acc.ic - acc.ic @ c
    value, _ = matfun.spectral_norm(defect)
    return value
