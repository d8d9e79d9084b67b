"""Vandermonde-Arnoldi polynomial bases and least-squares rational
approximation with prescribed poles."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .rational import RationalFunction, as_complex

__all__ = [
    "ArnoldiBasis",
    "ArnoldiPolynomial",
    "PartialFractions",
    "RankDeficiencyError",
    "build_basis",
    "eval_poly",
    "fit_least_squares",
]


class RankDeficiencyError(np.linalg.LinAlgError):
    pass


@dataclass
class ArnoldiBasis:
    """Orthonormalized monomials ``1, t, ..., t^N`` on sample points ``t``.

    ``Q`` has orthonormal columns under ``<a, b> = a^H b / m`` and ``H`` is
    the (N+1) x N upper Hessenberg matrix of the recurrence.
    """

    points: np.ndarray
    H: np.ndarray
    Q: np.ndarray | None = None

    @property
    def degree(self) -> int:
        return self.H.shape[1]

    @classmethod
    def build(cls, points, degree: int) -> "ArnoldiBasis":
        t = np.asarray(points, dtype=complex).ravel()
        m = len(t)
        N = int(degree)
        if N < 0:
            raise ValueError("degree must be nonnegative")
        if m < N + 1:
            raise ValueError(f"need at least {N + 1} points for degree {N}, got {m}")
        Q = np.zeros((m, N + 1), dtype=complex)
        H = np.zeros((N + 1, N), dtype=complex)
        Q[:, 0] = 1.0
        for j in range(N):
            v = t * Q[:, j]
            size = np.linalg.norm(v) / np.sqrt(m)
            for k in range(j + 1):
                H[k, j] = np.vdot(Q[:, k], v) / m
                v = v - H[k, j] * Q[:, k]
            H[j + 1, j] = np.linalg.norm(v) / np.sqrt(m)
            if not H[j + 1, j] > 1e-14 * size:
                raise RankDeficiencyError(f"monomial basis is numerically rank deficient at degree {j + 1}")
            Q[:, j + 1] = v / H[j + 1, j]
        return cls(t, H, Q)

    def __call__(self, z) -> np.ndarray:
        """Basis values at ``z``: a ``len(z) x (N + 1)`` matrix."""
        return self._eval(np.atleast_1d(np.asarray(z, dtype=complex)))[0]

    def _eval(self, z, derivative=False):
        H = self.H
        N = self.degree
        q = np.zeros((len(z), N + 1), dtype=complex)
        dq = np.zeros_like(q) if derivative else None
        q[:, 0] = 1.0
        for j in range(N):
            v = z * q[:, j]
            if derivative:
                dv = q[:, j] + z * dq[:, j]
            for k in range(j + 1):
                v = v - H[k, j] * q[:, k]
                if derivative:
                    dv = dv - H[k, j] * dq[:, k]
            q[:, j + 1] = v / H[j + 1, j]
            if derivative:
                dq[:, j + 1] = dv / H[j + 1, j]
        return q, dq

    def fit(self, f) -> "ArnoldiPolynomial":
        """Least-squares polynomial for a callable or for values at the sample points."""
        y = f(self.points) if callable(f) else np.asarray(f, dtype=complex)
        a = np.linalg.lstsq(self.Q, y, rcond=None)[0]
        return ArnoldiPolynomial(self, a)


def build_basis(points, degree: int) -> ArnoldiBasis:
    return ArnoldiBasis.build(points, degree)


@dataclass
class ArnoldiPolynomial:
    basis: ArnoldiBasis
    coeffs: np.ndarray

    def __post_init__(self):
        self.coeffs = np.asarray(self.coeffs, dtype=complex).ravel()
        if len(self.coeffs) != self.basis.degree + 1:
            raise ValueError("coefficient count must equal degree + 1")

    @property
    def degree(self) -> int:
        return self.basis.degree

    def __call__(self, z):
        return eval_poly(self, z)

    def derivative(self, z):
        z, scalar = as_complex(z)
        _, dq = self.basis._eval(z, derivative=True)
        r = dq @ self.coeffs
        return complex(r[0]) if scalar else r


def eval_poly(p: ArnoldiPolynomial, z):
    """Evaluate by replaying the Arnoldi recurrence stored in ``H`` at ``z``."""
    z, scalar = as_complex(z)
    H, a = p.basis.H, p.coeffs
    y = np.full(z.shape, a[0], dtype=complex)
    q = [np.ones(z.shape, dtype=complex)]
    for j in range(p.degree):
        v = z * q[j]
        for k in range(j + 1):
            v = v - H[k, j] * q[k]
        q.append(v / H[j + 1, j])
        y = y + a[j + 1] * q[j + 1]
    return complex(y[0]) if scalar else y


class PartialFractions(RationalFunction):
    """r(z) = p(z) + sum(c_j / (z - zeta_j)) with ``p`` an Arnoldi polynomial."""

    def __init__(self, poly: ArnoldiPolynomial, poles, residues, warning: str | None = None):
        self.poly = poly
        self._poles = np.asarray(poles, dtype=complex).ravel()
        self._residues = np.asarray(residues, dtype=complex).ravel()
        if len(self._poles) != len(self._residues):
            raise ValueError("poles and residues must have equal lengths")
        if len(np.unique(self._poles)) != len(self._poles):
            raise ValueError("poles must be distinct")
        self.warning = warning

    def __call__(self, z):
        z, scalar = as_complex(z)
        r = self.poly(z)
        if len(self._poles):
            with np.errstate(divide="ignore", invalid="ignore"):
                r = r + (1.0 / (z[:, None] - self._poles[None, :])) @ self._residues
            hit = np.any(z[:, None] == self._poles[None, :], axis=1)
            r[hit] = complex(np.inf, 0)
        return complex(r[0]) if scalar else r

    def __repr__(self):
        m, n = self.degrees()
        return f"PartialFractions rational function of type ({m},{n})"

    def degrees(self):
        nu = len(self._poles)
        return self.poly.degree + nu, nu

    def poles(self):
        return self._poles.copy()

    def residues(self):
        return self._poles.copy(), self._residues.copy()

    def _landmarks(self):
        return self.poly.basis.points

    def _derivative(self, z):
        d = self.poly.derivative(z)
        if len(self._poles):
            d = d - (1.0 / (z[:, None] - self._poles[None, :]) ** 2) @ self._residues
        return d

    def roots(self, tol: float = 1e-8):
        """Roots by Newton's method from starting points on a circle around the samples."""
        t = self.poly.basis.points
        N = self.poly.degree + len(self._poles)
        if N == 0:
            return np.zeros(0, dtype=complex)
        c = t.mean()
        rad = max(float(np.max(np.abs(t - c))), 1e-3)
        k = 4 * N
        z = c + 1.1 * rad * np.exp(2j * np.pi * (np.arange(k) + 0.5) / k)
        scale = max(float(np.max(np.abs(self(t)))), 1e-300)
        with np.errstate(all="ignore"):
            for _ in range(100):
                step = self(z) / self._derivative(z)
                step = np.where(np.isfinite(step), step, 0.0)
                z = z - step
                if np.all(np.abs(step) <= 1e-15 * np.maximum(1.0, np.abs(z))):
                    break
            good = np.isfinite(z) & (np.abs(self(z)) <= tol * scale)
        found: list[complex] = []
        for s in z[good]:
            if all(abs(s - u) > 1e-8 * max(1.0, abs(s)) for u in found):
                found.append(complex(s))
        return np.array(found, dtype=complex)


def fit_least_squares(points, values, poles=(), degree: int = 0) -> PartialFractions:
    """Least-squares fit of ``p(z) + sum(c_j / (z - zeta_j))`` at ``points``.

    The matrix ``[Q | C]`` (Arnoldi basis and Cauchy columns) is solved by a
    column-pivoted QR factorization after normalizing each column.
    """
    t = np.asarray(points, dtype=complex).ravel()
    y = np.asarray(values, dtype=complex).ravel()
    zeta = np.asarray(poles, dtype=complex).ravel()
    if len(y) != len(t):
        raise ValueError("points and values must have equal lengths")
    if not np.all(np.isfinite(y)):
        raise ValueError("values must be finite")
    nu = len(zeta)
    if len(t) < degree + 1 + nu:
        raise ValueError("too few sample points for the requested model")
    scale = max(float(np.max(np.abs(t))), 1.0)
    if nu and np.min(np.abs(t[:, None] - zeta[None, :])) <= 1e-13 * scale:
        raise ValueError("a prescribed pole coincides with a sample point")
    basis = ArnoldiBasis.build(t, degree)
    A = basis.Q
    if nu:
        A = np.hstack([A, 1.0 / (t[:, None] - zeta[None, :])])
    colnorm = np.linalg.norm(A, axis=0)
    colnorm[colnorm == 0] = 1.0
    Qf, R, perm = scipy.linalg.qr(A / colnorm, mode="economic", pivoting=True)
    diag = np.abs(np.diag(R))
    rank = int(np.count_nonzero(diag > np.finfo(float).eps * max(A.shape) * diag[0]))
    x = np.zeros(A.shape[1], dtype=complex)
    x[perm[:rank]] = scipy.linalg.solve_triangular(R[:rank, :rank], Qf[:, :rank].conj().T @ y)
    x = x / colnorm
    warning = None
    cond = diag[0] / diag[-1] if diag[-1] > 0 else np.inf
    if cond > 1e14:
        warning = f"least-squares matrix is ill-conditioned (estimated condition {cond:.2e})"
        warnings.warn(warning, RuntimeWarning, stacklevel=2)
    poly = ArnoldiPolynomial(basis, x[: degree + 1])
    return PartialFractions(poly, zeta, x[degree + 1 :], warning=warning)
