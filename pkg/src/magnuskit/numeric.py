"""Floating-point Magnus integrator for ``Y' = A(t) Y`` built on the exact tables.

Each step expands ``A`` around the step midpoint, forms the generators
``q_i = a_{i-1} h^i``, evaluates the truncated Magnus series with the
rational coefficients produced by
:func:`magnuskit.freelie.classical_magnus_midpoint` and multiplies by its
exponential.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np
import scipy.linalg
from scipy.integrate import solve_ivp

from .freelie import LieElement, classical_magnus_midpoint, standard_factorization

__all__ = [
    "NonFiniteError",
    "IntegratorConfig",
    "Trajectory",
    "taylor_coeffs_midpoint",
    "midpoint_generators",
    "omega_table",
    "omega_step",
    "expm",
    "integrate",
    "reference_solution",
    "lemma1_numeric_check",
    "PROBLEMS",
    "Problem",
    "convergence_errors",
    "slopes",
]

MatrixFn = Callable[[float], np.ndarray]

# h-degree kept for each supported order; odd-degree terms only by time symmetry
ORDER_CAPS = {2: 2, 4: 4, 6: 6}

_STENCIL_HALF = 3  # seven nodes: exact for polynomial A of degree <= 6


class NonFiniteError(ValueError):
    pass


def taylor_coeffs_midpoint(A: MatrixFn, t_mid: float, count: int, h: float) -> list[np.ndarray]:
    """Estimate ``a_i = A^(i)(t_mid) / i!`` for ``i < count``.

    ``A`` is sampled on a seven-point central stencil spanning the step
    ``[t_mid - h/2, t_mid + h/2]`` and the interpolating polynomial is read
    off; this is the Richardson-extrapolated central difference of the
    highest order the stencil supports.
    """
    if count < 1 or count > 2 * _STENCIL_HALF + 1:
        raise ValueError(f"count must be in [1, {2 * _STENCIL_HALF + 1}], got {count}")
    if h <= 0:
        raise ValueError("step must be positive")
    m = _STENCIL_HALF
    delta = h / (2 * m)
    nodes = np.arange(-m, m + 1, dtype=float)
    samples = np.array([np.asarray(A(t_mid + delta * j), dtype=float) for j in nodes])
    if not np.all(np.isfinite(samples)):
        raise NonFiniteError(f"A(t) returned non-finite values near t={t_mid}")
    vander = np.vander(nodes, 2 * m + 1, increasing=True)
    flat = samples.reshape(len(nodes), -1)
    coeffs = np.linalg.solve(vander, flat)
    shape = samples.shape[1:]
    return [coeffs[i].reshape(shape) / delta**i for i in range(count)]


def midpoint_generators(A: MatrixFn, t_mid: float, count: int, h: float) -> list[np.ndarray]:
    """``[q_1, ..., q_count]`` with ``q_i = a_{i-1} h^i``."""
    a = taylor_coeffs_midpoint(A, t_mid, count, h)
    return [a[i] * h ** (i + 1) for i in range(count)]


@lru_cache(maxsize=None)
def omega_table(order: int) -> tuple[tuple[tuple[int, ...], Fraction], ...]:
    """Rational ``(lyndon word, coefficient)`` pairs of the truncated Magnus series."""
    if order not in ORDER_CAPS:
        raise ValueError(f"order must be one of {sorted(ORDER_CAPS)}, got {order}")
    cap = ORDER_CAPS[order]
    total = LieElement.sum(classical_magnus_midpoint(k, cap) for k in range(1, cap + 1))
    return tuple(total.sorted_items())


def _evaluate_word(word: tuple[int, ...], q: Sequence[np.ndarray], cache: dict) -> np.ndarray:
    if word in cache:
        return cache[word]
    if len(word) == 1:
        out = q[word[0] - 1]
    else:
        u, v = standard_factorization(word)
        x, y = _evaluate_word(u, q, cache), _evaluate_word(v, q, cache)
        out = x @ y - y @ x
    cache[word] = out
    return out


def omega_step(q: Sequence[np.ndarray], order: int) -> np.ndarray:
    """Sum the truncated Magnus series for one step given ``q_1, q_2, ...``."""
    table = omega_table(order)
    needed = max(max(w) for w, _ in table)
    if len(q) < needed:
        raise ValueError(f"order {order} needs q_1..q_{needed}, got {len(q)}")
    shape = np.shape(q[0])
    if len(shape) != 2 or shape[0] != shape[1] or any(np.shape(m) != shape for m in q):
        raise ValueError("generators must be square matrices of equal size")
    cache: dict = {}
    out = np.zeros(shape)
    for word, c in table:
        out = out + float(c) * _evaluate_word(word, q, cache)
    return out


def expm(M: np.ndarray) -> np.ndarray:
    """Matrix exponential (Pade scaling and squaring)."""
    M = np.asarray(M, dtype=float)
    if not np.all(np.isfinite(M)):
        raise NonFiniteError("matrix has non-finite entries")
    out = scipy.linalg.expm(M)
    if not np.all(np.isfinite(out)):
        raise OverflowError("matrix exponential overflowed")
    return out


@dataclass
class IntegratorConfig:
    order: int
    h: float
    t_span: tuple[float, float]
    A: MatrixFn

    def __post_init__(self) -> None:
        if self.order not in ORDER_CAPS:
            raise ValueError(f"order must be one of {sorted(ORDER_CAPS)}, got {self.order}")
        if not self.h > 0:
            raise ValueError("step must be positive")
        span = self.t_span[1] - self.t_span[0]
        steps = span / self.h
        if span <= 0 or abs(steps - round(steps)) > 1e-9 * max(1.0, steps):
            raise ValueError("t_span must be a positive whole number of steps")

    @property
    def steps(self) -> int:
        return round((self.t_span[1] - self.t_span[0]) / self.h)


@dataclass
class Trajectory:
    times: list[float] = field(default_factory=list)
    states: list[np.ndarray] = field(default_factory=list)

    @property
    def final(self) -> np.ndarray:
        return self.states[-1]


def integrate(config: IntegratorConfig, y0: np.ndarray | None = None) -> Trajectory:
    """Advance ``Y`` from ``t_span[0]`` with ``Y <- expm(Omega) Y`` per step."""
    t0 = config.t_span[0]
    probe = np.asarray(config.A(t0), dtype=float)
    y = np.eye(probe.shape[0]) if y0 is None else np.array(y0, dtype=float)
    count = ORDER_CAPS[config.order]
    traj = Trajectory([t0], [y.copy()])
    h = config.h
    for n in range(config.steps):
        t_mid = t0 + (n + 0.5) * h
        q = midpoint_generators(config.A, t_mid, count, h)
        y = expm(omega_step(q, config.order)) @ y
        traj.times.append(t0 + (n + 1) * h)
        traj.states.append(y)
    return traj


def reference_solution(A: MatrixFn, t_span: tuple[float, float], y0: np.ndarray | None = None) -> np.ndarray:
    """High-accuracy ``Y(t_end)`` from an adaptive 8th-order Runge-Kutta solve."""
    probe = np.asarray(A(t_span[0]), dtype=float)
    d = probe.shape[0]
    y0 = np.eye(d) if y0 is None else np.asarray(y0, dtype=float)

    def rhs(t: float, y: np.ndarray) -> np.ndarray:
        return (np.asarray(A(t), dtype=float) @ y.reshape(d, -1)).ravel()

    sol = solve_ivp(rhs, t_span, y0.ravel(), method="DOP853", rtol=1e-13, atol=1e-15)
    if not sol.success:
        raise RuntimeError(f"reference solve failed: {sol.message}")
    return sol.y[:, -1].reshape(y0.shape)


# ---------------------------------------------------------------------------
# matrix-valued polynomials and the integral pre-Lie product

def _pintegrate(p: np.ndarray) -> np.ndarray:
    out = np.zeros((p.shape[0] + 1,) + p.shape[1:])
    for k in range(p.shape[0]):
        out[k + 1] = p[k] / (k + 1)
    return out


def _pmul(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    out = np.zeros((p.shape[0] + q.shape[0] - 1,) + p.shape[1:])
    for i in range(p.shape[0]):
        for j in range(q.shape[0]):
            out[i + j] += p[i] @ q[j]
    return out


def _pad_sub(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    n = max(p.shape[0], q.shape[0])
    out = np.zeros((n,) + p.shape[1:])
    out[: p.shape[0]] += p
    out[: q.shape[0]] -= q
    return out


def _triangle(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """``(p |> q)(x) = [int_0^x p, q(x)]`` on coefficient arrays."""
    ip = _pintegrate(p)
    return _pad_sub(_pmul(ip, q), _pmul(q, ip))


def _peval(p: np.ndarray, x: float) -> np.ndarray:
    out = np.zeros(p.shape[1:])
    for c in p[::-1]:
        out = out * x + c
    return out


def lemma1_numeric_check(
    samples: int,
    degree: int,
    dim: int = 3,
    rng: np.random.Generator | None = None,
    same_ab: bool = False,
) -> float:
    """Largest entry of the pre-Lie associator residual over random triples.

    ``A, B, C`` are random matrix polynomials of the given degree; the
    residual ``(A|>B)|>C - A|>(B|>C) - (B|>A)|>C + B|>(A|>C)`` is evaluated
    at a random point in ``[-1, 1]``.
    """
    rng = np.random.default_rng(0) if rng is None else rng
    worst = 0.0
    for _ in range(samples):
        A, B, C = (rng.standard_normal((degree + 1, dim, dim)) for _ in range(3))
        if same_ab:
            B = A
        t = _triangle
        res = _pad_sub(
            _pad_sub(t(t(A, B), C), t(A, t(B, C))),
            _pad_sub(t(t(B, A), C), t(B, t(A, C))),
        )
        x = rng.uniform(-1.0, 1.0)
        worst = max(worst, float(np.max(np.abs(_peval(res, x)))))
    return worst


# ---------------------------------------------------------------------------
# test problems

@dataclass(frozen=True)
class Problem:
    name: str
    A: MatrixFn
    t_span: tuple[float, float]
    exact: Callable[[], np.ndarray] | None = None

    def reference(self) -> np.ndarray:
        if self.exact is not None:
            return self.exact()
        return reference_solution(self.A, self.t_span)


_C = np.array([[0.3, -1.2, 0.5], [0.7, 0.1, -0.4], [-0.2, 0.9, -0.4]])
_J = np.array([[0.0, 1.0], [-1.0, 0.0]])


def _noncommuting(t: float) -> np.ndarray:
    return np.array([[t, 1.0], [0.0, -t]])


PROBLEMS: dict[str, Problem] = {
    "noncommuting": Problem("noncommuting", _noncommuting, (0.0, 1.0)),
    "constant": Problem(
        "constant", lambda t: _C, (0.0, 1.0), exact=lambda: scipy.linalg.expm(_C * 1.0)
    ),
    # omega(t) = 1 + t^2, so the phase is t + t^3/3
    "rotation": Problem(
        "rotation",
        lambda t: (1.0 + t * t) * _J,
        (0.0, 2.0),
        exact=lambda: scipy.linalg.expm((2.0 + 8.0 / 3.0) * _J),
    ),
}


def convergence_errors(problem: Problem, order: int, steps: Sequence[int]) -> list[float]:
    """Frobenius error of ``Y(t_end)`` against the problem's reference."""
    ref = problem.reference()
    span = problem.t_span[1] - problem.t_span[0]
    errs = []
    for n in steps:
        traj = integrate(IntegratorConfig(order, span / n, problem.t_span, problem.A))
        errs.append(float(np.linalg.norm(traj.final - ref)))
    return errs


def slopes(errors: Sequence[float]) -> list[float]:
    return [math.log2(a / b) for a, b in zip(errors, errors[1:])]
