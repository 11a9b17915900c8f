"""Inverse exponential map by Newton shooting, and the signed energy E_q."""

from dataclasses import dataclass

import numpy as np
import structlog
from scipy import linalg

from semiriem_lab.config import get_settings
from semiriem_lab.errors import LeftDomain, NoConvergence, OutsideRegion, SingularJacobian
from semiriem_lab.geodesics.jacobi import integrate_variational
from semiriem_lab.geodesics.region import StarRegion
from semiriem_lab.manifolds.chart import MetricChart, christoffel_fast
from semiriem_lab.observability import SHOOTING_FAILURES, SHOOTING_ITERATIONS

logger = structlog.get_logger()

MAX_BACKTRACK = 12
# residual accepted when backtracking stalls at the integrator's noise floor
STALL_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class ShootingResult:
    """
    A solved boundary-value problem exp_q(v) = p.

    Attributes:
        q: Base point
        p: Target point
        v: Initial velocity at q
        end_velocity: gamma'(1) at p
        iterations: Newton iterations used (summed over homotopy stages)
        jacobian: d exp_q at v, i.e. the variation dx(1) for dv(0) = I
        residual: max-norm of exp_q(v) - p
    """

    q: np.ndarray
    p: np.ndarray
    v: np.ndarray
    end_velocity: np.ndarray
    iterations: int
    jacobian: np.ndarray
    residual: float

    def predict(self, p_new) -> np.ndarray:
        """First-order guess v + J^-1 (p_new - p) for a nearby target."""
        delta = np.asarray(p_new, dtype=float) - self.p
        return self.v + linalg.solve(self.jacobian, delta)


def first_order_guess(chart: MetricChart, q: np.ndarray, p: np.ndarray) -> np.ndarray:
    """d + 1/2 Gamma(q)(d, d) for the displacement d from q to p; its error is O(|d|^3)."""
    d = chart.displacement(q, p)
    return d + 0.5 * np.einsum("kij,i,j->k", christoffel_fast(chart, q), d, d)


def _flow(chart: MetricChart, q: np.ndarray, v: np.ndarray):
    n = chart.dim
    sol = integrate_variational(chart, q, v, 1.0, np.zeros((n, n)), np.eye(n))
    x1, v1, dx1, _ = sol.unpack(1.0)
    return x1, v1, dx1


def _newton(
    chart: MetricChart, q: np.ndarray, p: np.ndarray, v: np.ndarray
) -> ShootingResult:
    """Damped Newton iteration on v -> exp_q(v) - p with backtracking."""
    settings = get_settings()
    goal = settings.shooting_tol * (1.0 + float(np.max(np.abs(p))))
    stall = STALL_TOL * (1.0 + float(np.max(np.abs(p))))

    x1, v1, jac = _flow(chart, q, v)
    err = chart.displacement(x1, p)
    res = float(np.max(np.abs(err)))
    iterations = 0
    while res > goal:
        if iterations >= settings.shooting_max_iter:
            if res <= stall:
                break
            raise NoConvergence(iterations, res)
        cond = float(np.linalg.cond(jac))
        if cond > settings.shooting_cond_max:
            raise SingularJacobian(cond)
        step = linalg.solve(jac, err)
        alpha = 1.0
        for _ in range(MAX_BACKTRACK):
            trial = v + alpha * step
            try:
                tx, tv, tj = _flow(chart, q, trial)
            except LeftDomain:
                alpha *= 0.5
                continue
            trial_err = chart.displacement(tx, p)
            trial_res = float(np.max(np.abs(trial_err)))
            if trial_res < res:
                break
            alpha *= 0.5
        else:
            if res <= stall:
                break
            raise NoConvergence(iterations, res)
        iterations += 1
        v, v1, jac, err, res = trial, tv, tj, trial_err, trial_res

    return ShootingResult(q, p, v, v1, iterations, jac, res)


def shoot(
    chart: MetricChart,
    q,
    p,
    guess=None,
    near: ShootingResult | None = None,
) -> ShootingResult:
    """
    Solve exp_q(v) = p for v.

    Newton starts from `guess`, else from the first-order prediction off a nearby
    solved problem `near`, else from first_order_guess. Angular coordinates are matched modulo 2pi.
    When Newton fails from that start, the target is continued along the coordinate
    segment from q to p.

    Raises:
        SingularJacobian: A conjugate point makes d exp_q numerically singular
        NoConvergence: Newton and the homotopy fallback both failed
        LeftDomain: Every trial geodesic left the domain
    """
    q = np.asarray(q, dtype=float)
    p = np.asarray(p, dtype=float)
    if guess is not None:
        v0 = np.asarray(guess, dtype=float)
    elif near is not None:
        v0 = near.predict(p)
    else:
        v0 = first_order_guess(chart, q, p)

    try:
        result = _newton(chart, q, p, v0)
    except SingularJacobian:
        SHOOTING_FAILURES.labels(reason="singular_jacobian").inc()
        raise
    except (NoConvergence, LeftDomain) as e:
        logger.debug("shooting_homotopy_fallback", chart=chart.name, error=str(e))
        result = _homotopy(chart, q, p)
    SHOOTING_ITERATIONS.observe(result.iterations)
    return result


def _homotopy(chart: MetricChart, q: np.ndarray, p: np.ndarray) -> ShootingResult:
    steps = get_settings().homotopy_steps
    d = chart.displacement(q, p)
    previous: ShootingResult | None = None
    total = 0
    for s in np.linspace(1.0 / steps, 1.0, steps):
        target = q + s * d
        if previous is not None:
            start = previous.predict(target)
        else:
            start = first_order_guess(chart, q, target)
        try:
            previous = _newton(chart, q, target, start)
        except (NoConvergence, LeftDomain, SingularJacobian) as e:
            reason = "singular_jacobian" if isinstance(e, SingularJacobian) else "no_convergence"
            SHOOTING_FAILURES.labels(reason=reason).inc()
            logger.debug("shooting_homotopy_failed", chart=chart.name, stage=float(s), error=str(e))
            raise
        total += previous.iterations
    assert previous is not None
    return ShootingResult(
        q, p, previous.v, previous.end_velocity, total, previous.jacobian, previous.residual
    )


def inverse_exp(
    chart: MetricChart,
    q,
    p,
    guess=None,
    region: StarRegion | None = None,
) -> np.ndarray:
    """
    The distinguished initial velocity v with exp_q(v) = p.

    Raises:
        OutsideRegion: If the solution lies outside the star region
        NoConvergence, SingularJacobian: From shooting
    """
    q = np.asarray(q, dtype=float)
    p = np.asarray(p, dtype=float)
    if np.array_equal(p, q):
        return np.zeros_like(q)
    v = shoot(chart, q, p, guess=guess).v
    if region is not None and not region.contains(v):
        raise OutsideRegion(
            f"inverse_exp solution |v|={np.linalg.norm(v):.4g} "
            f"outside star radius {region.radius:g}"
        )
    return v


def signed_energy(chart: MetricChart, q, p, guess=None) -> float:
    """E_q(p) = g(v, v) for v = exp_q^-1(p)."""
    v = inverse_exp(chart, q, p, guess=guess)
    return chart.inner(q, v, v)


def energy_gradient(chart: MetricChart, q, p, guess=None) -> np.ndarray:
    """Gradient of E_q at p, equal to 2 gamma'(1) for the distinguished geodesic."""
    q = np.asarray(q, dtype=float)
    p = np.asarray(p, dtype=float)
    if np.array_equal(p, q):
        return np.zeros_like(q)
    return 2.0 * shoot(chart, q, p, guess=guess).end_velocity
