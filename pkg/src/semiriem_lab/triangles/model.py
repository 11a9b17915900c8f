"""Constant-curvature model surfaces M_K and model triangles with prescribed side energies."""

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np
import structlog

from semiriem_lab.config import get_settings
from semiriem_lab.convexity.comparison import f_value
from semiriem_lab.errors import BranchAmbiguity, DegenerateTriangle, NotRealizable

logger = structlog.get_logger()

Signature = Literal["riemannian", "lorentzian"]

# side index -> vertex pair, in the order E01, E02, E12
SIDES: tuple[tuple[int, int], ...] = ((0, 1), (0, 2), (1, 2))


def model_form(K: float, signature: Signature) -> np.ndarray:
    """
    Diagonal of the flat ambient form the model quadric <x,x> = 1/K lives in.

    K = 0 returns the form of the flat model plane itself.
    """
    if K == 0:
        return np.array([1.0, 1.0]) if signature == "riemannian" else np.array([1.0, -1.0])
    if K > 0:
        last = 1.0 if signature == "riemannian" else -1.0
        return np.array([1.0, 1.0, last])
    return np.array([1.0, 1.0, -1.0]) if signature == "riemannian" else np.array([1.0, -1.0, -1.0])


def _inner(eta: np.ndarray, a: np.ndarray, b: np.ndarray) -> float:
    return float(np.sum(eta * a * b))


def signed_length(E: float) -> float:
    """l = sg * arclength, recovered from E = sg * l^2."""
    return math.copysign(math.sqrt(abs(E)), E)


def energy_of_length(length: float) -> float:
    """The order-preserving encoding l -> sign(l) l^2."""
    return math.copysign(length * length, length)


def energy_from_chord(K: float, f: float) -> float:
    """
    Invert f = (1 - cos sqrt(KE))/K on the principal branch.

    sqrt(KE) = 2 arcsin sqrt(Kf/2) when 0 <= Kf < 2, and i * 2 arcsinh sqrt(-Kf/2)
    when Kf < 0.

    Raises:
        BranchAmbiguity: If Kf >= 2
    """
    if K == 0:
        return 2.0 * f
    x = K * f
    if x >= 2.0:
        raise BranchAmbiguity(f"K*f = {x:.6g} is beyond the principal branch")
    if x >= 0:
        theta = 2.0 * math.asin(math.sqrt(0.5 * x))
        return theta * theta / K
    phi = 2.0 * math.asinh(math.sqrt(-0.5 * x))
    return -phi * phi / K


def model_energy(K: float, signature: Signature, a, b) -> float:
    """
    Signed energy between two points of M_K, from the chord f = <b-a, b-a>/2.

    On the quadric the chord equals 1/K - <a,b> without the cancellation.

    Raises:
        BranchAmbiguity: If the pair is beyond the principal branch
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    d = b - a
    f = 0.5 * _inner(model_form(K, signature), d, d)
    return energy_from_chord(K, f)


def _sinc_ratio(z: float) -> float:
    """sin(sqrt z)/sqrt z, continued by sinh for z < 0."""
    if z > 0:
        return float(np.sinc(math.sqrt(z) / math.pi))
    if z < 0:
        r = math.sqrt(-z)
        return math.sinh(r) / r
    return 1.0


def geodesic_weight(kappa: float, s: float) -> float:
    """Coefficient of the endpoint at fraction s on a model geodesic with K*E = kappa."""
    return s * _sinc_ratio(s * s * kappa) / _sinc_ratio(kappa)


@dataclass(frozen=True, eq=False)
class ModelTriangle:
    """
    Comparison triangle in M_K.

    Vertices are rows of an array in the ambient flat space with form `eta`: on the
    quadric <x,x> = 1/K for K != 0, in the model plane for K = 0.
    """

    K: float
    signature: Signature
    vertices: np.ndarray
    side_energies: tuple[float, float, float]

    @property
    def eta(self) -> np.ndarray:
        return model_form(self.K, self.signature)

    def energy(self, a, b) -> float:
        return model_energy(self.K, self.signature, a, b)

    def side_point(self, side: int, s: float) -> np.ndarray:
        """Point at affine fraction s in [0, 1] along side 0 (01), 1 (02) or 2 (12)."""
        if not 0.0 <= s <= 1.0:
            raise ValueError(f"affine fraction {s} outside [0, 1]")
        i, j = SIDES[side]
        a, b = self.vertices[i], self.vertices[j]
        if self.K == 0:
            return a + s * (b - a)
        kappa = self.K * self.side_energies[side]
        return geodesic_weight(kappa, 1.0 - s) * a + geodesic_weight(kappa, s) * b

    def quadric_residual(self) -> float:
        if self.K == 0:
            return 0.0
        eta = self.eta
        return max(abs(_inner(eta, x, x) - 1.0 / self.K) for x in self.vertices)


def _place(gram: np.ndarray, eta: np.ndarray, tol: float) -> np.ndarray:
    """
    Vectors with the given Gram matrix in the flat space with form eta.

    Vector k takes components on the axes already used, fixed by the inner products
    with earlier vectors, plus a positive component on the first unused axis whose
    sign matches the remaining norm.

    Raises:
        NotRealizable: If no unused axis has the needed sign
        DegenerateTriangle: If a remaining norm vanishes
    """
    m = eta.size
    placed = np.zeros((gram.shape[0], m))
    axes: list[int] = []
    for k in range(gram.shape[0]):
        coeffs = np.zeros(m)
        for j, axis in enumerate(axes):
            partial = _inner(eta, coeffs, placed[j])
            coeffs[axis] = (gram[k, j] - partial) / (eta[axis] * placed[j, axis])
        rest = gram[k, k] - _inner(eta, coeffs, coeffs)
        if abs(rest) <= tol:
            raise DegenerateTriangle(f"vanishing normal component at vertex {k} ({rest:.3g})")
        free = [a for a in range(m) if a not in axes and np.sign(eta[a]) == np.sign(rest)]
        if not free:
            raise NotRealizable(f"vertex {k} needs a {'+' if rest > 0 else '-'} axis")
        axis = free[0]
        coeffs[axis] = math.sqrt(rest / eta[axis])
        placed[k] = coeffs
        axes.append(axis)
    return placed


def _realize(K: float, signature: Signature, energies: tuple[float, float, float],
             tol: float) -> ModelTriangle:
    eta = model_form(K, signature)
    e01, e02, e12 = energies
    if K == 0:
        gram = np.array([[e01, 0.5 * (e01 + e02 - e12)], [0.5 * (e01 + e02 - e12), e02]])
        scale = max(1.0, float(np.max(np.abs(gram))))
        edges = _place(gram, eta, tol * scale)
        vertices = np.vstack([np.zeros(2), edges])
    else:
        s = math.copysign(1.0, K)
        gram = np.full((3, 3), s)
        for side, (i, j) in enumerate(SIDES):
            gram[i, j] = gram[j, i] = s * (1.0 - K * f_value(K, energies[side]))
        vertices = _place(gram, eta, tol) / math.sqrt(abs(K))
    return ModelTriangle(K=K, signature=signature, vertices=vertices, side_energies=energies)


def realize_model_triangle(K: float, E01: float, E02: float, E12: float) -> ModelTriangle:
    """
    The comparison triangle in M_K with side energies (E01, E02, E12), up to motion.

    The Lorentzian model is tried first, then the Riemannian one; at most one of them
    admits a nondegenerate triple.

    Raises:
        DegenerateTriangle: If a side is null or the Gram matrix is rank-deficient
        NotRealizable: If neither model admits the triple
    """
    tol = get_settings().degeneracy_tol
    energies = (float(E01), float(E02), float(E12))
    scale = max(1.0, max(abs(e) for e in energies))
    if any(abs(e) <= tol * scale for e in energies):
        raise DegenerateTriangle(f"null side in {energies}")

    realized: list[ModelTriangle] = []
    for signature in ("lorentzian", "riemannian"):
        try:
            realized.append(_realize(K, signature, energies, tol))
        except NotRealizable as e:
            logger.debug("model_signature_rejected", K=K, signature=signature, error=str(e))
    if not realized:
        raise NotRealizable(f"no model surface of curvature {K:g} admits {energies}")
    if len(realized) > 1:
        raise AssertionError(f"both model surfaces realize {energies} at K={K:g}")
    return realized[0]
