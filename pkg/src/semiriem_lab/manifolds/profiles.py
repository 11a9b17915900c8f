"""One-variable analytic profiles (warping functions, polar factors) with two derivatives."""

import math
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import Polynomial


@dataclass(frozen=True)
class Profile:
    """A smooth function of one variable together with f' and f''."""

    name: str
    f: Callable[[float], float]
    df: Callable[[float], float]
    ddf: Callable[[float], float]

    def __call__(self, x: float) -> float:
        return self.f(x)

    def jet(self, x: float) -> tuple[float, float, float]:
        return self.f(x), self.df(x), self.ddf(x)

    def squared(self) -> "Profile":
        """Return the profile of f², which is what enters metric components."""
        f, df, ddf = self.f, self.df, self.ddf
        return Profile(
            name=f"({self.name})^2",
            f=lambda x: f(x) ** 2,
            df=lambda x: 2.0 * f(x) * df(x),
            ddf=lambda x: 2.0 * (df(x) ** 2 + f(x) * ddf(x)),
        )


def cosh_profile(amplitude: float = 1.0, rate: float = 1.0, shift: float = 0.0) -> Profile:
    a, b, c = amplitude, rate, shift
    return Profile(
        name=f"{a:g}*cosh({b:g}*t+{c:g})",
        f=lambda x: a * math.cosh(b * x + c),
        df=lambda x: a * b * math.sinh(b * x + c),
        ddf=lambda x: a * b * b * math.cosh(b * x + c),
    )


def sinh_profile(amplitude: float = 1.0, rate: float = 1.0, shift: float = 0.0) -> Profile:
    a, b, c = amplitude, rate, shift
    return Profile(
        name=f"{a:g}*sinh({b:g}*t+{c:g})",
        f=lambda x: a * math.sinh(b * x + c),
        df=lambda x: a * b * math.cosh(b * x + c),
        ddf=lambda x: a * b * b * math.sinh(b * x + c),
    )


def sin_profile(amplitude: float = 1.0, rate: float = 1.0, shift: float = 0.0) -> Profile:
    a, b, c = amplitude, rate, shift
    return Profile(
        name=f"{a:g}*sin({b:g}*t+{c:g})",
        f=lambda x: a * math.sin(b * x + c),
        df=lambda x: a * b * math.cos(b * x + c),
        ddf=lambda x: -a * b * b * math.sin(b * x + c),
    )


def cos_profile(amplitude: float = 1.0, rate: float = 1.0, shift: float = 0.0) -> Profile:
    a, b, c = amplitude, rate, shift
    return Profile(
        name=f"{a:g}*cos({b:g}*t+{c:g})",
        f=lambda x: a * math.cos(b * x + c),
        df=lambda x: -a * b * math.sin(b * x + c),
        ddf=lambda x: -a * b * b * math.cos(b * x + c),
    )


def exp_profile(amplitude: float = 1.0, rate: float = 1.0, shift: float = 0.0) -> Profile:
    a, b, c = amplitude, rate, shift
    return Profile(
        name=f"{a:g}*exp({b:g}*t+{c:g})",
        f=lambda x: a * math.exp(b * x + c),
        df=lambda x: a * b * math.exp(b * x + c),
        ddf=lambda x: a * b * b * math.exp(b * x + c),
    )


def const_profile(amplitude: float = 1.0) -> Profile:
    a = amplitude
    return Profile(name=f"{a:g}", f=lambda x: a, df=lambda x: 0.0, ddf=lambda x: 0.0)


def polynomial_profile(coefficients: list[float]) -> Profile:
    """Polynomial with coefficients in increasing degree order."""
    p = Polynomial(np.asarray(coefficients, dtype=float))
    dp = p.deriv(1)
    ddp = p.deriv(2)
    return Profile(
        name=f"poly{list(coefficients)}",
        f=lambda x: float(p(x)),
        df=lambda x: float(dp(x)),
        ddf=lambda x: float(ddp(x)),
    )


def sn_profile(curvature: float) -> Profile:
    """Generalized sine sn_C: the radial warping of a constant-curvature polar chart."""
    c = curvature
    if c > 0:
        s = math.sqrt(c)
        return Profile(
            name=f"sn[{c:g}]",
            f=lambda r: math.sin(s * r) / s,
            df=lambda r: math.cos(s * r),
            ddf=lambda r: -s * math.sin(s * r),
        )
    if c < 0:
        s = math.sqrt(-c)
        return Profile(
            name=f"sn[{c:g}]",
            f=lambda r: math.sinh(s * r) / s,
            df=lambda r: math.cosh(s * r),
            ddf=lambda r: s * math.sinh(s * r),
        )
    return Profile(name="sn[0]", f=lambda r: r, df=lambda r: 1.0, ddf=lambda r: 0.0)


WARPING_FAMILIES: dict[str, Callable[..., Profile]] = {
    "cosh": cosh_profile,
    "sinh": sinh_profile,
    "sin": sin_profile,
    "cos": cos_profile,
    "exp": exp_profile,
    "const": const_profile,
}


def build_profile(family: str, **params) -> Profile:
    """Build a warping profile from a family name and its parameters."""
    if family == "polynomial":
        return polynomial_profile(params.get("coefficients", [1.0]))
    if family not in WARPING_FAMILIES:
        raise ValueError(f"unknown warping family: {family}")
    if family == "const":
        return const_profile(params.get("amplitude", 1.0))
    return WARPING_FAMILIES[family](
        params.get("amplitude", 1.0), params.get("rate", 1.0), params.get("shift", 0.0)
    )
