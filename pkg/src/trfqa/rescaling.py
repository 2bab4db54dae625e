"""Time-rescaling functions ``t = f(tau)`` and their derivatives.

Two families contract a protocol of length ``t_f`` into ``t_f / a``:

* ``sine``:       f(tau) = a tau - t_f (a-1) / (2 pi a) * sin(2 pi a tau / t_f)
* ``polynomial``: f(tau) = 2(a^2-a^3)/t_f^2 tau^3 + 3(a^2-a)/t_f tau^2 + tau

Both satisfy f(0) = 0, f(t_f/a) = t_f and fdot = 1 at both ends. The
formulas are evaluated for every tau >= 0, including past ``t_f / a``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

FDOT_EPSILON = 1e-6


class Family(str, Enum):
    IDENTITY = "identity"
    SINE = "sine"
    POLYNOMIAL = "polynomial"

    @classmethod
    def parse(cls, name: str) -> "Family":
        aliases = {"poly": cls.POLYNOMIAL, "id": cls.IDENTITY, "f1": cls.SINE, "f2": cls.POLYNOMIAL}
        key = name.strip().lower()
        if key in aliases:
            return aliases[key]
        return cls(key)


class VanishingDerivative(ArithmeticError):
    """fdot fell to (or below) the guard; the feedback law would divide by ~0."""

    def __init__(self, tau: float, fdot: float, epsilon: float = FDOT_EPSILON):
        super().__init__(f"fdot({tau:g}) = {fdot:.3g} <= {epsilon:g}")
        self.tau = tau
        self.fdot = fdot


@dataclass(frozen=True)
class RescaleSpec:
    family: Family = Family.IDENTITY
    a: float = 1.0
    t_f: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "family", Family.parse(self.family) if isinstance(self.family, str) else self.family)
        if self.family is not Family.IDENTITY:
            if not (math.isfinite(self.a) and self.a > 0):
                raise ValueError(f"a must be positive, got {self.a}")
            if not (math.isfinite(self.t_f) and self.t_f > 0):
                raise ValueError(f"t_f must be positive, got {self.t_f}")

    @classmethod
    def identity(cls, t_f: float = 1.0) -> "RescaleSpec":
        return cls(Family.IDENTITY, 1.0, t_f)

    @classmethod
    def sine(cls, a: float, t_f: float) -> "RescaleSpec":
        return cls(Family.SINE, a, t_f)

    @classmethod
    def polynomial(cls, a: float, t_f: float) -> "RescaleSpec":
        return cls(Family.POLYNOMIAL, a, t_f)

    @property
    def label(self) -> str:
        if self.family is Family.IDENTITY:
            return "identity"
        return f"{self.family.value}_a{self.a:g}_tf{self.t_f:g}"


def _raw(spec: RescaleSpec, tau: float) -> tuple[float, float]:
    a, tf = spec.a, spec.t_f
    if spec.family is Family.IDENTITY:
        return tau, 1.0
    if spec.family is Family.SINE:
        w = 2 * math.pi * a / tf
        f = a * tau - tf * (a - 1) / (2 * math.pi * a) * math.sin(w * tau)
        fdot = a - (a - 1) * math.cos(w * tau)
        return f, fdot
    c3 = 2 * (a**2 - a**3) / tf**2
    c2 = 3 * (a**2 - a) / tf
    f = c3 * tau**3 + c2 * tau**2 + tau
    fdot = 3 * c3 * tau**2 + 2 * c2 * tau + 1
    return f, fdot


def evaluate(spec: RescaleSpec, tau: float, epsilon: float = FDOT_EPSILON) -> tuple[float, float]:
    """Return ``(f(tau), fdot(tau))``.

    Raises ``VanishingDerivative`` when ``fdot <= epsilon``.
    """
    if not math.isfinite(tau) or tau < 0:
        raise ValueError(f"tau must be finite and non-negative, got {tau}")
    f, fdot = _raw(spec, tau)
    if fdot <= epsilon:
        raise VanishingDerivative(tau, fdot, epsilon)
    return f, fdot


def rescaled_horizon(spec: RescaleSpec) -> float:
    if spec.family is Family.IDENTITY:
        return spec.t_f
    return spec.t_f / spec.a
