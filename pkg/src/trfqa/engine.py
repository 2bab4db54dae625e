"""Feedback loop for FQA/FALQON and their time-rescaled variants.

Layer ``k`` (tau = k * dt) applies

    exp(-i H_p fdot_k dt)  then  exp(-i beta_k H_d fdot_k dt)

and then measures ``A_k = <psi_k| i[H_d, H_p] |psi_k>``. The next control is
``beta_{k+1} = -A_k / fdot_{k+1}``, with ``beta_1 = 0``. Identity rescaling
(fdot = 1) is the standard algorithm.
"""
from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from . import rescaling
from .pauli import Observable, commutator_i
from .rescaling import RescaleSpec, VanishingDerivative
from .statevector import (
    ExpectationPlan,
    ProblemPropagatorPlan,
    Statevector,
    uniform_superposition,
)

log = logging.getLogger(__name__)


class NumericalFailure(ArithmeticError):
    def __init__(self, layer: int, message: str):
        super().__init__(f"layer {layer}: {message}")
        self.layer = layer


@dataclass(frozen=True, eq=False)
class RunConfig:
    problem: Observable
    driver: Observable
    dt: float
    layers: int
    rescale: RescaleSpec = field(default_factory=RescaleSpec.identity)
    solutions: Optional[frozenset[int]] = None
    ground_energy: Optional[float] = None
    initial_state: str = "uniform"

    def __post_init__(self):
        if self.problem.num_qubits != self.driver.num_qubits:
            raise ValueError("problem and driver act on different registers")
        if not (math.isfinite(self.dt) and self.dt > 0):
            raise ValueError(f"dt must be positive, got {self.dt}")
        if self.layers < 1:
            raise ValueError(f"layers must be >= 1, got {self.layers}")
        if self.initial_state != "uniform":
            raise ValueError(f"unsupported initial state {self.initial_state!r}")
        if self.solutions is not None:
            if not self.solutions:
                raise ValueError("solution set must be non-empty when given")
            object.__setattr__(self, "solutions", frozenset(self.solutions))
        if commutator_i(self.driver, self.problem).is_zero:
            raise ValueError("driver and problem Hamiltonians commute; the loop cannot move")

    @property
    def num_qubits(self) -> int:
        return self.problem.num_qubits


@dataclass
class LayerRecord:
    k: int
    beta: float
    A: float
    J: float
    fdot: float
    success_prob: Optional[float] = None


@dataclass
class Trajectory:
    records: list[LayerRecord]
    final_state: Statevector
    failure: Optional[str] = None

    def __len__(self):
        return len(self.records)

    @property
    def completed(self) -> bool:
        return self.failure is None

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(r, name) for r in self.records], dtype=float)

    @property
    def final_J(self) -> float:
        return self.records[-1].J if self.records else math.nan

    @property
    def final_success(self) -> Optional[float]:
        return self.records[-1].success_prob if self.records else None


def feedback_beta(a_prev: float, fdot: float, epsilon: float = rescaling.FDOT_EPSILON) -> float:
    """``-a_prev / fdot``; refuses a vanishing derivative."""
    if fdot <= epsilon:
        raise VanishingDerivative(math.nan, fdot, epsilon)
    return -a_prev / fdot


def run(
    config: RunConfig,
    on_layer: Optional[Callable[[LayerRecord, Statevector], None]] = None,
) -> Trajectory:
    """Run the layered feedback loop from the uniform superposition.

    A vanishing derivative mid-run truncates the trajectory at the last valid
    layer and sets ``failure``; a non-finite cost raises ``NumericalFailure``.
    ``on_layer`` sees each record with the live state; it must not mutate it.
    """
    psi = uniform_superposition(config.num_qubits)
    problem_plan = ProblemPropagatorPlan(config.problem)
    driver_plan = ProblemPropagatorPlan(config.driver)
    cost = ExpectationPlan(config.problem)
    gradient = ExpectationPlan(commutator_i(config.driver, config.problem))
    sol = None
    if config.solutions is not None:
        sol = np.fromiter(sorted(config.solutions), dtype=np.int64)

    records: list[LayerRecord] = []
    failure = None
    a_prev = None
    dt = config.dt
    for k in range(1, config.layers + 1):
        try:
            _, fdot = rescaling.evaluate(config.rescale, k * dt)
            beta = 0.0 if a_prev is None else feedback_beta(a_prev, fdot)
        except VanishingDerivative as exc:
            failure = f"layer {k}: vanishing derivative, {exc}"
            log.warning("run truncated at layer %d: %s", k - 1, exc)
            break
        problem_plan.apply(psi, fdot * dt)
        driver_plan.apply(psi, beta * fdot * dt)

        J = cost.evaluate(psi)
        A = gradient.evaluate(psi)
        if not (math.isfinite(J) and math.isfinite(A)):
            raise NumericalFailure(k, f"non-finite measurement J={J}, A={A}")
        p = float(np.sum(np.abs(psi.amplitudes[sol]) ** 2)) if sol is not None else None
        rec = LayerRecord(k, beta, A, J, fdot, p)
        records.append(rec)
        if on_layer is not None:
            on_layer(rec, psi)
        a_prev = A
    return Trajectory(records, psi, failure)


def _run_or_error(config: RunConfig):
    try:
        return run(config)
    except Exception as exc:  # surfaced per entry by sweep
        log.error("sweep entry failed: %s", exc)
        return exc


def sweep(configs: Sequence[RunConfig], jobs: int = 1) -> list:
    """Run independent configs; results keep input order.

    A config that raises yields the exception instance in its slot instead of
    a ``Trajectory``, so one bad entry does not abort the rest.
    """
    configs = list(configs)
    if jobs <= 1 or len(configs) <= 1:
        return [_run_or_error(c) for c in configs]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_run_or_error, configs))
