"""Input-oriented radial DEA models over small dense instances.

Three variants: the basic envelopment score (bounded by 1), the
super-efficiency score (unit under evaluation removed from the
envelopment, so efficient units can exceed 1), and the constant-input
variant used to rank score rows, where the single input column cancels
out of the program entirely.
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import lp
from .infotheory import ScoreMatrix

CCR = "ccr"
SUPER = "super"

# comparisons between efficiency scores absorb this much simplex noise
SCORE_TOL = 1e-7


class RuleOfThumbWarning(UserWarning):
    """Fewer DMUs than three times the input+output count; scores are fragile."""


@dataclass(frozen=True)
class DeaInstance:
    """DMU data: one row per unit. `inputs` of None means every unit
    consumes the same constant input (its actual value cancels)."""

    outputs: np.ndarray
    inputs: np.ndarray | None = None
    labels: tuple = ()

    def __post_init__(self):
        outputs = np.atleast_2d(np.asarray(self.outputs, dtype=float))
        object.__setattr__(self, "outputs", outputs)
        if outputs.size == 0:
            raise ValueError("instance needs at least one DMU and one output")
        if np.any(outputs < 0) or not np.all(np.isfinite(outputs)):
            raise ValueError("outputs must be finite and nonnegative")
        if self.inputs is not None:
            inputs = np.atleast_2d(np.asarray(self.inputs, dtype=float))
            if inputs.shape[0] != outputs.shape[0]:
                raise ValueError("inputs and outputs disagree on DMU count")
            if np.any(inputs < 0) or not np.all(np.isfinite(inputs)):
                raise ValueError("inputs must be finite and nonnegative")
            object.__setattr__(self, "inputs", inputs)

    @property
    def n_dmus(self) -> int:
        return int(self.outputs.shape[0])

    @property
    def n_outputs(self) -> int:
        return int(self.outputs.shape[1])

    @property
    def n_inputs(self) -> int:
        return 1 if self.inputs is None else int(self.inputs.shape[1])


@dataclass(frozen=True)
class EfficiencyScore:
    value: float  # may be +inf for super-efficiency with no covering peers
    basis: str  # CCR or SUPER

    def __post_init__(self):
        if self.basis not in (CCR, SUPER):
            raise ValueError(f"unknown basis {self.basis!r}")
        if self.value < 0:
            raise ValueError("efficiency scores are nonnegative")


def envelopment_lp(inst: DeaInstance, p: int, peers: np.ndarray) -> lp.LinearProgram:
    """min theta s.t. peer input mix <= theta * inputs_p, peer output mix
    >= outputs_p, lambda >= 0. Variables: one lambda per peer, then theta."""
    k = peers.size
    constraints = []
    if inst.inputs is None:
        row = np.ones(k + 1)
        row[-1] = -1.0  # sum(lambda) - theta <= 0; the constant input cancels
        constraints.append((row, lp.LE, 0.0))
    else:
        for i in range(inst.n_inputs):
            row = np.empty(k + 1)
            row[:k] = inst.inputs[peers, i]
            row[-1] = -inst.inputs[p, i]
            constraints.append((row, lp.LE, 0.0))
    for r in range(inst.n_outputs):
        row = np.zeros(k + 1)
        row[:k] = inst.outputs[peers, r]
        constraints.append((row, lp.GE, float(inst.outputs[p, r])))
    objective = np.zeros(k + 1)
    objective[-1] = 1.0
    return lp.LinearProgram(objective=objective, constraints=constraints)


def _check_dmu(inst: DeaInstance, p: int):
    if not 0 <= p < inst.n_dmus:
        raise IndexError(f"DMU {p} out of range [0, {inst.n_dmus})")
    if not np.any(inst.outputs[p] > 0):
        raise ValueError(f"DMU {p} has no strictly positive output")


def ccr_score(inst: DeaInstance, p: int) -> EfficiencyScore:
    """Relative efficiency of DMU p with p included in the envelopment;
    always in [0, 1] up to solver tolerance."""
    _check_dmu(inst, p)
    sol = lp.solve(envelopment_lp(inst, p, np.arange(inst.n_dmus)))
    if not sol.is_optimal:
        # lambda_p = 1, theta = 1 is always feasible, so this cannot happen
        raise RuntimeError(f"basic envelopment LP reported {sol.status}")
    return EfficiencyScore(value=max(sol.objective, 0.0), basis=CCR)


def super_efficiency_score(inst: DeaInstance, p: int) -> EfficiencyScore:
    """Efficiency of DMU p against the frontier built from all other DMUs.

    When no combination of peers can reach p's outputs the program is
    infeasible and the score is +inf: nothing in the data envelops p.
    """
    _check_dmu(inst, p)
    if inst.n_dmus < 2:
        raise ValueError("super-efficiency needs at least one peer DMU")
    peers = np.delete(np.arange(inst.n_dmus), p)
    sol = lp.solve(envelopment_lp(inst, p, peers))
    if sol.status == lp.INFEASIBLE:
        return EfficiencyScore(value=math.inf, basis=SUPER)
    if not sol.is_optimal:
        raise RuntimeError(f"super-efficiency LP reported {sol.status}")
    return EfficiencyScore(value=max(sol.objective, 0.0), basis=SUPER)


def feature_eval_score(scores: ScoreMatrix, p: int) -> EfficiencyScore:
    """Super-efficiency of score row p under the constant-input model.

    A lone candidate has no peers to envelop it and scores +inf.
    """
    if not 0 <= p < scores.n_rows:
        raise IndexError(f"row {p} out of range [0, {scores.n_rows})")
    if scores.n_rows == 1:
        return EfficiencyScore(value=math.inf, basis=SUPER)
    inst = DeaInstance(outputs=scores.values)
    return super_efficiency_score(inst, p)


def check_rule_of_thumb(n_dmus: int, n_outputs: int, n_inputs: int = 1):
    """Warn when there are fewer DMUs than three times inputs+outputs."""
    needed = 3 * (n_inputs + n_outputs)
    if n_dmus < needed:
        warnings.warn(
            f"{n_dmus} DMUs for {n_inputs} input(s) + {n_outputs} output(s); "
            f"fewer than the {needed} the rule of thumb asks for",
            RuleOfThumbWarning,
            stacklevel=3,
        )


def sup_dea_max(scores: ScoreMatrix) -> tuple[int, float]:
    """Evaluate every row of the score matrix and return (row, score) of
    the winner.

    Ties within SCORE_TOL go to the lowest feature index; +inf beats any
    finite score, and ties among +inf rows go to the larger entry sum,
    then the lowest feature index.
    """
    if scores.n_rows == 0:
        raise ValueError("empty score matrix")
    check_rule_of_thumb(scores.n_rows, scores.n_outputs)
    values = [feature_eval_score(scores, p).value for p in range(scores.n_rows)]

    infinite = [p for p, v in enumerate(values) if math.isinf(v)]
    if infinite:
        sums = scores.values.sum(axis=1)
        best_sum = max(sums[p] for p in infinite)
        tied = [p for p in infinite if sums[p] >= best_sum - SCORE_TOL]
        winner = min(tied, key=lambda p: scores.features[p])
        return winner, math.inf

    best = max(values)
    tied = [p for p, v in enumerate(values) if v >= best - SCORE_TOL]
    winner = min(tied, key=lambda p: scores.features[p])
    return winner, values[winner]
