"""Expected per-sample payoffs (EPPS), utilities, and payoff matrices.

For the adversary, a perturbed sample either fools the deployed model
(probability ASR, reward ``r_plus_adv``) or is caught (penalty
``r_minus_adv``), and always bears the attack's ongoing cost.  For the
defender the same logic runs on correct classification.  Break-even
accuracy thresholds fall out directly:

    mu_adv_j = (o_j + r_minus_adv) / (r_plus_adv + r_minus_adv)
    mu_def_i = (o_i + r_minus_def) / (r_plus_def + r_minus_def)

An attack is worth running exactly when its ASR clears ``mu_adv``;
a model earns its keep when its CCR clears ``mu_def_i``.

Utilities scale EPPS by the deployment horizon: the adversary touches
``n * r_max`` samples, the defender classifies all ``n``.  Both are
bilinear in the mixed strategies, which is what lets the general
bimatrix machinery operate on plain payoff matrices.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    GameSpec,
    Strategy,
    DimensionError,
    _check_model_index,
    _frozen_array,
    _require_real_attack,
    asr,
    asr_mixed,
    ccr,
    ccr_mixed,
)


@dataclass(frozen=True, eq=False)
class EppsVector:
    """Per-action expected per-sample payoff for one player."""

    values: np.ndarray
    owner: str  # "adversary" or "defender"

    def __post_init__(self) -> None:
        if self.owner not in ("adversary", "defender"):
            raise ValueError(f"unknown owner {self.owner!r}")
        object.__setattr__(self, "values", _frozen_array(self.values))


@dataclass(frozen=True, eq=False)
class PayoffMatrices:
    """N x M utility grids for both players over pure action pairs."""

    u_adv: np.ndarray
    u_def: np.ndarray

    def __post_init__(self) -> None:
        u_adv = np.asarray(self.u_adv, dtype=float)
        u_def = np.asarray(self.u_def, dtype=float)
        if u_adv.ndim != 2 or u_adv.shape != u_def.shape:
            raise DimensionError(
                f"payoff matrices must share a 2-d shape, got {u_adv.shape} and {u_def.shape}"
            )
        object.__setattr__(self, "u_adv", _frozen_array(u_adv))
        object.__setattr__(self, "u_def", _frozen_array(u_def))

    @property
    def n_rows(self) -> int:
        return int(self.u_adv.shape[0])

    @property
    def n_cols(self) -> int:
        return int(self.u_adv.shape[1])


def _adv_denominator(spec: GameSpec) -> float:
    e = spec.economics
    denom = e.r_plus_adv + e.r_minus_adv
    if denom <= 0.0:
        raise ValueError("r_plus_adv + r_minus_adv must be positive")
    return denom


def _def_denominator(spec: GameSpec) -> float:
    e = spec.economics
    denom = e.r_plus_def + e.r_minus_def
    if denom <= 0.0:
        raise ValueError("r_plus_def + r_minus_def must be positive")
    return denom


def mu_adv(spec: GameSpec, attack_index: int) -> float:
    """Break-even ASR of a real attack: below it the attack loses money."""
    _require_real_attack(spec, attack_index)
    e = spec.economics
    o_j = spec.attacks[attack_index].ongoing_cost
    return (o_j + e.r_minus_adv) / _adv_denominator(spec)


def mu_def(spec: GameSpec, model_index: int) -> float:
    """Break-even CCR of a model: below it operating the model loses money."""
    _check_model_index(spec, model_index)
    e = spec.economics
    o_i = spec.models[model_index].ongoing_cost
    return (o_i + e.r_minus_def) / _def_denominator(spec)


def delta_mu_def(spec: GameSpec) -> float:
    """Break-even gap mu_def_1 - mu_def_2 = (o_1 - o_2) / (r_plus_def + r_minus_def)."""
    if spec.n_models != 2:
        raise DimensionError("delta_mu_def requires exactly 2 models")
    o1 = spec.models[0].ongoing_cost
    o2 = spec.models[1].ongoing_cost
    return (o1 - o2) / _def_denominator(spec)


def epps_adv_pure(spec: GameSpec, model_index: int, attack_index: int) -> float:
    """Adversary EPPS of a real attack against a pure model choice."""
    e = spec.economics
    a = asr(spec, model_index, attack_index)  # rejects NoAttack
    o_j = spec.attacks[attack_index].ongoing_cost
    return -o_j - e.r_minus_adv * (1.0 - a) + e.r_plus_adv * a


def epps_adv(spec: GameSpec, s: Strategy) -> EppsVector:
    """Adversary EPPS of every action against a mixed model choice.

    The no-attack entry is fixed at 0: an idle adversary neither earns
    nor spends per sample.
    """
    if len(s) != spec.n_models:
        raise DimensionError(f"defender strategy length {len(s)} != {spec.n_models} models")
    e = spec.economics
    m = spec.n_attacks
    values = np.zeros(m)
    if m > 1:
        asr_vec = 1.0 - s.probs @ spec.robustness
        costs = np.array([spec.attacks[j].ongoing_cost for j in range(m - 1)])
        values[:-1] = -costs - e.r_minus_adv + (e.r_plus_adv + e.r_minus_adv) * asr_vec
    return EppsVector(values=values, owner="adversary")


def epps_def_pure(spec: GameSpec, model_index: int, attack_index: int) -> float:
    """Defender EPPS of a model against one pure adversary action, at rho = r_max."""
    e = spec.economics
    c = ccr(spec, model_index, attack_index, e.r_max)  # acc_i against NoAttack
    o_i = spec.models[model_index].ongoing_cost
    return -o_i - e.r_minus_def * (1.0 - c) + e.r_plus_def * c


def epps_def(spec: GameSpec, r: Strategy) -> EppsVector:
    """Defender EPPS of every model against a mixed adversary action."""
    if len(r) != spec.n_attacks:
        raise DimensionError(f"adversary strategy length {len(r)} != {spec.n_attacks} actions")
    e = spec.economics
    values = np.array(
        [
            -spec.models[i].ongoing_cost
            - e.r_minus_def
            + (e.r_plus_def + e.r_minus_def) * ccr_mixed(spec, i, r)
            for i in range(spec.n_models)
        ]
    )
    return EppsVector(values=values, owner="defender")


def utility_adv(spec: GameSpec, s: Strategy, r: Strategy) -> float:
    """Adversary utility: -i_adv + n * r_max * <r, EPPS_adv(s)>."""
    e = spec.economics
    return -e.i_adv + e.n * e.r_max * float(r.probs @ epps_adv(spec, s).values)


def utility_def(spec: GameSpec, s: Strategy, r: Strategy) -> float:
    """Defender utility: -i_def + n * <s, EPPS_def(r)>."""
    e = spec.economics
    return -e.i_def + e.n * float(s.probs @ epps_def(spec, r).values)


def payoff_matrices(spec: GameSpec) -> PayoffMatrices:
    """Utilities of every pure action pair, as two N x M matrices.

    Row i, column j holds each player's utility when model i meets action
    j; the last column is the no-attack action, where the adversary's
    utility is exactly ``-i_adv``.  Bilinearity makes mixed utilities
    equal ``s^T U r`` for both matrices.
    """
    e = spec.economics
    n_models, n_attacks = spec.n_models, spec.n_attacks
    u_adv = np.empty((n_models, n_attacks))
    u_def = np.empty((n_models, n_attacks))
    for i in range(n_models):
        for j in range(n_attacks):
            if spec.is_real_attack(j):
                u_adv[i, j] = -e.i_adv + e.n * e.r_max * epps_adv_pure(spec, i, j)
            else:
                u_adv[i, j] = -e.i_adv
            u_def[i, j] = -e.i_def + e.n * epps_def_pure(spec, i, j)
    return PayoffMatrices(u_adv=u_adv, u_def=u_def)
