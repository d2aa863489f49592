"""Closed-form analysis of the two-model, attack-or-not game.

Under the strict ordering ``acc_1 > acc_2 > rob_2 > rob_1`` (model 1
accurate but fragile, model 2 hardened) each player's best response is
governed by a single affine quantity:

* adversary: ``ASR(s) = 1 - rob_2 + s_1 * (rob_2 - rob_1)``, strictly
  increasing in the weight on the fragile model.  Attack beats idle
  exactly when ``ASR(s)`` clears the break-even threshold ``mu_adv``.
* defender: ``dCCR(r) = dacc - r_1 * r_max * (dacc + drob)``, strictly
  decreasing in the attack weight ``r_1``.  Model 1 beats model 2 exactly
  when ``dCCR(r)`` clears the break-even gap ``dmu_def``.

Each player therefore has three regimes (prefer one action, prefer the
other, indifferent), and when both indifference conditions can hold in
the interior the game has a unique fully mixed equilibrium with

    s_1* = (rob_2 - 1 + mu_adv) / (rob_2 - rob_1)
    r_1* = (dacc - dmu_def) / ((dacc + drob) * r_max)

Everything here is exact arithmetic on the inputs; no iteration.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .core import (
    DEFAULT_EPS,
    DimensionError,
    GameSpec,
    Strategy,
    asr_mixed,
    check_ordering_2x2,
)
from .payoff import delta_mu_def, mu_adv, payoff_matrices
from .solver import verify_equilibrium


class OrderingError(ValueError):
    """The 2x2 closed-form analysis needs acc_1 > acc_2 > rob_2 > rob_1."""


class AdversaryCase(enum.Enum):
    NEVER_ATTACK = "never_attack"  # case 1: ASR below break-even, idle is optimal
    ALWAYS_ATTACK = "always_attack"  # case 2: ASR above break-even, attack is optimal
    INDIFFERENT = "indifferent"  # case 3: exactly at break-even, any mix optimal


class DefenderCase(enum.Enum):
    ALWAYS_DEFEND = "always_defend"  # case A: hardened model 2 is optimal
    NEVER_DEFEND = "never_defend"  # case B: accurate model 1 is optimal
    INDIFFERENT = "indifferent"  # case C: exactly at break-even, any mix optimal


@dataclass(frozen=True)
class BestResponseSet:
    """Either one pure action or the whole simplex (under indifference)."""

    pure_index: int | None

    @classmethod
    def pure(cls, index: int) -> "BestResponseSet":
        return cls(pure_index=index)

    @classmethod
    def any_mix(cls) -> "BestResponseSet":
        return cls(pure_index=None)

    @property
    def is_any_mix(self) -> bool:
        return self.pure_index is None

    def contains(self, index: int) -> bool:
        return self.pure_index is None or self.pure_index == index


@dataclass(frozen=True, eq=False)
class MixedEquilibrium2x2:
    """The unique fully mixed equilibrium, when the interior conditions hold.

    ``residuals`` are the certified deviation-gain bounds (adversary,
    defender) measured against the full payoff matrices.
    """

    s_star: Strategy
    r_star: Strategy
    residuals: tuple[float, float]
    unique: bool = True


def _require_2x2(spec: GameSpec) -> None:
    if spec.n_models != 2 or spec.n_attacks != 2:
        raise DimensionError(
            f"closed-form analysis requires 2 models and 2 attack actions, "
            f"got {spec.n_models} and {spec.n_attacks}"
        )


def _require_ordered(spec: GameSpec) -> None:
    _require_2x2(spec)
    if not check_ordering_2x2(spec):
        raise OrderingError("ordering acc_1 > acc_2 > rob_2 > rob_1 does not hold")


def delta_acc(spec: GameSpec) -> float:
    """Clean-accuracy gap acc_1 - acc_2."""
    _require_2x2(spec)
    return spec.models[0].acc - spec.models[1].acc


def delta_rob(spec: GameSpec) -> float:
    """Robustness gap rob_2 - rob_1."""
    _require_2x2(spec)
    return float(spec.robustness[1, 0] - spec.robustness[0, 0])


def delta_ccr(spec: GameSpec, r: Strategy) -> float:
    """CCR gap of model 1 over model 2 against a mixed adversary action.

    Affine in the attack weight: dacc - r_1 * r_max * (dacc + drob).
    """
    _require_2x2(spec)
    if len(r) != 2:
        raise DimensionError("adversary strategy must have length 2")
    r1 = float(r.probs[0])
    da, dr = delta_acc(spec), delta_rob(spec)
    return da - r1 * spec.economics.r_max * (da + dr)


def adversary_case(spec: GameSpec, s: Strategy, eps: float = DEFAULT_EPS) -> AdversaryCase:
    """Which regime the adversary is in against defender mix ``s``."""
    _require_ordered(spec)
    gap = asr_mixed(spec, s, 0) - mu_adv(spec, 0)
    if gap < -eps:
        return AdversaryCase.NEVER_ATTACK
    if gap > eps:
        return AdversaryCase.ALWAYS_ATTACK
    return AdversaryCase.INDIFFERENT


def adversary_preconditions(spec: GameSpec) -> frozenset[AdversaryCase]:
    """Which adversary regimes are reachable for *some* defender mix.

    ASR(s) sweeps [1 - rob_2, 1 - rob_1] as s_1 runs over [0, 1], so each
    regime is reachable iff the break-even point sits on the right side of
    (or inside) that interval.
    """
    _require_ordered(spec)
    m = mu_adv(spec, 0)
    rob1 = float(spec.robustness[0, 0])
    rob2 = float(spec.robustness[1, 0])
    out = set()
    if 1.0 - m < rob2:
        out.add(AdversaryCase.NEVER_ATTACK)
    if rob1 < 1.0 - m:
        out.add(AdversaryCase.ALWAYS_ATTACK)
    if rob1 <= 1.0 - m <= rob2:
        out.add(AdversaryCase.INDIFFERENT)
    return frozenset(out)


def defender_case(spec: GameSpec, r: Strategy, eps: float = DEFAULT_EPS) -> DefenderCase:
    """Which regime the defender is in against adversary mix ``r``."""
    _require_ordered(spec)
    gap = delta_ccr(spec, r) - delta_mu_def(spec)
    if gap < -eps:
        return DefenderCase.ALWAYS_DEFEND
    if gap > eps:
        return DefenderCase.NEVER_DEFEND
    return DefenderCase.INDIFFERENT


def defender_preconditions(spec: GameSpec) -> frozenset[DefenderCase]:
    """Which defender regimes are reachable for *some* adversary mix."""
    _require_ordered(spec)
    t = defend_threshold(spec)
    r_max = spec.economics.r_max
    out = set()
    if t < r_max:
        out.add(DefenderCase.ALWAYS_DEFEND)
    if delta_mu_def(spec) < delta_acc(spec):
        out.add(DefenderCase.NEVER_DEFEND)
    if 0.0 <= t <= r_max:
        out.add(DefenderCase.INDIFFERENT)
    return frozenset(out)


def best_response_adv(spec: GameSpec, s: Strategy, eps: float = DEFAULT_EPS) -> BestResponseSet:
    """Adversary best response to defender mix ``s``: attack, idle, or any mix."""
    case = adversary_case(spec, s, eps)
    if case is AdversaryCase.ALWAYS_ATTACK:
        return BestResponseSet.pure(0)
    if case is AdversaryCase.NEVER_ATTACK:
        return BestResponseSet.pure(spec.no_attack_index)
    return BestResponseSet.any_mix()


def best_response_def(spec: GameSpec, r: Strategy, eps: float = DEFAULT_EPS) -> BestResponseSet:
    """Defender best response to adversary mix ``r``: model 1, model 2, or any mix."""
    case = defender_case(spec, r, eps)
    if case is DefenderCase.NEVER_DEFEND:
        return BestResponseSet.pure(0)
    if case is DefenderCase.ALWAYS_DEFEND:
        return BestResponseSet.pure(1)
    return BestResponseSet.any_mix()


def defend_threshold(spec: GameSpec) -> float:
    """Attack budget above which the hardened model enters the picture.

    Equals (dacc - dmu_def) / (dacc + drob); with equal ongoing model
    costs this reduces to dacc / (dacc + drob).  If ``r_max`` stays at or
    below this threshold the accurate model is a best response against
    every adversary mix, i.e. hardening cannot pay off.
    """
    _require_ordered(spec)
    da, dr = delta_acc(spec), delta_rob(spec)
    return (da - delta_mu_def(spec)) / (da + dr)


def mixed_nash_2x2(spec: GameSpec, eps: float = DEFAULT_EPS) -> MixedEquilibrium2x2 | None:
    """The unique fully mixed equilibrium, or None when it does not exist.

    Exists exactly when both indifference points are interior:
    ``rob_1 < 1 - mu_adv < rob_2`` and ``0 < t < r_max`` for the defend
    threshold ``t``.  Boundary equality produces no fully mixed point and
    returns None; so does ``r_max = 0``.  The returned strategies are
    certified against the full payoff matrices and the deviation gains
    are reported as residuals.
    """
    _require_ordered(spec)
    e = spec.economics
    if e.r_max <= 0.0:
        return None
    m = mu_adv(spec, 0)
    rob1 = float(spec.robustness[0, 0])
    rob2 = float(spec.robustness[1, 0])
    if not rob1 < 1.0 - m < rob2:
        return None
    t = defend_threshold(spec)
    if not 0.0 < t < e.r_max:
        return None
    s1 = (rob2 - 1.0 + m) / delta_rob(spec)
    r1 = t / e.r_max
    s_star = Strategy((s1, 1.0 - s1))
    r_star = Strategy((r1, 1.0 - r1))
    cert = verify_equilibrium(payoff_matrices(spec), s_star, r_star, tol=eps)
    return MixedEquilibrium2x2(
        s_star=s_star,
        r_star=r_star,
        residuals=(cert.adv_gain, cert.def_gain),
        unique=True,
    )


def ccr_intersection(spec: GameSpec, model_a: int, model_b: int, attack_index: int) -> float | None:
    """Perturbed fraction where two models' CCR lines against one attack cross.

    Returns the exact crossing point when it lies in [0, 1]; None when the
    lines are parallel or cross outside the unit interval.
    """
    from .core import _check_model_index, _require_real_attack

    _check_model_index(spec, model_a)
    _check_model_index(spec, model_b)
    _require_real_attack(spec, attack_index)
    dacc = spec.models[model_a].acc - spec.models[model_b].acc
    drob = float(spec.robustness[model_b, attack_index] - spec.robustness[model_a, attack_index])
    denom = dacc + drob
    if denom == 0.0:
        return None
    rho = dacc / denom
    if 0.0 <= rho <= 1.0:
        return rho
    return None
