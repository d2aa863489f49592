"""Shared spec builders and randomized-instance generators for the tests.

The random generators all build games with explicit margins away from the
case boundaries, so tolerance-based classification and witness scans are
deterministic for the sampled instances.
"""

from __future__ import annotations

import numpy as np
import pytest

from clfgame.core import (
    AttackAction,
    EconomicParams,
    GameSpec,
    ModelProfile,
    no_attack_action,
)
from clfgame.analytic import AdversaryCase, DefenderCase


def make_spec(
    acc,
    rob,
    *,
    model_costs=None,
    attack_costs=None,
    model_names=None,
    r_plus_def=1.0,
    r_minus_def=0.0,
    r_plus_adv=1.0,
    r_minus_adv=0.0,
    i_def=0.0,
    i_adv=0.0,
    n=1,
    r_max=1.0,
) -> GameSpec:
    rob = np.asarray(rob, dtype=float)
    if rob.ndim == 1:
        rob = rob.reshape(-1, 1)
    n_models = len(acc)
    n_real = rob.shape[1]
    model_costs = model_costs if model_costs is not None else [0.0] * n_models
    attack_costs = attack_costs if attack_costs is not None else [0.0] * n_real
    model_names = model_names if model_names is not None else [f"m{i}" for i in range(n_models)]
    models = tuple(
        ModelProfile(name=model_names[i], acc=float(acc[i]), ongoing_cost=float(model_costs[i]))
        for i in range(n_models)
    )
    attacks = tuple(
        AttackAction(name=f"atk{j}", ongoing_cost=float(attack_costs[j])) for j in range(n_real)
    ) + (no_attack_action(),)
    econ = EconomicParams(
        r_plus_def=r_plus_def,
        r_minus_def=r_minus_def,
        r_plus_adv=r_plus_adv,
        r_minus_adv=r_minus_adv,
        i_def=i_def,
        i_adv=i_adv,
        n=n,
        r_max=r_max,
    )
    return GameSpec(models=models, attacks=attacks, robustness=rob, economics=econ)


MADRY_ACC = (0.952, 0.873)
MADRY_ROB = ((0.035,), (0.458,))

SHAFAHI_ACC = (0.9501, 0.9145, 0.8783, 0.8596, 0.8394)
SHAFAHI_ROB = ((0.0,), (0.3392,), (0.4115,), (0.4682,), (0.4631,))
SHAFAHI_NAMES = ("standard", "free_m2", "free_m4", "free_m8", "free_m10")


def madry_spec(**kwargs) -> GameSpec:
    kwargs.setdefault("model_names", ["standard", "adv_trained"])
    return make_spec(MADRY_ACC, MADRY_ROB, **kwargs)


def shafahi_spec(**kwargs) -> GameSpec:
    kwargs.setdefault("model_names", list(SHAFAHI_NAMES))
    return make_spec(SHAFAHI_ACC, SHAFAHI_ROB, **kwargs)


def demo_mixed_spec() -> GameSpec:
    """Hand-checked 2x2 game whose unique equilibrium mixes both sides.

    Break-even ASR is 0.5, the defend threshold is 0.2 and the budget is
    0.45, so the equilibrium is s = (1/2, 1/2), r = (4/9, 5/9).
    """
    return make_spec(
        [0.95, 0.85],
        [[0.3], [0.7]],
        r_plus_adv=1.0,
        r_minus_adv=1.0,
        r_plus_def=1.0,
        r_minus_def=0.0,
        n=1,
        r_max=0.45,
    )


# ---------------------------------------------------------------------------
# randomized generators


def ordered_quadruple(rng, lo=0.02, hi=0.98, min_gap=0.05):
    """rob_1 < rob_2 < acc_2 < acc_1 with every gap at least ``min_gap``."""
    while True:
        v = np.sort(rng.uniform(lo, hi, 4))
        if np.diff(v).min() >= min_gap:
            return float(v[0]), float(v[1]), float(v[2]), float(v[3])


def realize_mu_adv(rng, mu):
    """Rewards and attack cost whose break-even ASR equals ``mu`` (0 <= mu < 1)."""
    if mu < 1.0 and rng.random() < 0.5:
        r_minus = rng.uniform(0.0, min(1.0, mu / (1.0 - mu))) if mu > 0 else 0.0
    else:
        r_minus = 0.0
    r_plus = 1.0
    o_att = mu * (r_plus + r_minus) - r_minus
    c = rng.uniform(0.5, 2.0)
    return r_plus * c, r_minus * c, max(o_att, 0.0) * c


def realize_delta_mu_def(rng, dmu):
    """Defender rewards and model costs whose break-even gap equals ``dmu``."""
    r_minus = rng.uniform(0.0, 0.5)
    denom = 1.0 + r_minus
    o2 = rng.uniform(0.0, 0.2)
    o1 = o2 + dmu * denom
    if o1 < 0.0:
        o2 -= o1
        o1 = 0.0
    c = rng.uniform(0.5, 2.0)
    return 1.0 * c, r_minus * c, o1 * c, o2 * c


def interior_2x2(rng) -> GameSpec:
    """Ordered 2x2 spec where the fully mixed equilibrium exists, with margins."""
    rob1, rob2, acc2, acc1 = ordered_quadruple(rng)
    drob = rob2 - rob1
    dacc = acc1 - acc2
    inv = rob1 + (0.1 + 0.8 * rng.random()) * drob  # 1 - mu_adv, strictly interior
    r_plus_adv, r_minus_adv, o_att = realize_mu_adv(rng, 1.0 - inv)
    t_hat = rng.uniform(0.05, 0.85)
    r_max = rng.uniform(t_hat + 0.05, 1.0)
    dmu = dacc - t_hat * (dacc + drob)
    r_plus_def, r_minus_def, o1, o2 = realize_delta_mu_def(rng, dmu)
    return make_spec(
        [acc1, acc2],
        [[rob1], [rob2]],
        model_costs=[o1, o2],
        attack_costs=[o_att],
        r_plus_def=r_plus_def,
        r_minus_def=r_minus_def,
        r_plus_adv=r_plus_adv,
        r_minus_adv=r_minus_adv,
        i_def=float(rng.uniform(0, 2)),
        i_adv=float(rng.uniform(0, 2)),
        n=int(rng.integers(1, 21)),
        r_max=r_max,
    )


ADV_ALL = frozenset(
    {AdversaryCase.NEVER_ATTACK, AdversaryCase.ALWAYS_ATTACK, AdversaryCase.INDIFFERENT}
)
DEF_ALL = frozenset(
    {DefenderCase.ALWAYS_DEFEND, DefenderCase.NEVER_DEFEND, DefenderCase.INDIFFERENT}
)


def case_2x2(rng):
    """Ordered 2x2 spec plus its exact satisfiable case sets, margin 0.02.

    Returns (spec, adversary case set, defender case set).  Margins keep
    the break-even points at least 0.02 away from the relevant interval
    endpoints (in ASR units for the adversary, defend-threshold units for
    the defender), so a fine strategy grid can confirm the sets by
    witness search without boundary ambiguity.
    """
    d = 0.02
    rob1, rob2, acc2, acc1 = ordered_quadruple(rng, lo=0.1, hi=0.95, min_gap=0.08)
    drob = rob2 - rob1
    dacc = acc1 - acc2

    adv_kind = int(rng.integers(3))
    if adv_kind == 0:
        inv = rng.uniform(0.005, rob1 - d)
        adv_set = frozenset({AdversaryCase.NEVER_ATTACK})
    elif adv_kind == 1:
        inv = rng.uniform(rob1 + d, rob2 - d)
        adv_set = ADV_ALL
    else:
        inv = rng.uniform(rob2 + d, 0.999)
        adv_set = frozenset({AdversaryCase.ALWAYS_ATTACK})
    r_plus_adv, r_minus_adv, o_att = realize_mu_adv(rng, 1.0 - float(inv))

    def_kind = int(rng.integers(3))
    if def_kind == 0:
        t_hat = rng.uniform(-0.5, -d)
        r_max = rng.uniform(0.3, 1.0)
        def_set = frozenset({DefenderCase.ALWAYS_DEFEND})
    elif def_kind == 1:
        r_max = rng.uniform(0.3, 1.0)
        t_hat = rng.uniform(d, r_max - d)
        def_set = DEF_ALL
    else:
        r_max = rng.uniform(0.3, 0.7)
        t_hat = rng.uniform(r_max + d, r_max + 0.5)
        def_set = frozenset({DefenderCase.NEVER_DEFEND})
    dmu = dacc - float(t_hat) * (dacc + drob)
    r_plus_def, r_minus_def, o1, o2 = realize_delta_mu_def(rng, dmu)

    spec = make_spec(
        [acc1, acc2],
        [[rob1], [rob2]],
        model_costs=[o1, o2],
        attack_costs=[o_att],
        r_plus_def=r_plus_def,
        r_minus_def=r_minus_def,
        r_plus_adv=r_plus_adv,
        r_minus_adv=r_minus_adv,
        n=1,
        r_max=float(r_max),
    )
    return spec, adv_set, def_set


def general_spec(rng, n_models=None, n_attacks=None, r_max_16ths=False) -> GameSpec:
    """Random valid spec of small shape; no ordering assumptions."""
    n_models = n_models if n_models is not None else int(rng.integers(1, 4))
    n_attacks = n_attacks if n_attacks is not None else int(rng.integers(2, 4))
    if r_max_16ths:
        r_max = float(rng.integers(0, 17)) / 16.0
    else:
        r_max = float(rng.uniform(0.0, 1.0))
    return make_spec(
        rng.uniform(0.05, 0.95, n_models),
        rng.uniform(0.05, 0.95, (n_models, n_attacks - 1)),
        model_costs=rng.uniform(0.0, 0.3, n_models),
        attack_costs=rng.uniform(0.0, 0.3, n_attacks - 1),
        r_plus_def=float(rng.uniform(0.2, 2.0)),
        r_minus_def=float(rng.uniform(0.2, 2.0)),
        r_plus_adv=float(rng.uniform(0.2, 2.0)),
        r_minus_adv=float(rng.uniform(0.2, 2.0)),
        i_def=float(rng.uniform(0.0, 3.0)),
        i_adv=float(rng.uniform(0.0, 3.0)),
        n=int(rng.integers(1, 11)),
        r_max=r_max,
    )


def random_strategy(rng, size: int):
    from clfgame.core import Strategy

    return Strategy(rng.dirichlet(np.ones(size)))


@pytest.fixture
def rng():
    return np.random.default_rng(20260816)
