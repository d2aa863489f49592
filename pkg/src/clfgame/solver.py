"""General bimatrix machinery over the payoff matrices.

Nothing here knows about accuracies or attack budgets: the functions take
:class:`~clfgame.payoff.PayoffMatrices` (defender = row player maximising
``u_def``, adversary = column player maximising ``u_adv``) and do plain
finite game theory on them:

* equilibrium enumeration over all support pairs, with post-hoc
  verification of every candidate;
* strict dominance, pure and by mixtures (the mixture certificates come
  from exact vertex enumeration of the max-min LP, so no LP solver
  dependency);
* iterated elimination of strictly dominated actions;
* the piecewise-linear upper envelope of per-model net-CCR lines, which
  is what a defender who can re-pick the model for every attack budget
  would sit on;
* a brute-force simplex-grid oracle used to cross-check the above.

Enumeration costs grow combinatorially, so the enumerating entry points
refuse games with more than ``MAX_ENUM_ACTIONS`` actions per side.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .core import DEFAULT_EPS, GameSpec, Strategy, _frozen_array
from .payoff import PayoffMatrices, mu_def

DEFAULT_TOL = DEFAULT_EPS
MAX_ENUM_ACTIONS = 12


class SolverGuardError(RuntimeError):
    """A combinatorial routine was asked to handle a game beyond its size guard."""


def _guard_size(n_rows: int, n_cols: int) -> None:
    if n_rows > MAX_ENUM_ACTIONS or n_cols > MAX_ENUM_ACTIONS:
        raise SolverGuardError(
            f"enumeration limited to {MAX_ENUM_ACTIONS} actions per side, "
            f"got {n_rows} x {n_cols}"
        )


@dataclass(frozen=True)
class EquilibriumCertificate:
    """Best pure-deviation gains of both players at a profile."""

    certified: bool
    adv_gain: float
    def_gain: float

    @property
    def max_gain(self) -> float:
        return max(self.adv_gain, self.def_gain)


def verify_equilibrium(
    m: PayoffMatrices, s: Strategy, r: Strategy, tol: float = DEFAULT_TOL
) -> EquilibriumCertificate:
    """Certify a profile by measuring each player's best deviation gain.

    The gains are ``max_j (s^T U_adv)_j - s^T U_adv r`` and
    ``max_i (U_def r)_i - s^T U_def r``; the profile is certified when
    both are at most ``tol``.  Gains are never meaningfully negative
    (mixing cannot beat the best pure response).
    """
    if len(s) != m.n_rows or len(r) != m.n_cols:
        raise ValueError(
            f"strategy lengths ({len(s)}, {len(r)}) do not match matrix shape "
            f"({m.n_rows}, {m.n_cols})"
        )
    adv_payoffs = s.probs @ m.u_adv
    def_payoffs = m.u_def @ r.probs
    adv_gain = float(adv_payoffs.max() - adv_payoffs @ r.probs)
    def_gain = float(def_payoffs.max() - s.probs @ def_payoffs)
    return EquilibriumCertificate(
        certified=adv_gain <= tol and def_gain <= tol,
        adv_gain=adv_gain,
        def_gain=def_gain,
    )


def pure_equilibria(m: PayoffMatrices, tol: float = DEFAULT_TOL) -> list[tuple[int, int]]:
    """All pure profiles that are mutual best responses within ``tol``."""
    col_best_def = m.u_def.max(axis=0)  # defender's best against each column
    row_best_adv = m.u_adv.max(axis=1)  # adversary's best against each row
    out = []
    for i in range(m.n_rows):
        for j in range(m.n_cols):
            if (
                m.u_def[i, j] >= col_best_def[j] - tol
                and m.u_adv[i, j] >= row_best_adv[i] - tol
            ):
                out.append((i, j))
    return out


@dataclass(frozen=True, eq=False)
class EquilibriumResult:
    """One verified equilibrium with its support and certification bound."""

    s: Strategy
    r: Strategy
    row_support: tuple[int, ...]
    col_support: tuple[int, ...]
    max_deviation_gain: float
    degenerate: bool


def _mixing_weights(
    a: np.ndarray,
    rows: tuple[int, ...],
    cols: tuple[int, ...],
    tol: float,
    res_tol: float,
):
    """Weights over ``rows`` of ``a`` equalising the opponent's payoff on ``cols``.

    Solves ``(x^T a)[j] = v`` for ``j in cols`` together with
    ``sum x = 1``.  Returns ``(x_full, degenerate)`` with ``x_full``
    strictly positive exactly on ``rows``, or None when the system is
    inconsistent or the solution leaves the simplex face.  Non-square or
    singular systems go through least squares (with a residual
    consistency check) and are flagged degenerate.
    """
    k, l = len(rows), len(cols)
    sub = a[np.ix_(rows, cols)]
    lhs = np.zeros((l + 1, k + 1))
    lhs[:l, :k] = sub.T
    lhs[:l, k] = -1.0
    lhs[l, :k] = 1.0
    rhs = np.zeros(l + 1)
    rhs[l] = 1.0

    degenerate = False
    if l == k:
        try:
            sol = np.linalg.solve(lhs, rhs)
        except np.linalg.LinAlgError:
            degenerate = True
            sol = np.linalg.lstsq(lhs, rhs, rcond=None)[0]
    else:
        degenerate = True
        sol = np.linalg.lstsq(lhs, rhs, rcond=None)[0]
    if degenerate and np.max(np.abs(lhs @ sol - rhs)) > res_tol:
        return None

    x = sol[:k]
    if np.any(x < -tol):
        return None
    x = np.clip(x, 0.0, None)
    total = x.sum()
    if total <= 0.0:
        return None
    x = x / total
    if np.any(x <= tol):
        # boundary solution; the smaller support enumerates it on its own
        return None
    x_full = np.zeros(a.shape[0])
    x_full[list(rows)] = x
    return x_full, degenerate


def support_enumeration(m: PayoffMatrices, tol: float = DEFAULT_TOL) -> list[EquilibriumResult]:
    """Enumerate equilibria over every pair of supports.

    For each pair (I, J) the defender mix on I must equalise the
    adversary's payoff across J and vice versa; candidates then pass
    off-support optimality checks and final certification.  Equal-size
    supports give square indifference systems; unequal sizes only admit
    solutions in degenerate games and are handled by least squares with a
    residual check.  Off-support payoff ties within ``tol`` also raise
    the degenerate flag.
    """
    n, mm = m.n_rows, m.n_cols
    _guard_size(n, mm)
    scale = max(1.0, float(np.abs(m.u_adv).max()), float(np.abs(m.u_def).max()))
    res_tol = max(tol, 1e-11 * scale)

    results: list[EquilibriumResult] = []
    for rows in _nonempty_subsets(n):
        for cols in _nonempty_subsets(mm):
            got_s = _mixing_weights(m.u_adv, rows, cols, tol, res_tol)
            if got_s is None:
                continue
            got_r = _mixing_weights(m.u_def.T, cols, rows, tol, res_tol)
            if got_r is None:
                continue
            s_full, deg_s = got_s
            r_full, deg_r = got_r
            degenerate = deg_s or deg_r

            adv_payoffs = s_full @ m.u_adv
            v_adv = adv_payoffs[list(cols)].max()
            def_payoffs = m.u_def @ r_full
            v_def = def_payoffs[list(rows)].max()

            ok = True
            for j in range(mm):
                if j in cols:
                    continue
                if adv_payoffs[j] > v_adv + tol:
                    ok = False
                    break
                if adv_payoffs[j] > v_adv - tol:
                    degenerate = True  # off-support tie
            if not ok:
                continue
            for i in range(n):
                if i in rows:
                    continue
                if def_payoffs[i] > v_def + tol:
                    ok = False
                    break
                if def_payoffs[i] > v_def - tol:
                    degenerate = True
            if not ok:
                continue

            s = Strategy(s_full)
            r = Strategy(r_full)
            cert = verify_equilibrium(m, s, r, tol)
            if not cert.certified:
                continue
            results.append(
                EquilibriumResult(
                    s=s,
                    r=r,
                    row_support=rows,
                    col_support=cols,
                    max_deviation_gain=cert.max_gain,
                    degenerate=degenerate,
                )
            )
    results.sort(key=lambda e: (e.row_support, e.col_support))
    return results


def _nonempty_subsets(size: int) -> list[tuple[int, ...]]:
    subsets = []
    for k in range(1, size + 1):
        subsets.extend(itertools.combinations(range(size), k))
    return subsets


# ---------------------------------------------------------------------------
# strict dominance


@dataclass(frozen=True, eq=False)
class ActionDominance:
    """Dominance status of one action, with its certificate when dominated.

    ``margin`` is the worst-case strict improvement of the certificate
    over the dominated action (the max-min mixture gap for undominated
    actions, where it is at most the tolerance; ``-inf`` for an action
    with no alternatives).
    """

    action: int
    status: str  # "undominated" | "pure_dominated" | "mixed_dominated"
    dominated_by: int | None = None
    mixture: np.ndarray | None = None
    margin: float = 0.0


@dataclass(frozen=True)
class DominanceReport:
    player: str  # "defender" | "adversary"
    actions: tuple[ActionDominance, ...]

    def dominated_actions(self) -> tuple[int, ...]:
        return tuple(a.action for a in self.actions if a.status != "undominated")


def _own_payoffs(m: PayoffMatrices, player: str) -> np.ndarray:
    if player == "defender":
        return np.asarray(m.u_def)
    if player == "adversary":
        return np.asarray(m.u_adv).T
    raise ValueError(f"unknown player {player!r}")


def _max_min_gap(g: np.ndarray) -> tuple[float, np.ndarray | None]:
    """Maximise over mixtures sigma the worst-column value of ``sigma^T g``.

    Exact vertex enumeration of the max-min LP: every optimal basic
    solution equalises the value across some column set of the same size
    as its support, so enumerating those square systems (plus the pure
    mixtures) and evaluating the true objective at each candidate reaches
    the optimum.
    """
    k, l = g.shape
    best_v = -np.inf
    best_sigma: np.ndarray | None = None
    for idx in range(k):
        v = float(g[idx].min())
        if v > best_v:
            sigma = np.zeros(k)
            sigma[idx] = 1.0
            best_v, best_sigma = v, sigma
    for size in range(2, k + 1):
        for support in itertools.combinations(range(k), size):
            sub = g[list(support), :]
            for cols in itertools.combinations(range(l), size):
                lhs = np.zeros((size + 1, size + 1))
                lhs[:size, :size] = sub[:, list(cols)].T
                lhs[:size, size] = -1.0
                lhs[size, :size] = 1.0
                rhs = np.zeros(size + 1)
                rhs[size] = 1.0
                try:
                    sol = np.linalg.solve(lhs, rhs)
                except np.linalg.LinAlgError:
                    continue
                w = sol[:size]
                if np.any(w < -1e-12):
                    continue
                w = np.clip(w, 0.0, None)
                total = w.sum()
                if total <= 0.0:
                    continue
                sigma = np.zeros(k)
                sigma[list(support)] = w / total
                v = float((sigma @ g).min())
                if v > best_v:
                    best_v, best_sigma = v, sigma
    return best_v, best_sigma


def dominance_report(m: PayoffMatrices, player: str, tol: float = DEFAULT_TOL) -> DominanceReport:
    """Classify each of one player's actions as undominated or strictly dominated.

    Pure dominators are preferred when they exist (and are themselves
    degenerate mixtures, so a pure-dominated action is in particular
    mixed-dominated); otherwise a strictly dominating mixture over the
    remaining actions is searched for.  Every reported certificate beats
    the dominated action by more than ``tol`` against each opponent pure
    action.
    """
    p = _own_payoffs(m, player)
    k, l = p.shape
    _guard_size(k, l)
    entries: list[ActionDominance] = []
    for action in range(k):
        others = [i for i in range(k) if i != action]
        if not others:
            entries.append(ActionDominance(action=action, status="undominated", margin=-np.inf))
            continue
        diffs = p[others] - p[action]
        worst = diffs.min(axis=1)
        best = int(np.argmax(worst))
        if worst[best] > tol:
            mixture = np.zeros(k)
            mixture[others[best]] = 1.0
            entries.append(
                ActionDominance(
                    action=action,
                    status="pure_dominated",
                    dominated_by=others[best],
                    mixture=_frozen_array(mixture),
                    margin=float(worst[best]),
                )
            )
            continue
        v, sigma_others = _max_min_gap(diffs)
        if v > tol and sigma_others is not None:
            mixture = np.zeros(k)
            mixture[others] = sigma_others
            entries.append(
                ActionDominance(
                    action=action,
                    status="mixed_dominated",
                    mixture=_frozen_array(mixture),
                    margin=float(v),
                )
            )
        else:
            entries.append(ActionDominance(action=action, status="undominated", margin=float(v)))
    return DominanceReport(player=player, actions=tuple(entries))


@dataclass(frozen=True, eq=False)
class EliminationStep:
    player: str
    action: int  # original index
    status: str  # "pure_dominated" | "mixed_dominated"
    dominated_by: int | None = None  # original index
    margin: float = 0.0


@dataclass(frozen=True, eq=False)
class EliminationResult:
    reduced: PayoffMatrices
    rows: tuple[int, ...]  # surviving original row indices
    cols: tuple[int, ...]
    trace: tuple[EliminationStep, ...]


def iterated_elimination(m: PayoffMatrices, tol: float = DEFAULT_TOL) -> EliminationResult:
    """Remove strictly dominated actions (mixed dominance) until a fixpoint.

    Strict dominance makes the survivor set independent of removal order,
    so all of a player's dominated actions fall in one sweep.  The trace
    records every removal in original indices.
    """
    _guard_size(m.n_rows, m.n_cols)
    rows = list(range(m.n_rows))
    cols = list(range(m.n_cols))
    trace: list[EliminationStep] = []
    changed = True
    while changed:
        changed = False
        for player in ("defender", "adversary"):
            live = rows if player == "defender" else cols
            if len(live) <= 1:
                continue
            sub = PayoffMatrices(
                u_adv=m.u_adv[np.ix_(rows, cols)],
                u_def=m.u_def[np.ix_(rows, cols)],
            )
            report = dominance_report(sub, player, tol)
            doomed = [a for a in report.actions if a.status != "undominated"]
            if not doomed:
                continue
            for a in doomed:
                trace.append(
                    EliminationStep(
                        player=player,
                        action=live[a.action],
                        status=a.status,
                        dominated_by=None if a.dominated_by is None else live[a.dominated_by],
                        margin=a.margin,
                    )
                )
            for a in sorted((a.action for a in doomed), reverse=True):
                del live[a]
            changed = True
    reduced = PayoffMatrices(
        u_adv=m.u_adv[np.ix_(rows, cols)],
        u_def=m.u_def[np.ix_(rows, cols)],
    )
    return EliminationResult(
        reduced=reduced, rows=tuple(rows), cols=tuple(cols), trace=tuple(trace)
    )


# ---------------------------------------------------------------------------
# upper envelope of per-model net-CCR lines


@dataclass(frozen=True)
class EnvelopeSegment:
    rho_start: float
    rho_end: float
    model_index: int


@dataclass(frozen=True)
class EnvelopeBreakpoint:
    rho: float
    models: tuple[int, ...]  # every line through the breakpoint, lowest first


@dataclass(frozen=True)
class EnvelopeSegments:
    """Piecewise-linear upper envelope over the attack budget [0, r_max]."""

    segments: tuple[EnvelopeSegment, ...]
    breakpoints: tuple[EnvelopeBreakpoint, ...]
    attack_index: int
    r_max: float


def upper_envelope_ccr(
    spec: GameSpec, attack_index: int, tol: float = DEFAULT_TOL
) -> EnvelopeSegments:
    """Which model maximises net CCR at each attack budget rho in [0, r_max].

    Each model contributes the line ``f_i(rho) = ccr_i(rho) - mu_def_i``;
    the envelope's exact breakpoints come from pairwise line
    intersections (no sampling).  Ties go to the lower model index, and a
    breakpoint where several lines meet is reported once with all
    participants.
    """
    if not spec.is_real_attack(attack_index):
        raise ValueError("envelope is defined against a real attack")
    n = spec.n_models
    r_max = spec.economics.r_max
    acc = np.array([mdl.acc for mdl in spec.models])
    rob = np.asarray(spec.robustness[:, attack_index], dtype=float)
    mu = np.array([mu_def(spec, i) for i in range(n)])
    intercepts = acc - mu
    slopes = rob - acc

    def values(rho: float) -> np.ndarray:
        return intercepts + slopes * rho

    if r_max == 0.0:
        winner = int(np.argmax(intercepts))
        return EnvelopeSegments(
            segments=(EnvelopeSegment(0.0, 0.0, winner),),
            breakpoints=(),
            attack_index=attack_index,
            r_max=r_max,
        )

    candidates = {0.0, r_max}
    for i in range(n):
        for j in range(i + 1, n):
            if slopes[i] == slopes[j]:
                continue
            x = (intercepts[j] - intercepts[i]) / (slopes[i] - slopes[j])
            if 0.0 < x < r_max:
                candidates.add(float(x))
    xs = sorted(candidates)

    # winner of each non-empty interval between adjacent candidates, plus the
    # interval's left endpoint (the fallback breakpoint if lines are parallel)
    winners: list[int] = []
    interval_starts: list[float] = []
    for x0, x1 in zip(xs[:-1], xs[1:]):
        if x1 <= x0:
            continue
        winners.append(int(np.argmax(values(0.5 * (x0 + x1)))))
        interval_starts.append(x0)

    segments: list[EnvelopeSegment] = []
    breakpoints: list[EnvelopeBreakpoint] = []
    tie_tol = max(tol, 1e-12 * max(1.0, float(np.abs(intercepts).max() + np.abs(slopes).max())))
    start = 0.0
    current = winners[0]
    for idx in range(1, len(winners)):
        nxt = winners[idx]
        if nxt == current:
            continue
        denom = slopes[current] - slopes[nxt]
        if denom == 0.0:
            x_star = interval_starts[idx]
        else:
            x_star = float((intercepts[nxt] - intercepts[current]) / denom)
        segments.append(EnvelopeSegment(start, x_star, current))
        vals = values(x_star)
        top = vals.max()
        participants = tuple(int(i) for i in range(n) if vals[i] >= top - tie_tol)
        breakpoints.append(EnvelopeBreakpoint(rho=x_star, models=participants))
        start = x_star
        current = nxt
    segments.append(EnvelopeSegment(start, r_max, current))
    return EnvelopeSegments(
        segments=tuple(segments),
        breakpoints=tuple(breakpoints),
        attack_index=attack_index,
        r_max=r_max,
    )


# ---------------------------------------------------------------------------
# brute-force grid oracle


@dataclass(frozen=True, eq=False)
class GridProfile:
    s: np.ndarray
    r: np.ndarray
    gain: float


def simplex_grid(dim: int, divisions: int) -> np.ndarray:
    """All points of the probability simplex with coordinates k/divisions."""
    if dim < 1 or divisions < 1:
        raise ValueError("dim and divisions must be positive")
    points: list[list[int]] = []

    def rec(prefix: list[int], remaining: int, slots: int) -> None:
        if slots == 1:
            points.append(prefix + [remaining])
            return
        for v in range(remaining + 1):
            rec(prefix + [v], remaining - v, slots - 1)

    rec([], divisions, dim)
    return np.array(points, dtype=float) / divisions


def grid_equilibrium_scan(
    m: PayoffMatrices,
    step: float = 0.005,
    gain_tol: float | None = None,
    chunk: int = 1024,
) -> list[GridProfile]:
    """Scan both strategy simplices on a grid for mutual near-best responses.

    With ``gain_tol`` given, returns every grid profile whose maximum
    deviation gain is at most the tolerance; otherwise just the single
    best grid profile.  Purely a cross-checking oracle: cost is the
    product of both grid sizes.
    """
    divisions = max(1, round(1.0 / step))
    counts = [_simplex_count(m.n_rows, divisions), _simplex_count(m.n_cols, divisions)]
    if max(counts) > 200_000:
        raise SolverGuardError(
            f"grid of {counts} points per side is beyond the scan guard; "
            "use a coarser step"
        )
    s_grid = simplex_grid(m.n_rows, divisions)
    r_grid = simplex_grid(m.n_cols, divisions)

    su = s_grid @ m.u_adv  # (P, M): adversary payoff per column under each s
    adv_best = su.max(axis=1)
    ur = m.u_def @ r_grid.T  # (N, Q): defender payoff per row under each r
    def_best = ur.max(axis=0)

    out: list[GridProfile] = []
    best: tuple[float, int, int] | None = None
    for lo in range(0, s_grid.shape[0], chunk):
        hi = min(lo + chunk, s_grid.shape[0])
        adv_cur = su[lo:hi] @ r_grid.T
        def_cur = s_grid[lo:hi] @ ur
        gains = np.maximum(
            adv_best[lo:hi, None] - adv_cur,
            def_best[None, :] - def_cur,
        )
        if gain_tol is None:
            flat = int(np.argmin(gains))
            p, q = divmod(flat, gains.shape[1])
            g = float(gains[p, q])
            if best is None or g < best[0]:
                best = (g, lo + p, q)
        else:
            for p, q in np.argwhere(gains <= gain_tol):
                out.append(
                    GridProfile(
                        s=s_grid[lo + p].copy(),
                        r=r_grid[q].copy(),
                        gain=float(gains[p, q]),
                    )
                )
    if gain_tol is None and best is not None:
        g, p, q = best
        out.append(GridProfile(s=s_grid[p].copy(), r=r_grid[q].copy(), gain=g))
    return out


def _simplex_count(dim: int, divisions: int) -> int:
    import math

    return math.comb(divisions + dim - 1, dim - 1)
