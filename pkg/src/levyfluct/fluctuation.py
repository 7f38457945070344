"""Closed-form fluctuation identities of the killed process.

Every function here is a pure function of a :class:`ScaleEvaluator`, expressed
through w, w_prime, z, z_prime only, so each catalog model automatically gets
each identity.  All results are probabilities (or Laplace transforms of
passage indicators) in [0, 1]; final values are clamped to [0, 1] within the
evaluator's numerical slack, while genuinely invalid arguments raise.

Notation: the process starts at x inside a window, tau_b+ / tau_0- are the
first passage times above b / below 0, and T is the independent exponential
killing time with rate gamma.
"""
from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class Window:
    """Two-sided level window a < 0 < b around the starting point."""

    a: float
    b: float

    def __post_init__(self):
        if not (self.a < 0.0 < self.b):
            raise ValueError(f"window requires a < 0 < b, got a={self.a}, b={self.b}")


def _clamp01(value, slack):
    if -slack <= value < 0.0:
        return 0.0
    if 1.0 < value <= 1.0 + slack:
        return 1.0
    return value


def exit_up_lt(ev, x, b):
    """E_x[exp(-gamma tau_b+); tau_b+ < tau_0-] = W(x) / W(b)."""
    if not b > 0.0:
        raise ValueError(f"exit_up_lt requires b > 0, got b={b}")
    if not 0.0 <= x <= b:
        raise ValueError(f"exit_up_lt requires 0 <= x <= b, got x={x}, b={b}")
    if x == b:
        return 1.0
    return _clamp01(ev.w(x) / ev.w(b), ev.prob_slack)


def exit_down_lt(ev, x, b):
    """E_x[exp(-gamma tau_0-); tau_0- < tau_b+] = Z(x) - Z(b) W(x)/W(b)."""
    if not b > 0.0:
        raise ValueError(f"exit_down_lt requires b > 0, got b={b}")
    if not 0.0 <= x <= b:
        raise ValueError(f"exit_down_lt requires 0 <= x <= b, got x={x}, b={b}")
    return _clamp01(ev.z(x) - ev.z(b) * ev.w(x) / ev.w(b), ev.prob_slack)


def one_sided_down_lt(ev, x):
    """E_x[exp(-gamma tau_0-); tau_0- < inf] = Z(x) - (gamma/phi) W(x)."""
    if not x >= 0.0:
        raise ValueError(f"one_sided_down_lt requires x >= 0, got x={x}")
    return _clamp01(ev.z(x) - (ev.gamma / ev.phi) * ev.w(x), ev.prob_slack)


def killed_in_window(ev, u, span):
    """P_u(T before either exit of [0, span]) for 0 <= u <= span.

    The survival probability of the killed two-sided exit problem,
    1 - Z(u) + [Z(span) - 1] W(u) / W(span); complements the two exit
    transforms exactly.
    """
    if not span > 0.0:
        raise ValueError(f"killed_in_window requires span > 0, got {span}")
    if not 0.0 <= u <= span:
        raise ValueError(
            f"killed_in_window requires 0 <= u <= span, got u={u}, span={span}")
    return _clamp01(
        1.0 - ev.z(u) + (ev.z(span) - 1.0) * ev.w(u) / ev.w(span), ev.prob_slack)


def killed_before_down(ev, x):
    """P_x(T < tau_0-), the chance the clock rings before passage below 0.

    Complements :func:`one_sided_down_lt` exactly.
    """
    return 1.0 - one_sided_down_lt(ev, x)


def killed_before_up(ev, z):
    """P(T < tau_z+) = 1 - exp(-phi * z) for z >= 0.

    Also the distribution function of the overall supremum of the killed
    path, which is exponential with parameter phi(gamma).
    """
    if not z >= 0.0:
        raise ValueError(f"killed_before_up requires z >= 0, got z={z}")
    return -math.expm1(-ev.phi * z)


def killed_before_exit(ev, z, a, b):
    """Survival weight of the post-supremum section at depth z below b.

    For the reflected (spectrally positive) section run inside the window
    [a, b]: the probability, starting z below the supremum, that the clock
    rings before the section either returns to the supremum or falls to a.
    Zero at both ends z = 0 and z = b - a.
    """
    span = b - a
    if not 0.0 <= z <= span:
        raise ValueError(
            f"killed_before_exit requires 0 <= z <= b - a, got z={z}, b-a={span}")
    return killed_in_window(ev, span - z, span)


def joint_sup_inf_cdf(ev, win):
    """P_0(a < infimum before T, supremum before T < b) for a < 0 < b.

    The joint law of the running extremes of the killed path:
    1 - Z(-a) + [Z(b-a) - 1] W(-a) / W(b-a).
    """
    if not isinstance(win, Window):
        win = Window(*win)
    return killed_in_window(ev, -win.a, win.b - win.a)


def post_inf_sup_cdf(ev, a, b):
    """Conditional law of the supremum after the last visit to the infimum.

    P(sup of the post-infimum section <= b | infimum = a), a function of
    b - a only: phi * (Z(b-a) - 1) / (gamma * W(b-a)).
    """
    span = b - a
    if not span > 0.0:
        raise ValueError(f"post_inf_sup_cdf requires b > a, got b-a={span}")
    return _clamp01(ev.phi * (ev.z(span) - 1.0) / (ev.gamma * ev.w(span)),
                    ev.prob_slack)


def max_loss_post_sup_cdf(ev, d, a, b):
    """Conditional law of the largest drawdown after the last supremum time.

    P(max loss of the post-supremum section < d | infimum before supremum,
    infimum = a, supremum = b), for 0 < d < b - a.  A function of (d, b - a):

        1 - g(d) * [Z'(d) - Z(d) W'(d)/W(d)]
                 / [-Z'(s) + (Z(s) - 1) W'(s)/W(s)],    s = b - a,

    with g(d) = killed_in_window(s - d, s).  Both bracketed factors are
    negative; their ratio is a positive weight.
    """
    span = b - a
    if not 0.0 < d < span:
        raise ValueError(
            f"max_loss_post_sup_cdf requires 0 < d < b - a, got d={d}, b-a={span}")
    g = killed_in_window(ev, span - d, span)
    numer = ev.z_prime(d) - ev.z(d) * ev.w_prime(d) / ev.w(d)
    denom = -ev.z_prime(span) + (ev.z(span) - 1.0) * ev.w_prime(span) / ev.w(span)
    return _clamp01(1.0 - g * numer / denom, ev.prob_slack)


def exit_up_lt_from_min(ev, x, i, b):
    """Two-sided exit-up transform rebased at the running minimum i.

    E[exp(-gamma tau_b+); tau_b+ before passage below i], starting from x
    with i <= x <= b.  Identically exit_up_lt(x - i, b - i).
    """
    if not i <= x <= b:
        raise ValueError(
            f"exit_up_lt_from_min requires i <= x <= b, got i={i}, x={x}, b={b}")
    return exit_up_lt(ev, x - i, b - i)
