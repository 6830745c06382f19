"""Named operators used throughout the examples and the corpus."""

from functools import lru_cache

from .dfinite import (LinDiffOp, conjugate_op, hadamard_op, hypergeometric_op, pullback_op)
from .poly import RatFunc, UPoly
from .rational import Q

X = UPoly.x()


def _second_order(c0, c1, den):
    """``D^2 + (c1/den) D + c0/den`` cleared of denominators."""
    return LinDiffOp([UPoly(c0), UPoly(c1), UPoly(den)])


# Heun-type operators whose modular pullbacks give omega_5 .. omega_9
_HEUN = {
    5: _second_order((-3, -3), (1, -66, -32), (0, 1, -44, -16)),
    6: LinDiffOp([UPoly((-10, 1)), UPoly((4, -204, 8)), UPoly((0, 4, -136, 4))]),
    7: _second_order((-2, -6), (1, -39, -54), (UPoly((1, -27)) * UPoly((1, 1)) * X).coeffs),
    8: _second_order((-2, 4), (1, -36, 32), (0, 1, -24, 16)),
    9: LinDiffOp([UPoly((-6, -27)), UPoly((4, -108, -216)), UPoly((0, 4, -72, -108))]),
}

# (c_n denominator P_n, rho_n exponent, rescaling a_n):  c_n(x) = x / P_n(x), rho_n = P_n^e
_PULLBACK = {
    5: (UPoly((125, 22, 1)), Q(1, 4), 2 ** 3 * 5 ** 3),
    6: (UPoly((72, 17, 1)), Q(1, 2), 2 ** 3 * 3 ** 2),
    7: (UPoly((49, 13, 1)), Q(1, 3), 7 ** 2 * 3 ** 2),
    8: (UPoly((32, 12, 1)), Q(1, 2), 2 ** 5),
    9: (UPoly((27, 9, 1)), Q(1, 2), 3 ** 3),
}


def heun_modular(n):
    return _HEUN[n]


@lru_cache(maxsize=None)
def omega(n):
    """Order-two operator of the weight-one modular form attached to ``tau -> n tau``."""
    if n == 2:
        return _second_order((4,), (1, 96), (0, 1, 64))
    if n == 3:
        return _second_order((3,), (1, 45), (0, 1, 27))
    if n == 4:
        return hypergeometric_op([Q(1, 2), Q(1, 2)], [1], -16)
    if n not in _PULLBACK:
        raise KeyError("omega_%d is not tabulated" % n)
    P, e, a = _PULLBACK[n]
    Pa = P.scale_var(a)
    L = pullback_op(_HEUN[n], RatFunc(UPoly((0, a)), Pa))
    return conjugate_op(L, RatFunc(Pa.derivative() * (-e), Pa))


@lru_cache(maxsize=None)
def hadamard_omega(m, n, max_order=6, max_degree=12):
    """Minimal operator of the Hadamard product of the analytic solutions of ``omega(m)``, ``omega(n)``."""
    m, n = min(m, n), max(m, n)
    rep = hadamard_op(omega(m), omega(n), max_order, max_degree)
    if rep.operator is None:
        raise ValueError("no operator found for H_%d,%d within the bounds" % (m, n))
    return rep.operator


def B1():
    return LinDiffOp.from_theta_text(
        "t^4 - 3*x*(7*t^2+7*t+2)*(3*t+1)*(3*t+2) - 72*x^2*(3*t+5)*(3*t+4)*(3*t+2)*(3*t+1)")


def B2():
    return LinDiffOp.from_theta_text(
        "t^4 - 4*x*(5*t^2+5*t+2)*(2*t+1)^2 + 64*x^2*(2*t+3)*(2*t+1)*(2*t+2)^2")


def calB2():
    return LinDiffOp.from_theta_text(
        "256*x^2*t^2*(2*t+3)*(2*t+1) - 4*x*(2*t+1)*(2*t-1)*(5*t^2-5*t+2) + (t-1)^4")


def M4(mu):
    mu = Q(mu)
    return LinDiffOp.from_theta({
        0: UPoly((0, 0, 16)) * UPoly((-1, 1)) ** 2,
        1: -(UPoly((1, 2)) ** 2 * UPoly((-1 + mu, 2)) * UPoly((-1 - mu, 2))),
    })


def C(mu):
    mu = Q(mu)
    return LinDiffOp.from_theta({
        0: UPoly((0, 0, 16)) * UPoly((-1, 1)) ** 2,
        1: -(UPoly((1 - mu, 2)) * UPoly((1 + mu, 2)) * UPoly((-1 - mu, 2)) * UPoly((-1 + mu, 2))),
    })


def franel_op():
    """``x * Omega`` annihilating ``sum_k binom(n, k)^3``."""
    return LinDiffOp.from_theta_text("t^2 - x*(7*t^2+7*t+2) - 8*x^2*(t+1)^2")


def hyp_4f3_half():
    return hypergeometric_op([Q(1, 2)] * 4, [1, 1, 1], 256)


def hyp_ksaoud():
    return hypergeometric_op([Q(1, 2), Q(1, 3), Q(1, 4), Q(3, 4)], [1, 1, 1], 2304)


NAMED = {
    "B1": B1,
    "B2": B2,
    "calB2": calB2,
    "franel": franel_op,
    "4F3_half": hyp_4f3_half,
    "ksaoud": hyp_ksaoud,
}


def named_operator(name):
    """Look up ``omega5``, ``H4,4``, ``M4(2)``, ``C(1/3)``, ``B2`` and the like."""
    name = name.strip()
    if name in NAMED:
        return NAMED[name]()
    if name.startswith("omega"):
        return omega(int(name[5:]))
    if name.startswith("H") and "," in name:
        m, n = name[1:].split(",")
        return hadamard_omega(int(m), int(n))
    for prefix, fn in (("M4(", M4), ("C(", C)):
        if name.startswith(prefix) and name.endswith(")"):
            return fn(Q(name[len(prefix):-1]))
    raise KeyError("unknown operator %r" % name)
