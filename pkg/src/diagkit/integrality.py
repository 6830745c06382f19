"""Global boundedness of rational series, read off the denominators of a finite window."""

import math
from dataclasses import dataclass, field

from .rational import ONE, Q, is_probable_prime, valuation

GLOBALLY_BOUNDED = "GloballyBoundedWith"
LIKELY_NOT = "LikelyNotGloballyBounded"
LOG_BOUNDED = "LogarithmicallyBounded"
INCONCLUSIVE = "Inconclusive"


def factor_integer(m, trial_bound=100000):
    """``(primes, opaque)``: ``primes`` maps prime -> exponent; ``opaque`` lists
    composite cofactors that survived trial division."""
    m = abs(int(m))
    out = {}
    opaque = []
    d = 2
    while d * d <= m and d <= trial_bound:
        while m % d == 0:
            out[d] = out.get(d, 0) + 1
            m //= d
        d += 1 if d == 2 else 2
    if m > 1:
        if d * d > m or is_probable_prime(m):
            out[m] = out.get(m, 0) + 1
        else:
            opaque.append(m)
    return out, opaque


@dataclass
class IntegralityVerdict:
    kind: str
    N: int = None
    witnesses: list = field(default_factory=list)
    primes: list = field(default_factory=list)
    window: int = 0
    profile: dict = field(default_factory=dict)
    opaque: list = field(default_factory=list)

    def __str__(self):
        if self.kind == GLOBALLY_BOUNDED:
            return "%s(%d) over %d terms" % (self.kind, self.N, self.window + 1)
        if self.kind == LIKELY_NOT:
            return "%s: %d witness primes, first %s" % (
                self.kind, len(self.witnesses), ", ".join(str(p) for p, _ in self.witnesses[:8]))
        return self.kind

    def to_json(self):
        return {
            "kind": self.kind,
            "N": self.N,
            "witnesses": [[p, n] for p, n in self.witnesses],
            "primes": list(self.primes),
            "window": self.window,
            "profile": {str(p): v for p, v in sorted(self.profile.items())},
            "opaque": [str(c) for c in self.opaque],
        }

    @classmethod
    def from_json(cls, data):
        return cls(data["kind"], data.get("N"), [tuple(w) for w in data.get("witnesses", [])],
                   list(data.get("primes", [])), data.get("window", 0),
                   {int(p): v for p, v in data.get("profile", {}).items()},
                   [int(c) for c in data.get("opaque", [])])


def _normalized(f):
    lead = next((c for c in f.coeffs if c), None)
    if lead is None:
        return None
    inv = ONE / lead
    return [c * inv for c in f.coeffs]


def denominator_profile(f, trial_bound=100000):
    """``(profile, first, opaque)``: per-prime valuations of the denominators of
    the normalised coefficients, the first index each prime shows up, and
    unfactored cofactors with their indices."""
    coeffs = _normalized(f)
    if coeffs is None:
        return {}, {}, []
    T = len(coeffs) - 1
    profile, first, opaque = {}, {}, []
    for n, c in enumerate(coeffs):
        den = int(Q(c).denominator)
        if den == 1:
            continue
        primes, rest = factor_integer(den, trial_bound)
        for p, e in primes.items():
            if p not in profile:
                profile[p] = [0] * (T + 1)
                first[p] = n
            profile[p][n] = e
        for r in rest:
            opaque.append((r, n))
    return profile, first, opaque


def find_rescaling(f, threshold=None, trial_bound=100000):
    """Semi-decision over the window ``0..T`` of ``f``; minimality of ``N`` is window-relative."""
    T = f.trunc
    profile, first, opaque = denominator_profile(f, trial_bound)
    if threshold is None:
        threshold = -(-(T + 1) // 8)
    primes = sorted(profile)
    witnesses = sorted(((p, first[p]) for p in primes), key=lambda w: (w[1], w[0]))
    late_steep = []
    for p in primes:
        if first[p] > T / 2:
            bound = int(math.log(max(T, 2), p)) + 1
            if max(profile[p]) > bound:
                late_steep.append(p)
    if len(primes) + len(opaque) > threshold or late_steep:
        return IntegralityVerdict(LIKELY_NOT, None, witnesses, primes, T, profile,
                                  [r for r, _ in opaque])
    if profile.get(0) is not None:
        raise AssertionError
    if any(n == 0 for p, n in witnesses):
        return IntegralityVerdict(INCONCLUSIVE, None, witnesses, primes, T, profile)
    if opaque:
        return IntegralityVerdict(INCONCLUSIVE, None, witnesses, primes, T, profile, [r for r, _ in opaque])
    N = 1
    for p in primes:
        e = max(-(-v // n) for n, v in enumerate(profile[p]) if n and v)
        N *= p ** e
    return IntegralityVerdict(GLOBALLY_BOUNDED, N, [], primes, T, profile)


def rescaled(f, N):
    """``f(N x)`` divided by its leading coefficient."""
    coeffs = _normalized(f)
    return [c * Q(N) ** n for n, c in enumerate(coeffs)]


def log_bounded_check(f, primes, slack=1):
    """Per prime: ``v_p(den a_n) <= floor(log_p n) + slack`` for ``1 <= n <= T``."""
    coeffs = _normalized(f) or []
    out = {}
    for p in primes:
        ok = True
        for n, c in enumerate(coeffs):
            if n == 0:
                continue
            v = valuation(int(Q(c).denominator), p)
            if v > _floor_log(n, p) + slack:
                ok = False
                break
        out[p] = ok
    return out


def _floor_log(n, p):
    k, m = 0, p
    while m <= n:
        k += 1
        m *= p
    return k


def apply_then_check(L, f):
    """``(L f, find_rescaling(L f))`` for a first-order operator ``L``."""
    if L.order != 1:
        raise ValueError("a first-order operator is expected")
    s, _ = L.theta_form()
    g = L.apply_theta(f) if s == 0 else L.apply(f)
    return g, find_rescaling(g)
