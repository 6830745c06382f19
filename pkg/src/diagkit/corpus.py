"""Corpus of worked examples and the runner that replays them.

Each entry is a JSON object with ``id``, ``kind``, ``source`` (where the
expected data comes from), the inputs of its kind and ``expect``.
"""

import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from importlib import resources

from .diagonal import (BinomSumSpec, binom_sum_to_rational, diagonal, general_product, hadamard, hurwitz,
                       phi_d_diagonal)
from .dfinite import LinDiffOp, atkin_identity, guess_ode
from .expr import to_ratfunc
from .integrality import find_rescaling, rescaled
from .modp import AlgRelation, hasse_poly, minpoly_mod_p, reduce_mod_p
from .modularity import (adjoint_yukawa, frobenius_mum_basis, identity_check, mirror_map, modular_curve_check,
                         morrison_yukawa, nome, schwarzian_pair_check, side_series, yukawa)
from .rational import Q, qstr
from .series import USeries


class CorpusError(ValueError):
    pass


def default_corpus_path():
    return str(resources.files("diagkit").joinpath("data", "corpus.json"))


def load_entries(path=None):
    path = path or default_corpus_path()
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise CorpusError("cannot read corpus %s: %s" % (path, exc)) from exc
    entries = data["entries"] if isinstance(data, dict) else data
    seen = set()
    for e in entries:
        if "id" not in e or "kind" not in e:
            raise CorpusError("entry without id/kind: %r" % (e,))
        if e["id"] in seen:
            raise CorpusError("duplicate id %s" % e["id"])
        seen.add(e["id"])
    return entries


def operator_of(spec):
    if isinstance(spec, str):
        from .catalog import named_operator

        return named_operator(spec)
    if "theta" in spec:
        return LinDiffOp.from_theta_text(spec["theta"])
    if "d" in spec:
        return LinDiffOp.from_d_text(spec["d"])
    return LinDiffOp.from_json(spec)


def series_of(spec, trunc):
    """A series input: an expression string, a list of identity-style terms,
    ``{"reverse": s}``, ``{"compose": [f, g]}`` or ``{"coeffs": [...]}``."""
    if isinstance(spec, str):
        spec = [{"factors": [{"expr": spec}]}]
    if isinstance(spec, dict):
        if "reverse" in spec:
            return series_of(spec["reverse"], trunc).reverse()
        if "compose" in spec:
            f, g = spec["compose"]
            return series_of(f, trunc).compose(series_of(g, trunc))
        if "coeffs" in spec:
            return USeries([Q(c) for c in spec["coeffs"]], trunc)
        raise CorpusError("unknown series spec %r" % (spec,))
    return side_series(spec, trunc)


def _strs(values):
    return [qstr(Q(v)) for v in values]


def _prefix(series, expect):
    got = _strs(series.coeffs[:len(expect)])
    return got == _strs(expect), got


# --- per-kind handlers: entry -> (passed, computed) -----------------------------------

def _run_diagonal(e):
    f = diagonal(e["expr"], e["nvars"], e["trunc"])
    return _prefix(f, e["expect"])


def _run_phi_d(e):
    return _prefix(phi_d_diagonal(e["n"], e["trunc"]), e["expect"])


def _run_product(e):
    T = e["trunc"]
    f, g = series_of(e["f"], T), series_of(e["g"], T)
    how = e["product"]
    if how == "hadamard":
        h = hadamard(f, g)
    elif how == "hurwitz":
        h = hurwitz(f, g)
    else:
        h = general_product(f, g, e["kernel"])
    return _prefix(h, e["expect"])


def _run_binom(e):
    spec = BinomSumSpec.from_json(e["spec"])
    cert = binom_sum_to_rational(spec, e["trunc"])
    direct = spec.series(e["trunc"])
    ok, got = _prefix(diagonal(cert.expr, cert.nvars, e["trunc"]), e["expect"])
    return ok and _prefix(direct, e["expect"])[0], {"expr": cert.expr.to_str(), "nvars": cert.nvars,
                                                    "series": got}


def _run_integrality(e):
    f = series_of(e["series"], e["trunc"])
    v = find_rescaling(f)
    exp = e["expect"]
    ok = v.kind == exp["kind"]
    if "N" in exp:
        ok = ok and v.N == exp["N"]
    if "prefix" in exp:
        got = _strs(rescaled(f, v.N)[:len(exp["prefix"])])
        ok = ok and got == _strs(exp["prefix"])
    if "min_witnesses" in exp:
        mod, res = exp.get("witness_class", [1, 0])
        good = [p for p, _ in v.witnesses if p % mod == res]
        ok = ok and len(good) >= exp["min_witnesses"]
    return ok, {"kind": v.kind, "N": v.N, "witnesses": [p for p, _ in v.witnesses]}


def _run_modp(e):
    if e["task"] == "hasse":
        got = list(hasse_poly(e["p"]).coeffs)
        got = [int(c) for c in got]
        return got == e["expect"], got
    f = diagonal(e["expr"], e["nvars"], e["trunc"]) if "expr" in e else series_of(e["series"], e["trunc"])
    rel = minpoly_mod_p(reduce_mod_p(f, e["p"]), e["dx"], e["dy"], e.get("guard", 10))
    if rel is None:
        return e["expect"] is None, None
    want = AlgRelation.from_json(dict(e["expect"], p=e["p"], guard=rel.guard))
    ok = want.coeffs == rel.coeffs or _proportional(want, rel)
    return ok, rel.pretty()


def _proportional(a, b):
    p = a.p
    if set(a.coeffs) != set(b.coeffs):
        return False
    k = next(iter(a.coeffs))
    r = b.coeffs[k] * pow(a.coeffs[k], -1, p) % p
    return all(b.coeffs[c] == a.coeffs[c] * r % p for c in a.coeffs)


def _run_guess(e):
    f = series_of(e["series"], e["trunc"])
    rep = guess_ode(f, e["max_order"], e["max_degree"])
    if not rep.found:
        return False, None
    ok = rep.order == e["expect"]["order"] and rep.operator.annihilates(f)
    if "operator" in e["expect"]:
        ok = ok and rep.operator.equivalent(operator_of(e["expect"]["operator"]))
    return ok, {"order": rep.order, "degree": rep.degree, "operator": rep.operator.pretty_theta()}


def _run_operator(e):
    from .dfinite import bounded_rational_solutions, exterior_square

    L = operator_of(e["op"])
    task = e["task"]
    if task == "atkin":
        got = atkin_identity(L, Q(e["A"]), Q(e["e"]))
        return got == e["expect"], got
    if task == "extsq":
        E = exterior_square(L, e.get("seed", 0))
        got = {"order": E.order}
        if "rational_solution" in e["expect"]:
            sols = bounded_rational_solutions(E, e.get("bound", 2))
            got["rational_solution"] = repr(sols[0]) if sols else None
            want = e["expect"]["rational_solution"]
            sol_ok = (sols and want is not None and _same_up_to_constant(sols[0], to_ratfunc(want))) or \
                (not sols and want is None)
        else:
            sol_ok = True
        return got["order"] == e["expect"]["order"] and bool(sol_ok), got
    if task == "order":
        return L.order == e["expect"], L.order
    raise CorpusError("unknown operator task %r" % task)


def _same_up_to_constant(a, b):
    r = a / b
    return r.num.degree <= 0 and r.den.degree <= 0


_QUANTITIES = {
    "y0": lambda L, T: frobenius_mum_basis(L, T).y0,
    "nome": lambda L, T: nome(L, T),
    "mirror": lambda L, T: mirror_map(L, T),
    "yukawa": lambda L, T: yukawa(L, T).K_q,
    "yukawa_x": lambda L, T: yukawa(L, T).K_x,
    "kstar": lambda L, T: adjoint_yukawa(L, T),
    "morrison": lambda L, T: morrison_yukawa(L, T)[1],
}


def _run_modularity(e):
    L = operator_of(e["op"])
    f = _QUANTITIES[e["quantity"]](L, e["trunc"])
    return _prefix(f, e["expect"])


def _run_identity(e):
    forms = e["forms"]
    T = e.get("trunc", 20)
    ok = all(identity_check(forms[0], other, T) for other in forms[1:])
    got = None
    if e.get("expect"):
        try:
            s = side_series(forms[0], T)
            got = _strs(s.coeffs[:len(e["expect"])])
            ok = ok and got == _strs(e["expect"])
        except ValueError:
            ok = False
    return ok == e.get("verdict", True), {"holds": ok, "prefix": got}


def _pullback(spec, T):
    if isinstance(spec, str):
        try:
            return to_ratfunc(spec)
        except ValueError:
            return series_of(spec, T)
    return series_of(spec, T)


def _run_curve(e):
    T = e.get("trunc", 30)
    res = modular_curve_check(e["curve"], _pullback(e["u"], T), _pullback(e["v"], T))
    return bool(res) == e.get("verdict", True), {"holds": bool(res), "matched": res.matched,
                                                 "required": res.required}


def _run_schwarzian(e):
    T = e.get("trunc", 20)
    got = schwarzian_pair_check(_pullback(e["p1"], T), _pullback(e["p2"], T))
    return got == e.get("verdict", True), got


HANDLERS = {
    "diagonal": _run_diagonal,
    "phi_d": _run_phi_d,
    "product": _run_product,
    "binom": _run_binom,
    "integrality": _run_integrality,
    "modp": _run_modp,
    "guess": _run_guess,
    "operator": _run_operator,
    "modularity": _run_modularity,
    "identity": _run_identity,
    "curve": _run_curve,
    "schwarzian": _run_schwarzian,
}


@dataclass
class EntryResult:
    id: str
    kind: str
    passed: bool
    computed: object = None
    expected: object = None
    error: str = None
    seconds: float = 0.0

    def to_json(self, timing=True):
        out = {"id": self.id, "kind": self.kind, "passed": self.passed, "computed": self.computed,
               "expected": self.expected}
        if self.error:
            out["error"] = self.error
        if timing:
            out["seconds"] = round(self.seconds, 4)
        return out


@dataclass
class RunReport:
    results: list = field(default_factory=list)

    @property
    def passed(self):
        return all(r.passed for r in self.results)

    @property
    def failures(self):
        return [r for r in self.results if not r.passed]

    @property
    def exit_code(self):
        return 0 if self.passed else 1

    def to_json(self, timing=True):
        return {
            "total": len(self.results),
            "passed": sum(r.passed for r in self.results),
            "entries": [r.to_json(timing) for r in self.results],
        }

    def dumps(self, timing=True):
        return json.dumps(self.to_json(timing), indent=1, sort_keys=True)

    def text(self):
        lines = []
        for r in self.results:
            tag = "PASS" if r.passed else "FAIL"
            line = "%s %-42s %-11s %7.3fs" % (tag, r.id, r.kind, r.seconds)
            if r.error:
                line += "  " + r.error
            lines.append(line)
        lines.append("%d/%d passed" % (sum(r.passed for r in self.results), len(self.results)))
        return "\n".join(lines)


def run_entry(entry):
    t0 = time.perf_counter()
    handler = HANDLERS.get(entry["kind"])
    if handler is None:
        return EntryResult(entry["id"], entry["kind"], False, error="unknown kind")
    try:
        ok, got = handler(entry)
        err = None
    except Exception as exc:  # per-entry failures are recorded, not fatal
        ok, got, err = False, None, "%s: %s" % (type(exc).__name__, exc)
    return EntryResult(entry["id"], entry["kind"], bool(ok), got, entry.get("expect", entry.get("verdict")),
                       err, time.perf_counter() - t0)


def matches(entry, pattern):
    if not pattern:
        return True
    hay = " ".join(str(entry.get(k, "")) for k in ("id", "kind", "quantity", "task", "source"))
    return pattern.lower() in hay.lower()


def run_corpus(path=None, filter=None, jobs=1):
    entries = [e for e in load_entries(path) if matches(e, filter)]
    if jobs and jobs > 1 and len(entries) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(run_entry, entries))
    else:
        results = [run_entry(e) for e in entries]
    return RunReport(results)
