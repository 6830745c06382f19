"""``diagkit`` command line.

Exit codes: 0 success, 1 a verification came out false, 2 usage, 3 the
computation itself failed.
"""

import argparse
import json
import sys

from . import corpus as _corpus
from .rational import Q, qstr

OK, MISMATCH, USAGE, FAILED = 0, 1, 2, 3

SERIES_TRUNC = 40
DIAG_TRUNC_LARGE = 24


class UsageError(Exception):
    pass


# --- input helpers --------------------------------------------------------------------

def _read(path):
    if path == "-":
        return sys.stdin.read()
    with open(path) as fh:
        return fh.read()


def _json_or_text(text):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return None


def read_series(args, trunc):
    """``--expr`` text or ``--series`` file (series JSON, coefficient list, or whitespace-separated rationals)."""
    from .series import USeries

    if getattr(args, "expr", None):
        return _corpus.series_of(args.expr, trunc)
    if not getattr(args, "series", None):
        raise UsageError("give --expr or --series")
    raw = _read(args.series)
    data = _json_or_text(raw)
    if data is None:
        data = [tok for tok in raw.replace(",", " ").split() if tok]
    if isinstance(data, dict) and "coeffs" in data:
        f = USeries.from_json(data) if "trunc" in data else USeries([Q(c) for c in data["coeffs"]])
    elif isinstance(data, list) and all(isinstance(c, (int, str)) for c in data):
        f = USeries([Q(c) for c in data])
    else:
        f = _corpus.series_of(data, trunc)
    return f.truncate(min(trunc, f.trunc)) if args.trunc is not None else f


def read_operator(spec):
    """Catalog name, JSON file, ``theta:<text>`` or ``d:<text>``."""
    from .dfinite import LinDiffOp

    if spec.startswith("theta:"):
        return LinDiffOp.from_theta_text(spec[6:])
    if spec.startswith("d:"):
        return LinDiffOp.from_d_text(spec[2:])
    if spec.endswith(".json") or spec == "-":
        data = json.loads(_read(spec))
        if isinstance(data, dict) and "name" in data:
            return _corpus.operator_of(data["name"])
        if isinstance(data, dict) and "theta" in data and isinstance(data["theta"], str):
            return LinDiffOp.from_theta_text(data["theta"])
        if isinstance(data, dict) and "operator" in data:
            data = data["operator"]
        return LinDiffOp.from_json(data)
    return _corpus.operator_of(spec)


def _trunc(args, default=SERIES_TRUNC):
    return default if args.trunc is None else args.trunc


# --- output helpers -------------------------------------------------------------------

def _series_out(f):
    return f.to_json()


def _op_out(L):
    return dict(L.to_json(), pretty=L.pretty(), theta=L.pretty_theta())


def _emit(args, payload, text):
    if args.json:
        print(json.dumps(payload, indent=1, sort_keys=True))
    else:
        print(text)


def _emit_series(args, f, label="f", var="x"):
    _emit(args, _series_out(f), "%s = %s" % (label, f.pretty(var, terms=min(f.trunc + 1, 40))))


def _emit_op(args, L, label="L"):
    _emit(args, _op_out(L), "%s = %s\n  theta form: %s" % (label, L.pretty(), L.pretty_theta()))


# --- commands -------------------------------------------------------------------------

def cmd_diag(args):
    from .diagonal import diagonal
    from .expr import parse_expr

    expr = parse_expr(args.expr, args.nvars)
    nv = args.nvars or (max(expr.variables()) + 1)
    T = _trunc(args, DIAG_TRUNC_LARGE if nv >= 5 else SERIES_TRUNC)
    _emit_series(args, diagonal(expr, nv, T), "Diag")
    return OK


def cmd_prod(args):
    from .diagonal import general_product, hadamard, hurwitz

    T = _trunc(args)
    f, g = _corpus.series_of(args.f, T), _corpus.series_of(args.g, T)
    if args.kind == "hadamard":
        h = hadamard(f, g)
    elif args.kind == "hurwitz":
        h = hurwitz(f, g)
    else:
        if not args.kernel:
            raise UsageError("general product needs --kernel")
        h = general_product(f, g, args.kernel)
    _emit_series(args, h, args.kind)
    return OK


def cmd_binom(args):
    from .diagonal import BinomSumSpec, binom_sum_to_rational

    data = json.loads(_read(args.spec)) if not args.spec.lstrip().startswith("{") else json.loads(args.spec)
    spec = BinomSumSpec.from_json(data)
    T = _trunc(args, 12)
    cert = binom_sum_to_rational(spec, T)
    payload = {"expr": cert.expr.to_str(), "nvars": cert.nvars, "series": _series_out(cert.series),
               "verified": cert.verify()}
    _emit(args, payload, "rational function (%d variables): %s\ndiagonal = %s\nverified: %s" % (
        cert.nvars, cert.expr.to_str(), cert.series.pretty(), payload["verified"]))
    return OK if payload["verified"] else MISMATCH


def cmd_intcheck(args):
    from .integrality import GLOBALLY_BOUNDED, find_rescaling, log_bounded_check

    f = read_series(args, _trunc(args))
    v = find_rescaling(f)
    payload = v.to_json()
    text = str(v)
    if args.log_primes:
        primes = [int(p) for p in args.log_primes.split(",")]
        lb = log_bounded_check(f, primes)
        payload["log_bounded"] = {str(p): ok for p, ok in lb.items()}
        text += "\nlog-bounded: " + ", ".join("%d:%s" % (p, ok) for p, ok in lb.items())
    _emit(args, payload, text)
    if args.expect_n is not None:
        return OK if v.kind == GLOBALLY_BOUNDED and v.N == args.expect_n else MISMATCH
    return OK


def cmd_modp(args):
    from .modp import hasse_poly, minpoly_mod_p, reduce_mod_p

    if args.action == "hasse":
        h = hasse_poly(args.p)
        cs = [int(c) for c in h.coeffs]
        _emit(args, {"p": args.p, "coeffs": cs}, "%s  (mod %d)" % (h.pretty("z"), args.p))
        return OK
    T = _trunc(args)
    if args.diag:
        from .diagonal import diagonal

        f = diagonal(args.diag, args.nvars, T)
    else:
        f = read_series(args, T)
    fp = reduce_mod_p(f, args.p)
    if args.action == "reduce":
        _emit(args, {"p": args.p, "coeffs": list(fp.coeffs)}, " ".join(str(c) for c in fp.coeffs))
        return OK
    rel = minpoly_mod_p(fp, args.dx, args.dy, 10 if args.guard is None else args.guard)
    if rel is None:
        _emit(args, {"relation": None}, "no relation within the degree bounds")
        return MISMATCH
    _emit(args, rel.to_json(), rel.pretty())
    return OK


def cmd_ode(args):
    from . import dfinite as D
    from .expr import to_ratfunc

    a = args.action
    if a == "guess":
        f = read_series(args, _trunc(args))
        rep = D.guess_ode(f, args.max_order, args.max_degree, args.guard)
        if not rep.found:
            _emit(args, {"operator": None}, "no operator within order %d, degree %d" % (
                args.max_order, args.max_degree))
            return MISMATCH
        payload = {"operator": _op_out(rep.operator), "order": rep.order, "degree": rep.degree,
                   "terms_used": rep.terms_used, "guard": rep.guard}
        _emit(args, payload, "order %d, theta-degree %d, %d terms used, %d checked\n%s" % (
            rep.order, rep.degree, rep.terms_used, rep.guard, rep.operator.pretty_theta()))
        return OK
    L = read_operator(args.op)
    if a == "apply":
        g = L.apply(read_series(args, _trunc(args)))
        _emit_series(args, g, "L(f)")
        if args.expect_zero:
            return OK if g.is_zero() else MISMATCH
        return OK
    if a == "indicial":
        exps, rest = D.indicial_exponents(L)
        payload = {"exponents": [qstr(e) for e in exps], "rest": rest.to_json(), "mum": D.is_mum(L)}
        _emit(args, payload, "exponents: %s%s\nMUM: %s" % (
            ", ".join(qstr(e) for e in exps) or "none",
            "" if rest.degree <= 0 else "  (irreducible part %s)" % rest.pretty("t"), payload["mum"]))
        return OK
    if a == "adjoint":
        M = D.adjoint(L)
    elif a == "extsq":
        M = D.exterior_square(L, args.seed)
    elif a == "symsq":
        M = D.symmetric_square(L, args.seed)
    elif a == "pullback":
        M = D.pullback_op(L, to_ratfunc(_need(args.map, "--map")))
    elif a == "conjugate":
        M = D.conjugate_op(L, to_ratfunc(_need(args.r, "--r")))
    elif a == "hadamard":
        rep = D.hadamard_op(L, read_operator(_need(args.op2, "--op2")), args.max_order, args.max_degree)
        if not rep.found:
            _emit(args, {"operator": None}, "no operator within the bounds")
            return MISMATCH
        M = rep.operator
    else:
        raise UsageError(a)
    _emit_op(args, M.normalized() if a != "adjoint" else M, a)
    return OK


def _need(value, flag):
    if value is None:
        raise UsageError("missing %s" % flag)
    return value


def cmd_mum(args):
    from . import modularity as M

    L = read_operator(args.op)
    a = args.action
    T = _trunc(args, 12)
    if a == "cy-report":
        rep = M.calabi_yau_report(L, trunc=max(T, 24), seed=args.seed)
        payload = rep.to_json()
        lines = ["%s: %s" % (k, v) for k, v in payload.items()]
        _emit(args, payload, "\n".join(lines))
        return OK
    if a == "basis":
        b = M.frobenius_mum_basis(L, T)
        payload = {"rho": qstr(b.rho), "ytilde": [_series_out(y) for y in b.ytilde]}
        text = "rho = %s\n" % qstr(b.rho) + "\n".join("ytilde_%d = %s" % (k, y.pretty())
                                                      for k, y in enumerate(b.ytilde))
        _emit(args, payload, text)
        return OK
    if a == "nome":
        _emit_series(args, M.nome(L, T), "q")
    elif a == "mirror":
        _emit_series(args, M.mirror_map(L, T), "x(q)", "q")
    elif a == "yukawa":
        _emit_series(args, M.yukawa(L, T).K_q, "K(q)", "q")
    elif a == "kstar":
        _emit_series(args, M.adjoint_yukawa(L, T), "K*(q)", "q")
    elif a == "kn":
        ks = M.kn_invariants(L, T)
        _emit(args, {str(m): _series_out(k) for m, k in ks.items()},
              "\n".join("K_%d = %s" % (m, k.pretty("q")) for m, k in ks.items()))
    return OK


def cmd_verify(args):
    from . import modularity as M

    if args.what == "identity":
        entry = json.loads(_read(_need(args.file, "--file")))
        if "forms" in entry:
            forms = entry["forms"]
        else:
            forms = [entry["lhs"], entry["rhs"]]
        T = args.trunc or entry.get("trunc", 20)
        ok = all(M.identity_check(forms[0], other, T) for other in forms[1:])
    elif args.what == "schwarzian":
        T = _trunc(args, 20)
        ok = M.schwarzian_pair_check(_corpus._pullback(_need(args.p1, "--p1"), T),
                                     _corpus._pullback(_need(args.p2, "--p2"), T))
    else:
        T = _trunc(args, 30)
        res = M.modular_curve_check(_need(args.curve, "--curve"), _corpus._pullback(_need(args.u, "--u"), T),
                                    _corpus._pullback(_need(args.v, "--v"), T))
        ok = bool(res)
        if res.matched is not None and not args.json:
            print("matched %d terms (need %d)" % (res.matched, res.required))
    _emit(args, {"verdict": ok}, "true" if ok else "false")
    return OK if ok else MISMATCH


def cmd_corpus(args):
    rep = _corpus.run_corpus(args.path, args.filter, args.jobs)
    if args.json:
        print(rep.dumps(timing=not args.no_timing))
    else:
        print(rep.text())
    return rep.exit_code


# --- parser ---------------------------------------------------------------------------

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--trunc", type=int, default=None, help="highest power kept")
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--guard", type=int, default=None, help="extra terms used only for checking")

    series_in = argparse.ArgumentParser(add_help=False)
    series_in.add_argument("--expr", help="univariate expression in x")
    series_in.add_argument("--series", help="series file (JSON or whitespace-separated coefficients)")

    p = argparse.ArgumentParser(prog="diagkit", description="Exact diagonals, D-finite operators and Yukawa couplings.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("diag", parents=[common], help="diagonal of a rational function")
    s.add_argument("--expr", required=True)
    s.add_argument("--nvars", type=int, default=None)
    s.set_defaults(func=cmd_diag)

    s = sub.add_parser("prod", parents=[common], help="Hadamard, Hurwitz or kernel product")
    s.add_argument("kind", choices=["hadamard", "hurwitz", "general"])
    s.add_argument("--f", required=True)
    s.add_argument("--g", required=True)
    s.add_argument("--kernel", help="bivariate kernel R(z0, z1) for the general product")
    s.set_defaults(func=cmd_prod)

    s = sub.add_parser("binom", parents=[common], help="binomial sum as a diagonal")
    s.add_argument("--spec", required=True, help="JSON file or inline JSON")
    s.set_defaults(func=cmd_binom)

    s = sub.add_parser("intcheck", parents=[common, series_in], help="global boundedness verdict")
    s.add_argument("--log-primes", help="comma-separated primes for the log-bounded test")
    s.add_argument("--expect-n", type=int, default=None)
    s.set_defaults(func=cmd_intcheck)

    s = sub.add_parser("modp", parents=[common, series_in], help="reduction and algebraic relations mod p")
    s.add_argument("action", choices=["reduce", "minpoly", "hasse"])
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--diag", help="rational function whose diagonal is reduced")
    s.add_argument("--nvars", type=int, default=None)
    s.add_argument("--dx", type=int, default=4)
    s.add_argument("--dy", type=int, default=None)
    s.set_defaults(func=cmd_modp)

    s = sub.add_parser("ode", parents=[common, series_in], help="linear differential operators")
    s.add_argument("action", choices=["guess", "apply", "adjoint", "extsq", "symsq", "pullback", "conjugate",
                                      "hadamard", "indicial"])
    s.add_argument("--op", help="catalog name, JSON file, theta:<text> or d:<text>")
    s.add_argument("--op2")
    s.add_argument("--map", help="pullback x -> map(x)")
    s.add_argument("--r", help="conjugation by exp(int r)")
    s.add_argument("--max-order", type=int, default=4)
    s.add_argument("--max-degree", type=int, default=6)
    s.add_argument("--expect-zero", action="store_true")
    s.set_defaults(func=cmd_ode)

    s = sub.add_parser("mum", parents=[common], help="MUM basis, nome, mirror map and Yukawa couplings")
    s.add_argument("action", choices=["basis", "nome", "mirror", "yukawa", "kstar", "kn", "cy-report"])
    s.add_argument("--op", required=True)
    s.set_defaults(func=cmd_mum)

    s = sub.add_parser("verify", parents=[common], help="identity, Schwarzian and modular-curve checks")
    s.add_argument("what", choices=["identity", "schwarzian", "curve"])
    s.add_argument("--file")
    s.add_argument("--p1")
    s.add_argument("--p2")
    s.add_argument("--curve")
    s.add_argument("--u")
    s.add_argument("--v")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("corpus", parents=[common], help="replay the worked-example corpus")
    s.add_argument("path", nargs="?", default=None)
    s.add_argument("--filter", default=None)
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--no-timing", action="store_true", help="omit wall times from the JSON report")
    s.set_defaults(func=cmd_corpus)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "command", None) == "modp" and args.action != "hasse" and args.dy is None:
        args.dy = 4
    try:
        return args.func(args)
    except UsageError as exc:
        print("usage error: %s" % exc, file=sys.stderr)
        return USAGE
    except _corpus.CorpusError as exc:
        print("corpus error: %s" % exc, file=sys.stderr)
        return FAILED
    except Exception as exc:
        print("error: %s: %s" % (type(exc).__name__, exc), file=sys.stderr)
        return FAILED


if __name__ == "__main__":
    sys.exit(main())
