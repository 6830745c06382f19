"""Pure-Python versions of the compiled kernels in ``_kernels.pyx``.

Both modules expose the same functions with the same results; :mod:`diagkit.kernels`
picks the compiled one when it is importable.
"""


def rref_mod_p(matrix, p):
    """Reduced row echelon form over F_p.

    ``matrix`` is a list of equal-length integer lists (not modified).  Returns
    ``(rows, pivots)`` where ``rows`` are the nonzero reduced rows and
    ``pivots[i]`` is the pivot column of ``rows[i]``.
    """
    rows = [[v % p for v in r] for r in matrix]
    if not rows:
        return [], []
    ncols = len(rows[0])
    pivots = []
    r = 0
    nrows = len(rows)
    for c in range(ncols):
        piv = None
        for i in range(r, nrows):
            if rows[i][c]:
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        pr = rows[r]
        inv = pow(pr[c], p - 2, p)
        if inv != 1:
            for j in range(c, ncols):
                pr[j] = pr[j] * inv % p
        for i in range(nrows):
            if i != r:
                ri = rows[i]
                f = ri[c]
                if f:
                    for j in range(c, ncols):
                        if pr[j]:
                            ri[j] = (ri[j] - f * pr[j]) % p
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return rows[:r], pivots


def rank_mod_p(matrix, p):
    return len(rref_mod_p(matrix, p)[1])


def conv_mod_p(a, b, p, trunc):
    """Product of two coefficient lists modulo ``p``, truncated after index ``trunc``."""
    out = [0] * (trunc + 1)
    for i, ai in enumerate(a[: trunc + 1]):
        if ai:
            lim = trunc - i
            for j, bj in enumerate(b[: lim + 1]):
                out[i + j] += ai * bj
    return [v % p for v in out]
