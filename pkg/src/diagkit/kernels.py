"""Kernel dispatch: compiled extension when built, pure Python otherwise."""

try:
    from ._kernels import conv_mod_p, rank_mod_p, rref_mod_p

    COMPILED = True
except ImportError:
    from ._kernels_py import conv_mod_p, rank_mod_p, rref_mod_p

    COMPILED = False

__all__ = ["COMPILED", "conv_mod_p", "rank_mod_p", "rref_mod_p"]
