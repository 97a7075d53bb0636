"""Closed-form reference verdicts for the bundled index families.

Every function here re-derives the expected outcome for one family straight
from parameter inequalities over exact rationals.  Nothing below touches the
covering, weight, or sequence machinery, so a match with the engine means two
independent routes agree.
"""

from fractions import Fraction

from decomp_embed.exponents import INF, ExtExponent, lower_conjugate

EMB = "Embeds"
DNE = "DoesNotEmbed"
UND = "Undetermined"

_TWO = ExtExponent(2)


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, list):
        return Fraction(x[0], x[1])
    if isinstance(x, int):
        return Fraction(x)
    return Fraction(str(x))


def _vec(x, d: int) -> list[Fraction]:
    if isinstance(x, list):
        return [_frac(v) for v in x]
    return [_frac(x)] * d


def _inv(e: ExtExponent) -> Fraction:
    return e.reciprocal()


def _tail(q: ExtExponent, r: ExtExponent) -> Fraction:
    gap = _inv(lower_conjugate(q)) - _inv(r)
    return gap if gap > 0 else Fraction(0)


def golden_hom_besov(params, p, q, r, k):
    if p > q:
        return DNE
    if k >= 1:
        # the weight quotient grows on one tail of the two-sided lattice
        return DNE
    s = _frac(params["s"])
    a = params["d"] * (_inv(p) - _inv(q))
    if s != a:
        return DNE
    if r <= lower_conjugate(q):
        return EMB
    if q.is_inf or q <= _TWO:
        return DNE
    if r > q:
        return DNE
    if p == q and r > _TWO:
        return DNE
    return UND


def golden_inhom_besov(params, p, q, r, k):
    if p > q:
        return DNE
    s = _frac(params["s"])
    thr = k + params["d"] * (_inv(p) - _inv(q))
    if s > thr:
        return EMB
    if s < thr:
        return DNE
    if r <= lower_conjugate(q):
        return EMB
    if q.is_inf or q <= _TWO:
        return DNE
    if r <= _TWO:
        return EMB
    if p == q:
        return DNE
    if r > q:
        return DNE
    return UND


def golden_alpha_modulation(params, p, q, r, k):
    if p > q:
        return DNE
    alpha = _frac(params["alpha"])
    s = _frac(params["s"])
    rhs = k + params["d"] * (
        alpha * (_inv(p) - _inv(q)) + (1 - alpha) * _tail(q, r)
    )
    if s > rhs:
        return EMB
    if s < rhs:
        return DNE
    if r <= lower_conjugate(q):
        return EMB
    if q.is_inf or q <= _TWO:
        return DNE
    cut = q if (alpha == 0 and p == q) else _TWO
    if r <= cut:
        return EMB
    if r > q:
        return DNE
    return UND


def golden_shearlet_smoothness(params, p, q, r, k):
    if p > q:
        return DNE
    s = _frac(params["s"])
    thr = k + Fraction(3, 2) * (_inv(p) - _inv(q)) + Fraction(1, 2) * _tail(q, r)
    if s > thr:
        return EMB
    if s < thr:
        return DNE
    if r <= lower_conjugate(q):
        return EMB
    if q.is_inf or q <= _TWO:
        return DNE
    if r <= _TWO:
        return EMB
    if r > q:
        return DNE
    return UND


def _coorbit_member(c, beta, k, inv_theta, big_a):
    kk = Fraction(k)
    lo = max(c * beta, c * (beta - kk))
    if inv_theta == 0:
        if beta < kk:
            return False
        if c >= 1:
            return beta <= big_a <= c * (beta - kk)
        return lo <= big_a <= beta - kk
    if beta <= kk + inv_theta:
        return False
    if c >= 1:
        return beta + (c - 1) * inv_theta < big_a < c * (beta - kk)
    return lo < big_a < beta - kk - (1 - c) * inv_theta


def golden_shearlet_coorbit(params, p, q, r, k):
    if p > q:
        return DNE
    c = _frac(params["c"])
    alpha = _frac(params["alpha"])
    beta = _frac(params["beta"])
    gamma = Fraction(1, 2) - _inv(r) + _inv(p) - _inv(q)
    big_a = alpha + (1 + c) * gamma
    inv_suff = max(Fraction(0), _inv(lower_conjugate(q)) - _inv(r))
    if _coorbit_member(c, beta, k, inv_suff, big_a):
        return EMB
    if q.is_inf:
        return DNE
    inv_nec = max(Fraction(0), _inv(q) - _inv(r))
    if not _coorbit_member(c, beta, k, inv_nec, big_a):
        return DNE
    return UND


def golden_diagonal(params, p, q, r, k):
    if p > q:
        return DNE
    d = params["d"]
    alphas = _vec(params["alpha"], d)
    betas = _vec(params["beta"], d)
    gamma = _inv(q) - _inv(p) + _inv(r) - Fraction(1, 2)
    if any(a < gamma for a in alphas) or any(b > gamma - k for b in betas):
        return DNE
    if all(a > gamma for a in alphas) and all(b < gamma - k for b in betas):
        return EMB
    # equality in at least one coordinate
    if r <= lower_conjugate(q):
        return EMB
    if q.is_inf or q <= _TWO:
        return DNE
    if r > q:
        return DNE
    return UND


_GOLDEN = {
    "hom_besov": golden_hom_besov,
    "inhom_besov": golden_inhom_besov,
    "alpha_modulation": golden_alpha_modulation,
    "shearlet_smoothness": golden_shearlet_smoothness,
    "shearlet_coorbit": golden_shearlet_coorbit,
    "diagonal": golden_diagonal,
}


def golden_verdict(family, params, *, p, q=None, r, k, target="sobolev"):
    if target == "cb":
        q = INF
    elif target == "bv":
        q = ExtExponent(1)
    return _GOLDEN[family](params, p, q, r, k)
