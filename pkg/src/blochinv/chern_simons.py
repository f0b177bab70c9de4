"""Volume and Chern-Simons evaluation through rational flattenings.

A flattening is an exact rational solution c = (c', c'') of U c = d.  With
core lengths lambda_j (zero at unfilled cusps) the combination

    -(pi/2) sum_j lambda_j
    - i sum_nu ( R(z_nu) - (i pi / 2)(c'_nu log(1 - z_nu) - c''_nu log z_nu) )

equals vol + i CS up to an additive constant in i pi^2 Q depending only on
the triangulation and c; its real part is the exact volume sum of D2 values.
CS is therefore exposed modulo pi^2 Q, with an optional user calibration.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath as mp

from .dilog import RhoRepresentative, rational_reconstruct, rogers
from .errors import DegenerateShape, Inconsistent
from .lattice import solve_integer, solve_rational

_GUARD = 24


@dataclass
class FlatteningSolution:
    c: list                   # 2n Fractions
    integral: bool

    @property
    def c_prime(self):
        return self.c[:len(self.c) // 2]

    @property
    def c_double_prime(self):
        return self.c[len(self.c) // 2:]


@dataclass
class CSResult:
    value: object             # vol + i CS representative (alpha = 0)
    vol: object
    cs_mod_rational: object   # Im(value): CS modulo pi^2 Q


def solve_flattening(U, d):
    """Exact rational solution of U c = d, integral when elimination finds one.

    Raises Inconsistent when d is outside the rational column span of U.
    """
    x = solve_integer(U, d)
    if x is not None:
        return FlatteningSolution(c=[Fraction(v) for v in x], integral=True)
    x = solve_rational(U, d)
    if x is None:
        raise Inconsistent("U c = d has no rational solution")
    return FlatteningSolution(c=[Fraction(v) for v in x],
                              integral=all(v.denominator == 1 for v in x))


def _mpq(q):
    return mp.mpf(q.numerator) / mp.mpf(q.denominator)


def cs_formula(shapes, lambdas, flattening, precision=256):
    """Evaluate the flattened volume + i CS combination with alpha = 0."""
    n = len(shapes)
    c = flattening.c if isinstance(flattening, FlatteningSolution) else \
        [Fraction(x) for x in flattening]
    if len(c) != 2 * n:
        raise Inconsistent("flattening length %d for %d shapes" % (len(c), n))
    cp, cpp = c[:n], c[n:]
    with mp.workprec(precision + _GUARD):
        total = mp.mpc(0)
        for j, lam in enumerate(lambdas or []):
            total -= mp.pi / 2 * mp.mpc(lam)
        for nu in range(n):
            z = mp.mpc(shapes[nu])
            if z == 0 or z == 1:
                raise DegenerateShape("shape %s" % z)
            term = rogers(z, precision)
            if cp[nu] or cpp[nu]:
                term -= (mp.mpc(0, 1) * mp.pi / 2) * (
                    _mpq(cp[nu]) * mp.log(1 - z) - _mpq(cpp[nu]) * mp.log(z))
            total -= mp.mpc(0, 1) * term
        return CSResult(value=total, vol=mp.re(total),
                        cs_mod_rational=mp.im(total))


def rho_of_beta(shapes, flattening, precision=256, lambdas=None):
    """(i / 2 pi^2) (vol + i CS) as a representative modulo Q."""
    res = cs_formula(shapes, lambdas or [], flattening, precision)
    with mp.workprec(precision + _GUARD):
        return RhoRepresentative(mp.mpc(0, 1) / (2 * mp.pi ** 2) * res.value,
                                 precision)


def eta_from_cs(cs_over_2pi2):
    """(1/2 pi^2) CS = (3/2) eta modulo 1/2 (compact manifolds): reduce mod 1/2
    into [0, 1/2)."""
    x = mp.mpf(cs_over_2pi2)
    half = mp.mpf(1) / 2
    return x - half * mp.floor(x / half)


def rationalize_mod_pi2(x, max_denominator=120, precision=256):
    """Reconstruct x / pi^2 as a bounded-denominator rational, or None."""
    with mp.workprec(precision + _GUARD):
        ratio = mp.mpf(x) / mp.pi ** 2
        return rational_reconstruct(ratio, max_denominator,
                                    mp.mpf(2) ** (-(precision // 2)))
