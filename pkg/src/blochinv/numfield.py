"""Exact number field arithmetic and complex embeddings.

A number field is Q[x]/(f) for a monic integer polynomial f, assumed
irreducible (only cheap reducibility witnesses are rejected).  Elements are
rational coefficient vectors reduced mod f.  Embeddings are the roots of f,
refined by Newton iteration to a caller-specified binary precision.
"""

from __future__ import annotations

from fractions import Fraction

import mpmath as mp

from mpmath.libmp import mpf_neg

from .errors import (DetectedReducible, DivisionByZero, FieldMismatch,
                     NonMonic, NotSquarefree, RootFindingFailed)


def conj_exact(z):
    """Complex conjugate without rounding (mp.conj rounds to ambient prec)."""
    z = z if isinstance(z, mp.mpc) else mp.mpc(z)
    return mp.make_mpc((z.real._mpf_, mpf_neg(z.imag._mpf_)))


# ---------------------------------------------------------------------------
# polynomial helpers over Q (coefficient lists, low degree first)

def poly_trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def poly_add(p, q):
    n = max(len(p), len(q))
    return poly_trim([(p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0)
                      for i in range(n)])


def poly_scale(p, c):
    return poly_trim([c * a for a in p])


def poly_mul(p, q):
    if not p or not q:
        return []
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            out[i + j] += a * b
    return poly_trim(out)


def poly_divmod(p, q):
    """Division with remainder over Q; q must be nonzero."""
    p = [Fraction(a) for a in p]
    q = poly_trim([Fraction(a) for a in q])
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    quot = [Fraction(0)] * max(0, len(p) - len(q) + 1)
    rem = list(p)
    while len(poly_trim(rem)) >= len(q):
        rem = poly_trim(rem)
        shift = len(rem) - len(q)
        c = rem[-1] / q[-1]
        quot[shift] = c
        for i, b in enumerate(q):
            rem[shift + i] -= c * b
        rem = rem[:-1]
    return poly_trim(quot), poly_trim(rem)


def poly_gcd(p, q):
    p, q = poly_trim(p), poly_trim(q)
    while q:
        _, r = poly_divmod(p, q)
        p, q = q, r
    if p:
        lead = p[-1]
        p = [a / lead for a in p]
    return p


def poly_deriv(p):
    return poly_trim([i * a for i, a in enumerate(p)][1:])


def poly_ext_gcd(p, q):
    """Extended Euclid: returns (g, s, t) with s*p + t*q = g, g monic."""
    r0, r1 = poly_trim(p), poly_trim(q)
    s0, s1 = [Fraction(1)], []
    t0, t1 = [], [Fraction(1)]
    while r1:
        quot, rem = poly_divmod(r0, r1)
        r0, r1 = r1, rem
        s0, s1 = s1, poly_add(s0, poly_scale(poly_mul(quot, s1), -1))
        t0, t1 = t1, poly_add(t0, poly_scale(poly_mul(quot, t1), -1))
    if r0:
        lead = r0[-1]
        r0 = [a / lead for a in r0]
        s0 = [a / lead for a in s0]
        t0 = [a / lead for a in t0]
    return r0, s0, t0


def _rational_roots(coeffs):
    """Rational roots of an integer polynomial, by the rational root test."""
    p = poly_trim(coeffs)
    roots = []
    # factor out x | p
    while p and p[0] == 0:
        roots.append(Fraction(0))
        p = p[1:]
    if len(p) <= 1:
        return roots
    a0, an = abs(int(p[0])), abs(int(p[-1]))

    def divisors(n):
        out = []
        d = 1
        while d * d <= n:
            if n % d == 0:
                out.append(d)
                out.append(n // d)
            d += 1
        return sorted(set(out))

    for num in divisors(a0):
        for den in divisors(an):
            for s in (1, -1):
                r = Fraction(s * num, den)
                val = Fraction(0)
                for c in reversed(p):
                    val = val * r + c
                if val == 0 and r not in roots:
                    roots.append(r)
    return roots


# ---------------------------------------------------------------------------

class NumberField:
    """Q[x]/(f) for monic integer f; degree-1 fields represent Q itself."""

    def __init__(self, min_poly):
        coeffs = [int(c) for c in min_poly]
        coeffs = poly_trim(coeffs)
        if len(coeffs) < 2:
            raise DetectedReducible("constant polynomial defines no field")
        if coeffs[-1] != 1:
            raise NonMonic("minimal polynomial must be monic, got leading %s"
                           % coeffs[-1])
        g = poly_gcd(coeffs, poly_deriv(coeffs))
        if len(g) > 1:
            raise NotSquarefree("gcd with derivative has degree %d" % (len(g) - 1))
        deg = len(coeffs) - 1
        rr = _rational_roots(coeffs)
        if deg > 1 and rr:
            raise DetectedReducible("rational root %s" % rr[0])
        # degree <= 3 with no rational root is irreducible; degree >= 4 is an
        # input contract beyond the rational-root witness.
        self.min_poly = tuple(coeffs)
        self.degree = deg

    def __eq__(self, other):
        return isinstance(other, NumberField) and self.min_poly == other.min_poly

    def __hash__(self):
        return hash(self.min_poly)

    def __repr__(self):
        return "NumberField(%s)" % (list(self.min_poly),)

    def is_rational(self):
        return self.degree == 1

    def zero(self):
        return FieldElement(self, [0] * self.degree)

    def one(self):
        return FieldElement(self, [1] + [0] * (self.degree - 1))

    def gen(self):
        """The class of x (for degree 1 this is the rational root of f)."""
        if self.degree == 1:
            return FieldElement(self, [-Fraction(self.min_poly[0])])
        return FieldElement(self, [0, 1] + [0] * (self.degree - 2))

    def element(self, coeffs):
        return FieldElement(self, coeffs)

    def from_rational(self, q):
        return FieldElement(self, [Fraction(q)] + [0] * (self.degree - 1))


def field_make(min_poly):
    """Construct a NumberField, rejecting non-monic / non-squarefree input and
    cheap reducibility witnesses."""
    return NumberField(min_poly)


class FieldElement:
    """Element of a NumberField as a reduced coefficient vector over Q."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs):
        coeffs = [Fraction(c) for c in coeffs]
        if len(poly_trim(coeffs)) > field.degree:
            coeffs = _reduce_mod(coeffs, field.min_poly)
        coeffs = coeffs[:field.degree]
        coeffs += [Fraction(0)] * (field.degree - len(coeffs))
        self.field = field
        self.coeffs = tuple(coeffs)

    # -- ring structure ---------------------------------------------------
    def _check(self, other):
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldMismatch("elements of %r and %r" %
                                    (self.field, other.field))
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.from_rational(other)
        return NotImplemented

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return NotImplemented
        return FieldElement(self.field,
                            [a + b for a, b in zip(self.coeffs, other.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, [-a for a in self.coeffs])

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return NotImplemented
        prod = poly_mul(list(self.coeffs), list(other.coeffs))
        return FieldElement(self.field, _reduce_mod(prod, self.field.min_poly))

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise DivisionByZero("inverse of zero field element")
        g, s, _ = poly_ext_gcd(poly_trim(list(self.coeffs)),
                               list(self.field.min_poly))
        if len(g) != 1:
            # gcd nontrivial: witnesses reducibility of the min poly
            raise DetectedReducible("element %s is a zero divisor" % (self,))
        inv = poly_scale(s, 1 / g[0])
        return FieldElement(self.field, _reduce_mod(inv, self.field.min_poly))

    def __truediv__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n):
        n = int(n)
        if n < 0:
            return self.inverse() ** (-n)
        out = self.field.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- predicates, hashing ----------------------------------------------
    def is_zero(self):
        return all(c == 0 for c in self.coeffs)

    def is_one(self):
        return self.coeffs[0] == 1 and all(c == 0 for c in self.coeffs[1:])

    def is_rational(self):
        return all(c == 0 for c in self.coeffs[1:])

    def as_rational(self):
        if not self.is_rational():
            raise ValueError("element is not rational: %s" % (self,))
        return self.coeffs[0]

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coeffs[0] == other
        return (isinstance(other, FieldElement) and self.field == other.field
                and self.coeffs == other.coeffs)

    def __hash__(self):
        if self.is_rational():
            return hash(self.coeffs[0])
        return hash((self.field.min_poly, self.coeffs))

    def __repr__(self):
        return "FieldElement(%s)" % " ".join(str(c) for c in self.coeffs)

    def norm(self):
        """Field norm: determinant of the multiplication-by-self matrix."""
        d = self.field.degree
        cols = []
        cur = self.field.one() * self
        basis = [Fraction(0)] * d
        for j in range(d):
            basis = [Fraction(0)] * d
            basis[j] = Fraction(1)
            col = (self * FieldElement(self.field, basis)).coeffs
            cols.append(list(col))
        return _det_fraction([[cols[j][i] for j in range(d)] for i in range(d)])

    # -- numerics -----------------------------------------------------------
    def evaluate(self, root):
        """Horner evaluation of the coefficient vector at a numeric root."""
        acc = mp.mpc(0)
        for c in reversed(self.coeffs):
            acc = acc * root + mp.mpf(c.numerator) / mp.mpf(c.denominator)
        return acc


def _reduce_mod(coeffs, min_poly):
    coeffs = [Fraction(c) for c in coeffs]
    f = [Fraction(c) for c in min_poly]
    deg = len(f) - 1
    while len(poly_trim(coeffs)) > deg:
        coeffs = poly_trim(coeffs)
        shift = len(coeffs) - 1 - deg
        c = coeffs[-1]
        for i, b in enumerate(f):
            coeffs[shift + i] -= c * b
        coeffs = coeffs[:-1]
    return coeffs


def _det_fraction(m):
    m = [row[:] for row in m]
    n = len(m)
    det = Fraction(1)
    for col in range(n):
        piv = None
        for r in range(col, n):
            if m[r][col] != 0:
                piv = r
                break
        if piv is None:
            return Fraction(0)
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        det *= m[col][col]
        inv = 1 / m[col][col]
        for r in range(col + 1, n):
            f = m[r][col] * inv
            if f:
                m[r] = [a - f * b for a, b in zip(m[r], m[col])]
    return det


# ---------------------------------------------------------------------------
# embeddings

class EmbeddingSet:
    """All archimedean embeddings of a field at a fixed precision.

    real_roots are sorted ascending; complex_pairs holds one representative
    per conjugate pair with Im > 0, sorted by (real part, imaginary part).
    ``places`` is the default evaluation list for regulator vectors; callers
    reproducing a specific published convention may conjugate / reorder via
    ``select``.
    """

    def __init__(self, field, real_roots, complex_pairs, precision):
        self.field = field
        self.real_roots = list(real_roots)
        self.complex_pairs = list(complex_pairs)
        self.r1 = len(real_roots)
        self.r2 = len(complex_pairs)
        self.precision = precision

    @property
    def places(self):
        return list(self.complex_pairs)

    def all_roots(self):
        """Every root of min_poly: real roots, then each pair (rep, conjugate)."""
        out = [mp.make_mpc((r._mpf_, mp.libmp.fzero)) for r in self.real_roots]
        for z in self.complex_pairs:
            out.append(z)
            out.append(conj_exact(z))
        return out

    def select(self, order=None, conjugate=None):
        """Complex places with an explicit permutation and conjugation choice.

        order: permutation of range(r2); conjugate: booleans, True meaning the
        lower half-plane representative is used.
        """
        order = list(order) if order is not None else list(range(self.r2))
        conjugate = list(conjugate) if conjugate is not None else [False] * self.r2
        out = []
        for pos, j in enumerate(order):
            z = self.complex_pairs[j]
            out.append(conj_exact(z) if conjugate[pos] else z)
        return out

    def __repr__(self):
        return ("EmbeddingSet(r1=%d, r2=%d, prec=%d)" %
                (self.r1, self.r2, self.precision))


def embeddings(field, precision=256):
    """All complex embeddings of the field, polished to ``precision`` bits.

    Each returned root r satisfies |f(r)| < 2^(-precision/2).
    """
    if precision < 64:
        raise ValueError("precision must be at least 64 bits")
    deg = field.degree
    if deg == 1:
        return EmbeddingSet(field, [mp.mpf(-field.min_poly[0])], [], precision)
    with mp.workprec(precision + 64):
        try:
            roots = mp.polyroots([mp.mpf(c) for c in reversed(field.min_poly)],
                                 maxsteps=200, extraprec=precision)
        except mp.libmp.libhyper.NoConvergence as exc:
            raise RootFindingFailed(str(exc))
        roots = [_polish(field.min_poly, r, precision) for r in roots]
        bound = mp.mpf(2) ** (-(precision // 2))
        for r in roots:
            if abs(_poly_eval_mp(field.min_poly, r)) >= bound:
                raise RootFindingFailed("residual above certified bound at %s" % r)
        # classify: a root is real when real Newton from Re(r) lands on it
        reals, complexes = [], []
        for r in roots:
            cand = _polish_real(field.min_poly, mp.re(r), precision)
            if cand is not None and abs(cand - r) < mp.mpf(2) ** (-precision // 4):
                reals.append(cand)
            else:
                complexes.append(r)
        reals = sorted(set_dedup(reals, precision))
        ups = sorted(set_dedup([z if mp.im(z) > 0 else mp.conj(z)
                                for z in complexes], precision),
                     key=lambda z: (mp.re(z), mp.im(z)))
        if len(reals) + 2 * len(ups) != deg:
            raise RootFindingFailed(
                "classified r1=%d, r2=%d for degree %d" % (len(reals), len(ups), deg))
    return EmbeddingSet(field, reals, ups, precision)


def set_dedup(vals, precision):
    out = []
    tol = mp.mpf(2) ** (-precision // 2)
    for v in vals:
        if not any(abs(v - w) < tol for w in out):
            out.append(v)
    return out


def _poly_eval_mp(int_coeffs, z):
    acc = mp.mpc(0) if isinstance(z, mp.mpc) else mp.mpf(0)
    for c in reversed(int_coeffs):
        acc = acc * z + c
    return acc


def _poly_eval_deriv_mp(int_coeffs, z):
    acc = mp.mpc(0) if isinstance(z, mp.mpc) else mp.mpf(0)
    dcoeffs = [i * c for i, c in enumerate(int_coeffs)][1:]
    for c in reversed(dcoeffs):
        acc = acc * z + c
    return acc


def _polish(int_coeffs, z0, precision, allow_fail=False):
    """Newton-polish a root approximation; certify |f(z)| < 2^(-precision/2)."""
    with mp.workprec(precision + 64):
        z = mp.mpc(z0)
        bound = mp.mpf(2) ** (-(precision // 2) - 8)
        for _ in range(precision):
            fv = _poly_eval_mp(int_coeffs, z)
            if abs(fv) < bound:
                return z
            dv = _poly_eval_deriv_mp(int_coeffs, z)
            if dv == 0:
                break
            z = z - fv / dv
        fv = _poly_eval_mp(int_coeffs, z)
        if abs(fv) < mp.mpf(2) ** (-(precision // 2)):
            return z
    if allow_fail:
        return None
    raise RootFindingFailed("Newton polish stalled near %s" % z0)


def _polish_real(int_coeffs, x0, precision):
    """Real Newton polish; returns None when no real root is reached."""
    with mp.workprec(precision + 64):
        x = mp.mpf(x0)
        bound = mp.mpf(2) ** (-(precision // 2) - 8)
        for _ in range(precision):
            fv = _poly_eval_mp(int_coeffs, x)
            if abs(fv) < bound:
                return x
            dv = _poly_eval_deriv_mp(int_coeffs, x)
            if dv == 0:
                return None
            x = x - fv / dv
    return None


def eval_embedding(elem, root, precision=256):
    """Evaluate a FieldElement at one embedding (a numeric root of min_poly)."""
    with mp.workprec(precision + 32):
        return elem.evaluate(root)
