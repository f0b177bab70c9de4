"""The pre-Bloch group: formal sums of cross-ratio classes, six-fold
normalization, five-term relation elements, the wedge map into k* ^ k*, and a
certified Bloch-group membership test.

Exact generators live in a NumberField (degree 1 = Q); numeric generators are
arbitrary-precision complex numbers.  The wedge of an exact element is
computed in the free abelian group on its generators modulo multiplicative
relations that are proposed numerically (lattice reduction on archimedean
log vectors, pruned by exact norm valuations) and then verified by exact
field arithmetic.  A zero wedge is therefore a certificate; a nonzero one is
only a one-sided verdict, since a missed relation can inflate the image.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field as dfield
from fractions import Fraction

import mpmath as mp
import sympy

from .errors import (DegenerateFiveTerm, DegenerateShape, NotDistinct,
                     RequiresExactField, TriangulationSyntaxError)
from .lattice import integer_relations, snf_with_projection
from .numfield import FieldElement, NumberField, embeddings


class _InfinityType:
    """The point at infinity on the projective line."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "Infinity"


Infinity = _InfinityType()


def exact_mpc(x):
    """Cast to mpc without rounding (mp.mpc() re-rounds to ambient precision)."""
    if isinstance(x, mp.mpc):
        return x
    if isinstance(x, mp.mpf):
        return mp.make_mpc((x._mpf_, mp.mpf(0)._mpf_))
    return mp.mpc(x)


class _nullcontext:
    def __enter__(self):
        return None

    def __exit__(self, *exc):
        return False


def cross_ratio(z1, z2, z3, z4):
    """Cross ratio [z1:z2:z3:z4] = ((z3-z2)(z4-z1)) / ((z3-z1)(z4-z2)).

    Points may be exact field elements, Fractions, mpmath complex numbers, or
    Infinity.  Distinct points give a value outside {0, 1}.
    """
    pts = [z1, z2, z3, z4]
    for i in range(4):
        for j in range(i + 1, 4):
            if _pt_eq(pts[i], pts[j]):
                raise NotDistinct("cross-ratio points %d and %d coincide" % (i, j))
    inf_at = [i for i, p in enumerate(pts) if p is Infinity]
    numeric = [p for p in pts if p is not Infinity and not _is_exact(p)]
    bits = max([_value_bits(p) for p in numeric], default=0) + 32 \
        if numeric else 0
    ctx = mp.workprec(bits) if numeric else _nullcontext()
    with ctx:
        if not inf_at:
            num = (z3 - z2) * (z4 - z1)
            den = (z3 - z1) * (z4 - z2)
            return num / den
        i = inf_at[0]
        if i == 0:
            return (z3 - z2) / (z4 - z2)
        if i == 1:
            return (z4 - z1) / (z3 - z1)
        if i == 2:
            return (z4 - z1) / (z4 - z2)
        return (z3 - z2) / (z3 - z1)


def _pt_eq(a, b):
    if a is Infinity or b is Infinity:
        return a is b
    if isinstance(a, FieldElement) != isinstance(b, FieldElement):
        return False
    return a == b


# ---------------------------------------------------------------------------

def _is_exact(g):
    return isinstance(g, (FieldElement, Fraction, int))


def _degenerate(g):
    if isinstance(g, FieldElement):
        return g.is_zero() or g.is_one()
    if isinstance(g, (Fraction, int)):
        return g == 0 or g == 1
    return g == 0 or g == 1


class PreBlochElement:
    """Formal integer combination of cross-ratio classes [z]."""

    def __init__(self, terms=None, field=None, drop_degenerate=False):
        self.field = field
        self.terms = {}
        if terms:
            for gen, coeff in (terms.items() if isinstance(terms, dict) else terms):
                self._add_term(gen, coeff, drop_degenerate)

    def _add_term(self, gen, coeff, drop_degenerate=False):
        coeff = int(coeff)
        if coeff == 0:
            return
        if isinstance(gen, int):
            gen = Fraction(gen)
        if _degenerate(gen):
            if drop_degenerate:
                warnings.warn("dropping degenerate generator %s" % (gen,))
                return
            raise DegenerateShape("generator %s lies in {0, 1}" % (gen,))
        if isinstance(gen, FieldElement):
            if self.field is None:
                self.field = gen.field
            elif gen.field != self.field:
                raise RequiresExactField("generator from a different field")
        elif isinstance(gen, Fraction):
            pass
        else:
            gen = exact_mpc(gen)
            # numeric generators computed along different arithmetic routes
            # differ in trailing bits; merge within a tight relative window
            tol = mp.mpf(2) ** -48
            for k in self.terms:
                if not isinstance(k, (FieldElement, Fraction)) and \
                        abs(k - gen) < tol * (1 + abs(k)):
                    gen = k
                    break
        new = self.terms.get(gen, 0) + coeff
        if new:
            self.terms[gen] = new
        else:
            self.terms.pop(gen, None)

    # -- group structure ----------------------------------------------------
    def __add__(self, other):
        out = PreBlochElement(field=self.field or other.field)
        for g, c in self.terms.items():
            out._add_term(g, c)
        for g, c in other.terms.items():
            out._add_term(g, c)
        return out

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, n):
        out = PreBlochElement(field=self.field)
        for g, c in self.terms.items():
            out._add_term(g, c * n)
        return out

    def __neg__(self):
        return self.scale(-1)

    def is_zero(self):
        return not self.terms

    def is_exact(self):
        return all(_is_exact(g) for g in self.terms)

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        return (isinstance(other, PreBlochElement)
                and self.terms == other.terms)

    def __repr__(self):
        if not self.terms:
            return "PreBlochElement(0)"
        bits = []
        for g, c in self.terms.items():
            if isinstance(g, FieldElement):
                gs = "[" + " ".join(str(q) for q in g.coeffs) + "]"
            else:
                gs = "[%s]" % (g,)
            bits.append("%+d*%s" % (c, gs))
        return "PreBlochElement(%s)" % " ".join(bits)


# ---------------------------------------------------------------------------
# six-fold symmetry

def orbit_images(z):
    """The six images of z under the cross-ratio symmetry group, with signs:
    even images {z, 1-1/z, 1/(1-z)} carry +1, odd {1/z, 1-z, z/(z-1)} -1."""
    one = _one_like(z)
    return [
        (z, 1),
        (one - one / z, 1),
        (one / (one - z), 1),
        (one / z, -1),
        (one - z, -1),
        (z / (z - one), -1),
    ]


def _one_like(z):
    if isinstance(z, FieldElement):
        return z.field.one()
    if isinstance(z, Fraction):
        return Fraction(1)
    return mp.mpc(1)


def _value_bits(z):
    z = exact_mpc(z)
    return max(z.real._mpf_[3], z.imag._mpf_[3], 53)


def canonical_representative(z):
    """Canonical orbit representative and the sign relating [z] to it.

    Exact generators: lexicographically smallest coefficient vector.  Numeric
    generators: among the upper-half-plane images, smallest modulus, ties by
    real then imaginary part (flat generators compare all six images); when
    the winner coincides with z itself the original value is returned, so
    normalization never degrades precision.
    """
    if _is_exact(z):
        def key(item):
            g, _ = item
            if isinstance(g, FieldElement):
                return tuple(g.coeffs)
            return (Fraction(g),)
        return min(orbit_images(z), key=key)
    zc = exact_mpc(z)
    with mp.workprec(_value_bits(zc) + 64):
        cands = [(exact_mpc(g), s) for g, s in orbit_images(zc)]
        if mp.im(zc) != 0:
            cands = [(g, s) for g, s in cands if mp.im(g) > 0]
        best, sign = min(cands,
                         key=lambda it: (abs(it[0]), mp.re(it[0]), mp.im(it[0])))
        if sign == 1 and abs(best - zc) < mp.mpf(2) ** (-_value_bits(zc) + 8) * (1 + abs(zc)):
            return zc, 1
        return best, sign


def six_fold_normalize(element):
    """Replace each generator by its canonical orbit representative.

    Idempotent; preserves the class in the pre-Bloch group and therefore all
    separators (D2 at every embedding, the wedge image, rho representatives).
    """
    out = PreBlochElement(field=element.field)
    for g, c in element.terms.items():
        canon, sign = canonical_representative(g)
        out._add_term(canon, sign * c)
    return out


def five_term(x, y):
    """The five-term relation element [x]-[y]+[y/x]-[(1-1/x)/(1-1/y)]+[(1-x)/(1-y)].

    Zero in the pre-Bloch group; raises DegenerateFiveTerm when any entry
    degenerates or x = y.
    """
    if _pt_eq(x, y):
        raise DegenerateFiveTerm("x = y")
    if isinstance(x, int):
        x = Fraction(x)
    if isinstance(y, int):
        y = Fraction(y)
    one_x = _one_like(x)
    one_y = _one_like(y)
    if _degenerate(x) or _degenerate(y):
        raise DegenerateFiveTerm("x or y in {0, 1}")
    entries = [
        (x, 1),
        (y, -1),
        (y / x, 1),
        ((one_x - one_x / x) / (one_y - one_y / y), -1),
        ((one_x - x) / (one_y - y), 1),
    ]
    for g, _ in entries:
        if _degenerate(g):
            raise DegenerateFiveTerm("entry %s lies in {0, 1}" % (g,))
    return PreBlochElement(entries)


# ---------------------------------------------------------------------------
# multiplicative relations and the wedge map

@dataclass
class Relation:
    """Verified multiplicative relation prod elements[i]^exponents[i] = unity."""
    exponents: tuple
    unity: object  # FieldElement or Fraction, a root of unity


@dataclass
class WedgeElement:
    basis: list
    matrix: list          # antisymmetric integer matrix over the basis
    certified: bool
    relations: list = dfield(default_factory=list)

    def is_zero(self):
        return all(all(x == 0 for x in row) for row in self.matrix)


@dataclass
class BlochCertificate:
    verdict: str                      # "CertifiedZero" | "LikelyNonzero"
    relations: list
    residual_basis: list

    @property
    def certified_zero(self):
        return self.verdict == "CertifiedZero"


_UNITY_ORDERS = {1: [1], 2: [1, 2], 3: [1, 2, 3, 4, 6],
                 4: [1, 2, 3, 4, 5, 6, 8, 10, 12]}


def _possible_unity_orders(degree):
    # orders m with euler_phi(m) <= degree
    out = []
    for m in range(1, 6 * degree + 7):
        if sympy.totient(m) <= degree:
            out.append(m)
    return out


def _is_root_of_unity(u):
    if isinstance(u, Fraction):
        return u in (1, -1)
    if u.is_rational():
        return u.as_rational() in (1, -1)
    nrm = u.norm()
    if nrm not in (1, -1):
        return False
    for m in _possible_unity_orders(u.field.degree):
        if (u ** m).is_one():
            return True
    return False


def _dedup_generators(element):
    """Distinct base elements {z, 1-z} of an exact element, plus the index
    pairs (i, j, coeff) of each term's (z, 1-z) in that list."""
    base = []
    index = {}

    def idx(x):
        if isinstance(x, Fraction):
            x = Fraction(x)
        if x in index:
            return index[x]
        index[x] = len(base)
        base.append(x)
        return index[x]

    pairs = []
    for g, c in element.terms.items():
        one = _one_like(g)
        pairs.append((idx(g), idx(one - g), c))
    return base, pairs


def _q_valuation_matrix(elements):
    """Exact prime-exponent vectors for nonzero rationals (or norms)."""
    primes = set()
    facs = []
    for q in elements:
        q = Fraction(q)
        fn = dict(sympy.factorint(abs(q.numerator)))
        fd = dict(sympy.factorint(q.denominator))
        fac = {p: fn.get(p, 0) - fd.get(p, 0) for p in set(fn) | set(fd)}
        facs.append(fac)
        primes |= set(fac)
    primes = sorted(primes)
    mat = [[fac.get(p, 0) for p in primes] for fac in facs]
    return primes, mat


def multiplicative_relations(elements, precision=256, max_coeff=64):
    """Verified multiplicative relations among nonzero exact elements.

    Candidates come from lattice reduction on the full archimedean complex-log
    vectors (modulus and argument at every place, with 2 pi / M ambiguity
    vectors for the possible torsion orders M), restricted to the exact
    kernel of the norm-valuation matrix; each candidate is then verified by
    exact multiplication.  At sufficient precision the numeric kernel equals
    the true relation lattice: a product whose embeddings all lie on the
    M-grid of the unit circle is a root of unity.
    """
    if not elements:
        return []
    elements = [Fraction(x) if isinstance(x, (int, Fraction)) else x
                for x in elements]
    if all(isinstance(x, Fraction) for x in elements):
        return _relations_over_q(elements)
    fld = next(x.field for x in elements if isinstance(x, FieldElement))
    elements = [fld.from_rational(x) if isinstance(x, Fraction) else x
                for x in elements]
    m = len(elements)

    # exact pruning: valuations of rational norms
    primes, val_mat = _q_valuation_matrix([x.norm() for x in elements])
    from .lattice import kernel_int
    if primes:
        val_kernel = kernel_int(val_mat)
    else:
        val_kernel = [[1 if j == i else 0 for j in range(m)] for i in range(m)]
    if not val_kernel:
        return []

    # full archimedean data: log|x| at every place, arg x at complex places
    es = embeddings(fld, precision)
    order_lcm = 1
    for o in _possible_unity_orders(fld.degree):
        order_lcm = order_lcm * o // math.gcd(order_lcm, o)
    with mp.workprec(precision + 32):
        def coord_vec(x):
            out = []
            for r in es.real_roots:
                out.append(mp.log(abs(x.evaluate(r))))
            for r in es.complex_pairs:
                v = x.evaluate(r)
                out.append(mp.log(abs(v)))
                out.append(mp.arg(v))
            return out

        ncoord = es.r1 + 2 * es.r2
        coords = [coord_vec(x) for x in elements]
        search = []
        for row in val_kernel:
            search.append([mp.fsum([row[i] * coords[i][j] for i in range(m)])
                           for j in range(ncoord)])
        # one 2 pi / M ambiguity vector per argument coordinate
        arg_cols = [es.r1 + 2 * j + 1 for j in range(es.r2)]
        for col in arg_cols:
            aux = [mp.mpf(0)] * ncoord
            aux[col] = 2 * mp.pi / order_lcm
            search.append(aux)
        combos = integer_relations(search, precision, max_coeff=None)
    nk = len(val_kernel)
    cand_basis = []
    for combo in combos:
        e = tuple(sum(combo[i] * val_kernel[i][j] for i in range(nk))
                  for j in range(m))
        if any(e) and (max_coeff is None or max(map(abs, e)) <= max_coeff):
            cand_basis.append(e)
    out = []
    seen = set()

    def try_vec(e):
        e = tuple(e)
        if not any(e) or e in seen or tuple(-x for x in e) in seen:
            return
        seen.add(e)
        rel = _verify_relation(elements, e)
        if rel is not None:
            out.append(rel)

    for e in cand_basis:
        try_vec(e)
    # short combinations of the candidate basis: an LLL-reduced basis is
    # near-orthogonal, so any remaining true relation has small coordinates
    for e in _small_combinations(cand_basis[:6], radius=2):
        try_vec(e)
    return out


def _small_combinations(rows, radius):
    """Integer combinations of rows with L1 coefficient norm <= radius."""
    if not rows:
        return
    m = len(rows[0])
    k = len(rows)

    def rec(idx, budget, acc):
        if idx == k:
            yield tuple(acc)
            return
        for c in range(-budget, budget + 1):
            nxt = acc
            if c:
                nxt = [a + c * b for a, b in zip(acc, rows[idx])]
            yield from rec(idx + 1, budget - abs(c), nxt)

    yield from rec(0, radius, [0] * m)


def _verify_relation(elements, exps):
    num = elements[0].field.one()
    den = elements[0].field.one()
    for x, e in zip(elements, exps):
        if e > 0:
            num = num * x ** e
        elif e < 0:
            den = den * x ** (-e)
    u = num / den
    if _is_root_of_unity(u):
        return Relation(tuple(int(e) for e in exps), u)
    return None


def _relations_over_q(elements):
    """Exact relation lattice for rationals via prime factorization."""
    _, mat = _q_valuation_matrix(elements)
    from .lattice import kernel_int
    if not mat or not mat[0]:
        kernel = [[1 if j == i else 0 for j in range(len(elements))]
                  for i in range(len(elements))]
    else:
        kernel = kernel_int(mat)
    out = []
    for e in kernel:
        u = Fraction(1)
        for x, ee in zip(elements, e):
            u *= Fraction(x) ** ee
        if u in (1, -1):
            out.append(Relation(tuple(int(x) for x in e), u))
    return out


def wedge(element, precision=256):
    """Image of the element under [z] -> 2 (z ^ (1-z)), modulo torsion.

    Returns a WedgeElement carrying an antisymmetric integer matrix over a
    multiplicative basis of the group generated by the z and 1-z, modulo the
    verified relation lattice.  ``certified`` records that every relation
    used was verified exactly (always true here; the flag mirrors the
    one-sided nature of the verdict for callers).
    """
    if not element.is_exact():
        raise RequiresExactField("wedge needs exact generators")
    if element.is_zero():
        return WedgeElement(basis=[], matrix=[], certified=True)
    base, pairs = _dedup_generators(element)
    m = len(base)
    rels = multiplicative_relations(base, precision=precision)
    rel_rows = [list(r.exponents) for r in rels]
    diag, proj = snf_with_projection(rel_rows, m)
    f = len(proj)
    mat = [[0] * f for _ in range(f)]
    for i, j, c in pairs:
        u = [proj[a][i] for a in range(f)]
        w = [proj[a][j] for a in range(f)]
        for a in range(f):
            for b in range(f):
                mat[a][b] += 2 * c * (u[a] * w[b] - u[b] * w[a])
    basis = _quotient_basis(base, proj)
    return WedgeElement(basis=basis, matrix=mat, certified=True, relations=rels)


def _quotient_basis(base, proj):
    """Field elements whose classes form a basis of the free quotient.

    proj rows are part of a unimodular matrix, so an exact right inverse
    exists; we solve for it column by column over Q (entries come out
    integral) and realize each column as a monomial in the base elements.
    """
    from .lattice import solve_integer
    f = len(proj)
    if f == 0:
        return []
    m = len(proj[0])
    cols = []
    for a in range(f):
        rhs = [1 if b == a else 0 for b in range(f)]
        sol = solve_integer(proj, rhs)
        if sol is None:
            return list(base)  # fall back: report raw elements
        cols.append(sol)
    out = []
    for col in cols:
        if all(isinstance(x, Fraction) for x in base):
            val = Fraction(1)
            for x, e in zip(base, col):
                val *= Fraction(x) ** e
        else:
            val = base[0].field.one()
            for x, e in zip(base, col):
                val = val * x ** e
        out.append(val)
    return out


def is_bloch(element, precision=256):
    """Certified Bloch-group membership test (modulo torsion).

    CertifiedZero is sound: the wedge vanishes in the quotient by exactly
    verified relations, which maps onto the true quotient.  LikelyNonzero is
    heuristic; a missed relation can only inflate the image.
    """
    w = wedge(element, precision=precision)
    if w.is_zero():
        verdict = "CertifiedZero"
    else:
        verdict = "LikelyNonzero"
    return BlochCertificate(verdict=verdict, relations=w.relations,
                            residual_basis=w.basis)


# ---------------------------------------------------------------------------
# element file serialization

def serialize_element(element, places=None, comment=None):
    """Text form: optional field/place headers then one line per term."""
    lines = []
    if comment:
        for c in comment.splitlines():
            lines.append("# " + c)
    if element.field is not None:
        fld = element.field
        lines.append("field %d %s" % (fld.degree,
                                      " ".join(str(c) for c in fld.min_poly)))
    if places:
        for z in places:
            lines.append("place %s %s" % (mp.nstr(mp.re(z), 20),
                                          mp.nstr(mp.im(z), 20)))
    for g, c in element.terms.items():
        if isinstance(g, FieldElement):
            lines.append("%d * [%s]" % (c, " ".join(str(q) for q in g.coeffs)))
        elif isinstance(g, Fraction):
            lines.append("%d * [%s]" % (c, g))
        else:
            lines.append("%d * (%s %s)" % (c, mp.nstr(mp.re(g), 30),
                                           mp.nstr(mp.im(g), 30)))
    return "\n".join(lines) + "\n"


def parse_element(text, precision=256):
    """Parse the element file format; returns (PreBlochElement, places).

    places is the list of declared complex embeddings (refined to
    ``precision`` by Newton polishing against the declared field), or None.
    """
    element = PreBlochElement()
    fld = None
    raw_places = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        if toks[0] == "field":
            try:
                deg = int(toks[1])
                coeffs = [int(t) for t in toks[2:]]
            except (ValueError, IndexError):
                raise TriangulationSyntaxError("bad field header", lineno)
            if len(coeffs) != deg + 1:
                raise TriangulationSyntaxError(
                    "field degree %d needs %d coefficients" % (deg, deg + 1), lineno)
            fld = NumberField(coeffs)
        elif toks[0] == "place":
            try:
                raw_places.append(mp.mpc(toks[1], toks[2]))
            except (ValueError, IndexError):
                raise TriangulationSyntaxError("bad place line", lineno)
        elif "*" in toks:
            star = toks.index("*")
            try:
                coeff = int("".join(toks[:star]))
            except ValueError:
                raise TriangulationSyntaxError("bad coefficient", lineno)
            rest = " ".join(toks[star + 1:])
            if rest.startswith("[") and rest.endswith("]"):
                qs = [Fraction(t) for t in rest[1:-1].split()]
                if fld is not None:
                    gen = fld.element(qs)
                elif len(qs) == 1:
                    gen = qs[0]
                else:
                    raise TriangulationSyntaxError(
                        "exact generator without field header", lineno)
            elif rest.startswith("(") and rest.endswith(")"):
                parts = rest[1:-1].split()
                if len(parts) != 2:
                    raise TriangulationSyntaxError("bad numeric generator", lineno)
                with mp.workprec(precision + 16):
                    gen = mp.mpc(mp.mpf(parts[0]), mp.mpf(parts[1]))
            else:
                raise TriangulationSyntaxError("bad generator syntax", lineno)
            element._add_term(gen, coeff)
        else:
            raise TriangulationSyntaxError("unrecognized line", lineno)
    places = None
    if raw_places:
        if fld is None:
            raise TriangulationSyntaxError("place lines require a field header")
        from .numfield import _polish
        places = [_polish(fld.min_poly, z, precision) for z in raw_places]
    return element, places
