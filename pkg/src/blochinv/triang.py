"""Triangulation data model and file I/O.

A triangulation carries n tetrahedra, h cusps, a shape vector (numeric or
exact over a declared field), the integer matrix U of the consistency/cusp
system U.Z = pi i d (rows: n edge rows, then per cusp a meridian row and a
longitude row), the integer vector d, optional gluing combinatorics, and
per-cusp filling instructions.

Shape conventions: tetrahedron vertices 0..3; the shape z is attached to the
edge pairs {01},{23}; 1/(1-z) to {02},{13}; 1-1/z to {03},{12}.  Z is the
column (log z_1 .. log z_n, log(1-z_1) .. log(1-z_n)) with principal logs;
the third edge parameter is folded in via log(1-1/z) = log(1-z) - log(z)
modulo pi i, the offsets landing in d.
"""

from __future__ import annotations

from fractions import Fraction

import mpmath as mp

from .errors import (DegenerateShape, DimensionMismatch, NotIntegral,
                     OpenFace, TriangulationSyntaxError)
from .numfield import FieldElement, NumberField
from .prebloch import PreBlochElement, six_fold_normalize

_GUARD = 24


def _edge_slot(a, b):
    """0, 1, 2 for a z-, z'-, z''-edge of a tetrahedron."""
    pair = tuple(sorted((a, b)))
    if pair in ((0, 1), (2, 3)):
        return 0
    if pair in ((0, 2), (1, 3)):
        return 1
    return 2


class GluingCombinatorics:
    """Face pairings: gluings[(tet, face)] = (other tet, vertex bijection).

    Face f is the face opposite vertex f; the 4-tuple permutation sends
    vertex labels of the source tetrahedron to the target's.
    """

    def __init__(self, n, gluings):
        self.n = n
        self.gluings = dict(gluings)
        for (t, f), (t2, perm) in self.gluings.items():
            inv = tuple(perm.index(i) for i in range(4))
            back = self.gluings.get((t2, perm[f]))
            if back is None or back != (t, inv):
                raise DimensionMismatch(
                    "gluing of tet %d face %d is not involutive" % (t, f))

    def edge_classes(self):
        """Orbits of tetrahedron edges under the face pairings."""
        parent = {}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(x, y):
            rx, ry = find(x), find(y)
            if rx != ry:
                parent[rx] = ry

        items = [(t, a, b) for t in range(self.n)
                 for a in range(4) for b in range(4) if a != b]
        for it in items:
            parent[it] = it
        for (t, f), (t2, perm) in self.gluings.items():
            for a in range(4):
                for b in range(4):
                    if a == b or a == f or b == f:
                        continue
                    union((t, a, b), (t2, perm[a], perm[b]))
        classes = {}
        for t in range(self.n):
            for a in range(4):
                for b in range(a + 1, 4):
                    key = min(find((t, a, b)), find((t, b, a)))
                    classes.setdefault(key, set()).add((t, (a, b)))
        return [sorted(c) for c in sorted(classes.values(), key=sorted)]


def edge_equations(g):
    """Edge rows of U from gluing combinatorics.

    One row per edge class; tetrahedron nu contributes +1 to column nu per
    z-edge, -1 to column n+nu per z'-edge, and (-1, +1) to columns
    (nu, n+nu) per z''-edge (the pi i offsets go to d via infer_d).
    Raises OpenFace if some face is unmatched.
    """
    n = g.n
    for t in range(n):
        for f in range(4):
            if (t, f) not in g.gluings:
                raise OpenFace("tet %d face %d unglued" % (t, f))
    rows = []
    for cls in g.edge_classes():
        a = [0] * n
        b = [0] * n
        for (t, e) in cls:
            s = _edge_slot(*e)
            if s == 0:
                a[t] += 1
            elif s == 1:
                b[t] -= 1
            else:
                a[t] -= 1
                b[t] += 1
        rows.append(a + b)
    return rows


class Triangulation:
    def __init__(self, n, h, shapes, U, d, combinatorics=None, field=None,
                 fillings=None, shape_tokens=None):
        self.n = n
        self.h = h
        self.shapes = list(shapes)
        self.U = [list(map(int, row)) for row in U]
        self.d = [int(x) for x in d]
        self.combinatorics = combinatorics
        self.field = field
        self.fillings = list(fillings) if fillings else [None] * h
        self._shape_tokens = shape_tokens
        if len(self.shapes) != n:
            raise DimensionMismatch("expected %d shapes, got %d" % (n, len(self.shapes)))
        for i, row in enumerate(self.U):
            if len(row) != 2 * n:
                raise DimensionMismatch("urow %d has %d entries, expected %d"
                                        % (i, len(row), 2 * n))
        if len(self.U) != n + 2 * h:
            raise DimensionMismatch("expected %d U rows, got %d"
                                    % (n + 2 * h, len(self.U)))
        if len(self.d) != n + 2 * h:
            raise DimensionMismatch("expected %d d entries, got %d"
                                    % (n + 2 * h, len(self.d)))

    # -- structured row access ---------------------------------------------
    def edge_rows(self):
        return self.U[:self.n], self.d[:self.n]

    def cusp_rows(self, j):
        """(meridian row, longitude row, d_mu, d_lambda) of cusp j."""
        i = self.n + 2 * j
        return self.U[i], self.U[i + 1], self.d[i], self.d[i + 1]

    def exact_shapes(self):
        return self.field is not None and \
            all(isinstance(z, FieldElement) for z in self.shapes)

    def numeric_shapes(self, precision=256, embedding=None):
        """Shape vector as complex numbers at the requested precision."""
        with mp.workprec(precision + _GUARD):
            out = []
            for i, z in enumerate(self.shapes):
                if isinstance(z, FieldElement):
                    if embedding is None:
                        raise ValueError("exact shapes need an embedding")
                    out.append(z.evaluate(embedding))
                elif self._shape_tokens and self._shape_tokens[i] is not None:
                    re_s, im_s = self._shape_tokens[i]
                    out.append(mp.mpc(mp.mpf(re_s), mp.mpf(im_s)))
                else:
                    out.append(mp.mpc(z))
            return out

    def log_parameters(self, precision=256, embedding=None):
        """Z = (log z_i ; log(1-z_i)), principal branches."""
        zs = self.numeric_shapes(precision, embedding)
        with mp.workprec(precision + _GUARD):
            for z in zs:
                if z == 0 or z == 1:
                    raise DegenerateShape("shape %s" % z)
            return [mp.log(z) for z in zs] + [mp.log(1 - z) for z in zs]

    def validate(self, precision=256, embedding=None):
        """Check U.Z = pi i d for the stored d; raises NotIntegral on failure."""
        inferred = infer_d(self, precision=precision, embedding=embedding)
        if inferred != self.d:
            raise NotIntegral("stored d %s but shapes give %s" % (self.d, inferred))
        return True


def infer_d(t, precision=256, embedding=None):
    """d = round(U.Z / pi i); errors if any entry is off by > 2^(-precision/4)."""
    Z = t.log_parameters(precision, embedding)
    with mp.workprec(precision + _GUARD):
        tol = mp.mpf(2) ** (-(precision // 4))
        out = []
        for row in t.U:
            val = mp.fsum([row[k] * Z[k] for k in range(2 * t.n)])
            q = val / (mp.pi * mp.mpc(0, 1))
            if abs(mp.im(q)) > tol:
                raise NotIntegral("row value %s not purely pi-i-integral" % q)
            k = mp.nint(mp.re(q))
            if abs(mp.re(q) - k) > tol:
                raise NotIntegral("row value %s / pi i not near an integer" % q)
            out.append(int(k))
        return out


def bloch_invariant(t):
    """The pre-Bloch class sum [z_j], six-fold normalized."""
    if t.n == 0:
        return PreBlochElement()
    if t.exact_shapes():
        terms = [(z, 1) for z in t.shapes]
        e = PreBlochElement(terms, field=t.field)
    else:
        zs = t.numeric_shapes()
        for z in zs:
            if z == 0 or z == 1:
                raise DegenerateShape("shape %s" % z)
        e = PreBlochElement([(z, 1) for z in zs])
    return six_fold_normalize(e)


# ---------------------------------------------------------------------------
# file format

def parse_triangulation(text, precision=256):
    """Parse the line-oriented triangulation format (see format docstring)."""
    n = h = None
    field = None
    shapes = {}
    shape_tokens = {}
    urows = {}
    dvec = None
    glue = {}
    fillings = {}
    any_line = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        any_line = True
        toks = line.split()
        key = toks[0]
        try:
            if key == "tets":
                n = int(toks[1])
            elif key == "cusps":
                h = int(toks[1])
            elif key == "field":
                deg = int(toks[1])
                coeffs = [int(x) for x in toks[2:]]
                if len(coeffs) != deg + 1:
                    raise TriangulationSyntaxError(
                        "field degree %d needs %d coefficients" % (deg, deg + 1),
                        lineno)
                field = NumberField(coeffs)
            elif key == "shape":
                idx = int(toks[1])
                if toks[2] == "exact":
                    if field is None:
                        raise TriangulationSyntaxError(
                            "exact shape before field header", lineno)
                    qs = [Fraction(x) for x in toks[3:]]
                    if len(qs) != field.degree:
                        raise TriangulationSyntaxError(
                            "exact shape needs %d coefficients" % field.degree,
                            lineno)
                    shapes[idx] = field.element(qs)
                    shape_tokens[idx] = None
                else:
                    re_s, im_s = toks[2], toks[3]
                    with mp.workprec(precision + _GUARD):
                        shapes[idx] = mp.mpc(mp.mpf(re_s), mp.mpf(im_s))
                    shape_tokens[idx] = (re_s, im_s)
            elif key == "urow":
                idx = int(toks[1])
                urows[idx] = [int(x) for x in toks[2:]]
            elif key == "dvec":
                dvec = [int(x) for x in toks[1:]]
            elif key == "glue":
                t_idx, f_idx, t2 = int(toks[1]), int(toks[2]), int(toks[3])
                perm = tuple(int(c) for c in toks[4])
                if sorted(perm) != [0, 1, 2, 3]:
                    raise TriangulationSyntaxError("bad permutation", lineno)
                glue[(t_idx, f_idx)] = (t2, perm)
            elif key == "fill":
                c = int(toks[1])
                if toks[2] == "complete":
                    fillings[c] = None
                else:
                    fillings[c] = (int(toks[2]), int(toks[3]))
            else:
                raise TriangulationSyntaxError("unrecognized keyword %r" % key,
                                               lineno)
        except TriangulationSyntaxError:
            raise
        except (ValueError, IndexError):
            raise TriangulationSyntaxError("malformed %r line" % key, lineno)
    if not any_line or n is None or h is None:
        raise TriangulationSyntaxError("missing tets/cusps header")
    if sorted(shapes) != list(range(n)):
        raise TriangulationSyntaxError("need one shape per tetrahedron")
    if sorted(urows) != list(range(n + 2 * h)):
        raise TriangulationSyntaxError("need %d urow lines" % (n + 2 * h))
    if dvec is None:
        raise TriangulationSyntaxError("missing dvec")
    combi = GluingCombinatorics(n, glue) if glue else None
    fill_list = [fillings.get(j) for j in range(h)]
    return Triangulation(
        n, h, [shapes[i] for i in range(n)],
        [urows[i] for i in range(n + 2 * h)], dvec,
        combinatorics=combi, field=field, fillings=fill_list,
        shape_tokens=[shape_tokens.get(i) for i in range(n)])


def serialize_triangulation(t):
    lines = ["tets %d" % t.n, "cusps %d" % t.h]
    if t.field is not None:
        lines.append("field %d %s" % (t.field.degree,
                                      " ".join(str(c) for c in t.field.min_poly)))
    for i, z in enumerate(t.shapes):
        if isinstance(z, FieldElement):
            lines.append("shape %d exact %s" % (i, " ".join(str(q) for q in z.coeffs)))
        elif t._shape_tokens and t._shape_tokens[i] is not None:
            re_s, im_s = t._shape_tokens[i]
            lines.append("shape %d %s %s" % (i, re_s, im_s))
        else:
            lines.append("shape %d %s %s" % (i, mp.nstr(mp.re(z), 40),
                                             mp.nstr(mp.im(z), 40)))
    for i, row in enumerate(t.U):
        lines.append("urow %d %s" % (i, " ".join(str(x) for x in row)))
    lines.append("dvec %s" % " ".join(str(x) for x in t.d))
    if t.combinatorics is not None:
        for (tt, f) in sorted(t.combinatorics.gluings):
            t2, perm = t.combinatorics.gluings[(tt, f)]
            lines.append("glue %d %d %d %s" % (tt, f, t2,
                                               "".join(str(p) for p in perm)))
    for j, fl in enumerate(t.fillings):
        if fl is None:
            lines.append("fill %d complete" % j)
        else:
            lines.append("fill %d %d %d" % (j, fl[0], fl[1]))
    return "\n".join(lines) + "\n"


def embedding_for_validation(t, precision=256):
    """For exact shapes: the embedding at which the stored d validates.

    Tries every root of the field's minimal polynomial and returns the first
    match in deterministic order; raises NotIntegral when none works.
    """
    from .numfield import embeddings as _embeddings
    if not t.exact_shapes():
        return None
    es = _embeddings(t.field, precision)
    last = None
    for root in es.all_roots():
        try:
            if infer_d(t, precision=precision, embedding=root) == t.d:
                return root
        except (NotIntegral, DegenerateShape) as exc:
            last = exc
    raise NotIntegral("no embedding validates the stored d (%s)" % last)
