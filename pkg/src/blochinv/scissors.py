"""Scissors congruence of ideal polyhedra with triangulated faces.

A polyhedron is a list of ideal vertices together with coherently oriented
face cycles and a triangulating diagonal set per face.  Its class in the
pre-Bloch group is computed by coning the face triangles to a vertex; the
class is independent of the chosen apex, and two decompositions related by a
cycle move (the geometric five-term relation on five ideal points) agree.

Flat polyhedra need no special casing: a flat quadrilateral is entered as
two opposite faces carrying the two diagonal choices; coning produces flat
simplices with real cross ratio, signed by the r -> r + i epsilon rule
through the orientation of the entered cycles.
"""

from __future__ import annotations

import mpmath as mp

from .errors import (DegenerateSimplex, DimensionMismatch,
                     NotAFiveTermConfiguration, NotDistinct,
                     TriangulationSyntaxError)
from .prebloch import (Infinity, PreBlochElement, cross_ratio,
                       six_fold_normalize, _pt_eq)


class IdealPolyhedron:
    """Ideal polyhedron with triangulated, coherently oriented faces."""

    def __init__(self, vertices, faces, diagonals=None, orientation=True):
        self.vertices = list(vertices)
        for i in range(len(self.vertices)):
            for j in range(i + 1, len(self.vertices)):
                if _pt_eq(self.vertices[i], self.vertices[j]):
                    raise NotDistinct("vertices %d and %d coincide" % (i, j))
        faces = [list(f) for f in faces]
        if not orientation:
            faces = [list(reversed(f)) for f in faces]
        self.faces = faces
        self.diagonals = [list(diagonals[k]) if diagonals and k < len(diagonals)
                          and diagonals[k] else [] for k in range(len(faces))]
        self._validate()

    def _validate(self):
        # closed coherently oriented surface: each directed edge used once
        directed = set()
        for cyc in self.faces:
            if len(cyc) < 3:
                raise DimensionMismatch("face with fewer than 3 vertices")
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                if (a, b) in directed:
                    raise DimensionMismatch(
                        "directed edge (%d,%d) used twice; faces not "
                        "coherently oriented" % (a, b))
                directed.add((a, b))
        for (a, b) in directed:
            if (b, a) not in directed:
                raise DimensionMismatch("boundary edge (%d,%d): faces do not "
                                        "close up" % (a, b))
        # triangulations: n-3 pairwise non-crossing diagonals per face
        for k, cyc in enumerate(self.faces):
            diags = self.diagonals[k]
            if len(diags) != len(cyc) - 3:
                raise DimensionMismatch(
                    "face %d needs %d diagonals, got %d"
                    % (k, len(cyc) - 3, len(diags)))
            pos = {v: i for i, v in enumerate(cyc)}
            for d in diags:
                if d[0] not in pos or d[1] not in pos:
                    raise DimensionMismatch("diagonal %s not on face %d"
                                            % (d, k))
            for i in range(len(diags)):
                for j in range(i + 1, len(diags)):
                    if _chords_cross(pos, diags[i], diags[j], len(cyc)):
                        raise DimensionMismatch(
                            "crossing diagonals on face %d" % k)
        # Euler characteristic with triangulated edges
        edges = set()
        ntri = 0
        for k, cyc in enumerate(self.faces):
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                edges.add(frozenset((a, b)))
            for d in self.diagonals[k]:
                edges.add(frozenset(d))
            ntri += len(cyc) - 2
        chi = len(self.vertices) - len(edges) + ntri
        if chi != 2:
            raise DimensionMismatch("Euler characteristic %d != 2" % chi)

    def face_triangles(self, k):
        """Oriented triangles of face k induced by its diagonal set."""
        return _triangulate_cycle(self.faces[k], [tuple(d) for d in
                                                  self.diagonals[k]])

    def triangles(self):
        out = []
        for k in range(len(self.faces)):
            out.extend(self.face_triangles(k))
        return out


def _chords_cross(pos, d1, d2, n):
    a, b = sorted((pos[d1[0]], pos[d1[1]]))
    c, d = sorted((pos[d2[0]], pos[d2[1]]))
    if len({a, b, c, d}) < 4:
        return False
    return (a < c < b < d) or (c < a < d < b)


def _triangulate_cycle(cyc, diags):
    """Split a polygon cycle along non-crossing chords into triangles,
    preserving the cycle's orientation."""
    if len(cyc) == 3:
        return [tuple(cyc)]
    members = set(cyc)
    for (u, v) in diags:
        iu, iv = cyc.index(u), cyc.index(v)
        if iu > iv:
            iu, iv = iv, iu
        side1 = cyc[iu:iv + 1]
        side2 = cyc[iv:] + cyc[:iu + 1]
        d1 = [d for d in diags if d != (u, v) and d != (v, u)
              and d[0] in side1 and d[1] in side1]
        d2 = [d for d in diags if d != (u, v) and d != (v, u)
              and d[0] in side2 and d[1] in side2]
        if len(d1) == len(side1) - 3 and len(d2) == len(side2) - 3:
            return _triangulate_cycle(side1, d1) + _triangulate_cycle(side2, d2)
    raise DimensionMismatch("diagonals do not triangulate the face")


def cone_decomposition(poly, apex):
    """Signed ideal simplices coning the face triangles to vertex ``apex``.

    Each face triangle (a, b, c) not containing the apex contributes the
    ordered simplex (apex, a, b, c): outward-oriented faces of a convex
    polyhedron then yield positively oriented cones.  Returns a list of
    (vertex-index 4-tuple, sign); flat cones are kept (real cross ratio),
    and repeated ideal points cannot occur for distinct vertices.
    """
    if not 0 <= apex < len(poly.vertices):
        raise DimensionMismatch("no vertex %d" % apex)
    out = []
    for (a, b, c) in poly.triangles():
        if apex in (a, b, c):
            continue
        out.append(((apex, a, b, c), 1))
    return out


def decomposition_class(poly, decomposition):
    """Pre-Bloch element of a signed simplex decomposition."""
    terms = []
    for (quad, sign) in decomposition:
        pts = [poly.vertices[i] for i in quad]
        for i in range(4):
            for j in range(i + 1, 4):
                if _pt_eq(pts[i], pts[j]):
                    raise DegenerateSimplex("cone simplex %s has equal "
                                            "vertices" % (quad,))
        terms.append((cross_ratio(*pts), sign))
    return PreBlochElement(terms)


def polyhedron_class(poly, apex=None):
    """Class of the polyhedron in the pre-Bloch group.

    Cones from the lexicographically first vertex (finite vertices ordered
    by (Re, Im); the point at infinity last) unless an apex is given.  The
    result is apex-independent in the pre-Bloch group; the computable
    separators (D2 at every embedding, the wedge image, rho) agree across
    apex choices.
    """
    if apex is None:
        apex = min(range(len(poly.vertices)),
                   key=lambda i: _vertex_key(poly.vertices[i]))
    dec = cone_decomposition(poly, apex)
    return six_fold_normalize(decomposition_class(poly, dec))


def _vertex_key(v):
    if v is Infinity:
        return (1,)
    z = mp.mpc(v) if not hasattr(v, "coeffs") else None
    if z is None:
        return (0, tuple(v.coeffs))
    return (0, mp.re(z), mp.im(z))


def _canon_simplex(quad, sign):
    """Canonical form of an ordered simplex up to even permutation."""
    order = sorted(range(4), key=lambda i: quad[i])
    inv = sum(1 for i in range(4) for j in range(i + 1, 4)
              if order[i] > order[j])
    canon = tuple(quad[i] for i in order)
    return canon, sign * (1 if inv % 2 == 0 else -1)


def cycle_move(decomposition, config):
    """Replace a 2-simplex sub-decomposition of the five-point configuration
    by the complementary 3-simplex one (or vice versa).

    config is an ordered 5-tuple of vertex indices (v0..v4); the even-index
    boundary faces {omit 0, omit 2, omit 4} match the odd ones
    {omit 1, omit 3} in the pre-Bloch group.  The class is unchanged.
    """
    v = list(config)
    if len(v) != 5 or len(set(v)) != 5:
        raise NotAFiveTermConfiguration("need five distinct vertex indices")
    omit = [tuple(v[:k] + v[k + 1:]) for k in range(5)]
    side_a = [_canon_simplex(omit[k], 1) for k in (0, 2, 4)]
    side_b = [_canon_simplex(omit[k], 1) for k in (1, 3)]
    canon_dec = [_canon_simplex(q, s) for q, s in decomposition]

    def remove_all(dec, side):
        dec = list(dec)
        for item in side:
            if item in dec:
                dec.remove(item)
            else:
                return None
        return dec

    def merged(dec):
        acc = {}
        for q, s in dec:
            acc[q] = acc.get(q, 0) + s
        out = []
        for q, s in acc.items():
            if s:
                out.extend([(q, 1 if s > 0 else -1)] * abs(s))
        return out

    for side, other in ((side_a, side_b), (side_b, side_a)):
        rest = remove_all(canon_dec, side)
        if rest is not None:
            return merged(rest + other)
        neg_side = [(q, -s) for q, s in side]
        neg_other = [(q, -s) for q, s in other]
        rest = remove_all(canon_dec, neg_side)
        if rest is not None:
            return merged(rest + neg_other)
    raise NotAFiveTermConfiguration(
        "decomposition does not contain either side of the configuration")


# ---------------------------------------------------------------------------
# polyhedron file format

def parse_polyhedron(text, precision=256):
    """vertex <i> <re> <im> | vertex <i> inf ; face <cycle> ; diag <face> <i> <j>."""
    verts = {}
    faces = []
    diags = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        try:
            if toks[0] == "vertex":
                idx = int(toks[1])
                if toks[2] == "inf":
                    verts[idx] = Infinity
                else:
                    with mp.workprec(precision + 16):
                        verts[idx] = mp.mpc(mp.mpf(toks[2]), mp.mpf(toks[3]))
            elif toks[0] == "face":
                faces.append([int(x) for x in toks[1:]])
            elif toks[0] == "diag":
                diags.setdefault(int(toks[1]), []).append(
                    (int(toks[2]), int(toks[3])))
            else:
                raise TriangulationSyntaxError("unrecognized keyword %r"
                                               % toks[0], lineno)
        except TriangulationSyntaxError:
            raise
        except (ValueError, IndexError):
            raise TriangulationSyntaxError("malformed %r line" % toks[0],
                                           lineno)
    if sorted(verts) != list(range(len(verts))):
        raise TriangulationSyntaxError("vertex indices must be 0..n-1")
    diag_list = [diags.get(k, []) for k in range(len(faces))]
    return IdealPolyhedron([verts[i] for i in range(len(verts))], faces,
                           diag_list)
