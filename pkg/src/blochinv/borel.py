"""Borel regulator vectors and integer-relation detection between elements.

The regulator of an exact pre-Bloch element over a number field F is the
vector of D2 values at one embedding per conjugate pair.  Its kernel on the
Bloch group is exactly the torsion, so equality of regulator vectors decides
equality mod torsion -- up to the lattice-covolume caveat inherent in any
numerical verification, which callers see through the residual and the
NumericOnly confidence tag.

Galois conjugates are realized without splitting-field arithmetic: a
conjugate of an element is the same coefficient data evaluated at a
different root of the minimal polynomial.  The subgroup generated by all
conjugates is probed through the symmetric-group orbit of the per-root value
vector (exact for fields with full symmetric Galois group, an upper bound
otherwise), which reproduces the expected ranks: a conjugate family of d
vectors with vanishing sum spans d - 1 dimensions at most.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import mpmath as mp

from .dilog import bloch_wigner
from .errors import DegenerateShape
from .lattice import lll_reduce
from .numfield import FieldElement, embeddings

_GUARD = 24


@dataclass
class RegulatorVector:
    field: object
    values: list

    def __len__(self):
        return len(self.values)


@dataclass
class RelationReport:
    coefficients: tuple
    residual: object
    confidence: str  # "ExactInputVerified" | "NumericOnly"


def _element_value_at(element, root, precision):
    total = mp.mpf(0)
    for gen, coeff in element.terms.items():
        if isinstance(gen, FieldElement):
            zv = gen.evaluate(root)
        else:
            zv = gen
        if zv == 0 or zv == 1:
            raise DegenerateShape("generator maps to %s under embedding" % zv)
        total += coeff * bloch_wigner(zv, precision)
    return total


def borel_regulator(element, precision=256, places=None):
    """Regulator vector (sum_i n_i D2(sigma_j(z_i)))_j of an exact element.

    places defaults to the field's conjugate-pair representatives in the
    deterministic order; pass an explicit root list to reproduce a published
    embedding convention.
    """
    if not element.is_exact() or element.field is None:
        raise DegenerateShape("regulator needs exact generators over a field")
    with mp.workprec(precision + _GUARD):
        if places is None:
            places = embeddings(element.field, precision).places
        vals = [_element_value_at(element, r, precision) for r in places]
    return RegulatorVector(field=element.field, values=vals)


def detect_relation(vectors, coefficient_bound=64, precision=256,
                    elements=None):
    """Small integer relation between regulator vectors, or None.

    Lattice reduction on rows [I | 2^(precision/2) * vectors]; a candidate is
    reported only when its residual  || sum a_i v_i ||  is below
    2^(-precision/2).  With ``elements`` given, a relation whose exact
    combination six-fold-normalizes to zero is tagged ExactInputVerified.
    """
    vecs = [v.values if isinstance(v, RegulatorVector) else list(v)
            for v in vectors]
    m = len(vecs)
    if m < 2:
        return None
    dim = len(vecs[0])
    if any(len(v) != dim for v in vecs):
        raise ValueError("vectors of unequal length")
    with mp.workprec(precision + _GUARD):
        K = mp.mpf(2) ** (precision // 2)
        rows = []
        for i, v in enumerate(vecs):
            tail = [int(mp.nint(K * mp.mpf(x))) for x in v]
            rows.append([1 if j == i else 0 for j in range(m)] + tail)
        red = lll_reduce(rows)
        tol = mp.mpf(2) ** (-(precision // 2))
        best = None
        for row in red:
            coeffs = row[:m]
            if not any(coeffs):
                continue
            if max(abs(c) for c in coeffs) > coefficient_bound:
                continue
            resid = mp.sqrt(mp.fsum(
                [mp.fsum([coeffs[i] * vecs[i][j] for i in range(m)]) ** 2
                 for j in range(dim)]))
            if resid < tol:
                if best is None or max(map(abs, coeffs)) < max(map(abs, best[0])):
                    best = (coeffs, resid)
        if best is None:
            return None
        coeffs, resid = best
        g = 0
        for c in coeffs:
            g = math.gcd(g, abs(c))
        coeffs = [c // g for c in coeffs]
        for c in coeffs:
            if c != 0:
                if c < 0:
                    coeffs = [-x for x in coeffs]
                break
        confidence = "NumericOnly"
        if elements is not None:
            from .prebloch import six_fold_normalize
            combo = None
            for c, e in zip(coeffs, elements):
                if e is None:
                    combo = None
                    break
                part = e.scale(c)
                combo = part if combo is None else combo + part
            if combo is not None and six_fold_normalize(combo).is_zero():
                confidence = "ExactInputVerified"
        return RelationReport(coefficients=tuple(coeffs), residual=resid,
                              confidence=confidence)


def per_root_values(element, precision=256):
    """D2 sums of an exact element at every root of min_poly, in the
    deterministic all-roots order (real roots contribute zero)."""
    if not element.is_exact() or element.field is None:
        raise DegenerateShape("needs exact generators over a field")
    with mp.workprec(precision + _GUARD):
        es = embeddings(element.field, precision)
        return [_element_value_at(element, r, precision)
                for r in es.all_roots()]


def galois_conjugate_sum(element, precision=256):
    """Per-root D2 sums; their total vanishes for Bloch-group elements.

    Returns the vector over all roots of min_poly; callers check that
    fsum(vector) is numerically zero.
    """
    return per_root_values(element, precision)


def conjugate_family(element, precision=256, roots_idx=None):
    """Vectors realizing the Galois conjugates of an element.

    Conjugate k (evaluation at root k) maps to the vector indexed by
    permutations pi of the roots with entry W[pi(k)], W being the per-root
    value vector.  Spans of such vectors reproduce the regulator ranks of
    conjugate families when the Galois closure has full symmetric group.
    """
    W = per_root_values(element, precision)
    d = len(W)
    if d > 6:
        raise ValueError("degree %d conjugate family is too large" % d)
    perms = list(itertools.permutations(range(d)))
    idxs = roots_idx if roots_idx is not None else range(d)
    return [[W[p[k]] for p in perms] for k in idxs]


def rank_witness(vectors, precision=256, threshold=None):
    """Numerical rank of the span of equal-length real vectors.

    Gaussian elimination with full pivoting; a pivot counts while it exceeds
    threshold (default 2^(-precision/2)) times the largest pivot.
    """
    vecs = [v.values if isinstance(v, RegulatorVector) else list(v)
            for v in vectors]
    if not vecs:
        return 0
    with mp.workprec(precision + _GUARD):
        A = [[mp.mpf(x) for x in row] for row in vecs]
        m, n = len(A), len(A[0])
        if threshold is None:
            threshold = mp.mpf(2) ** (-(precision // 2))
        pivots = []
        r = 0
        cols = list(range(n))
        while r < m:
            piv = None
            best = mp.mpf(0)
            for i in range(r, m):
                for j in cols:
                    if abs(A[i][j]) > best:
                        best = abs(A[i][j])
                        piv = (i, j)
            if piv is None or best == 0:
                break
            i0, j0 = piv
            A[r], A[i0] = A[i0], A[r]
            pivots.append(best)
            for i in range(r + 1, m):
                f = A[i][j0] / A[r][j0]
                if f:
                    A[i] = [a - f * b for a, b in zip(A[i], A[r])]
            cols.remove(j0)
            r += 1
        if not pivots:
            return 0
        top = pivots[0]
        return sum(1 for p in pivots if p > threshold * top)
