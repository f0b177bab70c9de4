from fractions import Fraction

import mpmath as mp
import pytest

from blochinv.numfield import (field_make, embeddings,
                               eval_embedding, poly_gcd, poly_ext_gcd,
                               poly_mul, _rational_roots)
from blochinv.errors import (DetectedReducible, DivisionByZero, FieldMismatch,
                             NonMonic, NotSquarefree)


# min polys, low degree first
WEEKS = [1, -1, 0, 1]          # x^3 - x + 1
GAUSS = [1, 0, 1]              # x^2 + 1
QUARTIC = [1, -1, 1, 0, 1]     # x^4 + x^2 - x + 1


def test_field_make_cubic():
    k = field_make(WEEKS)
    assert k.degree == 3
    assert k.min_poly == (1, -1, 0, 1)


def test_field_make_gaussian():
    k = field_make(GAUSS)
    assert k.degree == 2


def test_field_make_rejects_reducible():
    with pytest.raises(DetectedReducible):
        field_make([-1, 0, 1])  # x^2 - 1 = (x-1)(x+1)


def test_field_make_rejects_nonmonic():
    with pytest.raises(NonMonic):
        field_make([1, 0, 2])


def test_field_make_rejects_nonsquarefree():
    with pytest.raises(NotSquarefree):
        field_make([1, 2, 1])  # (x+1)^2


def test_rational_roots():
    assert Fraction(1) in _rational_roots([-1, 0, 1])
    assert _rational_roots([1, -1, 0, 1]) == []


def test_theta_cubed_reduction():
    # in Q[x]/(x^3 - x + 1): theta^3 = theta - 1
    k = field_make(WEEKS)
    th = k.gen()
    cube = th * th * th
    assert cube == th - 1


def test_inverse_identity():
    k = field_make(WEEKS)
    th = k.gen()
    assert (th * th.inverse()).is_one()


def test_inverse_one_minus_theta():
    # oracle: extended Euclid result must multiply back to 1 exactly
    k = field_make(WEEKS)
    th = k.gen()
    x = k.one() - th
    assert (x * x.inverse()).is_one()
    g, s, t = poly_ext_gcd([1, -1], list(WEEKS))
    assert g == [Fraction(1)]


def test_inverse_zero_raises():
    k = field_make(WEEKS)
    with pytest.raises(DivisionByZero):
        k.zero().inverse()


def test_field_mismatch():
    a = field_make(WEEKS).gen()
    b = field_make(GAUSS).gen()
    with pytest.raises(FieldMismatch):
        a + b


def test_random_mul_inverse_roundtrip():
    import random
    rng = random.Random(7)
    k = field_make(QUARTIC)
    for _ in range(25):
        coeffs = [Fraction(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(4)]
        a = k.element(coeffs)
        if a.is_zero():
            continue
        assert (a * a.inverse()).is_one()


def test_norm_multiplicative():
    import random
    rng = random.Random(3)
    k = field_make(QUARTIC)
    for _ in range(10):
        a = k.element([rng.randint(-5, 5) for _ in range(4)])
        b = k.element([rng.randint(-5, 5) for _ in range(4)])
        assert (a * b).norm() == a.norm() * b.norm()


# --------------------------------------------------------------------------
# embeddings

def _sturm_count(poly, a, b):
    """Number of real roots in (a, b] via Sturm sequence (oracle)."""
    chain = [poly, [i * c for i, c in enumerate(poly)][1:]]
    while chain[-1]:
        p, q = chain[-2], chain[-1]
        # remainder of p mod q over Fractions
        p = [Fraction(c) for c in p]
        q = [Fraction(c) for c in q]
        r = p[:]
        while len(r) >= len(q) and any(c != 0 for c in r):
            while r and r[-1] == 0:
                r.pop()
            if len(r) < len(q):
                break
            c = r[-1] / q[-1]
            shift = len(r) - len(q)
            for i, qc in enumerate(q):
                r[shift + i] -= c * qc
            while r and r[-1] == 0:
                r.pop()
        chain.append([-c for c in r])
    chain.pop()

    def signs_at(x):
        out = []
        for p in chain:
            v = Fraction(0)
            for c in reversed(p):
                v = v * x + c
            if v != 0:
                out.append(1 if v > 0 else -1)
        return sum(1 for i in range(len(out) - 1) if out[i] != out[i + 1])

    return signs_at(Fraction(a)) - signs_at(Fraction(b))


def test_embeddings_cubic_signature():
    k = field_make(WEEKS)
    es = embeddings(k, 128)
    assert es.r1 == 1 and es.r2 == 1
    assert abs(es.real_roots[0] - mp.mpf("-1.3247179572447460260")) < 1e-15
    th = es.complex_pairs[0]
    assert mp.im(th) > 0
    # oracle: Sturm sequence counts exactly one real root in (-2, 0)
    assert _sturm_count([1, -1, 0, 1], -2, 0) == 1
    assert _sturm_count([1, -1, 0, 1], 0, 2) == 0


def test_embeddings_quartic_matches_printed_roots():
    k = field_make(QUARTIC)
    es = embeddings(k, 192)
    assert es.r1 == 0 and es.r2 == 2
    # ascending real part
    z1, z2 = es.complex_pairs
    assert mp.re(z1) < mp.re(z2)
    assert abs(mp.re(z2) - mp.mpf("0.54742")) < 1e-4
    assert abs(mp.im(z2) - mp.mpf("0.58565")) < 1e-4
    assert abs(mp.re(z1) + mp.mpf("0.54742")) < 1e-4
    assert abs(mp.im(z1) - mp.mpf("1.12087")) < 1e-4


def test_embeddings_gaussian():
    k = field_make(GAUSS)
    es = embeddings(k, 128)
    assert es.r1 == 0 and es.r2 == 1
    assert abs(es.complex_pairs[0] - mp.mpc(0, 1)) < mp.mpf(2) ** -100


def test_embedding_residual_bound():
    k = field_make(QUARTIC)
    prec = 256
    es = embeddings(k, prec)
    th = k.gen()
    with mp.workprec(prec + 32):
        for root in es.all_roots():
            v = eval_embedding(th, root, prec)
            resid = v ** 4 + v ** 2 - v + 1
            assert abs(resid) < mp.mpf(2) ** (-prec // 2)


def test_eval_embedding_constant():
    k = field_make(WEEKS)
    es = embeddings(k, 128)
    half = k.from_rational(Fraction(1, 2))
    assert abs(eval_embedding(half, es.complex_pairs[0], 128) - 0.5) < 1e-30


def test_eval_embedding_ring_homomorphism():
    import random
    rng = random.Random(11)
    k = field_make(QUARTIC)
    prec = 192
    es = embeddings(k, prec)
    root = es.complex_pairs[1]
    with mp.workprec(prec + 32):
        tol = mp.mpf(2) ** (-prec // 2 + 4)
        for _ in range(10):
            a = k.element([rng.randint(-6, 6) for _ in range(4)])
            b = k.element([rng.randint(-6, 6) for _ in range(4)])
            lhs = eval_embedding(a * b, root, prec)
            rhs = eval_embedding(a, root, prec) * eval_embedding(b, root, prec)
            assert abs(lhs - rhs) < tol * max(1, abs(rhs))


def test_precision_monotonicity():
    k = field_make(WEEKS)
    lo = embeddings(k, 128).complex_pairs[0]
    hi = embeddings(k, 320).complex_pairs[0]
    assert abs(lo - hi) < mp.mpf(2) ** -120


def test_degree_one_field_is_rational():
    q = field_make([0, 1])
    assert q.is_rational()
    es = embeddings(q, 128)
    assert es.r1 == 1 and es.r2 == 0
    assert q.gen().as_rational() == 0
