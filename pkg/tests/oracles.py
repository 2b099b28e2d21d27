"""Brute-force reference implementations.

These are written independently of the package internals: they use only
plain integer arithmetic on coordinates (an element of O is a pair of
integers ``(a, b)`` meaning ``a + b*sqrt(d)``).
"""

from fractions import Fraction
from itertools import product
from math import gcd


def mul(x, y, d=2):
    return (x[0] * y[0] + d * x[1] * y[1], x[0] * y[1] + x[1] * y[0])


def sub(x, y):
    return (x[0] - y[0], x[1] - y[1])


def norm(x, d=2):
    return x[0] * x[0] - d * x[1] * x[1]


def det_size(u, v, d=2):
    """|Norm(u1*v2 - u2*v1)| for vectors given as pairs of coordinate pairs."""
    return abs(norm(sub(mul(u[0], v[1], d), mul(u[1], v[0], d)), d))


def _hnf_index(gens):
    # index in Z^2 of the lattice spanned by integer 2-vectors
    g = 0
    for i in range(len(gens)):
        for j in range(i + 1, len(gens)):
            (a, b), (c, e) = gens[i], gens[j]
            g = gcd(g, a * e - b * c)
    return g


def content_norm(v, d=2):
    """|Norm| of a generator of the ideal (v1, v2), as the index of the Z-lattice
    spanned by v1, v1*w, v2, v2*w."""
    w = (0, 1)
    gens = [v[0], mul(v[0], w, d), v[1], mul(v[1], w, d)]
    return _hnf_index(gens)


def gram(phi, d=2):
    """Gram matrix of ``x -> Tr(a x1^2 + 2 c x1 x2 + b x2^2)`` on the Z-basis
    e1, w e1, e2, w e2; ``phi = (a, b, c)`` with entries rational pairs."""
    a, b, c = phi
    basis = [((1, 0), (0, 0)), ((0, 1), (0, 0)), ((0, 0), (1, 0)), ((0, 0), (0, 1))]

    def fmul(x, y):
        return (x[0] * y[0] + d * x[1] * y[1], x[0] * y[1] + x[1] * y[0])

    def val(u, v):
        t1 = fmul(a, fmul(u[0], v[0]))
        t2 = fmul(c, fmul(u[0], v[1]))
        t3 = fmul(c, fmul(u[1], v[0]))
        t4 = fmul(b, fmul(u[1], v[1]))
        return 2 * (t1[0] + t2[0] + t3[0] + t4[0])

    return [[Fraction(val(u, v)) for v in basis] for u in basis]


def _inverse_diag(G):
    # diagonal of G^{-1} by Gauss-Jordan over Fractions
    n = len(G)
    A = [list(map(Fraction, row)) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(G)]
    for col in range(n):
        piv = next(r for r in range(col, n) if A[r][col] != 0)
        A[col], A[piv] = A[piv], A[col]
        p = A[col][col]
        A[col] = [x / p for x in A[col]]
        for r in range(n):
            if r != col and A[r][col] != 0:
                f = A[r][col]
                A[r] = [x - f * y for x, y in zip(A[r], A[col])]
    return [A[i][n + i] for i in range(n)]


def box_min_vectors(phi, d=2):
    """Minimum and minimal vectors by scanning a box that provably contains them.

    Any x with x^T G x <= m satisfies x_i^2 <= m * (G^-1)_ii, and the minimum
    is at most the smallest diagonal entry m0.
    """
    G = gram(phi, d)
    m0 = min(G[i][i] for i in range(4))
    inv = _inverse_diag(G)
    radius = []
    for i in range(4):
        r = 0
        while Fraction((r + 1) ** 2) <= m0 * inv[i]:
            r += 1
        radius.append(r)
    best = None
    found = []
    for x in product(*(range(-r, r + 1) for r in radius)):
        if not any(x):
            continue
        q = sum(G[i][j] * x[i] * x[j] for i in range(4) for j in range(4))
        if best is None or q < best:
            best, found = q, [x]
        elif q == best:
            found.append(x)
    return best, found
