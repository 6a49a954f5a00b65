"""Reference values frozen into the C++ unit tests.

Each value is computed symbolically (sympy) or at high precision (mpmath),
independently of the C++ jets and limit branches. Run with python3; the
output lists every frozen constant with the test that uses it.
"""

import mpmath as mp
import sympy as sp
from shapely.geometry import MultiPoint, Point

mp.mp.dps = 40
a1, a2 = sp.symbols("a1 a2", real=True)


def slice_of_modulus(expr_t):
    """f(t1, t2) with t_j = tanh(a_j)^2 as a function of the slice coordinates."""
    t1, t2 = sp.symbols("t1 t2")
    return expr_t.subs({t1: sp.tanh(a1) ** 2, t2: sp.tanh(a2) ** 2})


def a_block(ft, point):
    subs = {a1: point[0], a2: point[1]}
    g = [sp.diff(ft, v) for v in (a1, a2)]
    h = [[sp.diff(ft, u, v) for v in (a1, a2)] for u in (a1, a2)]
    m = [[h[i][j] + (2 * sp.coth(2 * (a1, a2)[i]) * g[i] if i == j else 0) for j in range(2)] for i in range(2)]
    return [[sp.N(m[i][j].subs(subs), 30) for j in range(2)] for i in range(2)]


def medium(ft, point):
    g1, g2 = sp.diff(ft, a1), sp.diff(ft, a2)
    e = (sp.sinh(2 * a1) * g1 - sp.sinh(2 * a2) * g2) / (sp.sinh(a1 + a2) * sp.sinh(a1 - a2))
    return sp.N(e.subs({a1: point[0], a2: point[1]}), 30)


def medium_on_diagonal(ft, a):
    """Limit a2 -> a1 = a of the medium coefficient, via a series in the gap."""
    d = sp.symbols("d")
    g1, g2 = sp.diff(ft, a1), sp.diff(ft, a2)
    e = (sp.sinh(2 * a1) * g1 - sp.sinh(2 * a2) * g2) / (sp.sinh(a1 + a2) * sp.sinh(a1 - a2))
    e = e.subs({a1: a + d, a2: a})
    return sp.N(sp.limit(e, d, 0), 30)


def short(ft, point, j=0):
    g = sp.diff(ft, (a1, a2)[j])
    return sp.N((2 * g / sp.tanh((a1, a2)[j])).subs({a1: point[0], a2: point[1]}), 30)


def main():
    t1, t2 = sp.symbols("t1 t2")
    f = t1 + t2 + t1 * t2
    ft = slice_of_modulus(f)
    print("# f = t1 + t2 + t1*t2")
    print("a_block(0.8, 0.3) =", a_block(ft, (sp.Rational(8, 10), sp.Rational(3, 10))))
    print("medium(0.8, 0.3) =", medium(ft, (sp.Rational(8, 10), sp.Rational(3, 10))))
    print("short_1(0.8, 0.3) =", short(ft, (sp.Rational(8, 10), sp.Rational(3, 10))))
    print("medium on diagonal a = 0.5 =", medium_on_diagonal(ft, sp.Rational(1, 2)))
    # a_block at a2 = 0: limit of 2 coth(2 a2) g2 as a2 -> 0.
    g2 = sp.diff(ft, a2)
    lim = sp.limit((2 * sp.coth(2 * a2) * g2).subs(a1, sp.Rational(6, 10)), a2, 0)
    h22 = sp.diff(ft, a2, 2).subs({a1: sp.Rational(6, 10), a2: 0})
    print("a_block(0.6, 0)[1][1] =", sp.N(lim + h22, 30))

    # Quadratic slice function: medium limit 4a coth 2a + 2.
    a = mp.mpf("0.7")
    print("# sum a_j^2: medium limit at a = 0.7 =", 4 * a * mp.coth(2 * a) + 2)
    print("# sum a_j^2: medium at (0.7, 0) =", 4 * a * mp.coth(a))

    # Wirtinger Levi matrix of f = t1*t2 + (t1^2 + t2^2)/2 at z = (0.3+0.2i, -0.1+0.4i).
    z1, z2, w1, w2 = sp.symbols("z1 z2 w1 w2")  # w = conj(z) as an independent variable
    F = (z1 * w1) * (z2 * w2) + ((z1 * w1) ** 2 + (z2 * w2) ** 2) / 2
    zs = {z1: sp.Rational(3, 10) + sp.I * sp.Rational(2, 10), z2: -sp.Rational(1, 10) + sp.I * sp.Rational(4, 10)}
    zs[w1] = sp.conjugate(zs[z1])
    zs[w2] = sp.conjugate(zs[z2])
    L = [[sp.N(sp.diff(F, (w1, w2)[j], (z1, z2)[l]).subs(zs), 25) for l in range(2)] for j in range(2)]
    print("# Levi of t1*t2 + (t1^2 + t2^2)/2 at z = (0.3+0.2i, -0.1+0.4i):", L)

    # Disc potential -2 log(1 - |z|^2) at |z|^2 = 0.25.
    z, w = sp.symbols("z w")
    G = -2 * sp.log(1 - z * w)
    print("# disc Levi at |z|^2 = 1/4:", sp.N(sp.diff(G, z, w).subs({z: sp.Rational(1, 2), w: sp.Rational(1, 2)}), 25))

    # Killing potential, b = 8.
    h = [mp.mpf("0.3"), mp.mpf("1.2")]
    print("# potential_value(0.3, 1.2), b = 8:", 2 * sum(mp.log((mp.cosh(2 * x) + 1) / 2) for x in h))
    aa = mp.atanh(mp.mpf("0.5"))
    print("# moment coefficient, tanh a = 1/2, b = 8:", -8 * mp.sinh(aa) ** 2)
    x, y = mp.mpf("0.5"), mp.mpf("1.0")
    g = lambda u: 4 * mp.tanh(u)  # d/da of 4 log cosh a
    G21 = (2 * mp.sinh(2 * x) * g(x) - mp.sinh(2 * y) * g(y)) / (mp.sinh(x) ** 2 - mp.sinh(y) ** 2)
    print("# convess G_(2,1) of Killing at (0.5, 1.0):", G21)

    # Log-convex hull of two squares: membership of probe points.
    sq = []
    for lo, hi in ((0.1, 0.2), (0.5, 0.6)):
        for u in (lo, hi):
            for v in (lo, hi):
                sq.append((mp.log(u), mp.log(v)))
    hull = MultiPoint([(float(p), float(q)) for p, q in sq]).convex_hull
    for p in ((0.3, 0.3), (0.15, 0.55), (0.25, 0.35), (0.12, 0.45), (0.55, 0.15)):
        pt = Point(float(mp.log(p[0])), float(mp.log(p[1])))
        dist = hull.exterior.distance(pt)
        print(f"# hull membership {p}: inside={hull.contains(pt)} distance_to_boundary={dist:.4f}")


if __name__ == "__main__":
    main()
