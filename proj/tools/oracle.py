#!/usr/bin/env python3
"""Independent reference values for the test suite.

Everything here is computed from first principles, without the C++ library:
the map F from the literal jump-coefficient product, expected currents by
propagating mean occupations (not by excursion sums), the jump probability
by symbolic enumeration, and exit-time quantities by exact or high-precision
linear solves. The printed values are frozen into tests/.
"""

from fractions import Fraction
from itertools import product

import mpmath
import sympy

# ---------------------------------------------------------------------------
# d = 1 rings: sites (k, i), i in [0, N). Edges {i, i+1} at level k.


def make_xi(n, scatterers):
    """xi(k, a, b) for d = 1: forced to 1 when an endpoint leaves [-1, N]."""

    def xi(k, a, b):
        lo, hi = min(a, b), max(a, b)
        assert hi - lo == 1
        if lo < -1 or hi > n:
            return 1
        return 1 if (k % n, lo) in scatterers else 0

    return xi


def coeff(xi, k, i, j):
    c = xi(k, i, j)
    for l in (i - 1, i + 1):
        if l != j:
            c *= 1 - xi(k, i, l)
    for l in (j - 1, j + 1):
        if l != i:
            c *= 1 - xi(k, j, l)
    return c


def forward_map(n, xi):
    table = {}
    for k in range(n):
        for i in range(n):
            hits = [j for j in (i - 1, i + 1) if 0 <= j < n and coeff(xi, k, i, j)]
            assert len(hits) <= 1
            table[(k, i)] = ((k + 1) % n, hits[0] if hits else i)
    return table


def delta(table, x, l):
    (_, i), (_, j) = x, table[x]
    return (i == l and j == l + 1) - (i == l + 1 and j == l)


def mean_current(n, table, rho_m, rho_p, rho_i, l, t):
    """E[J(l, t)] by propagating E[sigma]; exact in Fractions."""
    inv = {v: u for u, v in table.items()}
    m = {x: (rho_m if x[1] == 0 else rho_p if x[1] == n - 1 else rho_i) for x in table}
    for _ in range(t):
        m = {x: (rho_m if x[1] == 0 else rho_p if x[1] == n - 1 else m[inv[x]]) for x in table}
    return sum(m[x] * delta(table, x, l) for x in table) / n


def two_scatterer_example():
    n = 3
    table = forward_map(n, make_xi(n, {(0, 0), (1, 1)}))
    orbit, x = [], (0, 0)
    while True:
        orbit.append(x)
        x = table[x]
        if x == (0, 0):
            break
    print("two-scatterer orbit", orbit, "period", len(orbit))
    print("F table", sorted(table.items()))
    rho = (Fraction(4, 5), Fraction(1, 5), Fraction(1, 2))
    for l in (0, 1):
        vals = [mean_current(n, table, *rho, l, t) for t in range(0, 12)]
        print(f"E[J({l}, t)], t=0..11:", [str(v) for v in vals])
    print("stationary (1/3)(rho- - rho+) =", Fraction(1, 3) * (rho[0] - rho[1]))


def single_scatterer_example():
    n = 4
    table = forward_map(n, make_xi(n, {(0, 1)}))
    print("single-scatterer F(0,1) =", table[(0, 1)], "F(0,2) =", table[(0, 2)])


# ---------------------------------------------------------------------------
# Jump probability of a fixed interior pair by symbolic enumeration.


def kappa_polynomial(d):
    mu = sympy.Symbol("mu")
    # Edges touching i or j other than {i, j}: 2 (2d - 1); plus {i, j} itself.
    others = 2 * (2 * d - 1)
    total = 0
    for bits in product((0, 1), repeat=others + 1):
        fires = bits[0] == 1 and not any(bits[1:])
        if fires:
            ones = sum(bits)
            total += mu**ones * (1 - mu) ** (others + 1 - ones)
    return sympy.factor(total)


# ---------------------------------------------------------------------------
# Lazy walk in the open direction, 1-based layers 1..N, absorbed at 1 and N.


def mgf_solve(layer, lam, n, nu):
    mpmath.mp.dps = 50
    lam, nu = mpmath.mpf(lam), mpmath.mpf(nu)
    size = n - 2
    a = mpmath.matrix(size, size)
    b = mpmath.matrix(size, 1)
    for r in range(size):
        a[r, r] = 1 - 2 * nu - mpmath.e ** (-lam)
        if r > 0:
            a[r, r - 1] = nu
        if r < size - 1:
            a[r, r + 1] = nu
    b[0] -= nu
    b[size - 1] -= nu
    h = mpmath.lu_solve(a, b)
    return 1 if layer in (1, n) else h[layer - 2]


def mean_exit_time(layer, n, nu):
    """E[tau_B] from E(x) = 1 + nu E(x-1) + nu E(x+1) + (1 - 2 nu) E(x)."""
    size = n - 2
    nu = sympy.Rational(nu)
    a = sympy.zeros(size, size)
    for r in range(size):
        a[r, r] = 2 * nu
        if r > 0:
            a[r, r - 1] = -nu
        if r < size - 1:
            a[r, r + 1] = -nu
    e = a.LUsolve(sympy.ones(size, 1))
    return 0 if layer in (1, n) else e[layer - 2]


def main():
    two_scatterer_example()
    single_scatterer_example()
    for d in (1, 2, 3):
        print(f"kappa polynomial d={d}:", kappa_polynomial(d))
    print("mu=0.1, d=7 kappa =", mpmath.nstr(mpmath.mpf("0.1") * mpmath.mpf("0.9") ** 26, 17))
    print("mu=0.2, d=2 kappa =", mpmath.nstr(mpmath.mpf("0.2") * mpmath.mpf("0.8") ** 6, 17))
    for layer in range(1, 9):
        print(f"mgf N=8 nu=0.1 lambda=nu/64 layer={layer}:", mpmath.nstr(mgf_solve(layer, 0.1 / 64, 8, 0.1), 17))
    print("mgf N=6 nu=0.1 lambda=nu/36 layer=3:", mpmath.nstr(mgf_solve(3, 0.1 / 36, 6, 0.1), 17))
    for n in (4, 8, 16):
        print(f"mean exit N={n} nu=1/10 layer 2:", mean_exit_time(2, n, sympy.Rational(1, 10)))
    print("mean exit N=7 nu=1/10 layer 4:", mean_exit_time(4, 7, sympy.Rational(1, 10)))


if __name__ == "__main__":
    main()
