"""Independent reference values for the frozen constants in the C++ tests.

Works with explicit matrix coordinates: a Hermitian n x n matrix is written on
an orthonormal Hilbert-Schmidt basis with independent N(0,1) coefficients, and
expectations are taken monomial by monomial (E x^{2k} = (2k-1)!!). Gradients
and Laplacians are plain coordinate derivatives. Nothing here shares code with
the library.

Run: python3 tests/oracle/derive_values.py
"""

import math

import mpmath
import sympy as sp

x, nn = sp.symbols("x n")


def hermitian(n):
    coords = []
    a = sp.zeros(n, n)
    s = sp.sqrt(2)
    for i in range(n):
        c = sp.Symbol(f"d{i}", real=True)
        coords.append(c)
        a[i, i] = c
    for i in range(n):
        for j in range(i + 1, n):
            re = sp.Symbol(f"r{i}_{j}", real=True)
            im = sp.Symbol(f"i{i}_{j}", real=True)
            coords += [re, im]
            a[i, j] = (re + sp.I * im) / s
            a[j, i] = (re - sp.I * im) / s
    return a, coords


def gaussian_expect(expr, coords):
    expr = sp.expand(expr)
    if expr == 0:
        return sp.Integer(0)
    poly = sp.Poly(expr, *coords)
    total = sp.Integer(0)
    for monom, coeff in poly.terms():
        m = sp.Integer(1)
        for e in monom:
            if e % 2:
                m = 0
                break
            m *= sp.factorial2(e - 1) if e else 1
        total += coeff * m
    return sp.nsimplify(sp.simplify(total))


class Model:
    def __init__(self, n):
        self.n = n
        self.a, self.coords = hermitian(n)
        self.powers = [sp.eye(n)]
        self._tr = {}

    def tr(self, k):
        if k not in self._tr:
            while len(self.powers) <= k:
                self.powers.append((self.powers[-1] * self.a).applyfunc(sp.expand))
            # Traces of powers of a Hermitian matrix are real; the imaginary
            # parts cancel on expansion.
            self._tr[k] = sp.expand(self.powers[k].trace())
        return self._tr[k]

    def g(self, k):  # scaled trace tr (n^{-1/2} A)^k
        return sp.expand(self.tr(k) * sp.Integer(self.n) ** sp.Rational(-k, 2))

    def expect(self, e):
        return gaussian_expect(e, self.coords)

    def gamma(self, u, v):
        return sp.expand(sum(sp.diff(u, c) * sp.diff(v, c) for c in self.coords))

    def generator(self, u):
        return sp.expand(sum(sp.diff(u, c, 2) - c * sp.diff(u, c) for c in self.coords))

    def chebyshev_F(self, p):
        t = sp.chebyshevt(p, x / 2)
        poly = sp.Poly(sp.expand(t), x)
        stat = sum(coef * self.g(k) if k else coef * self.n for (k,), coef in poly.terms())
        return sp.expand(stat - self.expect(stat))


def fit_polynomial(values, degree):
    pts = list(values.items())
    return sp.expand(sp.interpolate(pts, nn)) if len(pts) > degree else None


def main():
    print("T_4 =", sp.expand(sp.chebyshevt(4, x)))
    print("U_3 =", sp.expand(sp.chebyshevu(3, x)))
    print("T_4' - 4 U_3 =", sp.expand(sp.diff(sp.chebyshevt(4, x), x) - 4 * sp.chebyshevu(3, x)))
    print("C_3 =", math.comb(6, 3) // 4, " C_6 =", math.comb(12, 6) // 7)
    w = sp.sqrt(4 - x**2) / (2 * sp.pi)
    mom = lambda k: sp.integrate(x**k * w, (x, -2, 2))  # noqa: E731
    print("semicircle moments 2,3,6 =", mom(2), mom(3), mom(6))
    def ip(f, g):
        return sp.simplify(sp.integrate(sp.expand(f * g) * w, (x, -2, 2)))
    u = lambda p: sp.chebyshevu(p, x / 2)  # noqa: E731
    print("<U1,U1>, <U2,U3>, <x,x> =", ip(u(1), u(1)), ip(u(2), u(3)), ip(x, x))
    print("T_2(x/2) =", sp.expand(sp.chebyshevt(2, x / 2)))

    # Wick values as polynomials in n, interpolated from exact values at n = 1..5.
    models = {n: Model(n) for n in range(1, 6)}
    for name, f in [
        ("E tr A^2", lambda m: m.tr(2)),
        ("E tr A^4", lambda m: m.tr(4)),
        ("E (tr A^2)^2", lambda m: m.tr(2) ** 2),
        ("E tr A^3", lambda m: m.tr(3)),
    ]:
        vals = {n: models[n].expect(f(models[n])) for n in range(1, 6)}
        print(name, "=", fit_polynomial(vals, 4))

    for n in (2, 3):
        m = models[n]
        print(f"--- n = {n}")
        print("Gamma(g1,g2) - (2/n) g1 =", sp.simplify(m.gamma(m.g(1), m.g(2)) - sp.Rational(2, n) * m.g(1)))
        print("Lap tr A^2 =", sp.simplify(sum(sp.diff(m.tr(2), c, 2) for c in m.coords)))
        lap4 = sp.expand(sum(sp.diff(m.tr(4), c, 2) for c in m.coords))
        print("Lap tr A^4 - 4(2n trA^2 + (trA)^2) =", sp.simplify(lap4 - 4 * (2 * n * m.tr(2) + m.tr(1) ** 2)))
        print("L tr A^2 - (2n^2 - 2 tr A^2) =", sp.simplify(m.generator(m.tr(2)) - (2 * n * n - 2 * m.tr(2))))
        print("L tr A^3 - (6n trA - 3 trA^3) =", sp.simplify(m.generator(m.tr(3)) - (6 * n * m.tr(1) - 3 * m.tr(3))))
        lg4 = -4 * m.g(4) + 8 * m.g(2) + sp.Rational(4, n) * m.g(1) ** 2
        print("L g4 - (-4g4 + 8g2 + 4/n g1^2) =", sp.simplify(m.generator(m.g(4)) - lg4))
        f = {p: m.chebyshev_F(p) for p in range(1, 5)}
        f4 = sp.Rational(1, 2) * m.g(4) - 2 * m.g(2) + n - sp.Rational(1, 2 * n)
        print("F4 - closed form =", sp.simplify(f[4] - f4))
        for p in (2, 3):
            print(f"L F{p} + {p} F{p} =", sp.simplify(m.generator(f[p]) + p * f[p]))
        e1 = sp.expand(m.generator(f[4]) + 4 * f[4])
        print("E1_4 - (2/n)(g1^2 - 1) =", sp.simplify(e1 - sp.Rational(2, n) * (m.g(1) ** 2 - 1)))
        print("E E1_4^2 =", m.expect(e1**2), " vs 8/n^2 =", sp.Rational(8, n * n))
        print("Gamma(F1,F1) =", sp.simplify(m.gamma(f[1], f[1])))
        print("E Gamma(F3,F3) =", m.expect(m.gamma(f[3], f[3])), " vs", sp.Rational(9, 4) * (1 + sp.Rational(1, n * n)))
        print("E Gamma(F4,F4) =", m.expect(m.gamma(f[4], f[4])), " vs 4 + 24/n^2 =", 4 + sp.Rational(24, n * n))
        print("E Gamma(F2,F4) =", m.expect(m.gamma(f[2], f[4])), " vs 2/n^2 =", sp.Rational(2, n * n))
        print("Var F3 =", m.expect(f[3] ** 2), " vs", sp.Rational(3, 4) * (1 + sp.Rational(1, n * n)))
        for k in range(0, 6):
            mk = m.expect(m.g(2 * k)) / n if k else 1
            print(f"M_{n},{k} =", mk)

    # Two-point empirical law {-a, a} against N(0, a^2).
    for a in (1.0, 2.5):
        mpmath.mp.dps = 30
        phi = lambda t: mpmath.ncdf(t, 0, a)  # noqa: E731
        f = lambda t: (0 if t < -a else (0.5 if t < a else 1))  # noqa: E731
        val = mpmath.quad(lambda t: abs(f(t) - phi(t)), [-mpmath.inf, -a, 0, a, mpmath.inf])
        print(f"W1 two-point a={a}:", mpmath.nstr(val, 17))


if __name__ == "__main__":
    main()
