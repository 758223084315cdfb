"""Reference values for the test suites, computed with mpmath at 40 digits.

Two representations of the bivariate normal CDF are evaluated and must agree:
  conditional:  int_{-inf}^{x} phi(s) * Phi((y - rho*s)/sqrt(1-rho^2)) ds
  correlation:  Phi(x)Phi(y) + 1/(2pi) int_0^{asin rho} exp(-(x^2-2xy sin t+y^2)/(2cos^2 t)) dt
Run: python3 tools/reference_values.py
"""
from mpmath import mp, mpf, ncdf, npdf, quad, sqrt, asin, exp, sin, cos, pi, inf

mp.dps = 40


def phi2_conditional(x, y, rho):
    x, y, rho = mpf(x), mpf(y), mpf(rho)
    s = sqrt((1 - rho) * (1 + rho))
    f = lambda t: npdf(t) * ncdf((y - rho * t) / s)
    pts = [-inf] + sorted(set([min(x, mpf(-12)), x - 4, x - 1, x])) if x > -12 else [-inf, x - 4, x - 1, x]
    pts = sorted(set(pts), key=lambda v: v)
    return quad(f, pts, maxdegree=12)


def phi2_correlation(x, y, rho):
    x, y, rho = mpf(x), mpf(y), mpf(rho)
    g = lambda t: exp(-(x * x - 2 * x * y * sin(t) + y * y) / (2 * cos(t) ** 2))
    hi = asin(rho)
    return ncdf(x) * ncdf(y) + quad(g, [0, hi / 2, hi], maxdegree=12) / (2 * pi)


def phi2(x, y, rho):
    a = phi2_conditional(x, y, rho)
    b = phi2_correlation(x, y, rho)
    assert abs(a - b) < mpf(10) ** -25, (x, y, rho, a, b)
    return a


POINTS = [
    (-2, -2, 0.8), (-1, -1, 0.5), (-1, 1, 0.5), (-1, -1, -0.5), (-2, 1, 0.3),
    (-7, -7, 0.8), (0.5, -1.5, -0.3), (1.5, 0.5, 0.7), (2, 3, -0.6), (-3, 2.5, 0.95),
    (1, 1, 0.999), (-1, -1.001, 0.9995), (0.3, -0.3, -0.9995), (-4, 4, -0.2),
    (3, -2, 0.99), (-0.5, 0.25, 0.1), (5, 5, 0.5), (-5, -6, 0.7712), (7.5, -0.5, -0.85),
    (0.0, -1.0, 0.3), (-2.5, 0.0, -0.6),
]

if __name__ == "__main__":
    print("density(2) =", mp.nstr(npdf(2), 25))
    print("cdf(-1)    =", mp.nstr(ncdf(-1), 25))
    for c, v in [("1/(2pi)", 1 / (2 * pi)), ("sqrt(pi/2)", sqrt(pi / 2)), ("1/sqrt(2pi)", 1 / sqrt(2 * pi)), ("pi/2", pi / 2)]:
        hi = float(v)
        lo = float(v - mpf(hi))
        print(f"{c}: hi={hi!r} lo={lo!r}")
    for x, y, rho in POINTS:
        print(f"({x!r}, {y!r}, {rho!r}, {mp.nstr(phi2(x, y, rho), 22)}),")
