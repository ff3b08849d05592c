"""Reference values for the band integrals and the scalar friction rate.

Composite Simpson on 1e6 panels after the substitution k = edge + u^2 at
each inverse-square-root endpoint. Principal values use pole subtraction.
"""
import mpmath as mp
import numpy as np

PANELS = 1_000_000


def simpson(f, lo, hi, n=None):
    n = n or PANELS
    x = np.linspace(lo, hi, n + 1)
    if lo == 0.0:
        x[0] = 1e-150
    y = f(x)
    h = (hi - lo) / n
    return h / 3 * (y[0] + y[-1] + 4 * y[1:-1:2].sum() + 2 * y[2:-1:2].sum())


def endpoint_sqrt_integral(g, lo, hi):
    mid = 0.5 * (lo + hi)
    s = np.sqrt(mid - lo)
    left = simpson(lambda u: 2 * u * g(lo + u * u, u * u, hi - lo - u * u), 0.0, s)
    right = simpson(lambda u: 2 * u * g(hi - u * u, hi - lo - u * u, u * u), 0.0, s)
    return left + right


def band(v, w0, sign):
    if sign < 0:
        return -v * w0 / (1 - v), v * w0 / (1 + v)
    return -v * w0 / (1 + v), v * w0 / (1 - v)


def band_integrand(v, w0, wp, a, sign):
    lo, hi = band(v, w0, sign)
    c = 2 * a / v

    def g(k, dlo, dhi):
        p = (1 - v * v) * dlo * dhi
        den = (k + sign * w0) ** 2 - wp * wp
        return np.sin(c * np.sqrt(p)) / (p * den)

    return g, lo, hi


def plain_band(v, w0, wp, a, sign):
    g, lo, hi = band_integrand(v, w0, wp, a, sign)
    return endpoint_sqrt_integral(g, lo, hi) / (2 * np.pi)


def pv_band(v, w0, wp, a, sign):
    lo, hi = band(v, w0, sign)
    c = 2 * a / v
    k1 = w0 + wp
    pole = (w0 - wp) if sign < 0 else -(w0 - wp)

    def h(k, dlo, dhi):
        p = (1 - v * v) * dlo * dhi
        other = (k - k1) if sign < 0 else (k + k1)
        return np.sin(c * np.sqrt(p)) / (p * other)

    hp = h(np.array([pole]), np.array([pole - lo]), np.array([hi - pole]))[0]
    eps = 1e-6 * (hi - lo)
    dh = (h(np.array([pole + eps]), np.array([pole + eps - lo]), np.array([hi - pole - eps]))[0]
          - h(np.array([pole - eps]), np.array([pole - eps - lo]), np.array([hi - pole + eps]))[0]) / (2 * eps)

    def rem(k, dlo, dhi):
        d = k - pole
        out = np.empty_like(k)
        small = np.abs(d) < 1e-9 * (hi - lo)
        big = ~small
        out[big] = (h(k[big], dlo[big], dhi[big]) - hp) / d[big]
        out[small] = dh
        return out

    def half(a_, b_, sing_at_a):
        s = np.sqrt(b_ - a_)
        if sing_at_a:
            return simpson(lambda u: 2 * u * rem(a_ + u * u, u * u, hi - a_ - u * u), 0.0, s)
        return simpson(lambda u: 2 * u * rem(b_ - u * u, b_ - u * u - lo, u * u), 0.0, s)

    total = half(lo, pole, True) + half(pole, hi, False)
    total += hp * np.log((hi - pole) / (pole - lo))
    return total / (2 * np.pi)


def exp_term(v, w0, wp, a, w):
    y = w * w - v * v * wp * wp
    return np.exp(-(2 * a / v) * np.sqrt(y)) / (2 * wp * y)


def script_s1(v, w0, wp, a=1.0):
    return (plain_band(v, w0, wp, a, -1) + plain_band(v, w0, wp, a, +1)
            + exp_term(v, w0, wp, a, w0 + wp) + exp_term(v, w0, wp, a, w0 - wp))


def script_s2(v, w0, wp, a=1.0):
    y = v * v * wp * wp - (w0 - wp) ** 2
    cos_term = -np.cos((2 * a / v) * np.sqrt(y)) / (2 * wp * y)
    return (pv_band(v, w0, wp, a, -1) + pv_band(v, w0, wp, a, +1)
            + cos_term + exp_term(v, w0, wp, a, w0 + wp))


def im_s1_numeric(v, w0):
    def g(k, dlo, dhi):
        return 1.0 / np.sqrt((1 - v * v) * dlo * dhi)
    lo, hi = -w0 / (1 + v), w0 / (1 - v)
    return 2 * endpoint_sqrt_integral(g, lo, hi)


def friction_exact(T, v, lam, g, wp, w0):
    mp.mp.dps = 40
    T, v, lam, g, wp, w0 = map(mp.mpf, (T, v, lam, g, wp, w0))
    y = (w0 + wp) ** 2 - v * v * wp * wp
    return T * v * mp.pi * lam ** 2 * g ** 2 / (32 * wp * w0) * mp.exp(-(2 / v) * mp.sqrt(y)) / y


if __name__ == "__main__":
    print("friction(1,0.5,0.01,1,0.01,0.01) =", mp.nstr(friction_exact(1, 0.5, 0.01, 1, 0.01, 0.01), 20))
    print("band integral (v=0.5,w0=0.03) =", repr(im_s1_numeric(0.5, 0.03)), "pi/sqrt(1-v^2) =", repr(np.pi / np.sqrt(0.75)))
    print("S1(0.5,0.03,0.1) =", repr(script_s1(0.5, 0.03, 0.1)))
    print("  I- =", repr(plain_band(0.5, 0.03, 0.1, 1.0, -1)), "I+ =", repr(plain_band(0.5, 0.03, 0.1, 1.0, +1)))
    print("S2(0.5,0.03,0.03) =", repr(script_s2(0.5, 0.03, 0.03)))
    print("  PV- =", repr(pv_band(0.5, 0.03, 0.03, 1.0, -1)), "PV+ =", repr(pv_band(0.5, 0.03, 0.03, 1.0, +1)))
    print("S2(0.4,0.03,0.035) =", repr(script_s2(0.4, 0.03, 0.035)))
    PANELS = 500_000
    print("S2(0.5,0.03,0.03) half panels =", repr(script_s2(0.5, 0.03, 0.03)))
