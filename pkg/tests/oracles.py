"""Independent reference computations used only by the tests.

Nothing here calls the package's recurrences: polynomials come from
numpy.polynomial series or scipy's Gegenbauer evaluator, and quadrature nodes
for the sphere's radial measure are built in closed form.
"""
from __future__ import annotations

from math import gamma, pi

import numpy as np
from numpy.polynomial import chebyshev as C
from numpy.polynomial import legendre as L
from scipy.special import eval_gegenbauer


def legendre_p4(s):
    return (35 * s**4 - 30 * s**2 + 3) / 8


def vol(n: int) -> float:
    return 2 * pi ** ((n + 1) / 2) / gamma((n + 1) / 2)


def radial_nodes(d: int, n: int):
    """Nodes/weights for int_{-1}^1 f(s) vol(S^{d-1}) (1-s^2)^{(d-2)/2} ds, d in {2, 3}.

    d = 2: Gauss-Legendre from numpy. d = 3: Gauss-Chebyshev of the second
    kind, s_k = cos(k pi/(n+1)), w_k = pi/(n+1) sin^2(k pi/(n+1)).
    """
    if d == 2:
        s, w = L.leggauss(n)
        return s, w * vol(1)
    if d == 3:
        k = np.arange(1, n + 1)
        s = np.cos(k * pi / (n + 1))
        w = pi / (n + 1) * np.sin(k * pi / (n + 1)) ** 2
        return s, w * vol(2)
    raise ValueError("oracle radial rule covers d = 2, 3")


class SeriesSpace:
    """Functions of s = cos r as Legendre (d = 2) or Chebyshev-T (d = 3) series."""

    def __init__(self, d: int, n_nodes: int):
        self.d = d
        mod, pre = (L, "leg") if d == 2 else (C, "cheb")
        self._val, self._mulx = getattr(mod, pre + "val"), getattr(mod, pre + "mulx")
        self._der, self._add = getattr(mod, pre + "der"), getattr(mod, pre + "add")
        self.s, self.w = radial_nodes(d, n_nodes)

    def gegenbauer(self, ell: int) -> np.ndarray:
        """C_ell^{((d-1)/2)} as series coefficients (P_ell or U_ell)."""
        if self.d == 2:
            c = np.zeros(ell + 1)
            c[ell] = 1.0
            return c
        # U_n = 2 sum_{j = n, n-2, ...} T_j, with the T_0 term counted once
        c = np.zeros(ell + 1)
        c[ell::-2] = 2.0
        if ell % 2 == 0:
            c[0] = 1.0
        return c

    def values(self, c):
        return self._val(self.s, c)

    def inner(self, a, b) -> complex:
        return complex(np.sum(self.w * np.conj(self.values(a)) * self.values(b)))

    def zonal(self, ell: int) -> np.ndarray:
        c = self.gegenbauer(ell).astype(complex)
        return c / np.sqrt(self.inner(c, c).real)

    def mulx(self, c):
        return self._mulx(c)

    def deriv(self, c):
        return self._der(c)

    def add(self, a, b):
        return self._add(a, b)

    def K(self, c):
        return self.mulx(c)

    def V(self, c, h):
        """(h/i)(-(1 - s^2) f' + (d/2) s f)."""
        df = self.deriv(c) if len(c) > 1 else np.zeros(1, dtype=complex)
        one_minus = self.add(df, -self.mulx(self.mulx(df)))
        out = self.add(-one_minus, (self.d / 2) * self.mulx(c))
        return (h / 1j) * out

    def word(self, word: str, c, h):
        for ch in reversed(word):
            c = self.K(c) if ch == "K" else self.V(c, h)
        return c


def gegenbauer_scipy(alpha, ell, s):
    return eval_gegenbauer(ell, alpha, s)


def fd_derivative(f, s, step=1e-5):
    return (f(s + step) - f(s - step)) / (2 * step)
