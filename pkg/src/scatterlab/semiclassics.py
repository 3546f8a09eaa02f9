"""Observables on zonal expansions and the flow-out measures they converge to.

Two operators generate the polynomial symbol algebra in (kappa, varsigma):

    K   = multiplication by cos r,
    V_h = (h/i)(sin r d/dr + (d/2) cos r),

both tridiagonal on the normalized zonal basis z_ell^q. The (d/2) cos r term is
half the divergence of sin r d/dr, which makes V_h exactly symmetric. Words in
K and V_h play the role of quantized monomials; they differ from any Weyl
quantization by O(h).

On the flow-out from q, kappa + i varsigma = e^{it}, so polynomial symbols
integrate against nu_q and the half measures nu_{q,1/2} by one-dimensional
quadrature in t (plus a direction angle when the symbol is centered elsewhere).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations
from math import pi

import numpy as np
from scipy.special import roots_jacobi, roots_legendre

from .geometry import SphereContext, as_point, decompose_scatterers
from .greens import ScenarioClassification, _pair_beta
from .specfun import log_gegenbauer_at_one
from .zonal import ZonalExpansion

MASS_TOL = 1e-12
T_NODES = 400
PSI_NODES = 200
JUMP_EXCLUSION = 1e-2


# ---------------------------------------------------------------------------
# banded operators


@dataclass(frozen=True)
class BandedObservable:
    """Tridiagonal operator on coefficient vectors c_0..c_{ell_max}.

    ``lower[l]`` is the (l+1, l) entry, ``upper[l]`` the (l, l+1) entry.
    """

    center: np.ndarray
    lower: np.ndarray
    diag: np.ndarray
    upper: np.ndarray
    name: str = ""
    bandwidth: int = 1

    @property
    def ell_max(self) -> int:
        return len(self.diag) - 1

    def apply(self, c) -> np.ndarray:
        c = np.asarray(c, dtype=complex)
        if len(c) != len(self.diag):
            raise ValueError(f"vector length {len(c)} does not match operator size {len(self.diag)}")
        out = self.diag * c
        out[1:] += self.lower * c[:-1]
        out[:-1] += self.upper * c[1:]
        return out

    def dense(self) -> np.ndarray:
        n = len(self.diag)
        m = np.diag(self.diag.astype(complex))
        m[np.arange(1, n), np.arange(n - 1)] = self.lower
        m[np.arange(n - 1), np.arange(1, n)] = self.upper
        return m

    def hermitian_defect(self) -> float:
        return float(
            max(
                np.max(np.abs(self.lower - np.conj(self.upper)), initial=0.0),
                np.max(np.abs(self.diag.imag), initial=0.0),
            )
        )


def _log_normalizers(ctx: SphereContext, ells) -> np.ndarray:
    """log N_ell with N_ell = sqrt(m_ell / vol) / C_ell(1), so z_ell = N_ell C_ell(cos r)."""
    ells = np.asarray(ells)
    return 0.5 * np.log(ctx.mult(ells) / ctx.vol_sphere) - log_gegenbauer_at_one(ctx.alpha, ells)


def ladder_coefficients(ctx: SphereContext, ell_max: int) -> np.ndarray:
    """a_ell = <z_{ell+1}, cos r z_ell> for ell = 0..ell_max - 1.

    From s C_ell = [(ell+1) C_{ell+1} + (ell+2 alpha-1) C_{ell-1}] / (2 (ell+alpha)),
    a_ell = N_ell (ell+1) / (2 (ell+alpha) N_{ell+1}).
    """
    ells = np.arange(ell_max)
    log_n = _log_normalizers(ctx, np.arange(ell_max + 1))
    return np.exp(log_n[:-1] - log_n[1:]) * (ells + 1) / (2 * (ells + ctx.alpha))


def multiplication_matrix(ctx: SphereContext, center, ell_max: int) -> BandedObservable:
    """K: multiplication by cos d(x, center), real symmetric with zero diagonal."""
    if ell_max < 2:
        raise ValueError("ell_max must be at least 2")
    a = ladder_coefficients(ctx, ell_max)
    return BandedObservable(as_point(center), a.astype(complex), np.zeros(ell_max + 1, dtype=complex),
                            a.astype(complex), "K")


def momentum_matrix(ctx: SphereContext, center, h: float, ell_max: int) -> BandedObservable:
    """V_h = (h/i)(sin r d/dr + (d/2) cos r).

    With (s^2 - 1) C_ell' = (ell+1) C_{ell+1} - (ell+2 alpha) s C_ell one finds
    V z_ell = -i h (ell + d/2) a_ell z_{ell+1} + i h (ell - 1 + d/2) a_{ell-1} z_{ell-1}.
    """
    if ell_max < 2:
        raise ValueError("ell_max must be at least 2")
    if h <= 0:
        raise ValueError("h must be positive")
    a = ladder_coefficients(ctx, ell_max)
    w = h * (np.arange(ell_max) + ctx.d / 2) * a
    return BandedObservable(as_point(center), -1j * w, np.zeros(ell_max + 1, dtype=complex), 1j * w, "V")


def word_operators(ctx: SphereContext, center, h: float, ell_max: int, word: str) -> list:
    """Operators for a word over {'K', 'V'}, leftmost letter acting last."""
    bad = set(word) - {"K", "V"}
    if bad:
        raise ValueError(f"words use only 'K' and 'V', got {sorted(bad)}")
    k = multiplication_matrix(ctx, center, ell_max) if "K" in word else None
    v = momentum_matrix(ctx, center, h, ell_max) if "V" in word else None
    return [k if ch == "K" else v for ch in word]


def apply_word(ops, c) -> np.ndarray:
    out = np.asarray(c, dtype=complex)
    for op in reversed(list(ops)):
        out = op.apply(out)
    return out


def matrix_element(u: ZonalExpansion, obs, v: ZonalExpansion) -> complex:
    """<u, W v> for W a BandedObservable or a sequence of them (a word)."""
    ops = [obs] if isinstance(obs, BandedObservable) else list(obs)
    if not np.allclose(u.center, v.center, atol=1e-12):
        raise ValueError("matrix elements need u and v about the same center")
    for op in ops:
        if not np.allclose(op.center, v.center, atol=1e-12):
            raise ValueError("observable center does not match the expansions")
    if not ops:
        return u.inner(v)
    size = ops[0].ell_max
    if any(op.ell_max != size for op in ops):
        raise ValueError("all operators in a word must share ell_max")
    reach = max(u.ell_max, v.ell_max) + sum(op.bandwidth for op in ops)
    if size < reach:
        raise ValueError(f"operators truncated at {size}, need at least {reach}")
    wv = apply_word(ops, v.padded(size))
    return complex(np.vdot(u.padded(size), wv))


def symmetrized_element(ctx: SphereContext, u: ZonalExpansion, v: ZonalExpansion, h: float,
                        n_k: int, n_v: int) -> complex:
    """Average of <u, W v> over all distinct orderings W of K^n_k V^n_v.

    For real symbols the symmetrization is Hermitian, so <u, W u> is real.
    """
    letters = "K" * n_k + "V" * n_v
    if not letters:
        return u.inner(v)
    size = max(u.ell_max, v.ell_max) + len(letters)
    k = multiplication_matrix(ctx, v.center, size)
    vh = momentum_matrix(ctx, v.center, h, size)
    words = sorted(set(permutations(letters)))
    total = 0j
    uc, vc = u.padded(size), v.padded(size)
    for w in words:
        total += np.vdot(uc, apply_word([k if ch == "K" else vh for ch in w], vc))
    return complex(total / len(words))


def witness_value(g: ZonalExpansion, h: float) -> float:
    """<g, V_h g> = 2 h sum_ell (ell + d/2) a_ell Im(conj(c_{ell+1}) c_ell)."""
    ctx = g.ctx
    c = g.coeffs
    a = ladder_coefficients(ctx, g.ell_max)
    w = h * (np.arange(g.ell_max) + ctx.d / 2) * a
    return float(2 * np.sum(w * np.imag(np.conj(c[1:]) * c[:-1])))


# ---------------------------------------------------------------------------
# symbols


@dataclass(frozen=True)
class Monomial:
    """kappa^a varsigma^b relative to ``center``."""

    center: np.ndarray
    a: int = 0
    b: int = 0

    def __call__(self, kappa, vs):
        return np.asarray(kappa) ** self.a * np.asarray(vs) ** self.b


@dataclass
class SymbolPoly:
    """Gamma = (1/||X||)(sum_{k<=0} X_k (kappa - i varsigma)^{|k|} + sum_{k>0} X_k (kappa + i varsigma)^k)."""

    center: np.ndarray
    coeffs: np.ndarray
    offsets: np.ndarray = field(default=None)

    def __post_init__(self):
        self.center = as_point(self.center)
        self.coeffs = np.asarray(self.coeffs, dtype=complex)
        if self.offsets is None:
            ups = (len(self.coeffs) - 1) // 2
            if len(self.coeffs) != 2 * ups + 1:
                raise ValueError("coefficients over k = -Y..Y need odd length")
            self.offsets = np.arange(-ups, ups + 1)
        self.offsets = np.asarray(self.offsets, dtype=int)
        if np.linalg.norm(self.coeffs) == 0:
            raise ValueError("symbol coefficients must not all vanish")

    @property
    def degree(self) -> int:
        return int(np.max(np.abs(self.offsets)))

    def __call__(self, kappa, vs):
        z = np.asarray(kappa) + 1j * np.asarray(vs)
        zc = np.asarray(kappa) - 1j * np.asarray(vs)
        out = np.zeros(z.shape, dtype=complex)
        for k, x in zip(self.offsets, self.coeffs):
            out = out + x * (z**k if k > 0 else zc ** (-k))
        return out / np.linalg.norm(self.coeffs)


# ---------------------------------------------------------------------------
# measures


@dataclass
class MeasureSpec:
    """nu_{Q,m} = sum_{pairs} (m_q nu_{q,1/2} + m_{-q} nu_{-q,1/2}) + sum_{singles} m_p nu_p."""

    ctx: SphereContext
    scatterers: list
    weights: np.ndarray

    def __post_init__(self):
        self.scatterers = [as_point(p) for p in self.scatterers]
        self.weights = np.asarray(self.weights, dtype=float)
        if len(self.weights) != len(self.scatterers):
            raise ValueError("one weight per scatterer")
        if np.any(self.weights < 0):
            raise ValueError("weights must be nonnegative")
        self.pairs, self.singles = decompose_scatterers(self.scatterers)
        for i, j in self.pairs:
            if self.weights[i] > 2 or self.weights[j] > 2:
                raise ValueError("paired weights must lie in [0, 2]")
        for i in self.singles:
            if self.weights[i] > 1:
                raise ValueError("unpaired weights must lie in [0, 1]")
        mass = self.total_mass()
        if abs(mass - 1) > MASS_TOL:
            raise ValueError(f"weights violate the mass constraint: total {mass!r} != 1")

    def total_mass(self) -> float:
        w = self.weights
        return float(sum((w[i] + w[j]) / 2 for i, j in self.pairs) + sum(w[i] for i in self.singles))

    def components(self):
        """Yield (launch point, weight, half) triples; half=True means t in [0, pi)."""
        for i, j in self.pairs:
            yield self.scatterers[i], self.weights[i], True
            yield self.scatterers[j], self.weights[j], True
        for i in self.singles:
            yield self.scatterers[i], self.weights[i], False


def _t_rule(half: bool, n: int = T_NODES):
    x, w = roots_legendre(n)
    top = pi if half else 2 * pi
    return (x + 1) * top / 2, w * top / 2 / (2 * pi)


def _direction_rule(d: int, n: int = PSI_NODES):
    """Law of u = cos(psi) for a uniform direction in S^{d-1}: density ~ (1-u^2)^{(d-3)/2}."""
    a = (d - 3) / 2
    u, w = roots_jacobi(n, a, a)
    return u, w / w.sum()


def flow_integral(ctx: SphereContext, launch, symbol, half: bool) -> complex:
    """int symbol d nu_{launch} (half=False) or d nu_{launch,1/2} (half=True).

    Along the geodesic from p with initial direction xi, relative to center q:
    kappa = cos t (p.q) + sin t (xi.q), varsigma = sin t (p.q) - cos t (xi.q),
    where xi.q = sin d(p, q) cos psi.
    """
    p = as_point(launch)
    q = symbol.center
    t, wt = _t_rule(half)
    c = float(np.clip(np.dot(p, q), -1, 1))
    s_perp = float(np.linalg.norm(q - c * p))
    if s_perp < 1e-15:
        kappa, vs = c * np.cos(t), c * np.sin(t)
        return complex(np.sum(wt * symbol(kappa, vs)))
    u, wu = _direction_rule(ctx.d)
    xq = s_perp * u[:, None]
    kappa = c * np.cos(t)[None, :] + np.sin(t)[None, :] * xq
    vs = c * np.sin(t)[None, :] - np.cos(t)[None, :] * xq
    return complex(wu @ symbol(kappa, vs) @ wt)


def measure_integral(mspec: MeasureSpec, symbol) -> float:
    """int symbol d nu_{Q,m}; the real part is returned for real symbols."""
    total = 0j
    for p, w, half in mspec.components():
        if w:
            total += w * flow_integral(mspec.ctx, p, symbol, half)
    if abs(total.imag) > 1e-12 * max(1.0, abs(total.real)):
        return total
    return float(total.real)


def measure_for_pair(ctx: SphereContext, q, m_plus: float, m_minus: float) -> MeasureSpec:
    q = as_point(q)
    return MeasureSpec(ctx, [q, -q], [m_plus, m_minus])


# ---------------------------------------------------------------------------
# Fourier profiles


@dataclass(frozen=True)
class FourierProfile:
    """gamma(t) on [0, 2 pi): the L^2(T) limit of sum_k X_k e^{ikt} / normalizer."""

    scenario: int
    sigma: float
    beta: np.ndarray
    rho: int
    constant: float = 1.0
    c: complex = 0j

    def _legs(self):
        """(value on [0, pi), value on [pi, 2 pi)) before the e^{i sigma t} factor."""
        b = _pair_beta(self.beta)
        if self.scenario == 1:
            e = np.exp(1j * pi * self.sigma)
            amp = 2j * pi / (1 - e**2)
            return amp * (b[0] + self.rho * b[1] * e), amp * (b[0] + self.rho * b[1] / e)
        if self.scenario == 3:
            return self.c + 1j * pi * b[0], self.c - 1j * pi * b[0]
        return 1.0 + 0j, 1.0 + 0j

    @property
    def weights(self) -> tuple[float, float]:
        plus, minus = self._legs()
        if self.scenario in (2, 4):
            return 1.0, 1.0
        return float(abs(plus) ** 2 / self.constant**2), float(abs(minus) ** 2 / self.constant**2)

    def __call__(self, t) -> np.ndarray:
        t = np.mod(np.asarray(t, dtype=float), 2 * pi)
        if self.scenario in (2, 4):
            return np.ones_like(t, dtype=complex)
        plus, minus = self._legs()
        leg = np.where(t < pi, plus, minus)
        return np.exp(1j * self.sigma * t) * leg / self.constant

    def window(self, upsilon: int) -> np.ndarray:
        s = 0 if self.scenario == 1 else int(round(self.sigma))
        return np.arange(s - upsilon, s + upsilon + 1)

    def coefficients(self, offsets) -> np.ndarray:
        k = np.asarray(offsets)
        b = _pair_beta(self.beta)
        num = b[0] + np.where(k % 2 == 0, 1.0, -1.0) * self.rho * b[1]
        den = k - self.sigma
        out = np.zeros(len(k), dtype=complex)
        nz = den != 0
        out[nz] = num[nz] / den[nz]
        if self.scenario == 3:
            out[~nz] = self.c
        return out / self.constant

    def partial_sum(self, t, upsilon: int) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        k = self.window(upsilon)
        x = self.coefficients(k)
        return np.exp(1j * np.multiply.outer(t, k)) @ x


def fourier_profile(cls: ScenarioClassification) -> FourierProfile:
    if cls.scenario in (2, 4):
        return FourierProfile(cls.scenario, cls.sigma, _pair_beta(cls.beta_limit), cls.rho)
    return FourierProfile(cls.scenario, cls.sigma, _pair_beta(cls.beta_limit), cls.rho,
                          float(cls.constant), complex(cls.c_limit or 0))


def profile_norm_sq(profile: FourierProfile, n: int = 64) -> float:
    """int_0^{2 pi} |gamma|^2 dt by Gauss-Legendre on each half period."""
    t, w = roots_legendre(n)
    total = 0.0
    for lo in (0.0, pi):
        tt = lo + (t + 1) * pi / 2
        total += float(np.sum(w * pi / 2 * np.abs(profile(tt)) ** 2))
    return total


@dataclass(frozen=True)
class CarlesonRow:
    upsilon: int
    sup_error: float


def carleson_check(cls: ScenarioClassification, upsilon_list, n_grid: int = 2000,
                   exclusion: float = JUMP_EXCLUSION) -> list[CarlesonRow]:
    """Sup over t away from the jumps {0, pi} of |partial Fourier sum - gamma(t)|."""
    if cls.scenario not in (1, 3):
        raise ValueError("Carleson checks apply to scenarios 1 and 3")
    prof = fourier_profile(cls)
    t = np.linspace(0, 2 * pi, n_grid, endpoint=False)
    dist = np.minimum.reduce([np.abs(t), np.abs(t - pi), np.abs(t - 2 * pi)])
    t = t[dist > exclusion]
    target = prof(t)
    rows = []
    for ups in upsilon_list:
        err = np.abs(prof.partial_sum(t, int(ups)) - target)
        rows.append(CarlesonRow(int(ups), float(err.max())))
    return rows
