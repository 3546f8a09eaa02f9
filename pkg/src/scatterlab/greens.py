"""Truncated Green's-function eigenfunctions and their high-energy regimes.

For a scatterer q (optionally paired with -q) and spectral parameter h,

    G_h = sum_ell (beta_q + (-1)^ell beta_{-q}) / (lambda_ell^2 - h^{-2}) Z_ell^q,

stored as coefficients over the normalized basis z_ell^q. The semiclassical
offset is h^{-2} = (ell_n + sigma_n)(ell_n + sigma_n + d - 1) with sigma_n in
[0, 1), so lambda_{ell_n + k}^2 - h^{-2} = (k - sigma_n)(2 ell_n + d - 1 + k + sigma_n);
all denominators are formed in that factored form.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import pi, sqrt

import numpy as np
from scipy.special import polygamma

from .geometry import SphereContext, as_point, is_antipodal
from .zonal import ZonalExpansion, cross_ratio_table

SNAP_TOL = 1e-12
ADMISSIBLE_TOL = 1e-12


class ClassificationError(ValueError):
    """A sequence that fits none of the four high-energy regimes."""


# ---------------------------------------------------------------------------
# semiclassical parameters


@dataclass(frozen=True)
class SemiclassicalPoint:
    d: int
    ell_n: int
    sigma_n: float

    def __post_init__(self):
        if self.ell_n < 0:
            raise ValueError("ell_n must be nonnegative")
        if not 0.0 <= self.sigma_n < 1.0:
            raise ValueError(f"sigma_n must lie in [0, 1), got {self.sigma_n}")

    @classmethod
    def from_h(cls, ctx: SphereContext, h: float) -> "SemiclassicalPoint":
        if not 0 < h < 1:
            raise ValueError(f"h must lie in (0, 1), got {h}")
        a = (ctx.d - 1) / 2
        x = -a + sqrt(a * a + h ** -2)
        ell = int(np.floor(x))
        sigma = x - ell
        if sigma < SNAP_TOL:
            sigma = 0.0
        elif 1 - sigma < SNAP_TOL:
            ell, sigma = ell + 1, 0.0
        return cls(ctx.d, ell, float(sigma))

    @classmethod
    def from_level(cls, ctx: SphereContext, ell_n: int, sigma_n: float) -> "SemiclassicalPoint":
        return cls(ctx.d, int(ell_n), float(sigma_n))

    @property
    def x(self) -> float:
        """ell_n + sigma_n, the fractional degree with lambda^2(x) = h^{-2}."""
        return self.ell_n + self.sigma_n

    @property
    def h_inv_sq(self) -> float:
        return self.x * (self.x + self.d - 1)

    @property
    def h(self) -> float:
        return 1.0 / sqrt(self.h_inv_sq)

    @property
    def h_inv(self) -> float:
        return sqrt(self.h_inv_sq)

    @property
    def rho(self) -> int:
        return 1 if self.ell_n % 2 == 0 else -1

    @property
    def on_spectrum(self) -> bool:
        return self.sigma_n == 0.0

    def denominators(self, ells) -> np.ndarray:
        """lambda_ell^2 - h^{-2} in factored form (ell - x)(ell + x + d - 1)."""
        ells = np.asarray(ells, dtype=float)
        return (ells - self.x) * (ells + self.x + self.d - 1)


def default_ell_max(point: SemiclassicalPoint) -> int:
    return max(4 * point.ell_n, point.ell_n + 10_000)


# ---------------------------------------------------------------------------
# Green's functions


def _pair_beta(beta) -> np.ndarray:
    b = np.asarray(beta, dtype=complex).ravel()
    if b.size == 1:
        b = np.array([b[0], 0.0], dtype=complex)
    if b.size != 2:
        raise ValueError("a centered Green's function takes (beta_q,) or (beta_q, beta_-q)")
    return b


def normalize_beta(beta) -> np.ndarray:
    b = np.asarray(beta, dtype=complex)
    n = np.linalg.norm(b)
    if n == 0:
        raise ValueError("beta must be nonzero")
    return b / n


@dataclass
class GreensSpec:
    """A truncated G_h^{Q, beta} for Q = {q} or Q = {q, -q}."""

    ctx: SphereContext
    center: np.ndarray
    beta: np.ndarray
    point: SemiclassicalPoint
    ell_max: int | None = None

    def __post_init__(self):
        self.ctx.require_scenario_dim()
        self.center = as_point(self.center)
        self.beta = _pair_beta(self.beta)
        if self.point.d != self.ctx.d:
            raise ValueError("semiclassical point and sphere disagree on d")
        if self.ell_max is None:
            self.ell_max = default_ell_max(self.point)
        if self.ell_max < 2 * self.point.ell_n:
            raise ValueError("ell_max must be at least 2 ell_n")
        if self.point.on_spectrum and not self.admissible():
            raise ValueError(
                "h^{-2} is an eigenvalue and beta_q + rho beta_-q != 0: "
                "no Green's function with this beta"
            )

    @classmethod
    def from_scatterers(cls, ctx, scatterers, beta, point, ell_max=None) -> "GreensSpec":
        pts = [as_point(p) for p in scatterers]
        if len(pts) == 1:
            return cls(ctx, pts[0], [beta[0], 0.0], point, ell_max)
        if len(pts) == 2 and is_antipodal(pts[0], pts[1]):
            return cls(ctx, pts[0], beta, point, ell_max)
        raise ValueError("centered Green's functions need Q = {q} or an antipodal pair; use MultiGreens")

    def admissible(self) -> bool:
        """On-spectrum condition sum_q beta_q Z_{ell_h}^q = 0, i.e. beta_q + rho beta_{-q} = 0."""
        b = self.beta
        return abs(b[0] + self.point.rho * b[1]) <= ADMISSIBLE_TOL * max(1.0, np.abs(b).max())

    def with_beta(self, beta) -> "GreensSpec":
        return GreensSpec(self.ctx, self.center, beta, self.point, self.ell_max)


@dataclass
class GreensField:
    spec: GreensSpec
    expansion: ZonalExpansion
    tail_bound: float

    @property
    def norm_sq(self) -> float:
        return self.expansion.norm_sq()

    def normalized(self) -> ZonalExpansion:
        return self.expansion.normalized()


def parity_weights(beta, ells) -> np.ndarray:
    """beta_q + (-1)^ell beta_{-q} for each ell."""
    b = _pair_beta(beta)
    sign = np.where(np.asarray(ells) % 2 == 0, 1.0, -1.0)
    return b[0] + sign * b[1]


def greens_coefficients(spec: GreensSpec) -> np.ndarray:
    ells = np.arange(spec.ell_max + 1)
    den = spec.point.denominators(ells)
    num = parity_weights(spec.beta, ells) * spec.ctx.zonal_norm(ells)
    out = np.zeros(len(ells), dtype=complex)
    keep = den != 0
    if spec.point.on_spectrum:
        keep[spec.point.ell_n] = False
    out[keep] = num[keep] / den[keep]
    return out


def tail_mass_bound(spec: GreensSpec) -> float:
    """Upper bound on sum_{ell > ell_max} |c_ell|^2 (the truncated mass).

    Uses lambda^2 - h^{-2} >= kappa lambda^2 with kappa = 1 - h^{-2}/lambda_{L+1}^2, and
    the exact sums  sum_{l>L} m_l/lambda_l^4 = 1/(L+1)^2 (d = 2) and
    <= (1/(L+1) + 1/(L+2))/2 + 1/(3 L^3) (d = 3).
    """
    big_l = spec.ell_max
    lam = spec.ctx.lambda_sq(big_l + 1)
    kappa = 1.0 - spec.point.h_inv_sq / lam
    amp = (abs(spec.beta[0]) + abs(spec.beta[1])) ** 2 / spec.ctx.vol_sphere
    if spec.ctx.d == 2:
        s = 1.0 / (big_l + 1) ** 2
    else:
        s = 0.5 * (1.0 / (big_l + 1) + 1.0 / (big_l + 2)) + 1.0 / (3.0 * big_l**3)
    return float(amp * s / kappa**2)


def build_greens(spec: GreensSpec) -> GreensField:
    coeffs = greens_coefficients(spec)
    return GreensField(spec, ZonalExpansion(spec.ctx, spec.center, coeffs), tail_mass_bound(spec))


# ---------------------------------------------------------------------------
# windows, norms and tails


def window_offsets(scenario: int, upsilon: int, sigma: float = 0.0) -> np.ndarray:
    """Offsets k (degree ell_n + k) kept by the scenario's spectral window.

    Scenario 1: |k| <= upsilon. Scenarios 3 and 4: |k - sigma| <= 2 upsilon - 1 with
    sigma in {0, 1}. Scenario 2: the single degree ell_n + sigma.
    """
    if upsilon < 0:
        raise ValueError("upsilon must be nonnegative")
    if scenario == 1:
        return np.arange(-upsilon, upsilon + 1)
    s = int(round(sigma))
    if scenario == 2:
        return np.array([s])
    if scenario in (3, 4):
        if upsilon == 0:
            return np.array([s]) if scenario == 3 else np.array([], dtype=int)
        r = 2 * upsilon - 1
        return np.arange(s - r, s + r + 1)
    raise ValueError(f"unknown scenario {scenario}")


def _window_mask(field_: GreensField, offsets) -> np.ndarray:
    ells = field_.spec.point.ell_n + np.asarray(offsets, dtype=int)
    ells = ells[(ells >= 0) & (ells <= field_.spec.ell_max)]
    mask = np.zeros(field_.spec.ell_max + 1, dtype=bool)
    mask[ells] = True
    return mask


def window_norm(field_: GreensField, upsilon: int, scenario: int = 1, sigma: float = 0.0) -> float:
    """||Pi_window G||^2."""
    mask = _window_mask(field_, window_offsets(scenario, upsilon, sigma))
    return float(np.sum(np.abs(field_.expansion.coeffs[mask]) ** 2))


def tail_norm(field_: GreensField, upsilon: int, scenario: int = 1, sigma: float = 0.0) -> float:
    """||G - Pi_window G||^2 over the stored degrees (add ``tail_bound`` for the rest)."""
    mask = _window_mask(field_, window_offsets(scenario, upsilon, sigma))
    return float(np.sum(np.abs(field_.expansion.coeffs[~mask]) ** 2))


def norm_scale(ctx: SphereContext, h: float) -> float:
    """Factor 2 (d - 1) vol(S^d) h^{d-3} turning ||Pi G||^2 into a constant^2."""
    return 2 * (ctx.d - 1) * ctx.vol_sphere * h ** (ctx.d - 3)


def normalized_window_norm(field_: GreensField, upsilon: int, scenario: int = 1, sigma: float = 0.0) -> float:
    return window_norm(field_, upsilon, scenario, sigma) * norm_scale(field_.spec.ctx, field_.spec.point.h)


# ---------------------------------------------------------------------------
# lattice constants


def _trigamma(x):
    return polygamma(1, x)


def _residue_tail(start: int, shift: float) -> float:
    """sum_{j >= 0} 1/(start + 2 j + shift)^2 = psi'((start + shift)/2) / 4."""
    return float(_trigamma((start + shift) / 2) / 4)


def lattice_sum(w_even: float, w_odd: float, sigma: float, exclude_zero: bool = False, k_max: int = 2000):
    """sum_k w_{k mod 2} / (k - sigma)^2 over k in Z, skipping k = sigma when it is an integer.

    Direct summation over |k| <= k_max plus the exact trigamma remainder for
    each residue class. Returns (value, conservative_tail_bound) where the bound
    is the crude estimate max(w)·2/(k_max - 1) for the remainder.
    """
    k = np.arange(-k_max, k_max + 1)
    w = np.where(k % 2 == 0, w_even, w_odd)
    den = (k - sigma) ** 2
    keep = den > 0
    if exclude_zero:
        keep &= k != 0
    head = float(np.sum(w[keep] / den[keep]))
    # k > k_max and k < -k_max, split by parity
    first_pos = k_max + 1
    first_neg = k_max + 1  # k = -m, m >= k_max + 1, (k - sigma)^2 = (m + sigma)^2
    tails = 0.0
    for start in (first_pos, first_pos + 1):
        wk = w_even if start % 2 == 0 else w_odd
        tails += wk * _residue_tail(start, -sigma)
    for start in (first_neg, first_neg + 1):
        wk = w_even if start % 2 == 0 else w_odd
        tails += wk * _residue_tail(start, sigma)
    bound = max(abs(w_even), abs(w_odd)) * 2.0 / (k_max - 1)
    return head + tails, bound


def scenario1_series_sq(sigma: float, beta, rho: int) -> float:
    """C^2 = sum_k |beta_q + (-1)^k rho beta_-q|^2 / (k - sigma)^2 by direct summation."""
    b = _pair_beta(beta)
    w_even = abs(b[0] + rho * b[1]) ** 2
    w_odd = abs(b[0] - rho * b[1]) ** 2
    return lattice_sum(w_even, w_odd, sigma)[0]


def scenario1_closed_form_sq(sigma: float, beta, rho: int) -> float:
    """(2 pi)^2 / |1 - e^{2 pi i sigma}|^2 times the mean of |beta_q + rho beta_-q e^{+-i pi sigma}|^2."""
    if not 0 < sigma < 1:
        raise ValueError("closed form needs sigma in (0, 1)")
    b = _pair_beta(beta)
    e = np.exp(1j * pi * sigma)
    avg = 0.5 * abs(b[0] + rho * b[1] * e) ** 2 + 0.5 * abs(b[0] + rho * b[1] / e) ** 2
    return float((2 * pi) ** 2 / abs(1 - e**2) ** 2 * avg)


def flow_weights(sigma: float, beta, rho: int) -> tuple[float, float]:
    """Half-period weights (m_+, m_-) attached to (sigma, beta, rho), averaging to 1."""
    if not 0 < sigma < 1:
        raise ValueError("flow weights need sigma in (0, 1)")
    b = _pair_beta(beta)
    e = np.exp(1j * pi * sigma)
    plus = abs(b[0] + rho * b[1] * e) ** 2
    minus = abs(b[0] + rho * b[1] / e) ** 2
    avg = (plus + minus) / 2
    if avg == 0:
        raise ValueError("beta must be nonzero")
    return float(plus / avg), float(minus / avg)


def choose_beta_for_weights(sigma: float, rho: int, m_plus: float, m_minus: float) -> np.ndarray:
    """Unit beta whose flow weights are (m_plus, m_minus).

    Solves beta_q + rho beta_-q e^{i pi sigma} = sqrt(m_+) and
    beta_q + rho beta_-q e^{-i pi sigma} = sqrt(m_-), then normalizes.
    """
    if not 0 < sigma < 1:
        raise ValueError("sigma must lie in (0, 1)")
    if rho not in (1, -1):
        raise ValueError("rho must be +1 or -1")
    if m_plus < 0 or m_minus < 0 or abs((m_plus + m_minus) / 2 - 1) > 1e-12:
        raise ValueError(f"weights must be nonnegative with mean 1, got ({m_plus}, {m_minus})")
    u, v = sqrt(m_plus), sqrt(m_minus)
    e = np.exp(1j * pi * sigma)
    b_minus = rho * (u - v) / (2j * np.sin(pi * sigma))
    b_plus = u - rho * b_minus * e
    return normalize_beta([b_plus, b_minus])


# ---------------------------------------------------------------------------
# classification


@dataclass(frozen=True)
class ScenarioClassification:
    scenario: int
    sigma: float
    beta_limit: np.ndarray
    rho: int
    c_limit: complex | None = None
    constant: float | None = None


def _boundary_combination(beta, sigma: int, rho: int) -> complex:
    b = _pair_beta(beta)
    return complex(b[0] + (-1) ** sigma * rho * b[1])


def series_constant(cls: ScenarioClassification) -> float:
    """C_{sigma,beta,rho} (scenarios 1 and 3) or D_beta (scenario 4)."""
    b = _pair_beta(cls.beta_limit)
    w_even = abs(b[0] + cls.rho * b[1]) ** 2
    w_odd = abs(b[0] - cls.rho * b[1]) ** 2
    if cls.scenario == 1:
        val, _ = lattice_sum(w_even, w_odd, cls.sigma)
    elif cls.scenario == 3:
        val, _ = lattice_sum(w_even, w_odd, float(cls.sigma))
        val += abs(cls.c_limit) ** 2
    elif cls.scenario == 4:
        val, _ = lattice_sum(w_even, w_odd, 0.0, exclude_zero=True)
    else:
        raise ValueError("scenario 2 has no series constant")
    return float(sqrt(val))


def _classify_sequence(ctx, points, betas, tolerance, ratio_threshold):
    parities = {p.ell_n % 2 for p in points}
    if len(parities) > 1:
        raise ClassificationError("ell_n changes parity along the sequence")
    rho = points[0].rho
    beta = betas[-1]
    on = [p.on_spectrum for p in points]
    if all(on):
        for p, b in zip(points, betas):
            if abs(b[1] + p.rho * b[0]) > 1e-10:
                raise ClassificationError("on-spectrum element with inadmissible beta")
        cls = ScenarioClassification(4, 0.0, beta, rho)
        return ScenarioClassification(4, 0.0, beta, rho, None, series_constant(cls))
    if any(on):
        raise ClassificationError("sequence mixes on-spectrum and off-spectrum elements")

    sig = np.array([p.sigma_n for p in points])
    tail = sig[-3:]
    gap = np.minimum(tail, 1 - tail)
    near_boundary = gap[-1] <= tolerance and gap[-1] <= gap[0]
    if near_boundary:
        sides = {0 if s < 0.5 else 1 for s in tail}
        if len(sides) > 1:
            raise ClassificationError("sigma_n jumps between the two ends of [0, 1)")
        sigma = sides.pop()
        a_n = np.array([_boundary_combination(b, sigma, rho) for b in betas[-3:]])
        c_n = a_n / (sigma - tail)
        ratio = np.abs(c_n)
        if ratio[-1] > ratio_threshold or (np.all(np.diff(ratio) > 0) and ratio[-1] >= 2 * ratio[0]):
            return ScenarioClassification(2, float(sigma), beta, rho)
        if abs(c_n[-1] - c_n[-2]) <= max(tolerance, 1e-12) * max(1.0, abs(c_n[-1])):
            cls = ScenarioClassification(3, float(sigma), beta, rho, complex(c_n[-1]))
            return ScenarioClassification(3, float(sigma), beta, rho, complex(c_n[-1]), series_constant(cls))
        raise ClassificationError("the boundary quotient neither converges nor diverges")

    steps = np.abs(np.diff(tail))
    if steps[-1] > tolerance:
        raise ClassificationError(f"sigma_n does not converge (tail {tail})")
    sigma = float(tail[-1])
    if not 0 < sigma < 1:
        raise ClassificationError("interior sigma limit expected")
    cls = ScenarioClassification(1, sigma, beta, rho)
    return ScenarioClassification(1, sigma, beta, rho, None, series_constant(cls))


def classify(ctx: SphereContext, h_sequence, beta_sequence, tolerance: float = 1e-3,
             ratio_threshold: float | None = None) -> ScenarioClassification:
    """Assign a sequence (h_n, beta_n) to one of the four high-energy regimes.

    Betas are renormalized to unit length. The sigma limit and the scenario 2/3
    quotient are read off the last three elements; scenario 2 wins when the
    quotient |beta_q + (-1)^sigma rho beta_-q| / |sigma - sigma_n| exceeds
    ``ratio_threshold`` (default 1/tolerance) or is still growing.
    """
    ctx.require_scenario_dim()
    hs = list(h_sequence)
    bs = [normalize_beta(_pair_beta(b)) for b in beta_sequence]
    if len(hs) != len(bs) or len(hs) < 3:
        raise ValueError("need at least three (h, beta) pairs of matching length")
    points = [SemiclassicalPoint.from_h(ctx, h) for h in hs]
    threshold = 1.0 / tolerance if ratio_threshold is None else ratio_threshold
    return _classify_sequence(ctx, points, bs, tolerance, threshold)


def classify_points(ctx: SphereContext, points, beta_sequence, tolerance: float = 1e-3,
                    ratio_threshold: float | None = None) -> ScenarioClassification:
    """As :func:`classify` but starting from exact (ell_n, sigma_n) levels."""
    ctx.require_scenario_dim()
    bs = [normalize_beta(_pair_beta(b)) for b in beta_sequence]
    if len(points) != len(bs) or len(points) < 3:
        raise ValueError("need at least three (point, beta) pairs of matching length")
    threshold = 1.0 / tolerance if ratio_threshold is None else ratio_threshold
    return _classify_sequence(ctx, list(points), bs, tolerance, threshold)


# ---------------------------------------------------------------------------
# quasimodes


def lattice_coefficients(cls: ScenarioClassification, offsets) -> np.ndarray:
    """X_k = (beta_q + (-1)^k rho beta_-q) / (k - sigma), zero where k = sigma."""
    k = np.asarray(offsets, dtype=float)
    b = _pair_beta(cls.beta_limit)
    sign = np.where(np.asarray(offsets) % 2 == 0, 1.0, -1.0)
    num = b[0] + sign * cls.rho * b[1]
    den = k - cls.sigma
    out = np.zeros(len(k), dtype=complex)
    nz = den != 0
    out[nz] = num[nz] / den[nz]
    return out


@dataclass
class QuasimodeResult:
    residual: float
    bound_terms: dict = field(default_factory=dict)

    @property
    def bound(self) -> float:
        return float(sum(self.bound_terms.values()))


def quasimode_reference(cls: ScenarioClassification, spec: GreensSpec, upsilon: int) -> ZonalExpansion:
    """The explicit zonal combination approximating the normalized G in each scenario."""
    ell_n = spec.point.ell_n
    coeffs = np.zeros(spec.ell_max + 1, dtype=complex)
    sigma = int(round(cls.sigma)) if cls.scenario != 1 else cls.sigma
    if cls.scenario == 1:
        ks = window_offsets(1, upsilon)
        vals = lattice_coefficients(cls, ks) / cls.constant
    elif cls.scenario == 2:
        a_n = _boundary_combination(spec.beta, sigma, cls.rho)
        phase = a_n / (sigma - spec.point.sigma_n)
        ks = np.array([sigma])
        vals = np.array([phase / abs(phase)])
    elif cls.scenario == 3:
        ks = window_offsets(3, upsilon, sigma)
        vals = lattice_coefficients(cls, ks)
        vals[ks == sigma] = cls.c_limit
        vals = vals / cls.constant
    elif cls.scenario == 4:
        ks = window_offsets(4, upsilon, 0)
        vals = lattice_coefficients(cls, ks) / cls.constant
    else:
        raise ValueError(f"unknown scenario {cls.scenario}")
    ells = ell_n + ks
    ok = (ells >= 0) & (ells <= spec.ell_max)
    coeffs[ells[ok]] = vals[ok]
    return ZonalExpansion(spec.ctx, spec.center, coeffs)


def quasimode_residual(spec: GreensSpec, cls: ScenarioClassification, upsilon: int) -> QuasimodeResult:
    """||g - reference|| with g = G / ||G||, plus the matching error-budget terms."""
    g = build_greens(spec).normalized()
    ref = quasimode_reference(cls, spec, upsilon)
    res = float(np.linalg.norm(g.coeffs - ref.coeffs))
    h = spec.point.h
    beta_n = normalize_beta(spec.beta)
    dbeta = float(np.linalg.norm(beta_n - _pair_beta(cls.beta_limit)))
    if cls.scenario == 1:
        terms = {
            "upsilon_h": upsilon * h,
            "sigma_gap": abs(spec.point.sigma_n - cls.sigma),
            "beta_gap": dbeta,
            "upsilon_inv_sqrt": upsilon ** -0.5,
        }
    elif cls.scenario == 2:
        sigma = int(round(cls.sigma))
        a_n = _boundary_combination(beta_n, sigma, cls.rho)
        terms = {"h": h, "ratio": abs(sigma - spec.point.sigma_n) / abs(a_n)}
    elif cls.scenario == 3:
        sigma = int(round(cls.sigma))
        c_n = _boundary_combination(beta_n, sigma, cls.rho) / (sigma - spec.point.sigma_n)
        terms = {
            "upsilon_h": upsilon * h,
            "sigma_gap": abs(spec.point.sigma_n - cls.sigma),
            "beta_gap": dbeta,
            "c_gap": abs(cls.c_limit - c_n),
            "upsilon_inv_sqrt": upsilon ** -0.5,
        }
    else:
        terms = {"upsilon_h": upsilon * h, "upsilon_inv_sqrt": upsilon ** -0.5}
    return QuasimodeResult(res, terms)


# ---------------------------------------------------------------------------
# general scatterer sets


@dataclass
class MultiGreens:
    """G_h^{Q, beta} = sum_p beta_p G_h^p for an arbitrary finite Q."""

    ctx: SphereContext
    scatterers: list
    beta: np.ndarray
    point: SemiclassicalPoint
    ell_max: int | None = None

    def __post_init__(self):
        self.scatterers = [as_point(p) for p in self.scatterers]
        self.beta = np.asarray(self.beta, dtype=complex)
        if len(self.beta) != len(self.scatterers):
            raise ValueError("one beta per scatterer")
        if self.ell_max is None:
            self.ell_max = default_ell_max(self.point)
        if self.point.on_spectrum and self.kernel_mass(self.point.ell_n) > ADMISSIBLE_TOL:
            raise ValueError("beta is not admissible at an on-spectrum h")

    def gram(self, ell_max: int) -> np.ndarray:
        """Array (ell, p, p') of <z_ell^p, z_ell^p'>."""
        n = len(self.scatterers)
        out = np.empty((ell_max + 1, n, n))
        for i in range(n):
            out[:, i, i] = 1.0
            for j in range(i + 1, n):
                t = cross_ratio_table(self.ctx, self.scatterers[i], self.scatterers[j], ell_max)
                out[:, i, j] = out[:, j, i] = t
        return out

    def kernel_mass(self, ell: int) -> float:
        """||sum_p beta_p z_ell^p||^2 (zero exactly when beta is admissible at ell)."""
        g = self.gram(ell)[ell]
        return float(np.real(np.conj(self.beta) @ g @ self.beta))

    def degree_weights(self) -> np.ndarray:
        """|c_ell|^2-type weights (m_ell/vol)/(lambda^2 - h^-2)^2, zero at an on-spectrum level."""
        ells = np.arange(self.ell_max + 1)
        den = self.point.denominators(ells)
        w = np.zeros(len(ells))
        keep = den != 0
        if self.point.on_spectrum:
            keep[self.point.ell_n] = False
        w[keep] = self.ctx.mult(ells[keep]) / self.ctx.vol_sphere / den[keep] ** 2
        return w

    def norm_sq(self) -> float:
        g = self.gram(self.ell_max)
        quad = np.real(np.einsum("p,lpq,q->l", np.conj(self.beta), g, self.beta))
        return float(np.sum(self.degree_weights() * quad))

    def evaluate(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        ells = np.arange(self.ell_max + 1)
        den = self.point.denominators(ells)
        scale = np.zeros(len(ells))
        keep = den != 0
        if self.point.on_spectrum:
            keep[self.point.ell_n] = False
        scale[keep] = self.ctx.zonal_norm(ells[keep]) / den[keep]
        total = np.zeros(x.shape[:-1], dtype=complex)
        for b, p in zip(self.beta, self.scatterers):
            exp = ZonalExpansion(self.ctx, p, b * scale)
            total = total + exp.evaluate(x)
        return total
