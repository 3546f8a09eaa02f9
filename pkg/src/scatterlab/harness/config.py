"""Experiment configuration: a flat TOML document with dotted keys.

Grammar (every key optional unless the experiment needs it)::

    name = "witness-d2"           # report id; defaults to the kind
    kind = "witness"              # one of KINDS
    d = 2
    seed = 0                      # Philox key for randomized draws
    threads = 4                   # worker cap (SCATTERLAB_THREADS caps further)
    scenario = 1
    sigma = 0.5
    rho = 1
    beta.re = [1.0, 0.0]
    beta.im = [0.0, 0.0]
    weights.m_plus = 2.0
    weights.m_minus = 0.0
    scatterers.points = [[0, 0, 1], [0, 1, 0]]
    scatterers.random = 3         # draw this many seeded points instead
    geodesic.u = [1, 0, 0]
    geodesic.v = [0, 1, 0]
    observable.power = 2
    grid.h_inv = [100, 200, 400]
    grid.upsilon = [4, 8, 16]
    grid.ell = [100, 200, 400]
    grid.sigma_n = [1e-2, 1e-3]
    tolerance.rel = 0.05
    tolerance.abs = 0.02
    tolerance.slope = 0.15
    output.path = "out/witness"
    output.format = "csv"         # csv | json | both

Nested tables are accepted too; they are flattened to the same dotted keys.
"""
from __future__ import annotations

import sys
from dataclasses import dataclass, field
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

KINDS = (
    "tail-bound", "window-norm", "quasimode", "witness",
    "zonal-limit", "oldfun", "carleson", "interp-matrix",
)

REQUIRED_GRIDS = {
    "tail-bound": ("h_inv", "upsilon"),
    "window-norm": ("h_inv", "upsilon"),
    "quasimode": ("h_inv", "upsilon"),
    "witness": ("h_inv",),
    "zonal-limit": ("ell",),
    "oldfun": ("ell",),
    "carleson": ("upsilon",),
    "interp-matrix": ("ell",),
}

KNOWN_KEYS = {
    "name", "kind", "d", "seed", "threads", "scenario", "sigma", "rho",
    "beta.re", "beta.im", "weights.m_plus", "weights.m_minus",
    "scatterers.points", "scatterers.random", "geodesic.u", "geodesic.v", "observable.power",
    "grid.h_inv", "grid.upsilon", "grid.ell", "grid.sigma_n",
    "tolerance.rel", "tolerance.abs", "tolerance.slope",
    "output.path", "output.format",
}


class ConfigError(ValueError):
    def __init__(self, key: str, message: str):
        super().__init__(f"{key}: {message}")
        self.key = key


def flatten(table: dict, prefix: str = "") -> dict:
    out = {}
    for k, v in table.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            out.update(flatten(v, key + "."))
        else:
            out[key] = v
    return out


@dataclass
class ExperimentConfig:
    kind: str
    d: int
    name: str = ""
    seed: int = 0
    threads: int | None = None
    scenario: int = 1
    sigma: float = 0.5
    rho: int = 1
    beta: list | None = None
    m_plus: float | None = None
    m_minus: float | None = None
    scatterers: list | None = None
    n_random: int = 0
    geodesic: tuple | None = None
    power: int = 2
    grids: dict = field(default_factory=dict)
    rel_tol: float | None = None
    abs_tol: float | None = None
    slope_tol: float | None = None
    output_path: str | None = None
    output_format: str = "csv"

    def __post_init__(self):
        if not self.name:
            self.name = self.kind
        validate(self)

    def grid(self, key: str) -> list:
        return list(self.grids.get(key, []))

    def parameters(self) -> dict:
        """JSON-safe summary recorded in every row."""
        out = {"kind": self.kind, "seed": self.seed, "scenario": self.scenario}
        if self.beta is not None:
            out["beta"] = [[complex(b).real, complex(b).imag] for b in self.beta]
        if self.m_plus is not None:
            out["m"] = [self.m_plus, self.m_minus]
        return out


def validate(cfg: ExperimentConfig):
    if cfg.kind not in KINDS:
        raise ConfigError("kind", f"unknown experiment {cfg.kind!r}; expected one of {', '.join(KINDS)}")
    if not isinstance(cfg.d, int) or cfg.d < 2:
        raise ConfigError("d", f"sphere dimension must be an integer >= 2, got {cfg.d!r}")
    if cfg.kind not in ("zonal-limit", "oldfun", "interp-matrix") and cfg.d not in (2, 3):
        raise ConfigError("d", f"{cfg.kind} supports d in {{2, 3}}")
    if cfg.rho not in (1, -1):
        raise ConfigError("rho", "must be +1 or -1")
    if not 0 <= cfg.sigma <= 1:
        raise ConfigError("sigma", "must lie in [0, 1]")
    if cfg.scenario not in (1, 2, 3, 4):
        raise ConfigError("scenario", "must be 1, 2, 3 or 4")
    for key in REQUIRED_GRIDS[cfg.kind]:
        grid_key = "sigma_n" if (cfg.kind == "quasimode" and cfg.scenario == 2 and key == "upsilon") else key
        if not cfg.grids.get(grid_key):
            raise ConfigError(f"grid.{grid_key}", "grid must be nonempty")
    for key, vals in cfg.grids.items():
        if not isinstance(vals, (list, tuple)) or not vals:
            raise ConfigError(f"grid.{key}", "grid must be a nonempty list")
        if any(not isinstance(v, (int, float)) or v <= 0 for v in vals):
            raise ConfigError(f"grid.{key}", "grid entries must be positive numbers")
    for key, val in (("tolerance.rel", cfg.rel_tol), ("tolerance.abs", cfg.abs_tol), ("tolerance.slope", cfg.slope_tol)):
        if val is not None and not val > 0:
            raise ConfigError(key, "tolerances must be positive")
    if (cfg.m_plus is None) != (cfg.m_minus is None):
        raise ConfigError("weights", "give both m_plus and m_minus")
    if cfg.m_plus is not None:
        if cfg.m_plus < 0 or cfg.m_minus < 0:
            raise ConfigError("weights", "weights must be nonnegative")
        if abs((cfg.m_plus + cfg.m_minus) / 2 - 1) > 1e-12:
            raise ConfigError("weights", "mass constraint (m_plus + m_minus)/2 = 1 violated")
    if cfg.scatterers is not None:
        for i, p in enumerate(cfg.scatterers):
            if len(p) != cfg.d + 1:
                raise ConfigError("scatterers.points", f"point {i} has {len(p)} coordinates, expected {cfg.d + 1}")
    if cfg.output_format not in ("csv", "json", "both"):
        raise ConfigError("output.format", "must be csv, json or both")
    if cfg.threads is not None and cfg.threads < 1:
        raise ConfigError("threads", "must be positive")


def from_mapping(raw: dict) -> ExperimentConfig:
    flat = flatten(raw)
    unknown = sorted(set(flat) - KNOWN_KEYS)
    if unknown:
        raise ConfigError(unknown[0], "unknown key")
    for key in ("kind", "d"):
        if key not in flat:
            raise ConfigError(key, "required")
    beta = None
    if "beta.re" in flat or "beta.im" in flat:
        re = flat.get("beta.re", [0.0] * len(flat.get("beta.im", [])))
        im = flat.get("beta.im", [0.0] * len(re))
        if len(re) != len(im):
            raise ConfigError("beta", "beta.re and beta.im differ in length")
        beta = [complex(a, b) for a, b in zip(re, im)]
    geodesic = None
    if "geodesic.u" in flat or "geodesic.v" in flat:
        if "geodesic.u" not in flat or "geodesic.v" not in flat:
            raise ConfigError("geodesic", "give both geodesic.u and geodesic.v")
        geodesic = (list(flat["geodesic.u"]), list(flat["geodesic.v"]))
    grids = {k.split(".", 1)[1]: list(v) if isinstance(v, (list, tuple)) else v
             for k, v in flat.items() if k.startswith("grid.")}
    return ExperimentConfig(
        kind=flat["kind"], d=flat["d"], name=flat.get("name", ""), seed=int(flat.get("seed", 0)),
        threads=flat.get("threads"), scenario=int(flat.get("scenario", 1)),
        sigma=float(flat.get("sigma", 0.5)), rho=int(flat.get("rho", 1)), beta=beta,
        m_plus=flat.get("weights.m_plus"), m_minus=flat.get("weights.m_minus"),
        scatterers=flat.get("scatterers.points"), n_random=int(flat.get("scatterers.random", 0)),
        geodesic=geodesic, power=int(flat.get("observable.power", 2)), grids=grids,
        rel_tol=flat.get("tolerance.rel"), abs_tol=flat.get("tolerance.abs"),
        slope_tol=flat.get("tolerance.slope"), output_path=flat.get("output.path"),
        output_format=flat.get("output.format", "csv"),
    )


def load_config(path) -> ExperimentConfig:
    path = Path(path)
    try:
        with open(path, "rb") as fh:
            raw = tomllib.load(fh)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError("<file>", f"{path}: {exc}") from exc
    return from_mapping(raw)
