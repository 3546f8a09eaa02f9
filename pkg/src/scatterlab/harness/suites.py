"""Built-in configurations run by ``scatterlab verify-all``."""
from __future__ import annotations

from .config import ExperimentConfig


def default_suite(d: int) -> list[ExperimentConfig]:
    s2 = 2 ** -0.5
    return [
        ExperimentConfig("tail-bound", d, name=f"tail-bound-d{d}",
                         grids={"h_inv": [50, 100, 200, 400, 800], "upsilon": [4, 8, 16, 32, 64]}),
        ExperimentConfig("window-norm", d, name=f"window-norm-s1-d{d}", sigma=0.5, beta=[1, 0],
                         grids={"h_inv": [500, 1000], "upsilon": [32, 64]}),
        ExperimentConfig("window-norm", d, name=f"window-norm-s4-d{d}", scenario=4, sigma=0.0,
                         beta=[s2, -s2], grids={"h_inv": [500, 1000], "upsilon": [32, 64]}),
        ExperimentConfig("quasimode", d, name=f"quasimode-s1-d{d}", sigma=0.5, beta=[1, 0],
                         grids={"h_inv": [500, 2000], "upsilon": [4, 8, 16, 32]}),
        ExperimentConfig("quasimode", d, name=f"quasimode-s2-d{d}", scenario=2, sigma=0.0, beta=[1, 0],
                         grids={"h_inv": [100, 400, 1600], "sigma_n": [1e-2, 1e-3, 1e-4]}),
        ExperimentConfig("quasimode", d, name=f"quasimode-s3-d{d}", scenario=3, sigma=0.0,
                         grids={"h_inv": [500, 2000], "upsilon": [4, 8, 16, 32]}),
        ExperimentConfig("quasimode", d, name=f"quasimode-s4-d{d}", scenario=4, sigma=0.0,
                         beta=[s2, -s2], grids={"h_inv": [500, 2000], "upsilon": [4, 8, 16, 32]}),
        ExperimentConfig("witness", d, name=f"witness-d{d}", sigma=0.5, m_plus=2.0, m_minus=0.0,
                         grids={"h_inv": [100, 200, 400, 500]}),
        ExperimentConfig("witness", d, name=f"witness-control-d{d}", sigma=0.5, beta=[1, 0],
                         grids={"h_inv": [100, 200, 400, 500]}),
        ExperimentConfig("zonal-limit", d, name=f"zonal-limit-d{d}", seed=11,
                         grids={"ell": [100, 200, 400, 800, 1600]}),
        ExperimentConfig("oldfun", d, name=f"oldfun-d{d}", seed=5, n_random=3,
                         grids={"ell": [50, 100, 200, 400]}),
        ExperimentConfig("carleson", d, name=f"carleson-d{d}", sigma=0.5, beta=[1, 0],
                         grids={"upsilon": [16, 64, 256]}),
        ExperimentConfig("interp-matrix", d, name=f"interp-matrix-d{d}", seed=3, n_random=3,
                         grids={"ell": [100, 200, 400, 800]}),
    ]
