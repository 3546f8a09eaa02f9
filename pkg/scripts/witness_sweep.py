"""Momentum witness <g_h, V_h g_h> against (m_+ - m_-)/pi across weights and energies.

Usage: python3 scripts/witness_sweep.py [--dim 2|3]
"""
import argparse
from math import pi

import numpy as np

from scatterlab import greens as gr
from scatterlab import semiclassics as sc
from scatterlab.geometry import SphereContext, basis_vector
from scatterlab.harness.experiments import level_for


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--dim", type=int, choices=(2, 3), default=2)
    parser.add_argument("--sigma", type=float, default=0.5)
    args = parser.parse_args()
    ctx = SphereContext(args.dim)
    q = basis_vector(args.dim, args.dim)
    print(f"{'m_plus':>7} {'h_inv':>6} {'witness':>10} {'limit':>10}")
    for m_plus in np.linspace(0, 2, 5):
        beta = gr.choose_beta_for_weights(args.sigma, 1, m_plus, 2 - m_plus)
        for h_inv in (100, 500, 2000):
            pt = level_for(ctx, h_inv, args.sigma, 1)
            g = gr.build_greens(gr.GreensSpec(ctx, q, beta, pt)).normalized()
            w = sc.witness_value(g, pt.h)
            print(f"{m_plus:7.2f} {h_inv:6d} {w:10.6f} {(2 * m_plus - 2) / pi:10.6f}")


if __name__ == "__main__":
    main()
