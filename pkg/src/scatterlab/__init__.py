"""Green's-function eigenfunctions of point scatterers on spheres and their high-energy limits."""

__version__ = "0.1.0"
