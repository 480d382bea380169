"""Exact finite-field cohomology checks for a Frobenius-twisted projective bundle over the incidence quadric in P^n x P^n."""

__version__ = "0.1.0"
