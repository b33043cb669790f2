"""Computational free probability: non-crossing partitions, free cumulants,
Marčenko-Pastur mixed moments and a Wigner-embedding simulator for sample
covariance matrices."""

__version__ = "0.1.0"
