"""
HybridMC
Adaptive multilevel Monte Carlo for distribution functions of path
functionals of stochastic hybrid systems.
"""

__version__ = "1.0.0"
