"""
netgood
Public-good provision games on weighted directed networks: matrix-class
verdicts, LCP solvers, Nash/Pareto/coalition profiles and centralities
"""
__version__ = "1.0.0"
