# Chebyshev (best approximation) solvers
