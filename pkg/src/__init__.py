# Greedy approximation in mixed-norm sequence spaces
__version__ = "1.0.0"
