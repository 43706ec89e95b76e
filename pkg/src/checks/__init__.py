# Samplers and checkers for geometric properties of the coefficient spaces
