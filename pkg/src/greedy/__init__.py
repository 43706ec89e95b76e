# Greedy algorithms and best N-term oracles
