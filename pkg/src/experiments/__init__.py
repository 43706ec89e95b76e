# Experiment harness, lower-bound constructions and calibration
