"""Experiment sweeps, calibration and pattern checks."""
