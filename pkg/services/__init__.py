"""Simulation services: display geometry, gaze model, search simulation, experiment harness and CLI."""
