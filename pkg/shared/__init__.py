"""Shared utilities for perilod."""
