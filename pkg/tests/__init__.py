"""Test suite for perilod."""
