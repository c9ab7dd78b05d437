"""Simulation package."""
