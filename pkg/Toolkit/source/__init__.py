"""Toolkit source package."""
