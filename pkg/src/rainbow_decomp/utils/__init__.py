"""Utility modules for rainbow-decomp."""
