"""Utility modules for sweetspot."""
