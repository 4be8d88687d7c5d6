"""Tests for scenario commands."""
