"""Tests for the discrete-event simulator."""
