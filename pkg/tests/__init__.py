"""Test suite for ALM Orchestrator."""
