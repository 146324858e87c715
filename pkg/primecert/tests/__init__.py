"""Tests for primecert."""
