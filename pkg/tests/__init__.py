"""Tests for toricchow."""
