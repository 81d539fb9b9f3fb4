"""Tests for containerlab."""
