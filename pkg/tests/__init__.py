"""Tests for the evofss package."""
