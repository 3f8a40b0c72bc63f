"""Test suite for edcal."""
