"""Coded matrix multiplication schemes; ``scheme`` is the usual entry point."""
