"""Switching activity, power and throughput reporting."""
