"""Acceptance tests at full verification limits."""
