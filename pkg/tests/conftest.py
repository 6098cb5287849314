"""Shared pytest configuration: a hypothesis profile suited to numerical
property tests (no per-example deadline; modest example counts)."""

from hypothesis import HealthCheck, settings

settings.register_profile(
    "suite",
    deadline=None,
    max_examples=50,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much],
)
settings.load_profile("suite")
