from hypothesis import HealthCheck, settings

# numeric property tests: no wall-clock deadlines, and a fixed example set so
# the suite is reproducible run to run
settings.register_profile(
    "mrange",
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("mrange")
