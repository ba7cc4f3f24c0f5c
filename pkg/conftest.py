"""
Shared pytest configuration: hypothesis profiles

HYPOTHESIS_PROFILE=thorough runs the algebraic properties on more examples.
"""

import os

from hypothesis import HealthCheck, settings

settings.register_profile('quick', deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile('thorough', max_examples=2000, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get('HYPOTHESIS_PROFILE', 'quick'))
