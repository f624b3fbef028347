import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "suite", deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("suite")


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    """Compile the hot kernels once, outside any timed assertion.

    The witness kernel only compiles when a violation exists, so the
    warmup includes a deliberately broken table.
    """
    from orbifusion import validate_ring
    from orbifusion.su3 import su3_ring

    from .oracles import broken_z3_ring

    validate_ring(su3_ring(3))
    validate_ring(broken_z3_ring())
    yield
