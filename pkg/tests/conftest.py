from __future__ import annotations

from hypothesis import HealthCheck, settings

settings.register_profile(
    "homfac",
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("homfac")


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number, name, passed, elapsed in sorted(results):
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'} {number:2d} {name} ({elapsed:.1f}s)")
