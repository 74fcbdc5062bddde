"""Python interface to the driving-mode planner core."""

try:
    # Installed-wheel layout: extension lives inside the package.
    from ._ecodrive import (
        InfeasibleError,
        Route,
        ValidationError,
        Vehicle,
        load_route,
        make_route,
        plan_route,
        save_route,
        simulate_driver,
        solve_window,
    )
except ImportError:
    # Build-tree layout: extension found via PYTHONPATH.
    from _ecodrive import (
        InfeasibleError,
        Route,
        ValidationError,
        Vehicle,
        load_route,
        make_route,
        plan_route,
        save_route,
        simulate_driver,
        solve_window,
    )

__all__ = [
    "InfeasibleError",
    "Route",
    "ValidationError",
    "Vehicle",
    "load_route",
    "make_route",
    "plan_route",
    "save_route",
    "simulate_driver",
    "solve_window",
]
