from . import calculus, cli, estimates, geometry, hermite, types, utils

__all__ = ["calculus", "cli", "estimates", "geometry", "hermite", "types", "utils"]
