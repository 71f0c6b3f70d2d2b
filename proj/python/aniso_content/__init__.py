"""Anisotropic tube volumes, Minkowski and S-contents of compact sets."""

from ._core import (
    AnisoError,
    ConvexBody,
    body,
    content,
    gasket_limits,
    gasket_volume,
    geometric_radii,
    profile,
    run_cli,
    triangle_volume,
)

__all__ = [
    "AnisoError",
    "ConvexBody",
    "body",
    "content",
    "gasket_limits",
    "gasket_volume",
    "geometric_radii",
    "profile",
    "run_cli",
    "triangle_volume",
]
