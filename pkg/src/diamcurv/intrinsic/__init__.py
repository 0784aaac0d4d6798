"""Geodesic distances on meshes and geodesic-ball profiles."""
from .distance import (
    DistanceField,
    Geodesic,
    distance_field,
    extrinsic_diameter,
    intrinsic_diameter,
    shortest_geodesic,
)
from .profile import BallProfile, ball_volume_profile

__all__ = [
    "DistanceField",
    "Geodesic",
    "distance_field",
    "extrinsic_diameter",
    "intrinsic_diameter",
    "shortest_geodesic",
    "BallProfile",
    "ball_volume_profile",
]
