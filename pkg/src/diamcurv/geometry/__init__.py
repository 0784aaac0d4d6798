"""Model spaces, triangle meshes, immersions and mean curvature."""
from .ambient import AmbientSpace
from .curvature import (
    CONVENTIONS,
    MeanCurvatureField,
    extrinsic_ball_area,
    extrinsic_ball_integrals,
    fundamental_forms,
    hm1_integral,
    willmore_energy,
)
from .immersion import ParametricImmersion, TriangleMeshImmersion, build_mesh
from .mesh import MeshError, MeshFormatError, icosphere, read_mesh, write_obj, write_off

__all__ = [
    "AmbientSpace",
    "CONVENTIONS",
    "MeanCurvatureField",
    "extrinsic_ball_area",
    "extrinsic_ball_integrals",
    "fundamental_forms",
    "hm1_integral",
    "willmore_energy",
    "ParametricImmersion",
    "TriangleMeshImmersion",
    "build_mesh",
    "MeshError",
    "MeshFormatError",
    "icosphere",
    "read_mesh",
    "write_obj",
    "write_off",
]
