"""LIP Asplund distance maps, probes and detection."""

from ._asplund import (
    AsplundError,
    Probe,
    bench,
    darken,
    detect,
    dist_add,
    dist_mult,
    distance_map,
    lip_add,
    lip_mul,
    lip_neg,
    lip_sub,
    noisy_plane,
    read_image,
    reference_scene,
    write_image,
)

__all__ = [
    "AsplundError",
    "Probe",
    "bench",
    "darken",
    "detect",
    "dist_add",
    "dist_mult",
    "distance_map",
    "lip_add",
    "lip_mul",
    "lip_neg",
    "lip_sub",
    "noisy_plane",
    "read_image",
    "reference_scene",
    "write_image",
]
