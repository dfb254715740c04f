"""Reconstruction of point sets from unlabeled path and loop lengths."""

from ._trilat import (
    Error,
    FormatError,
    InvalidArgument,
    NoBaseFound,
    canonical_matrix,
    cayley_menger_det,
    dataset_to_json,
    find_integer_relation,
    is_member,
    is_singular_L24,
    random_configuration,
    reconstruct,
    simulate,
    verify,
)

__all__ = [
    "Error",
    "FormatError",
    "InvalidArgument",
    "NoBaseFound",
    "canonical_matrix",
    "cayley_menger_det",
    "dataset_to_json",
    "find_integer_relation",
    "is_member",
    "is_singular_L24",
    "random_configuration",
    "reconstruct",
    "simulate",
    "verify",
]
