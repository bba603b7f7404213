"""Finite-scale coarse geometry: covers, coarsely n-to-1 maps, decomposition
trees and metric sparsification.

Objects are passed as the same JSON-shaped dicts the coarse-kit CLI reads.
"""

import json as _json

from . import _coarse_kit as _core
from ._coarse_kit import PreconditionError, SCHEMA_VERSION

__all__ = [
    "PreconditionError",
    "SCHEMA_VERSION",
    "space_summary",
    "dim_at_scale",
    "make_disjoint",
    "asdim_at_scale",
    "n_to_1_control",
    "n_to_1_profile",
    "group_quotient",
    "verify_tree",
    "best_mass_family",
    "run_suite",
    "suite_names",
    "digest",
]


def _s(obj):
    return obj if isinstance(obj, str) else _json.dumps(obj)


def _limits(limits):
    return "" if limits is None else _json.dumps(limits)


def space_summary(space):
    return _json.loads(_core.space_summary(_s(space)))


def dim_at_scale(space, cover, radius):
    return _core.dim_at_scale(_s(space), _s(cover), float(radius))


def make_disjoint(space, cover, radius, n=-1):
    return _json.loads(_core.make_disjoint(_s(space), _s(cover), float(radius), n))


def asdim_at_scale(space, radius, mesh_cap=float("inf"), limits=None):
    return _json.loads(_core.asdim_at_scale(_s(space), float(radius), float(mesh_cap), _limits(limits)))


def n_to_1_control(map, n, limits=None):
    return _json.loads(_core.n_to_1_control(_s(map), n, _limits(limits)))


def n_to_1_profile(map, r, big_r, limits=None):
    return _json.loads(_core.n_to_1_profile(_s(map), float(r), float(big_r), _limits(limits)))


def group_quotient(space, action):
    return _json.loads(_core.group_quotient(_s(space), _s(action)))


def verify_tree(space, tree, mode="sfdc"):
    return _json.loads(_core.verify_tree(_s(space), _s(tree), mode))


def best_mass_family(space, measure, radius, bound, limits=None):
    return _json.loads(_core.best_mass_family(_s(space), _s(measure), float(radius), float(bound), _limits(limits)))


def run_suite(name, seed=1, count=0, max_points=0):
    return _json.loads(_core.run_suite(name, seed, count, max_points))


def suite_names():
    return list(_core.suite_names())


def digest(document):
    return _core.digest(_s(document))
