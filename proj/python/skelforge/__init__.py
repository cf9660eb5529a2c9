"""Skeletons for sketched 2D shapes.

Points are ``(x, y)`` tuples. Skeletons and hierarchy edges come back as the
same dicts the JSON documents use.
"""

import json

from ._core import (
    PROTO_VERSION,
    SCENE_VERSION,
    Scene,
    Session,
    SkelforgeError,
    acquire_polygon,
    bone_joint_distance,
    discretize,
    skeletonize,
    straight_skeleton,
)


def request(session, kind, payload=None, id=None):
    """Send one protocol request to a Session and return the decoded reply."""
    if id is None:
        request.counter += 1
        id = f"py-{request.counter}"
    msg = {"proto": PROTO_VERSION, "id": id, "kind": kind, "payload": payload or {}}
    return json.loads(session.handle_line(json.dumps(msg)))


request.counter = 0

__all__ = [
    "PROTO_VERSION",
    "SCENE_VERSION",
    "Scene",
    "Session",
    "SkelforgeError",
    "acquire_polygon",
    "bone_joint_distance",
    "discretize",
    "request",
    "skeletonize",
    "straight_skeleton",
]
