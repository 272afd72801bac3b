"""Radii of balls that contain or meet the connected components of real
algebraic and semi-algebraic sets: exact closed forms and per-instance
certificates."""

from .bounds import BoundReport, thm1_radius, thm2_radius, thm3_radius, thm4_radius
from .pipeline import (
    BallCertificate, bounded_ball_certificate, meeting_ball_certificate, sa_contain, sa_meet,
)
from .polyring import IntPoly, bit

__all__ = [
    "BallCertificate", "BoundReport", "IntPoly", "bit", "bounded_ball_certificate",
    "meeting_ball_certificate", "sa_contain", "sa_meet", "thm1_radius", "thm2_radius",
    "thm3_radius", "thm4_radius",
]
