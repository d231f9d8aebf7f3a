"""GNSS pseudorange positioning: Android raw measurements to smoothed tracks."""

from ._core import (
    GeodeticPos,
    InputError,
    NANOS_PER_WEEK,
    NumericError,
    SPEED_OF_LIGHT,
    ecef_to_geodetic,
    geodetic_to_ecef,
    horizontal_score,
    percentile,
    pseudorange_m,
    score,
    simulate,
    solve,
    solve_epoch,
    vincenty_distance,
    week_number_nanos,
)

__version__ = "0.1.0"

__all__ = [
    "GeodeticPos",
    "InputError",
    "NANOS_PER_WEEK",
    "NumericError",
    "SPEED_OF_LIGHT",
    "ecef_to_geodetic",
    "geodetic_to_ecef",
    "horizontal_score",
    "percentile",
    "pseudorange_m",
    "score",
    "simulate",
    "solve",
    "solve_epoch",
    "vincenty_distance",
    "week_number_nanos",
]
