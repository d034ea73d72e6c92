"""Codes from quaternion orders over number fields."""

__version__ = "0.1.0"
