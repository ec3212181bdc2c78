"""Density Hales-Jewett numbers and Number-On-the-Forehead protocols, computed exactly at small sizes."""

__version__ = "0.1.0"
