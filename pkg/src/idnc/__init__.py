"""Instantly decodable network coding for in-order delivery over erasure broadcast."""

__version__ = "0.1.0"
