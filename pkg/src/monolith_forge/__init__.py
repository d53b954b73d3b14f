"""Exact-arithmetic engine for truncated monolithic-module constructions."""

__version__ = "0.1.0"
