"""Exact-arithmetic workbench for codimension-one foliation germs."""

__version__ = "0.1.0"
