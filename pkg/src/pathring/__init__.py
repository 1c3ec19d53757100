"""Reduced bar complexes of rational cdgas, the unipotent path groupoid
on H^0, staged free replacements, and numeric Chen pairings."""

__version__ = "0.1.0"
