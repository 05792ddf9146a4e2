"""Exact root-system combinatorics and Fourier expansion term generation
for split simply-laced groups."""

from .root_system import CartanElement, Levi, Root, RootSystem, build

__all__ = ["CartanElement", "Levi", "Root", "RootSystem", "build"]
__version__ = "0.1.0"
