"""
qlab: finite quantales, quantale-valued models of set theory and their constructible hierarchies.
"""
__version__ = "0.1.0"

__all__ = ["__version__"]
