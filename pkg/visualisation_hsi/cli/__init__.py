"""
Interface en ligne de commande.
"""

from .main import main

__all__ = ["main"]
