"""
Hiérarchie d'exceptions de la bibliothèque.

Chaque exception hérite aussi de l'exception standard correspondante, de sorte
que le code appelant peut intercepter l'une ou l'autre.
"""

from typing import Optional


class VisualisationError(Exception):
    """Classe de base des erreurs de domaine du package."""


class FormatError(VisualisationError, ValueError):
    """Fichier mal formé ou format non supporté."""


class DimensionError(VisualisationError, ValueError):
    """Dimensions incompatibles entre deux objets."""


class ParameterError(VisualisationError, ValueError):
    """Paramètre hors de son domaine de validité."""


class GeometryError(VisualisationError, ValueError):
    """Géométrie dégénérée pour l'estimation d'une homographie ou d'un appariement."""


class UnconstrainedComponentError(VisualisationError, ValueError):
    """Composante connexe du graphe sans aucun pixel contraint."""

    def __init__(self, message: str, witness: Optional[int] = None):
        super().__init__(message)
        self.witness = witness


class SingularSystemError(VisualisationError, ArithmeticError):
    """Système linéaire singulier ou non défini positif."""


class ConvergenceError(VisualisationError, ArithmeticError):
    """Valeurs non finies rencontrées pendant une résolution itérative."""


class MetricUndefinedError(VisualisationError, ValueError):
    """Métrique non définie (variance nulle)."""
