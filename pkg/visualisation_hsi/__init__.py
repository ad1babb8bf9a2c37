"""
visualisation_hsi - Visualisation d'images hyperspectrales en couleurs naturelles

Ce package rend un cube hyperspectral sous forme d'image trichromatique par
apprentissage de variété contraint : la structure du graphe spectral-spatial
du cube est préservée tandis que les couleurs sont ancrées à une image RGB
de référence au moyen d'une correspondance parcimonieuse.
"""

__version__ = "0.1.0"

# Éviter les imports circulaires en ne faisant pas d'import ici
# Les modules peuvent être importés directement par les utilisateurs
