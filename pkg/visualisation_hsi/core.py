"""
Module principal définissant la classe VisualisationPipeline qui enchaîne les
étapes d'une visualisation : chargement, graphe, correspondance, résolution
et évaluation.
"""

from pathlib import Path
from typing import List, Optional, Tuple, Union

import numpy as np

from .correspondence import (
    Correspondence, Homography, pairs_from_homography, read_pairs, sample_aligned
)
from .graph import KernelParams, SparseGraph, knn_graph
from .hsi_io import (
    ColorImage, ColorSpace, ProjectionMatrix, SpectralCube, lab_to_rgb, minmax_scale,
    read_cube, read_image, rgb_to_lab
)
from .metrics import DistanceSample, correlation, distance_sample
from .solver import (
    EmbeddingResult, FeatureSolution, SolveOptions, apply_projection, instance_level,
    lpp_baseline, solve_feature_level
)
from .utils.config import ConfigManager
from .utils.errors import DimensionError, ParameterError, UnconstrainedComponentError
from .utils.logging import enable_file_logging, get_logger, set_level
from .utils.tracing import trace_call

logger = get_logger(__name__)


class VisualisationPipeline:
    """
    Pipeline de visualisation d'un cube hyperspectral.

    Tous les paramètres numériques proviennent du ConfigManager ; ils sont
    validés à la construction, avant toute lecture de fichier.
    """

    def __init__(self, config: Optional[ConfigManager] = None,
                 base_path: Union[str, Path] = ".", config_path: Optional[str] = None,
                 progress: bool = False):
        """
        Initialise le pipeline.

        Args:
            config: Configuration déjà construite (prioritaire)
            base_path: Répertoire où chercher un fichier de configuration
            config_path: Chemin d'un fichier de configuration (facultatif)
            progress: Affiche des barres de progression
        """
        self.config = config or ConfigManager(base_path, config_path)
        self.config.validate()
        self.progress = progress

        set_level(self.config.get("logging.level", "INFO"))
        logs_dir = self.config.get("logging.file")
        if logs_dir:
            enable_file_logging(logs_dir)

    @property
    def seed(self) -> int:
        return int(self.config.get("seed", 0))

    def kernel_params(self) -> KernelParams:
        return KernelParams(
            mu=float(self.config.get("graph.mu")),
            delta_s=self.config.get("graph.delta_s"),
            delta_w=self.config.get("graph.delta_w"),
            k=int(self.config.get("graph.k")),
            spatial_radius=int(self.config.get("graph.spatial_radius")),
            spatial_sigma=float(self.config.get("graph.spatial_sigma")),
        )

    def solve_options(self) -> SolveOptions:
        return SolveOptions(
            lam=self.config.get("solver.lambda"),
            cg_tol=float(self.config.get("solver.cg_tol")),
            cg_max_iter=self.config.get("solver.cg_max_iter"),
            ridge=float(self.config.get("solver.ridge")),
            preconditioner=self.config.get("solver.preconditioner"),
        )

    @trace_call
    def load_cube(self, cube_path: Union[str, Path]) -> SpectralCube:
        """Lit le cube, mis à l'échelle bande par bande si `preprocess.minmax`."""
        cube = read_cube(cube_path)
        if self.config.get("preprocess.minmax"):
            cube = minmax_scale(cube)
        logger.info(f"Cube chargé: {cube.height}×{cube.width}, {cube.bands} bandes")
        return cube

    @trace_call
    def load_reference(self, reference_path: Union[str, Path]) -> ColorImage:
        """Lit la référence RGB et la convertit en Lαβ."""
        return rgb_to_lab(read_image(reference_path))

    def load(self, cube_path: Union[str, Path],
             reference_path: Union[str, Path]) -> Tuple[SpectralCube, ColorImage]:
        return self.load_cube(cube_path), self.load_reference(reference_path)

    @trace_call
    def build_graph(self, cube: SpectralCube) -> SparseGraph:
        return knn_graph(
            cube,
            self.kernel_params(),
            bandwidth_pairs=int(self.config.get("graph.bandwidth_pairs")),
            seed=self.seed,
            progress=self.progress,
        )

    @trace_call
    def correspondence(self, cube: SpectralCube, reference: ColorImage,
                       pairs_path: Optional[Union[str, Path]] = None,
                       homography: Optional[Homography] = None,
                       fraction: Optional[float] = None) -> Correspondence:
        """
        Établit la correspondance cube → référence.

        Par ordre de priorité : fichier de paires, homographie avec tirage de
        `fraction` (par défaut `correspondence.match_fraction`), tirage sur
        grilles alignées.

        Raises:
            ParameterError: Ni fichier de paires ni fraction
            DimensionError: Tirage aligné sur des grilles différentes
        """
        if pairs_path is not None:
            corr = read_pairs(pairs_path, (cube.height, cube.width), (reference.height, reference.width))
            logger.info(f"{corr.n_pairs} paires lues depuis {pairs_path}")
            return corr

        if fraction is None:
            fraction = self.config.get("correspondence.match_fraction")
        if fraction is None:
            raise ParameterError("Fournir un fichier de paires ou une fraction de pixels appariés")
        if homography is not None:
            return pairs_from_homography(
                homography, (cube.height, cube.width), (reference.height, reference.width),
                float(fraction), self.seed,
            )
        if (cube.height, cube.width) != (reference.height, reference.width):
            raise DimensionError(
                f"Tirage aligné impossible: cube {cube.height}×{cube.width}, "
                f"référence {reference.height}×{reference.width}"
            )
        return sample_aligned(cube.n_pixels, float(fraction), self.seed)

    @trace_call
    def instance_level(self, graph: SparseGraph, corr: Correspondence,
                       reference: ColorImage) -> EmbeddingResult:
        return instance_level(graph, corr, reference, self.solve_options())

    @trace_call
    def feature_level(self, cube: SpectralCube, graph: SparseGraph, corr: Correspondence,
                      reference: ColorImage) -> FeatureSolution:
        return solve_feature_level(cube, graph, corr, reference, self.solve_options())

    @trace_call
    def apply_projection(self, projection: ProjectionMatrix, cube: SpectralCube) -> EmbeddingResult:
        return apply_projection(projection, cube)

    @trace_call
    def lpp_image(self, cube: SpectralCube, graph: SparseGraph) -> ColorImage:
        """
        Rendu LPP : trois vecteurs propres généralisés, chaque canal étiré
        affinement dans [0, 1].
        """
        projection = lpp_baseline(cube, graph)
        Y = projection.weights.T @ cube.data
        low = Y.min(axis=1, keepdims=True)
        span = Y.max(axis=1, keepdims=True) - low
        stretched = np.divide(Y - low, span, out=np.zeros_like(Y), where=span > 0)
        return ColorImage(stretched, cube.height, cube.width, ColorSpace.RGB)

    def embedding_image(self, Y: np.ndarray, cube: SpectralCube) -> ColorImage:
        """Image Lαβ portant les coordonnées Y sur la grille du cube."""
        return ColorImage(Y, cube.height, cube.width, ColorSpace.LAB)

    def to_rgb(self, Y: np.ndarray, cube: SpectralCube) -> ColorImage:
        return lab_to_rgb(self.embedding_image(Y, cube))

    @trace_call
    def evaluate(self, cube: SpectralCube, image: ColorImage,
                 pair_budget=None, seed: Optional[int] = None) -> Tuple[float, DistanceSample]:
        """
        Préservation des distances entre le cube et un rendu.

        Returns:
            γ et l'échantillon de distances utilisé
        """
        budget = pair_budget if pair_budget is not None else self.config.get("metrics.pair_budget")
        sample = distance_sample(cube, image, budget, self.seed if seed is None else seed)
        return correlation(sample), sample

    def sweep_fractions(self, cube: SpectralCube, reference: ColorImage, graph: SparseGraph,
                        fractions: List[float]) -> List[Tuple[float, int, float, float]]:
        """
        Niveau instance pour plusieurs fractions de pixels appariés.

        Une fraction trop faible pour contraindre chaque composante connexe
        donne λ et γ indéfinis (nan) sans interrompre le balayage.

        Returns:
            (fraction, nombre de paires, λ, γ) pour chaque fraction
        """
        rows = []
        for fraction in fractions:
            corr = self.correspondence(cube, reference, fraction=fraction)
            try:
                result = self.instance_level(graph, corr, reference)
            except UnconstrainedComponentError as e:
                logger.warning(f"Fraction {fraction}: {e}")
                rows.append((fraction, corr.n_pairs, float("nan"), float("nan")))
                continue
            gamma, _ = self.evaluate(cube, self.embedding_image(result.Y, cube))
            rows.append((fraction, corr.n_pairs, result.lam, gamma))
        return rows
