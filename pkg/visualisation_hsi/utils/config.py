"""
Module de gestion de configuration pour la bibliothèque.
"""

import copy
import math
import os
from pathlib import Path
from typing import Any, Dict, Optional, Union

import yaml

from .errors import ParameterError
from .logging import get_logger

logger = get_logger(__name__)

# Configuration par défaut
DEFAULT_CONFIG = {
    "seed": 0,
    "graph": {
        "k": 10,
        "mu": 0.5,
        "spatial_radius": 2,
        "spatial_sigma": 1.0,
        # None: médiane des distances sur un échantillon de paires
        "delta_s": None,
        "delta_w": None,
        "bandwidth_pairs": 1000,
    },
    "correspondence": {
        "match_fraction": None,
        "ransac_iters": 1000,
        "inlier_px": 3.0,
    },
    "solver": {
        "lambda": "auto",
        "cg_tol": 1e-8,
        "cg_max_iter": None,
        "ridge": 0.0,
        "preconditioner": "none",
    },
    "metrics": {
        "pair_budget": 100000,
    },
    "preprocess": {
        "minmax": False,
    },
    "logging": {
        "level": "INFO",
        "file": None,
    },
}

CONFIG_FILENAMES = ['.visualisation_hsi.yml', 'visualisation_hsi.yml', 'config/visualisation_hsi.yml']


class ConfigManager:
    """
    Gestionnaire de configuration d'une exécution de visualisation.
    """

    def __init__(self, base_path: Union[str, Path] = ".", config_path: Optional[Union[str, Path]] = None):
        """
        Initialise le gestionnaire de configuration.

        Args:
            base_path: Répertoire de travail où chercher un fichier de configuration
            config_path: Chemin du fichier de configuration, si None, cherche dans base_path
        """
        base_path = Path(base_path)

        self.base_path = base_path
        self.config = copy.deepcopy(DEFAULT_CONFIG)

        # Charger la configuration
        if config_path:
            self.config_path = Path(config_path)
            if not self.config_path.exists():
                raise FileNotFoundError(f"Fichier de configuration introuvable: {self.config_path}")
        else:
            # Chercher dans les emplacements standards
            for config_name in CONFIG_FILENAMES:
                potential_path = base_path / config_name
                if potential_path.exists():
                    self.config_path = potential_path
                    break
            else:
                # Aucun fichier de configuration trouvé, utiliser la valeur par défaut
                self.config_path = base_path / CONFIG_FILENAMES[0]

        if self.config_path.exists():
            self._load_config()
        else:
            logger.debug(f"Aucun fichier de configuration trouvé à {self.config_path}, utilisation des valeurs par défaut")

    def _load_config(self):
        """
        Charge la configuration depuis le fichier.
        """
        try:
            with open(self.config_path, 'r', encoding='utf-8') as f:
                user_config = yaml.safe_load(f) or {}
        except yaml.YAMLError as e:
            raise ParameterError(f"Fichier de configuration invalide {self.config_path}: {e}") from e

        if not isinstance(user_config, dict):
            raise ParameterError(f"Le fichier de configuration {self.config_path} doit contenir un dictionnaire")

        # Fusionner avec la configuration par défaut
        self._merge_configs(self.config, user_config)
        logger.info(f"Configuration chargée depuis {self.config_path}")

    def _merge_configs(self, base: Dict[str, Any], update: Dict[str, Any]):
        """
        Fusionne deux dictionnaires de configuration de manière récursive.

        Args:
            base: Dictionnaire de base à mettre à jour
            update: Dictionnaire contenant les mises à jour
        """
        for key, value in update.items():
            if isinstance(value, dict) and key in base and isinstance(base[key], dict):
                # Fusion récursive pour les sous-dictionnaires
                self._merge_configs(base[key], value)
            else:
                base[key] = value

    def save(self) -> bool:
        """
        Sauvegarde la configuration dans le fichier.
        """
        try:
            os.makedirs(os.path.dirname(os.path.abspath(self.config_path)), exist_ok=True)

            with open(self.config_path, 'w', encoding='utf-8') as f:
                yaml.safe_dump(self.config, f, default_flow_style=False, sort_keys=True)

            logger.info(f"Configuration sauvegardée dans {self.config_path}")
            return True
        except OSError as e:
            logger.error(f"Erreur lors de la sauvegarde de la configuration: {e}")
            return False

    def get(self, key: str, default: Any = None) -> Any:
        """
        Récupère une valeur de configuration.

        Args:
            key: Clé de configuration (peut être un chemin avec des points)
            default: Valeur par défaut si la clé n'existe pas

        Returns:
            Valeur de configuration
        """
        value = self.config
        for part in key.split('.'):
            if isinstance(value, dict) and part in value:
                value = value[part]
            else:
                return default
        return value

    def set(self, key: str, value: Any):
        """
        Définit une valeur de configuration.

        Args:
            key: Clé de configuration (peut être un chemin avec des points)
            value: Valeur à définir
        """
        parts = key.split('.')
        config = self.config

        # Naviguer jusqu'au dernier niveau
        for part in parts[:-1]:
            if part not in config:
                config[part] = {}
            config = config[part]

        config[parts[-1]] = value

    def update(self, overrides: Dict[str, Any]):
        """
        Applique des surcharges à clés pointées ; les valeurs None sont ignorées.

        Args:
            overrides: Dictionnaire {"graph.k": 5, ...}
        """
        for key, value in overrides.items():
            if value is not None:
                self.set(key, value)

    def validate(self):
        """
        Vérifie les plages de toutes les valeurs numériques.

        Raises:
            ParameterError: Au premier paramètre hors plage
        """
        checks = [
            ("graph.k", lambda v: isinstance(v, int) and v >= 1, "entier >= 1"),
            ("graph.mu", lambda v: 0.0 <= v <= 1.0, "dans [0, 1]"),
            ("graph.spatial_radius", lambda v: isinstance(v, int) and v >= 0, "entier >= 0"),
            ("graph.spatial_sigma", lambda v: math.isfinite(v) and v > 0, "réel fini > 0"),
            ("graph.delta_s", lambda v: v is None or (math.isfinite(v) and v > 0), "réel fini > 0"),
            ("graph.delta_w", lambda v: v is None or (math.isfinite(v) and v > 0), "réel fini > 0"),
            ("graph.bandwidth_pairs", lambda v: isinstance(v, int) and v >= 1, "entier >= 1"),
            ("correspondence.match_fraction", lambda v: v is None or 0.0 < v <= 1.0, "dans ]0, 1]"),
            ("correspondence.ransac_iters", lambda v: isinstance(v, int) and v >= 1, "entier >= 1"),
            ("correspondence.inlier_px", lambda v: math.isfinite(v) and v > 0, "réel fini > 0"),
            ("solver.lambda", lambda v: v == "auto" or (not isinstance(v, str) and math.isfinite(v) and v > 0),
             "'auto' ou réel fini > 0"),
            ("solver.cg_tol", lambda v: 0 < v < 1, "dans ]0, 1["),
            ("solver.cg_max_iter", lambda v: v is None or (isinstance(v, int) and v >= 1), "entier >= 1"),
            ("solver.ridge", lambda v: math.isfinite(v) and v >= 0, "réel fini >= 0"),
            ("solver.preconditioner", lambda v: v in ("none", "jacobi"), "'none' ou 'jacobi'"),
            ("metrics.pair_budget", lambda v: v == "all" or (isinstance(v, int) and v >= 2), "'all' ou entier >= 2"),
        ]
        for key, check, expected in checks:
            value = self.get(key)
            try:
                ok = check(value)
            except TypeError:
                ok = False
            if not ok:
                raise ParameterError(f"Paramètre '{key}' invalide: {value!r} (attendu: {expected})")
