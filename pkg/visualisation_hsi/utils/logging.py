"""
Module de journalisation pour la bibliothèque.
"""

import logging
from datetime import datetime
from pathlib import Path
from typing import Optional, Union

PACKAGE_LOGGER = "visualisation_hsi"

_FORMAT = '%(asctime)s - %(levelname)s - %(message)s'


def get_logger(name: str, level: int = logging.INFO) -> logging.Logger:
    """
    Retourne un logger configuré pour le module spécifié.

    Les loggers du package partagent un unique gestionnaire console (stderr)
    attaché au logger racine du package ; les modules n'ajoutent donc pas
    leurs propres gestionnaires.

    Args:
        name: Nom du module
        level: Niveau de journalisation du logger racine lors de sa création

    Returns:
        Instance de logger configurée
    """
    root = logging.getLogger(PACKAGE_LOGGER)
    if not root.handlers:
        root.setLevel(level)
        console_handler = logging.StreamHandler()
        console_handler.setFormatter(logging.Formatter(_FORMAT))
        root.addHandler(console_handler)
        root.propagate = False

    if name == PACKAGE_LOGGER or name.startswith(PACKAGE_LOGGER + "."):
        return logging.getLogger(name)
    return logging.getLogger(f"{PACKAGE_LOGGER}.{name}")


def set_level(level: Union[int, str]) -> None:
    """
    Change le niveau de journalisation de tout le package.

    Args:
        level: Niveau numérique ou nom ('DEBUG', 'INFO', 'WARNING'...)
    """
    if isinstance(level, str):
        level = logging.getLevelName(level.upper())
        if not isinstance(level, int):
            raise ValueError(f"Niveau de journalisation inconnu: {level}")
    get_logger(PACKAGE_LOGGER).setLevel(level)


def enable_file_logging(logs_dir: Union[str, Path] = "logs") -> Optional[Path]:
    """
    Ajoute un fichier de log daté au logger du package.

    Args:
        logs_dir: Dossier des fichiers de log (créé si absent)

    Returns:
        Chemin du fichier de log, ou None si sa création a échoué
    """
    logger = get_logger(PACKAGE_LOGGER)
    try:
        logs_dir = Path(logs_dir)
        logs_dir.mkdir(parents=True, exist_ok=True)
        log_file = logs_dir / f"visualisation_hsi_{datetime.now().strftime('%Y%m%d')}.log"
        if any(isinstance(h, logging.FileHandler) and Path(h.baseFilename) == log_file.resolve()
               for h in logger.handlers):
            return log_file
        file_handler = logging.FileHandler(log_file, encoding='utf-8')
        file_handler.setFormatter(logging.Formatter(_FORMAT))
        logger.addHandler(file_handler)
        return log_file
    except OSError as e:
        # En cas d'erreur, on utilise seulement la console
        logger.warning(f"Impossible de créer le fichier de log: {e}")
        return None
