"""
Interface en ligne de commande pour la bibliothèque visualisation_hsi.
"""

import functools
import sys
from pathlib import Path

import click
import numpy as np

from .. import __version__
from ..core import VisualisationPipeline
from ..correspondence import (
    grid_pairs_from_matches, ransac_homography, read_homography, read_matches,
    write_grid_pairs, write_homography
)
from ..hsi_io import read_image, read_projection, rgb_to_lab, write_image, write_projection
from ..metrics import format_report
from ..solver import format_diagnostics
from ..synthetic import make_scene, write_scene
from ..utils.config import ConfigManager
from ..utils.errors import ParameterError, VisualisationError
from ..utils.logging import get_logger

logger = get_logger(__name__)

DEFAULT_SWEEP = "0.001,0.01,0.1,1.0"

# option CLI → clé de configuration
OPTION_KEYS = {
    "k": "graph.k",
    "mu": "graph.mu",
    "delta_s": "graph.delta_s",
    "delta_w": "graph.delta_w",
    "spatial_radius": "graph.spatial_radius",
    "spatial_sigma": "graph.spatial_sigma",
    "lam": "solver.lambda",
    "ridge": "solver.ridge",
    "cg_tol": "solver.cg_tol",
    "cg_max_iter": "solver.cg_max_iter",
    "preconditioner": "solver.preconditioner",
    "match_fraction": "correspondence.match_fraction",
    "inlier_px": "correspondence.inlier_px",
    "ransac_iters": "correspondence.ransac_iters",
    "pair_budget": "metrics.pair_budget",
    "seed": "seed",
    "minmax": "preprocess.minmax",
}


class LambdaType(click.ParamType):
    """Réel strictement positif ou `auto`."""

    name = "lambda"

    def convert(self, value, param, ctx):
        if isinstance(value, (int, float)):
            return float(value)
        if str(value).lower() == "auto":
            return "auto"
        try:
            return float(value)
        except ValueError:
            self.fail(f"'{value}' n'est ni un réel ni 'auto'", param, ctx)


class PairBudgetType(click.ParamType):
    """Entier ou `all`."""

    name = "pair_budget"

    def convert(self, value, param, ctx):
        if isinstance(value, int):
            return value
        if str(value).lower() == "all":
            return "all"
        try:
            return int(value)
        except ValueError:
            self.fail(f"'{value}' n'est ni un entier ni 'all'", param, ctx)


def _apply(options, func):
    for option in reversed(options):
        func = option(func)
    return func


def common_options(func):
    return _apply([
        click.option('--config', 'config_path', type=click.Path(exists=True, dir_okay=False),
                     help='Fichier de configuration YAML'),
        click.option('--seed', type=int, help='Graine des tirages aléatoires'),
        click.option('--minmax', is_flag=True, help='Ramène chaque bande du cube dans [0, 1]'),
    ], func)


def graph_options(func):
    return _apply([
        click.option('--k', type=int, help='Nombre de plus proches voisins'),
        click.option('--mu', type=float, help='Poids du terme spectral du noyau composite'),
        click.option('--delta-s', type=float, help='Largeur de bande spectrale (médiane si absente)'),
        click.option('--delta-w', type=float, help='Largeur de bande spatiale (médiane si absente)'),
        click.option('--spatial-radius', type=int, help='Rayon de la fenêtre gaussienne'),
        click.option('--spatial-sigma', type=float, help='Écart-type de la fenêtre gaussienne'),
    ], func)


def solver_options(func):
    return _apply([
        click.option('--lambda', 'lam', type=LambdaType(), help="Poids de la contrainte couleur, ou 'auto'"),
        click.option('--ridge', type=float, help='Régularisation de Tikhonov'),
        click.option('--cg-tol', type=float, help='Tolérance relative du gradient conjugué'),
        click.option('--cg-max-iter', type=int, help="Nombre maximal d'itérations du gradient conjugué"),
        click.option('--preconditioner', type=click.Choice(['none', 'jacobi']), help='Préconditionneur'),
    ], func)


def correspondence_options(func):
    return _apply([
        click.option('--pairs', type=click.Path(exists=True, dir_okay=False), help='Fichier CSV de paires'),
        click.option('--homography', type=click.Path(exists=True, dir_okay=False),
                     help='Homographie cube → référence (avec --match-fraction)'),
        click.option('--match-fraction', type=float, help='Part des pixels du cube appariés'),
    ], func)


def report_errors(func):
    """Convertit les erreurs de domaine et d'entrée/sortie en code de sortie 1."""
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except click.ClickException:
            raise
        except (VisualisationError, OSError) as e:
            logger.error(f"Erreur lors de l'exécution de la commande: {e}")
            click.echo(f"Erreur: {e}", err=True)
            sys.exit(1)
        except Exception as e:
            logger.exception(f"Erreur inattendue: {e}")
            click.echo(f"Erreur inattendue: {e}", err=True)
            sys.exit(1)

    return wrapper


def build_pipeline(ctx: click.Context, config_path, options) -> VisualisationPipeline:
    """
    Configuration par défaut < fichier YAML < options ; les plages sont
    vérifiées avant toute lecture de données.
    """
    overrides = {}
    for name, value in options.items():
        if name in OPTION_KEYS:
            if name == "minmax" and not value:
                value = None
            overrides[OPTION_KEYS[name]] = value
    try:
        config = ConfigManager(".", config_path)
        config.update(overrides)
        if ctx.obj.get("log_level"):
            config.set("logging.level", ctx.obj["log_level"])
        return VisualisationPipeline(config, progress=ctx.obj.get("progress", False))
    except ParameterError as e:
        raise click.UsageError(str(e), ctx=ctx)


def emit(line: str, path=None):
    """Affiche une ligne de rapport et la recopie dans `path` si fourni."""
    click.echo(line)
    if path:
        try:
            Path(path).write_text(line + "\n", encoding='ascii')
        except OSError as e:
            raise OSError(f"Impossible d'écrire le rapport {path}: {e.strerror or e}") from e


def _require_correspondence(ctx, pipeline, pairs):
    if pairs is None and pipeline.config.get("correspondence.match_fraction") is None:
        raise click.UsageError("Fournir --pairs ou --match-fraction", ctx=ctx)


@click.group()
@click.version_option(version=__version__)
@click.option('--verbose', '-v', is_flag=True, help='Journalisation détaillée')
@click.option('--quiet', '-q', is_flag=True, help='Avertissements et erreurs seulement')
@click.option('--progress', is_flag=True, help='Barres de progression')
@click.pass_context
def main(ctx, verbose, quiet, progress):
    """
    Visualisation HSI: rendu en couleurs naturelles de cubes hyperspectraux.

    Cette application construit le graphe spectral-spatial d'un cube, ancre ses
    couleurs à une image de référence et écrit l'image résultante.
    """
    ctx.ensure_object(dict)
    if verbose and quiet:
        raise click.UsageError("--verbose et --quiet sont incompatibles", ctx=ctx)
    ctx.obj["log_level"] = "DEBUG" if verbose else ("WARNING" if quiet else None)
    ctx.obj["progress"] = progress


@main.command('make-synthetic')
@click.option('--out', required=True, type=click.Path(dir_okay=False), help='En-tête du cube à écrire')
@click.option('--reference-out', required=True, type=click.Path(dir_okay=False), help='Référence PPM à écrire')
@click.option('--labels-out', type=click.Path(dir_okay=False), help='Étiquettes CSV à écrire')
@click.option('--height', type=int, default=16, show_default=True)
@click.option('--width', type=int, default=16, show_default=True)
@click.option('--bands', type=int, default=8, show_default=True)
@click.option('--clusters', type=int, default=4, show_default=True)
@click.option('--noise', type=float, default=0.01, show_default=True, help='Écart-type du bruit')
@click.option('--seed', type=int, default=0, show_default=True, help='Graine du modèle spectral')
@click.option('--layout-seed', type=int, help='Graine de la disposition (par défaut --seed)')
@report_errors
def make_synthetic_command(out, reference_out, labels_out, height, width, bands, clusters, noise,
                           seed, layout_seed):
    """
    Génère une scène synthétique : cube, référence alignée et étiquettes.
    """
    scene = make_scene(height, width, bands, clusters, noise, seed, layout_seed)
    write_scene(scene, out, reference_out, labels_out)
    click.echo(f"Scène écrite: {out} ({height}×{width}×{bands}, {clusters} régions)")


@main.command('visualize-instance')
@click.option('--cube', required=True, type=click.Path(exists=True, dir_okay=False), help='En-tête du cube')
@click.option('--reference', required=True, type=click.Path(exists=True, dir_okay=False), help='Référence PPM')
@click.option('--out', required=True, type=click.Path(dir_okay=False), help='Image PPM produite')
@click.option('--diagnostics-out', type=click.Path(dir_okay=False), help='Fichier de diagnostics')
@correspondence_options
@graph_options
@solver_options
@common_options
@click.pass_context
@report_errors
def visualize_instance_command(ctx, cube, reference, out, diagnostics_out, pairs, homography,
                               config_path, **options):
    """
    Rendu par apprentissage contraint au niveau des instances.
    """
    pipeline = build_pipeline(ctx, config_path, options)
    _require_correspondence(ctx, pipeline, pairs)

    hsi, ref = pipeline.load(cube, reference)
    graph = pipeline.build_graph(hsi)
    corr = pipeline.correspondence(hsi, ref, pairs, read_homography(homography) if homography else None)
    result = pipeline.instance_level(graph, corr, ref)
    write_image(pipeline.to_rgb(result.Y, hsi), out)
    emit(format_diagnostics(result.lam, result.iterations, result.residuals), diagnostics_out)
    if not result.converged:
        click.echo("Attention: gradient conjugué non convergé, résultat partiel écrit", err=True)


@main.command('visualize-feature')
@click.option('--cube', required=True, type=click.Path(exists=True, dir_okay=False), help='En-tête du cube')
@click.option('--reference', required=True, type=click.Path(exists=True, dir_okay=False), help='Référence PPM')
@click.option('--out', required=True, type=click.Path(dir_okay=False), help='Image PPM produite')
@click.option('--projection-out', required=True, type=click.Path(dir_okay=False), help='Projection p×3 produite')
@click.option('--diagnostics-out', type=click.Path(dir_okay=False), help='Fichier de diagnostics')
@correspondence_options
@graph_options
@solver_options
@common_options
@click.pass_context
@report_errors
def visualize_feature_command(ctx, cube, reference, out, projection_out, diagnostics_out, pairs,
                              homography, config_path, **options):
    """
    Rendu par projection linéaire apprise au niveau des caractéristiques.
    """
    pipeline = build_pipeline(ctx, config_path, options)
    _require_correspondence(ctx, pipeline, pairs)

    hsi, ref = pipeline.load(cube, reference)
    graph = pipeline.build_graph(hsi)
    corr = pipeline.correspondence(hsi, ref, pairs, read_homography(homography) if homography else None)
    solution = pipeline.feature_level(hsi, graph, corr, ref)
    write_projection(solution.projection, projection_out)
    embedding = pipeline.apply_projection(solution.projection, hsi)
    write_image(pipeline.to_rgb(embedding.Y, hsi), out)
    emit(format_diagnostics(solution.lam, [], solution.residuals), diagnostics_out)


@main.command('apply-projection')
@click.option('--projection', required=True, type=click.Path(exists=True, dir_okay=False), help='Projection p×3')
@click.option('--cube', required=True, type=click.Path(exists=True, dir_okay=False), help='En-tête du cube')
@click.option('--out', required=True, type=click.Path(dir_okay=False), help='Image PPM produite')
@common_options
@click.pass_context
@report_errors
def apply_projection_command(ctx, projection, cube, out, config_path, **options):
    """
    Applique une projection apprise à un cube du même capteur (sans graphe).
    """
    pipeline = build_pipeline(ctx, config_path, options)
    F = read_projection(projection)
    hsi = pipeline.load_cube(cube)
    embedding = pipeline.apply_projection(F, hsi)
    write_image(pipeline.to_rgb(embedding.Y, hsi), out)
    click.echo(f"Image écrite: {out}")


@main.command('register')
@click.option('--matches', required=True, type=click.Path(exists=True, dir_okay=False),
              help='CSV de points clés appariés x,y,xp,yp')
@click.option('--homography-out', required=True, type=click.Path(dir_okay=False), help='Homographie produite')
@click.option('--pairs-out', type=click.Path(dir_okay=False), help='Paires inliers au format CSV de paires')
@click.option('--inlier-px', type=float, help="Seuil d'erreur de reprojection (pixels)")
@click.option('--ransac-iters', type=int, help='Itérations RANSAC')
@common_options
@click.pass_context
@report_errors
def register_command(ctx, matches, homography_out, pairs_out, config_path, **options):
    """
    Recalage projectif robuste à partir de points clés appariés.
    """
    pipeline = build_pipeline(ctx, config_path, options)
    src, dst = read_matches(matches)
    homography, mask = ransac_homography(
        src, dst,
        inlier_px=float(pipeline.config.get("correspondence.inlier_px")),
        iters=int(pipeline.config.get("correspondence.ransac_iters")),
        seed=pipeline.seed,
        progress=pipeline.progress,
    )
    write_homography(homography, homography_out)
    if pairs_out:
        write_grid_pairs(grid_pairs_from_matches(src[mask], dst[mask]), pairs_out)
    click.echo(f"inliers={int(np.count_nonzero(mask))}/{len(mask)}")


@main.command('eval-distance')
@click.option('--cube', required=True, type=click.Path(exists=True, dir_okay=False), help='En-tête du cube')
@click.option('--image', required=True, type=click.Path(exists=True, dir_okay=False), help='Rendu PPM')
@click.option('--space', type=click.Choice(['lab', 'rgb']), default='lab', show_default=True,
              help='Espace des distances couleur')
@click.option('--pair-budget', type=PairBudgetType(), help="Nombre de paires tirées, ou 'all'")
@click.option('--report-out', type=click.Path(dir_okay=False), help='Fichier du rapport')
@common_options
@click.pass_context
@report_errors
def eval_distance_command(ctx, cube, image, space, report_out, config_path, **options):
    """
    Préservation des distances entre un cube et son rendu.
    """
    pipeline = build_pipeline(ctx, config_path, options)
    hsi = pipeline.load_cube(cube)
    rendered = read_image(image)
    if space == 'lab':
        rendered = rgb_to_lab(rendered)
    gamma, sample = pipeline.evaluate(hsi, rendered)
    emit(format_report(gamma, sample), report_out)


@main.command('visualize-lpp')
@click.option('--cube', required=True, type=click.Path(exists=True, dir_okay=False), help='En-tête du cube')
@click.option('--out', required=True, type=click.Path(dir_okay=False), help='Image PPM produite')
@graph_options
@common_options
@click.pass_context
@report_errors
def visualize_lpp_command(ctx, cube, out, config_path, **options):
    """
    Rendu de référence par projections préservant la localité (sans ancrage couleur).
    """
    pipeline = build_pipeline(ctx, config_path, options)
    hsi = pipeline.load_cube(cube)
    graph = pipeline.build_graph(hsi)
    write_image(pipeline.lpp_image(hsi, graph), out)
    click.echo(f"Image écrite: {out}")


@main.command('sweep-matches')
@click.option('--cube', required=True, type=click.Path(exists=True, dir_okay=False), help='En-tête du cube')
@click.option('--reference', required=True, type=click.Path(exists=True, dir_okay=False), help='Référence PPM alignée')
@click.option('--fractions', default=DEFAULT_SWEEP, show_default=True, help='Fractions séparées par des virgules')
@click.option('--pair-budget', type=PairBudgetType(), help="Nombre de paires tirées pour gamma, ou 'all'")
@click.option('--report-out', type=click.Path(dir_okay=False), help='Fichier du rapport')
@graph_options
@solver_options
@common_options
@click.pass_context
@report_errors
def sweep_matches_command(ctx, cube, reference, fractions, report_out, config_path, **options):
    """
    Étude de l'effet du nombre de paires appariées (niveau instance).
    """
    try:
        values = [float(v) for v in fractions.split(',') if v.strip()]
    except ValueError:
        raise click.BadParameter(f"liste de réels attendue, reçu '{fractions}'", param_hint='--fractions')
    if not values or any(not 0.0 < v <= 1.0 for v in values):
        raise click.BadParameter("chaque fraction doit être dans ]0, 1]", param_hint='--fractions')

    pipeline = build_pipeline(ctx, config_path, options)
    hsi, ref = pipeline.load(cube, reference)
    graph = pipeline.build_graph(hsi)
    rows = pipeline.sweep_fractions(hsi, ref, graph, values)
    lines = [
        f"fraction={fraction!r} pairs={count} lambda={float(lam)!r} gamma={float(gamma)!r}"
        for fraction, count, lam, gamma in rows
    ]
    emit("\n".join(lines), report_out)


if __name__ == '__main__':
    main()
