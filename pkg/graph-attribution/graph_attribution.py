#!/usr/bin/env python3
"""
Graph Attribution - Atribuição multi-touch com processo pontual gráfico
Pipeline: Paths → Ajuste (ADMM) → Grafo de Granger → DRE/TRE → CAS vs CCC

Uso:
    python graph_attribution.py simulate --scenario scenarios/display_search.json --out paths.jsonl
    python graph_attribution.py fit --scenario scenarios/display_search.json --paths paths.jsonl --out model.json
    python graph_attribution.py attribute --scenario ... --model model.json --paths paths.jsonl --method tre
    python graph_attribution.py reproduce --runs 10 --seed 20240101
"""

import argparse
import logging
import sys

from pydantic import ValidationError

from commands import register_all
from config import LOG_CONFIG, METRICS_CONFIG
from errors import GraphAttributionError
from metrics import start_metrics_server, track_pipeline_error

# Logging
logging.basicConfig(
    level=getattr(logging, LOG_CONFIG["level"].upper(), logging.INFO),
    format="%(asctime)s [%(levelname)s] %(name)s: %(message)s",
    datefmt="%H:%M:%S"
)
logger = logging.getLogger("graph-attribution")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description="Graph Attribution - Multi-touch attribution with a graphical point process",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  %(prog)s simulate --scenario scenarios/display_search.json --n-paths 1000 --out data/paths.jsonl
  %(prog)s ground-truth --scenario scenarios/display_search.json --n-paths 1000 --out data/ccc.json
  %(prog)s fit --scenario scenarios/display_search.json --paths data/paths.jsonl --out data/model.json
  %(prog)s attribute --scenario scenarios/display_search.json --model data/model.json --paths data/paths.jsonl --method tre --out data/tre.jsonl
  %(prog)s baselines --scenario scenarios/display_search.json --paths data/paths.jsonl --method markov --method decay:7
  %(prog)s evaluate --truth data/ccc.json --scores data/tre.jsonl --out data/metrics.json
  %(prog)s reproduce --runs 10 --seed 20240101 --out results/
        """
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    register_all(subparsers)
    return parser


def main(argv=None) -> int:
    """Executa o subcomando; 0 se todos os estágios tiveram sucesso."""
    args = build_parser().parse_args(argv)

    # Valida configurações antes de iniciar
    from config_validation import validate_config
    try:
        validate_config()
    except ValueError:
        return 1

    # Inicia servidor de métricas Prometheus
    if METRICS_CONFIG.get("enabled", False):
        start_metrics_server(METRICS_CONFIG.get("port", 9095))

    try:
        success = args.handler(args)
    except GraphAttributionError as e:
        track_pipeline_error(args.command)
        logger.error(f"Falha em '{args.command}': {e.to_dict()}")
        return 1
    except ValidationError as e:
        logger.error(f"Argumentos inválidos para '{args.command}':\n{e}")
        return 1
    return 0 if success else 1


if __name__ == "__main__":
    sys.exit(main())
