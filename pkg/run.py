#!/usr/bin/env python3
"""
Script de lancement d'OBAL
Vérifie l'environnement puis délègue à eval_cli.cli
"""

import os
import sys


def check_dependencies():
    """Vérifie que les dépendances sont installées"""
    try:
        import numpy
        import pandas
        import scipy
        import sqlalchemy
        import dotenv
        return True
    except ImportError as e:
        print(f"❌ Dépendance manquante: {e}")
        print("\nInstallez les dépendances avec:")
        print("  pip install -r requirements.txt")
        return False


def check_env():
    """Vérifie la configuration"""
    from dotenv import load_dotenv
    load_dotenv()

    level = os.getenv("OBAL_LOG_LEVEL", "INFO").upper()
    if level not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
        print(f"⚠️  OBAL_LOG_LEVEL invalide ({level}), INFO utilisé")
        os.environ["OBAL_LOG_LEVEL"] = "INFO"

    output_dir = os.getenv("OBAL_OUTPUT_DIR", "outputs")
    os.makedirs(output_dir, exist_ok=True)


def main():
    """Point d'entrée principal"""
    if not check_dependencies():
        sys.exit(1)
    check_env()

    from eval_cli.cli import main as cli_main
    sys.exit(cli_main(sys.argv[1:]))


if __name__ == "__main__":
    main()
