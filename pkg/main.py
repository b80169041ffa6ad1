#!/usr/bin/env python3
"""
Main entry point for the imbalance-depth lab

Usage:
    python main.py generate backbone --c 3 --s 1 --b 2 --seed 7
    python main.py generate overlap --level 5 --minority-frac 0.05 --seed 7
    python main.py train data/runs/backbone_c3_s1_b2_seed7.csv --depth 2 --seed 7
    python main.py experiment --preset fig2 --seed 7 --jobs 4
    python main.py report data/runs/fig2.jsonl
"""

import sys
from pathlib import Path

# Add the project root to the Python path
project_root = Path(__file__).parent
sys.path.insert(0, str(project_root))

from src.cli.app import run  # noqa: E402


def main():
    """Main entry point"""
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
