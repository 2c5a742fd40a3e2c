"""
Quick launcher for the DenseCode Lab command line
Run this with a subcommand, e.g. `python launch_cli.py capacity --nbar 1`
"""

import sys
import os

# Add src to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), 'src'))

# Import and run
from main import main

if __name__ == "__main__":
    sys.exit(main())
