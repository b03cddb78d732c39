import sys
from pathlib import Path

# src layout: make the package importable from a plain checkout
sys.path.insert(0, str(Path(__file__).parent / "src"))
