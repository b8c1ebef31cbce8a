import sys
from pathlib import Path

# helper modules (reference predicates, property suites) live next to the tests
sys.path.insert(0, str(Path(__file__).parent))
