"""Run the experiment harness with python -m quantum_convex."""

# IMPORTS ---
# Python imports
import sys

# Local imports
from quantum_convex import cli


if __name__ == "__main__":
    sys.exit(cli.main())
