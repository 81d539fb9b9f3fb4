"""
Allow running containerlab as a module: python -m containerlab
"""

import sys

from containerlab.cli import main

if __name__ == "__main__":
    sys.exit(main())
