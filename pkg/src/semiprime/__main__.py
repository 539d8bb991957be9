import sys

from semiprime.cli import main

sys.exit(main())
