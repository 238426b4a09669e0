import sys

from katcheck.cli import main

sys.exit(main())
