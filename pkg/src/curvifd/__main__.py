import sys

from curvifd.cli import main

sys.exit(main())
