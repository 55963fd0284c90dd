import sys

from ddnoise.cli import main

sys.exit(main())
