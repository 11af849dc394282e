import sys

from netgood.cli.main import main

sys.exit(main())
