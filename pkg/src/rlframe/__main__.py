import sys

from rlframe.experiment.cli import main

sys.exit(main())
