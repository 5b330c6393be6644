import sys

from mlix.cli import main

sys.exit(main())
