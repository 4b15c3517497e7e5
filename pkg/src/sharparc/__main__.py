import sys

from sharparc.cli import main

sys.exit(main())
