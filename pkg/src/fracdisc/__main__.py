import sys

from fracdisc.cli import main

sys.exit(main())
