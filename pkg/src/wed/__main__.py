import sys

from wed.cli import main

sys.exit(main())
