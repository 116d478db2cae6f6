import sys

from invariant_data.cli import main

sys.exit(main())
