import sys

from wkbwave.main import main

sys.exit(main())
