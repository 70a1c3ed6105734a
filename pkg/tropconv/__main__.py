import sys

from tropconv.main import main

sys.exit(main())
