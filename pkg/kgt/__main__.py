import sys

from kgt.main import main

sys.exit(main())
