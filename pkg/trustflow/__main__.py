import sys

from trustflow.main import main

sys.exit(main())
