import sys

from tpfem.cli import main

sys.exit(main())
