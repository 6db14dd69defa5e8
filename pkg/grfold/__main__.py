"""Allow ``python -m grfold``."""

from .cli import main

raise SystemExit(main())
