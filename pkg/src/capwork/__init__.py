"""capwork: finite-geometry independent-set workbench over GF(q)."""

__version__ = "0.1.0"

SCHEMA_VERSION = "1.0"
