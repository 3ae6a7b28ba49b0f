"""capplots: figures from capwork sweep and bound artifacts.

Consumes only the published CSV/JSON schemas; never imports the primary
package.
"""

__version__ = "0.1.0"

SUPPORTED_SCHEMA_MAJOR = 1


class ParseError(ValueError):
    """Malformed artifact; carries the offending row when known."""
