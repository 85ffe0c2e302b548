"""Growth data of finitely presented groups: ball censuses, certified growth-rate bounds and ordinal tools."""

__version__ = "0.1.0"
