# quiverstab/__init__.py

from importlib.metadata import version

__version__ = version("quiverstab")
PACKAGE_NAME = "quiverstab"
