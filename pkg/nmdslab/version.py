"""version.py

Version of the package. Kept separated to allow for import from setup.py"""

__version__ = "0.3.0"
