"""yonkit: exact computer algebra for quiver algebras and their graded Ext algebras."""

__version__ = "0.1.0"
