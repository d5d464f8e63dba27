"""vkpatch: exact verification of van Kampen presentations, torsor patching
over reduction graphs, and characteristic-p descent obstructions."""

__version__ = "0.1.0"
