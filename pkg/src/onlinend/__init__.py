"""Online network design with deadlines or delay over pluggable offline oracles."""
__version__ = "0.1.0"
