"""Split octonions over F3, their order-3 automorphisms and semisimplification."""

__version__ = "0.1.0"
