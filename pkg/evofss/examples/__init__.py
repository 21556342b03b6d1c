"""Usage examples for evofss."""

# Examples are importable but not exposed in __all__
