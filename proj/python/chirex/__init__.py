"""Chiral extensions of cubic regular toroids: python interface."""

try:
    from ._chirex import certify_json, quotient_order, reduce, toroid_summary
except ImportError:  # module built outside the package (plain cmake build)
    from _chirex import certify_json, quotient_order, reduce, toroid_summary

__all__ = ["certify_json", "quotient_order", "reduce", "toroid_summary"]
