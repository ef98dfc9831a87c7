"""Exact tools for level-1 dominant weight spaces of affine type A.

Computes Lusztig t-analogs from the affine Weyl group, cuts the W-algebra of
sl_{l+1} out of the Heisenberg vertex algebra with screening operators, builds
the twisted Fock realization of the vacuum module, and verifies that the PBW
basis of the W-span is compatible with the Brylinski filtration.
"""

__version__ = "0.1.0"
