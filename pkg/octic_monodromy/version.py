"""Single source of truth for package version."""

__version__ = "0.3.0"

"""
0.3.0 Add the fan checker with per-case Gröbner and integer-unit certificates, and the randomized orbit search.
0.2.1 Snap stage reports agreement with the printed integral lists and quasi-unipotent indices.
0.2.0 Add nilpotent cones, weight filtrations and LMHS typing with Hodge diamonds.
0.1.2 Richardson halving error bounds and optional RK4 stepping for transport.
0.1.1 Loop library for the zp, zpp and zppp charts.
0.1.0 Gauss-Manin connection, residues and forward-Euler transport in the z chart.
0.0.2 Hosono basis and Euler pairing on the octic cohomology ring.
0.0.1 Exact scalar kernel and Gröbner helpers.
"""
