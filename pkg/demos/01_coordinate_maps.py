"""
Coordinate maps and the chain rule in one and two dimensions.

A stretched 1D map clusters nodes near x = 0. Its inverse derivatives
dxi/dx ... d4xi/dx4 let a derivative taken in the uniform coordinate be
turned back into a physical one. In 2D the same bookkeeping gives the
coefficients of the Laplacian in mapped coordinates.

Run with ``python3 demos/01_coordinate_maps.py``.
"""

from __future__ import annotations

import math

import numpy as np

from curvifd import coord1d, coord2d

cmap = coord1d.CubicStretchMap(L=8.0, c=0.2, n_p=3)
xi = np.linspace(-1, 1, 81)
x = cmap.x_of_xi(xi)
dx = np.diff(x)
print(f"cubic stretch: smallest cell {dx.min():.4f} at x=0, largest {dx.max():.4f} at the ends")

# d/dx of u = sin(x) computed through the mapped coordinate
u_xi = (np.cos(x) * cmap.dx_dxi(xi),)
coeffs = coord1d.inverse_derivatives(cmap, xi, order=1)
u_x = coord1d.transform_function_derivatives(u_xi, coeffs, order=1)[0]
print(f"chain rule error for d(sin x)/dx: {np.max(np.abs(u_x - np.cos(x))):.1e}")

# Newton inversion of the map
back = coord1d.invert_map_1d(cmap, x)
print(f"1D Newton round trip error: {np.max(np.abs(back - xi)):.1e}")

# the moving erf map clusters nodes on a front travelling at U = 1
emap = coord1d.ErfMovingMap(L=8.0, h=0.9, b=10.0, x0=-2.0, U=1.0)
for tau in (0.0, 2.0, 4.0):
    xs = emap.x_of_xi(xi, tau)
    k = int(np.argmin(np.diff(xs)))
    print(f"  tau={tau:.0f}: finest cell at x={0.5 * (xs[k] + xs[k + 1]):+.3f}, "
          f"front at {-2.0 + tau:+.3f}")

# 2D: the polar map reduces the Laplacian to phi_rr + phi_r / r + phi_tt / r^2
polar = coord2d.PolarMap(2.0, 10.0)
mc = coord2d.laplacian_coeffs(polar, 4.0, math.pi / 3)
print("polar Laplacian coefficients at r=4:", np.round(mc.as_tuple(), 6))

# the Joukowski map is conformal: B = D = E = 0 and A = C
jk = coord2d.JoukowskiMap(2.0)
x, y = coord2d.joukowski_inverse(1.0, 0.5, 2.0)
mc = coord2d.laplacian_coeffs(jk, 1.0, 0.5, xy=(x, y))
print(f"Joukowski preimage of (1, 0.5): ({x:.6f}, {y:.6f}); coefficients",
      np.round(mc.as_tuple(), 6))
