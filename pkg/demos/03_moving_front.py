"""
A front carried by u_t + U u_x = nu u_xx on a mesh that moves with it.

The erf map keeps its finest cells on the front position x0 + U t. The
equation is solved at fixed mapped nodes, so the only change compared with a
fixed grid is the mesh velocity subtracted from U.

Run with ``python3 demos/03_moving_front.py``.
"""

from __future__ import annotations

from curvifd.convdiff import ConvDiffConfig, run_convdiff
from curvifd.presets import get_preset

for name in ("fig4a", "fig4b", "fig4c", "fig5"):
    _, p = get_preset(name)
    res = run_convdiff(ConvDiffConfig(**p))
    cfg = res.config
    line = ", ".join(f"t={s.t:.0f}: front {s.front:+.3f} L2 {s.error.l2:.4f}"
                     for s in res.snapshots[1:])
    print(f"{name} (M={cfg.M}, h={cfg.h}, {cfg.scheme}): {line}")
