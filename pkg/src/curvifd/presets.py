"""
Named parameter sets for the published figures.

Every figure's parameters live here and nowhere else; the solvers only have
generic defaults. Bump ``PRESETS_VERSION`` whenever an entry changes, since
it is written into every run manifest.
"""

from __future__ import annotations

from types import MappingProxyType

__all__ = ["PRESETS_VERSION", "PRESETS", "FIGURE_PRESETS", "get_preset"]

PRESETS_VERSION = 1

_BURGERS = dict(L=8.0, M=80, nu=0.01, dt=0.00125, t_end=10.0,
                snapshots=(0.0, 2.0, 4.0, 6.0, 8.0, 10.0))
_CONVDIFF = dict(L=8.0, M=80, nu=0.01, dt=0.0025, U=1.0, x0=-2.0, t_end=4.0,
                 snapshots=(0.0, 1.0, 2.0, 3.0, 4.0))

_TABLE = {
    # steady shock profile sampled on the stretched grid; no time marching
    "fig2a": ("burgers", dict(_BURGERS, c=0.2, n_p=3, scheme="central", exact_only=True)),
    "fig2b": ("burgers", dict(_BURGERS, c=0.2, n_p=3, scheme="upwind")),
    "fig2c": ("burgers", dict(_BURGERS, c=0.2, n_p=3, scheme="central")),
    "fig2d": ("burgers", dict(_BURGERS, c=0.0, n_p=1, scheme="upwind")),
    # the equal-spacing central run described in the text but not plotted
    "burgers-equal-central": ("burgers", dict(_BURGERS, c=0.0, n_p=1, scheme="central")),
    "fig4a": ("convdiff", dict(_CONVDIFF, h=0.0, b=10.0, scheme="upwind")),
    "fig4b": ("convdiff", dict(_CONVDIFF, h=0.0, b=10.0, scheme="central")),
    "fig4c": ("convdiff", dict(_CONVDIFF, h=0.9, b=10.0, scheme="central")),
    "fig5": ("convdiff", dict(_CONVDIFF, M=160, h=0.99, b=5.0, scheme="central")),
    "fig8": ("potential-polar", dict(a=2.0, R=10.0, M=40, N=40, U=1.0)),
    "fig11": ("potential-joukowski", dict(a=2.0, L=10.0, B=10.0, M=40, N=40, U=1.0)),
}

PRESETS = MappingProxyType({k: (cmd, MappingProxyType(p)) for k, (cmd, p) in _TABLE.items()})

# presets regenerated by the ``figures`` subcommand, in run order
FIGURE_PRESETS = ("fig2a", "fig2b", "fig2c", "fig2d", "fig4a", "fig4b", "fig4c",
                  "fig5", "fig8", "fig11")


def get_preset(name, command=None):
    """Return ``(command, params)`` for ``name``.

    Raises ``KeyError`` for an unknown name and ``ValueError`` if the preset
    belongs to a different subcommand than ``command``.
    """
    if name not in PRESETS:
        raise KeyError(f"unknown preset {name!r}; known: {', '.join(PRESETS)}")
    cmd, params = PRESETS[name]
    if command is not None and command != cmd:
        raise ValueError(f"preset {name!r} is for '{cmd}', not '{command}'")
    return cmd, dict(params)
