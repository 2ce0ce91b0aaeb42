"""Built-in experiment instances (ids ex3.2, ex3.3, ex3.4, ex4.4, ex6.1).

Each instance fixes a plane, a distance target, a default start, and the
fit that summarizes its convergence behaviour.
"""

from dataclasses import dataclass

import numpy as np

from .planes import PlaneSpec, U_STAR, build_plane
from .symcore import AffineSubspace, sym_matrix

BUILTIN_IDS = ("ex3.2", "ex3.3", "ex3.4", "ex4.4", "ex6.1")


@dataclass(frozen=True)
class ExampleInstance:
    ident: str
    variant: str
    plane: AffineSubspace
    target: np.ndarray
    start: np.ndarray           # default coefficients
    default_iters: int
    fit_model: str              # "geometric" | "inverse_power(p)"
    fit_power: int | None
    spec: PlaneSpec | None      # set for the type2 instances

    @property
    def singleton(self):
        """Whether the plane meets the PSD cone only at the target."""
        return self.ident != "ex3.3"


_LINE_32 = sym_matrix([[0, 0, -1], [0, 2, 0], [-1, 0, 0]])
_LINE_33 = sym_matrix([[-1, 0, 0], [0, 1, 1], [0, 1, 1]])

_SPEC_44 = PlaneSpec("type2", (0.0, 0.0, 1.0, 1.0, 0.0))
_SPEC_61 = PlaneSpec("type2", (1.0, 0.0, 0.0, 1.0, 0.0))


def _ex32(variant):
    variant = variant or "pos"
    E = AffineSubspace.from_basis(U_STAR, np.array([_LINE_32]))
    if variant == "pos":
        return ExampleInstance("ex3.2", "pos", E, U_STAR, np.array([0.1]),
                               100000, "inverse_power", 2, None)
    if variant == "neg":
        return ExampleInstance("ex3.2", "neg", E, U_STAR, np.array([-0.05]),
                               40, "geometric", None, None)
    raise ValueError("ex3.2 variants: pos, neg")


def _ex33(variant):
    variant = variant or "neg"
    if variant == "neg":
        E = AffineSubspace.from_basis(U_STAR, np.array([_LINE_33]))
        return ExampleInstance("ex3.3", "neg", E, U_STAR, np.array([-0.1]),
                               40, "geometric", None, None)
    if variant == "pos":
        # anchor at the far endpoint of the intersection segment
        anchor = sym_matrix(U_STAR + _LINE_33)
        E = AffineSubspace.from_basis(anchor, np.array([_LINE_33]))
        return ExampleInstance("ex3.3", "pos", E, anchor, np.array([0.5]),
                               60, "geometric", None, None)
    raise ValueError("ex3.3 variants: pos, neg")


def _ex34(variant):
    anchor = np.zeros((4, 4))
    anchor[0, 0] = 1.0
    B1 = np.zeros((4, 4))
    B1[0, 2] = B1[2, 0] = B1[1, 2] = B1[2, 1] = 1.0
    B2 = np.zeros((4, 4))
    B2[0, 3] = B2[3, 0] = B2[1, 3] = B2[3, 1] = 1.0
    E = AffineSubspace.from_basis(sym_matrix(anchor),
                                  np.array([sym_matrix(B1), sym_matrix(B2)]))
    return ExampleInstance("ex3.4", "default", E, E.anchor,
                           np.array([0.1, 0.0]), 40, "geometric", None, None)


def _type2_instance(ident, spec, start_t, iters, power):
    E, _ = build_plane(spec)
    from .slowcurve import curve_point

    start = E.coefficients(curve_point(spec, start_t).G)
    return ExampleInstance(ident, "default", E, U_STAR, start, iters,
                           "inverse_power", power, spec)


def get_example(ident, variant=None):
    """Look up a built-in instance; raises KeyError for unknown ids."""
    if ident == "ex3.2":
        return _ex32(variant)
    if ident == "ex3.3":
        return _ex33(variant)
    if ident == "ex3.4":
        return _ex34(variant)
    if ident == "ex4.4":
        return _type2_instance("ex4.4", _SPEC_44, 0.05, 10000, 6)
    if ident == "ex6.1":
        return _type2_instance("ex6.1", _SPEC_61, 0.1, 100000, 6)
    raise KeyError(f"unknown example id {ident!r}; "
                   f"known: {', '.join(BUILTIN_IDS)}")
