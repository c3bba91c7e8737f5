import pytest

from viscowave.kernels import MaterialModel, PowerLaw, PronySeries, StretchedExponential, ZeroKernel

# three kernel families x N in {0, 0.5, 2}
FAMILIES = {
    "prony": PronySeries(((1.0, 1.0),)),
    "power": PowerLaw(1.0, 0.5),
    "kww": StretchedExponential(0.5, 1.0),
}
N_VALUES = (0.0, 0.5, 2.0)

CANONICAL = {f"{name}-N{n}": MaterialModel(1.0, n, k) for name, k in FAMILIES.items() for n in N_VALUES}

MAXWELL = MaterialModel(1.0, 0.0, PronySeries(((1.0, 1.0),)))
NEWTONIAN = MaterialModel(1.0, 1.0, ZeroKernel())
ELASTIC = MaterialModel(1.0, 0.0, PronySeries(((1.0, 0.0),)))


@pytest.fixture(params=sorted(CANONICAL), ids=sorted(CANONICAL))
def canonical_model(request):
    return CANONICAL[request.param]


# uniform grid t_k = k h on (0, 10], shared by both creep solvers
STEP = 5e-3
T_MAX = 10.0


def uniform_grid(h=STEP, t_max=T_MAX):
    import numpy as np

    return h * np.arange(1, int(round(t_max / h)) + 1)


_CURVES = {}


def transform_curve(name):
    """Transform-path creep curve of a canonical model on the shared grid (cached)."""
    from viscowave.duality import creep_from_model

    if name not in _CURVES:
        _CURVES[name] = creep_from_model(CANONICAL[name], uniform_grid())
    return _CURVES[name]
